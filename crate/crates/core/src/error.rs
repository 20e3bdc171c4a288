use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("coefficient matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("map is not CPTP: {0}")]
    NotCptp(String),

    #[error(
        "quadrature did not converge ({context}): estimate {estimate:.6e}, error {error:.3e} after {evaluations} evaluations"
    )]
    Quadrature {
        context: String,
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("principal value pole {pole} is not strictly inside ({a}, {b})")]
    PoleOnBoundary { pole: f64, a: f64, b: f64 },

    #[error("{quantity} has imaginary residue {residue:.3e}")]
    ImaginaryResidue { quantity: &'static str, residue: f64 },

    #[error("integrator failure at t = {t}: {reason}")]
    Integrator { t: f64, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Attaches context to quadrature failures, leaving other errors untouched.
    pub fn with_context(self, ctx: impl AsRef<str>) -> Self {
        match self {
            Error::Quadrature {
                context,
                estimate,
                error,
                evaluations,
            } => Error::Quadrature {
                context: format!("{}: {}", ctx.as_ref(), context),
                estimate,
                error,
                evaluations,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
