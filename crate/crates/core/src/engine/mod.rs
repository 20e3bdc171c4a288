//! Refined weak coupling dynamics of a qubit coupled through σ_x to an Ohmic
//! bath, in the interaction picture.
//!
//! The dynamical map is e^{Z(t)}, with Z(t) in GKSL form and a positive
//! semidefinite rate matrix at every t. Its time-local generator
//! L_Z(t) = ∫₀¹ e^{sZ}Że^{−sZ} ds is available both in closed form and by
//! direct quadrature of that integral.

mod coefficients;
mod generator;
mod lamb;
pub mod ode;

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use coefficients::{
    coefficients_with_derivatives, CoefficientDerivatives, SBCoefficients, CAUCHY_SCHWARZ_SLACK, RATE_FLOOR,
};
pub use generator::{
    liouvillian_coefficients, sb_exponent, GeneratorCoefficients, LiouvillianCoefficients, IMAGINARY_RESIDUE_TOL,
};
pub use lamb::{davies_lamb_shift, lamb_spectrum, xi_via_table, LambShiftTable, TABLE_TOLERANCE};

use crate::bath::{OhmicBath, OMEGA0};
use crate::error::{Error, Result};
use crate::linalg::{vectorize, ComplexMatrix, QubitState, Superoperator, C64};
use crate::quadrature::{gauss_legendre_unit, Tolerance, DEFAULT_TOLERANCE};

/// A bath together with the quadrature tolerance used for its coefficients.
#[derive(Clone, Copy, Debug)]
pub struct Model {
    bath: OhmicBath,
    tol: Tolerance,
}

impl Model {
    pub fn new(bath: OhmicBath) -> Self {
        Self {
            bath,
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tolerance(self, tol: Tolerance) -> Self {
        Self { tol, ..self }
    }

    pub fn bath(&self) -> &OhmicBath {
        &self.bath
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn coefficients(&self, t: f64) -> Result<SBCoefficients> {
        Ok(self.coefficients_with_derivatives(t)?.0)
    }

    pub fn derivatives(&self, t: f64) -> Result<CoefficientDerivatives> {
        Ok(self.coefficients_with_derivatives(t)?.1)
    }

    pub fn coefficients_with_derivatives(&self, t: f64) -> Result<(SBCoefficients, CoefficientDerivatives)> {
        coefficients_with_derivatives(&self.bath, t, self.tol)
    }

    /// Z(t).
    pub fn exponent(&self, t: f64) -> Result<Superoperator> {
        sb_exponent(&self.coefficients(t)?)
    }

    /// e^{Z(t)}.
    pub fn dynamical_map(&self, t: f64) -> Result<Superoperator> {
        self.exponent(t)?.exp()
    }

    pub fn liouvillian_coefficients(&self, t: f64) -> Result<LiouvillianCoefficients> {
        let (c, d) = self.coefficients_with_derivatives(t)?;
        liouvillian_coefficients(&c, &d)
    }

    /// L_Z(t) from the closed-form coefficients.
    pub fn liouvillian(&self, t: f64) -> Result<Superoperator> {
        Ok(self.liouvillian_coefficients(t)?.generator().superoperator())
    }

    /// L_Z(t) = ∫₀¹ e^{sZ}Że^{−sZ} ds by `s_nodes`-point Gauss–Legendre.
    pub fn liouvillian_via_integral(&self, t: f64, s_nodes: usize) -> Result<Superoperator> {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter {
                field: "t",
                reason: format!("the integral form needs t > 0, got {t}"),
            });
        }
        let (c, d) = self.coefficients_with_derivatives(t)?;
        integrated_liouvillian(&sb_exponent(&c)?, &d.generator().superoperator(), s_nodes)
    }

    /// Coefficients of the static Davies generator.
    pub fn davies_coefficients(&self) -> Result<GeneratorCoefficients> {
        Ok(GeneratorCoefficients {
            shift: davies_lamb_shift(&self.bath)?,
            gamma_pp: self.bath.davies_excitation_rate(),
            gamma_mm: self.bath.davies_decay_rate(),
            gamma_pm: C64::new(0.0, 0.0),
        })
    }

    pub fn davies_generator(&self) -> Result<Superoperator> {
        Ok(self.davies_coefficients()?.superoperator())
    }

    /// ρ(t) on `grid` starting from ρ₀ at t = 0.
    pub fn evolve(&self, rho0: &QubitState, grid: &[f64], backend: Backend) -> Result<Vec<QubitState>> {
        check_grid(grid)?;
        match backend {
            Backend::Map => grid
                .par_iter()
                .map(|&t| {
                    if t == 0.0 {
                        return Ok(rho0.clone());
                    }
                    settle(self.dynamical_map(t)?.apply(rho0.matrix())?)
                })
                .collect(),
            Backend::Ode => {
                let y0 = to_real(rho0.matrix())?;
                let rhs = |t: f64, y: &[f64; 8]| -> Result<[f64; 8]> {
                    let l = self.liouvillian(t)?;
                    let out = l.apply(&from_real(y))?;
                    to_real(&out)
                };
                let ys = ode::integrate(rhs, 0.0, y0, grid, ode::OdeOptions::default())?;
                ys.iter().map(|y| settle(from_real(y))).collect()
            }
        }
    }
}

/// Which representation propagates the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Apply e^{Z(t)} independently at each time.
    Map,
    /// Integrate dρ/dt = L_Z(t)ρ.
    Ode,
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "map" => Ok(Backend::Map),
            "ode" => Ok(Backend::Ode),
            other => Err(Error::Config(format!("unknown backend `{other}` (expected map or ode)"))),
        }
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter {
            field: "grid",
            reason: "time grid is empty".into(),
        });
    }
    if grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidParameter {
            field: "grid",
            reason: "times must be finite and non-negative".into(),
        });
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter {
            field: "grid",
            reason: "times must be strictly increasing".into(),
        });
    }
    Ok(())
}

/// Removes rounding-level anti-Hermitian parts before validation.
fn settle(m: ComplexMatrix) -> Result<QubitState> {
    let h = (&m + &m.adjoint()).scale_re(0.5);
    QubitState::new(h)
}

fn to_real(m: &ComplexMatrix) -> Result<[f64; 8]> {
    let v = vectorize(m)?;
    let mut out = [0.0; 8];
    for i in 0..4 {
        out[2 * i] = v[i].re;
        out[2 * i + 1] = v[i].im;
    }
    Ok(out)
}

fn from_real(y: &[f64; 8]) -> ComplexMatrix {
    // column stacking: (0,0), (1,0), (0,1), (1,1)
    ComplexMatrix::from_rows(&[
        &[C64::new(y[0], y[1]), C64::new(y[4], y[5])],
        &[C64::new(y[2], y[3]), C64::new(y[6], y[7])],
    ])
}

/// ∫₀¹ e^{sZ}Że^{−sZ} ds by `s_nodes`-point Gauss–Legendre, for any
/// exponent and its derivative.
pub fn integrated_liouvillian(z: &Superoperator, dz: &Superoperator, s_nodes: usize) -> Result<Superoperator> {
    if s_nodes == 0 {
        return Err(Error::InvalidParameter {
            field: "s_nodes",
            reason: "need at least one node".into(),
        });
    }
    let (nodes, weights) = gauss_legendre_unit(s_nodes);
    let mut total = Superoperator::zeros(dz.hilbert_dim());
    for (s, w) in nodes.iter().zip(&weights) {
        let fwd = z.scale(C64::from(*s)).exp()?;
        let back = z.scale(C64::from(-*s)).exp()?;
        total = total.add(&fwd.compose(dz).compose(&back).scale(C64::from(*w)));
    }
    Ok(total)
}

/// Re-dresses an interaction-picture state with e^{−iH_S t}, H_S = ω₀σ_z/2.
pub fn to_lab_frame(rho: &QubitState, t: f64) -> Result<QubitState> {
    let u = ComplexMatrix::from_rows(&[
        &[C64::from_polar(1.0, -0.5 * OMEGA0 * t), C64::new(0.0, 0.0)],
        &[C64::new(0.0, 0.0), C64::from_polar(1.0, 0.5 * OMEGA0 * t)],
    ]);
    settle(&(&u * rho.matrix()) * &u.adjoint())
}

/// Coefficients on a grid, computed in parallel.
pub fn coefficient_series(model: &Model, grid: &[f64]) -> Result<Vec<(SBCoefficients, CoefficientDerivatives)>> {
    grid.par_iter().map(|&t| model.coefficients_with_derivatives(t)).collect()
}

/// Γ₊₊, Γ₋₋, Γ₊₋, Ξ at time `t` with default tolerances.
pub fn sb_coefficients(b: &OhmicBath, t: f64) -> Result<SBCoefficients> {
    Model::new(*b).coefficients(t)
}

/// Analytic time derivatives of [`sb_coefficients`].
pub fn coefficient_derivatives(b: &OhmicBath, t: f64) -> Result<CoefficientDerivatives> {
    Model::new(*b).derivatives(t)
}

pub fn dynamical_map(b: &OhmicBath, t: f64) -> Result<Superoperator> {
    Model::new(*b).dynamical_map(t)
}

pub fn liouvillian(b: &OhmicBath, t: f64) -> Result<Superoperator> {
    Model::new(*b).liouvillian(t)
}

pub fn liouvillian_via_integral(b: &OhmicBath, t: f64, s_nodes: usize) -> Result<Superoperator> {
    Model::new(*b).liouvillian_via_integral(t, s_nodes)
}

pub fn davies_generator(b: &OhmicBath) -> Result<Superoperator> {
    Model::new(*b).davies_generator()
}

pub fn evolve(b: &OhmicBath, rho0: &QubitState, grid: &[f64], backend: Backend) -> Result<Vec<QubitState>> {
    Model::new(*b).evolve(rho0, grid, backend)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::choi_matrix;
    use crate::linalg::hermitian_eigenvalues;
    use approx::assert_abs_diff_eq;

    fn model(temp: f64) -> Model {
        Model::new(OhmicBath::reference(temp).unwrap())
    }

    #[test]
    fn identity_at_time_zero() {
        let m = model(0.0).dynamical_map(0.0).unwrap();
        assert_eq!(m, Superoperator::identity(2));
    }

    #[test]
    fn map_is_cptp_at_moderate_time() {
        for temp in [0.0, 1.0] {
            let m = model(temp).dynamical_map(3.0).unwrap();
            assert!(m.trace_defect() < 1e-12);
            let eig = hermitian_eigenvalues(&choi_matrix(&m).unwrap()).unwrap();
            assert!(eig[0] > -1e-10, "{eig:?}");
        }
    }

    #[test]
    fn closed_form_matches_integral_at_t2() {
        let m = model(0.0);
        let closed = m.liouvillian(2.0).unwrap();
        let integral = m.liouvillian_via_integral(2.0, 32).unwrap();
        let diff = (closed.matrix() - integral.matrix()).max_abs();
        assert!(diff < 1e-10, "{diff}");
    }

    #[test]
    fn davies_rates_and_balance() {
        let d = model(0.0).davies_coefficients().unwrap();
        assert_abs_diff_eq!(d.gamma_mm, 0.257_211_851_913_783, epsilon = 1e-12);
        assert_eq!(d.gamma_pp, 0.0);
        let warm = model(1.0).davies_coefficients().unwrap();
        let ratio = warm.gamma_pp / warm.gamma_mm;
        assert!((ratio / (-1.0f64).exp() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cold_davies_fixed_point_is_ground_state() {
        let l = model(0.0).davies_generator().unwrap();
        let out = l.apply(QubitState::ground().matrix()).unwrap();
        assert!(out.max_abs() < 1e-15);
        let out = l.apply(QubitState::excited().matrix()).unwrap();
        assert!(out.max_abs() > 0.1);
    }

    #[test]
    fn backends_start_from_initial_state() {
        let m = model(0.0);
        for backend in [Backend::Map, Backend::Ode] {
            let traj = m.evolve(&QubitState::plus(), &[0.0, 0.5], backend).unwrap();
            assert_eq!(traj[0], QubitState::plus());
        }
    }

    #[test]
    fn grid_validation() {
        let m = model(0.0);
        for bad in [vec![], vec![0.0, 0.0], vec![1.0, 0.5], vec![-1.0]] {
            assert!(m.evolve(&QubitState::plus(), &bad, Backend::Map).is_err());
        }
    }

    #[test]
    fn backend_parsing() {
        assert_eq!("map".parse::<Backend>().unwrap(), Backend::Map);
        assert_eq!("ode".parse::<Backend>().unwrap(), Backend::Ode);
        assert!("rk4".parse::<Backend>().is_err());
    }

    #[test]
    fn lab_frame_rotates_coherence_only() {
        let rho = QubitState::plus();
        let lab = to_lab_frame(&rho, 1.3).unwrap();
        assert_abs_diff_eq!(lab.excited_population(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(lab.coherence().norm(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(lab.coherence().arg(), -1.3, epsilon = 1e-14);
    }
}
