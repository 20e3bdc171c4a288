//! Non-Markovianity witnesses: canonical decay rates, the g(t) function,
//! trace distance, logarithmic negativity of the system–ancilla state and
//! l₁-coherence.

use rayon::prelude::*;

use crate::engine::{liouvillian_coefficients, sb_exponent, GeneratorCoefficients, LiouvillianCoefficients, Model};
use crate::error::{Error, Result};
use crate::linalg::{
    choi_matrix, partial_transpose, trace_norm, ComplexMatrix, QubitState, Subsystem, Superoperator, TwoQubitState,
    C64,
};

/// Eigenvalues of the 2×2 rate matrix of a time-local generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalRates {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// λ± = [γ₊₊ + γ₋₋ ± √((γ₊₊ − γ₋₋)² + 4|γ₊₋|²)]/2.
pub fn canonical_rates(lc: &LiouvillianCoefficients) -> CanonicalRates {
    rates_of(&lc.generator())
}

pub(crate) fn rates_of(g: &GeneratorCoefficients) -> CanonicalRates {
    let mean = 0.5 * (g.gamma_pp + g.gamma_mm);
    let half_gap = 0.5 * (g.gamma_pp - g.gamma_mm).hypot(2.0 * g.gamma_pm.norm());
    CanonicalRates {
        lambda_plus: mean + half_gap,
        lambda_minus: mean - half_gap,
    }
}

/// g = ½[|λ₊| − λ₊ + |λ₋| − λ₋], the total weight of negative rates.
pub fn g_function(r: &CanonicalRates) -> f64 {
    0.5 * (r.lambda_plus.abs() - r.lambda_plus + r.lambda_minus.abs() - r.lambda_minus)
}

/// (‖(1 + εL) ⊗ 1 |Φ⟩⟨Φ|‖₁ − 1)/ε, the Choi-state definition of g.
pub fn g_via_choi(generator: &Superoperator, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "epsilon",
            reason: format!("must be positive, got {epsilon}"),
        });
    }
    let step = Superoperator::identity(2).add(&generator.scale(C64::from(epsilon)));
    let choi = choi_matrix(&step)?;
    Ok((trace_norm(&choi) - 1.0) / epsilon)
}

/// ½‖ρ − σ‖₁.
pub fn trace_distance(rho: &QubitState, sigma: &QubitState) -> f64 {
    0.5 * trace_norm(&(rho.matrix() - sigma.matrix()))
}

/// (Λ ⊗ 1)|Φ⟩⟨Φ| for a qubit channel Λ, system factor first.
pub fn ancilla_state(map: &Superoperator) -> Result<TwoQubitState> {
    let choi = choi_matrix(map)?;
    let h = (&choi + &choi.adjoint()).scale_re(0.5);
    TwoQubitState::new(h).map_err(|e| Error::NotCptp(e.to_string()))
}

/// log₂‖ρ^{T_A}‖₁ with the transpose taken on the ancilla.
pub fn log_negativity(rho: &TwoQubitState) -> f64 {
    let pt = partial_transpose(rho.matrix(), Subsystem::Ancilla).expect("two-qubit state is 4x4 and Hermitian");
    trace_norm(&pt).log2().max(0.0)
}

/// States whose l₁-coherence can be measured in the σ_z (product) basis.
pub trait DensityMatrix {
    fn density(&self) -> &ComplexMatrix;
}

impl DensityMatrix for QubitState {
    fn density(&self) -> &ComplexMatrix {
        self.matrix()
    }
}

impl DensityMatrix for TwoQubitState {
    fn density(&self) -> &ComplexMatrix {
        self.matrix()
    }
}

/// Σ_{i≠j} |ρ_ij|.
pub fn l1_coherence<S: DensityMatrix>(rho: &S) -> f64 {
    let m = rho.density();
    let d = m.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m.get(i, j).norm();
            }
        }
    }
    sum
}

/// Witness values at one time, for the refined map and the Davies semigroup.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessRecord {
    pub t: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub g: f64,
    /// Between the evolved ±1 eigenstates of σ_y.
    pub trace_distance_sy: f64,
    pub log_negativity: f64,
    /// Of the system–ancilla state.
    pub l1_coherence: f64,
    /// Of the qubit alone, started in (|e⟩ + |g⟩)/√2.
    pub l1_coherence_qubit: f64,
    /// Excited population, started in |e⟩.
    pub population: f64,
    /// |ρ_eg|, started in (|e⟩ + |g⟩)/√2.
    pub coherence: f64,
    pub delta: f64,
    pub davies: DaviesRecord,
}

/// The same witnesses under e^{t L_D}.
#[derive(Clone, Debug, PartialEq)]
pub struct DaviesRecord {
    pub g: f64,
    pub trace_distance_sy: f64,
    pub log_negativity: f64,
    pub l1_coherence: f64,
    pub population: f64,
    pub coherence: f64,
    pub delta: f64,
}

/// Witnesses along a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessSeries {
    pub records: Vec<WitnessRecord>,
}

impl WitnessSeries {
    pub fn grid(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    /// Total length of grid intervals on which g exceeds `threshold`,
    /// counting each interval whose left endpoint qualifies.
    pub fn measure_above(&self, threshold: f64) -> f64 {
        self.records
            .windows(2)
            .filter(|w| w[0].g > threshold)
            .map(|w| w[1].t - w[0].t)
            .sum()
    }
}

struct Witnessed {
    trace_distance_sy: f64,
    log_negativity: f64,
    l1_coherence: f64,
    l1_coherence_qubit: f64,
    population: f64,
    coherence: f64,
}

/// Inputs propagated for the population and coherence witnesses.
#[derive(Clone, Debug)]
pub struct WitnessStates {
    pub population: QubitState,
    pub coherence: QubitState,
}

impl Default for WitnessStates {
    fn default() -> Self {
        Self {
            population: QubitState::excited(),
            coherence: QubitState::plus(),
        }
    }
}

fn witness_map(map: &Superoperator, states: &WitnessStates) -> Result<Witnessed> {
    let apply = |rho: &QubitState| -> Result<QubitState> {
        let out = map.apply(rho.matrix())?;
        QubitState::new((&out + &out.adjoint()).scale_re(0.5))
    };
    let up = apply(&QubitState::sigma_y_eigenstate(true))?;
    let down = apply(&QubitState::sigma_y_eigenstate(false))?;
    let plus = apply(&states.coherence)?;
    let excited = apply(&states.population)?;
    let joint = ancilla_state(map)?;
    Ok(Witnessed {
        trace_distance_sy: trace_distance(&up, &down),
        log_negativity: log_negativity(&joint),
        l1_coherence: l1_coherence(&joint),
        l1_coherence_qubit: l1_coherence(&plus),
        population: excited.excited_population(),
        coherence: plus.coherence().norm(),
    })
}

/// All witnesses on `grid` (strictly increasing, non-negative times), with
/// the population taken from |e⟩ and the coherence from |+⟩.
pub fn witness_series(model: &Model, grid: &[f64]) -> Result<WitnessSeries> {
    witness_series_with(model, grid, &WitnessStates::default())
}

/// As [`witness_series`] with caller-chosen inputs for the population and
/// coherence columns.
pub fn witness_series_with(model: &Model, grid: &[f64], states: &WitnessStates) -> Result<WitnessSeries> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) || grid[0] < 0.0 {
        return Err(Error::InvalidParameter {
            field: "grid",
            reason: "times must be non-negative and strictly increasing".into(),
        });
    }
    let davies = model.davies_coefficients()?;
    let davies_rates = rates_of(&davies);
    let records = grid
        .par_iter()
        .map(|&t| {
            let (c, d) = model.coefficients_with_derivatives(t)?;
            let map = sb_exponent(&c)?.exp()?;
            let lc = liouvillian_coefficients(&c, &d)?;
            let rates = canonical_rates(&lc);
            let w = witness_map(&map, states)?;
            let dmap = davies.scaled(t).superoperator().exp()?;
            let dw = witness_map(&dmap, states)?;
            Ok(WitnessRecord {
                t,
                lambda_plus: rates.lambda_plus,
                lambda_minus: rates.lambda_minus,
                g: g_function(&rates),
                trace_distance_sy: w.trace_distance_sy,
                log_negativity: w.log_negativity,
                l1_coherence: w.l1_coherence,
                l1_coherence_qubit: w.l1_coherence_qubit,
                population: w.population,
                coherence: w.coherence,
                delta: lc.delta,
                davies: DaviesRecord {
                    g: g_function(&davies_rates),
                    trace_distance_sy: dw.trace_distance_sy,
                    log_negativity: dw.log_negativity,
                    l1_coherence: dw.l1_coherence,
                    population: dw.population,
                    coherence: dw.coherence,
                    delta: davies.shift,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WitnessSeries { records })
}
