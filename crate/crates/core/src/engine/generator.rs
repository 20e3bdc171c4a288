//! The qubit generator template and the closed-form time-local Liouvillian.

use crate::error::{Error, Result};
use crate::linalg::{pauli, ComplexMatrix, Superoperator, C64, I, ONE};

use super::coefficients::{CoefficientDerivatives, SBCoefficients};

/// Coefficients of
/// X ↦ −i[h σ_z, X] + Σ_{μν} c_{μν}(σ_ν X σ_μ† − ½{σ_μ†σ_ν, X}),
/// with μ, ν ∈ {+, −}, c₋₊ = c₊₋* and h = `shift`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorCoefficients {
    pub shift: f64,
    /// Absorption, the σ₊ X σ₋ channel.
    pub gamma_pp: f64,
    /// Emission, the σ₋ X σ₊ channel.
    pub gamma_mm: f64,
    /// Weight of σ₋ X σ₋; σ₊ X σ₊ carries the conjugate.
    pub gamma_pm: C64,
}

impl GeneratorCoefficients {
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            shift: s * self.shift,
            gamma_pp: s * self.gamma_pp,
            gamma_mm: s * self.gamma_mm,
            gamma_pm: self.gamma_pm * s,
        }
    }

    /// Vectorized superoperator (column stacking).
    pub fn superoperator(&self) -> Superoperator {
        let sz = pauli::z();
        let ops = [pauli::plus(), pauli::minus()];
        let weights = [
            [C64::from(self.gamma_pp), self.gamma_pm],
            [self.gamma_pm.conj(), C64::from(self.gamma_mm)],
        ];
        let hamiltonian = Superoperator::left(&sz)
            .and_then(|l| Ok(l.add(&Superoperator::right(&sz)?.scale(-ONE))))
            .expect("qubit operators")
            .scale(-I * self.shift);
        let mut total = hamiltonian;
        for (mu, a_mu) in ops.iter().enumerate() {
            let a_mu_dag = a_mu.adjoint();
            for (nu, a_nu) in ops.iter().enumerate() {
                let w = weights[mu][nu];
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                let product = &a_mu_dag * a_nu;
                let term = Superoperator::sandwich(a_nu, &a_mu_dag)
                    .and_then(|jump| {
                        let anti = Superoperator::left(&product)?.add(&Superoperator::right(&product)?);
                        Ok(jump.add(&anti.scale(C64::from(-0.5))))
                    })
                    .expect("qubit operators");
                total = total.add(&term.scale(w));
            }
        }
        total
    }

    /// Rate matrix [[c₊₊, c₊₋], [c₋₊, c₋₋]].
    pub fn rate_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            &[C64::from(self.gamma_pp), self.gamma_pm],
            &[self.gamma_pm.conj(), C64::from(self.gamma_mm)],
        ])
    }
}

/// Coefficients of the time-local Liouvillian L_Z(t) = d e^{Z} /dt · e^{−Z}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LiouvillianCoefficients {
    pub t: f64,
    /// Time-dependent Lamb shift Δ.
    pub delta: f64,
    pub gamma_pp: f64,
    pub gamma_mm: f64,
    pub gamma_pm: C64,
}

impl LiouvillianCoefficients {
    pub fn generator(&self) -> GeneratorCoefficients {
        GeneratorCoefficients {
            shift: self.delta,
            gamma_pp: self.gamma_pp,
            gamma_mm: self.gamma_mm,
            gamma_pm: self.gamma_pm,
        }
    }
}

/// Maximum tolerated imaginary part of quantities that are real by symmetry.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-9;

/// Below this |4z| the entire functions A, B, C are summed as power series.
const SERIES_RADIUS: f64 = 1.0;

/// Closed-form Liouvillian coefficients.
///
/// Z and Ż leave the population block and the coherence block invariant.
/// On populations Z is G·(rank-one projector) with G = Γ₊₊ + Γ₋₋, giving
///
/// γ₊₊ = [ĠΓ₊₊ + (Γ̇₊₊Γ₋₋ − Γ₊₊Γ̇₋₋)φ(G)]/G,  φ(G) = (1 − e^{−G})/G,
///
/// and γ₋₋ by exchanging the labels. On coherences Z = −(G/2)·1 + N with
/// N = [[−2iΞ, Γ₋₊], [Γ₊₋, 2iΞ]] and N² = z·1, z = |Γ₊₋|² − 4Ξ². Then
/// ∫₀¹ e^{sN}Ṅe^{−sN}ds = A Ṅ + C·r·N + B[N, Ṅ] with
/// r = Re(Γ₊₋*Γ̇₊₋) − 4ΞΞ̇, A = sinh 2√z/(2√z), B = (cosh 2√z − 1)/(4z)
/// and C = (1 − A)/z, which yields
///
/// γ₊₋ = AΓ̇₊₋ + C r Γ₊₋ + 4iB(ΞΓ̇₊₋ − Ξ̇Γ₊₋),
/// Δ = AΞ̇ + C r Ξ − B·Im(Γ₊₋*Γ̇₊₋).
pub fn liouvillian_coefficients(
    c: &SBCoefficients,
    d: &CoefficientDerivatives,
) -> Result<LiouvillianCoefficients> {
    let (gamma_pp, gamma_mm) = population_rates(c, d);
    let z = c.gamma_pm.norm_sqr() - 4.0 * c.xi * c.xi;
    let (a, b, cc) = entire_functions(z)?;
    let x = c.gamma_pm.conj() * d.d_gamma_pm;
    let r = x.re - 4.0 * c.xi * d.d_xi;
    let gamma_pm = d.d_gamma_pm * a + c.gamma_pm * (cc * r) + I * (4.0 * b) * (d.d_gamma_pm * c.xi - c.gamma_pm * d.d_xi);
    let delta = a * d.d_xi + cc * r * c.xi - b * x.im;
    let out = LiouvillianCoefficients {
        t: c.t,
        delta,
        gamma_pp,
        gamma_mm,
        gamma_pm,
    };
    let finite = [delta, gamma_pp, gamma_mm, gamma_pm.re, gamma_pm.im]
        .iter()
        .all(|v| v.is_finite());
    if !finite {
        return Err(Error::NonFinite("Liouvillian coefficients"));
    }
    Ok(out)
}

fn population_rates(c: &SBCoefficients, d: &CoefficientDerivatives) -> (f64, f64) {
    let g = c.gamma_pp + c.gamma_mm;
    if g <= 0.0 {
        // t = 0: Z vanishes and L_Z = Ż
        return (d.d_gamma_pp, d.d_gamma_mm);
    }
    let dg = d.d_gamma_pp + d.d_gamma_mm;
    let phi = -(-g).exp_m1() / g;
    let cross = d.d_gamma_pp * c.gamma_mm - c.gamma_pp * d.d_gamma_mm;
    let pp = (dg * c.gamma_pp + cross * phi) / g;
    let mm = (dg * c.gamma_mm - cross * phi) / g;
    (pp, mm)
}

/// A(z), B(z), C(z) of [`liouvillian_coefficients`]. All three are entire in
/// z; for |4z| > 1 they are evaluated through the principal complex root so
/// that z < 0 turns sinh/cosh into sin/cos.
fn entire_functions(z: f64) -> Result<(f64, f64, f64)> {
    let x = 4.0 * z;
    if x.abs() <= SERIES_RADIUS {
        // A = Σ x^k/(2k+1)!, B = Σ x^k/(2k+2)!, C = −4 Σ x^k/(2k+3)!
        let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
        let mut pow = 1.0;
        let mut fact = 1.0; // (2k+1)!
        for k in 0..16 {
            let kf = k as f64;
            let f2 = fact * (2.0 * kf + 2.0);
            let f3 = f2 * (2.0 * kf + 3.0);
            a += pow / fact;
            b += pow / f2;
            c -= 4.0 * pow / f3;
            pow *= x;
            fact = f3;
        }
        return Ok((a, b, c));
    }
    let w = C64::new(z, 0.0).sqrt();
    let two_w = w * 2.0;
    let a = two_w.sinh() / two_w;
    let b = (two_w.cosh() - 1.0) / (4.0 * z);
    let c = (1.0 - a) / z;
    for (name, v) in [("A(z)", a), ("B(z)", b), ("C(z)", c)] {
        let tol = IMAGINARY_RESIDUE_TOL * v.re.abs().max(1.0);
        if v.im.abs() > tol {
            return Err(Error::ImaginaryResidue {
                quantity: name,
                residue: v.im,
            });
        }
        if !v.re.is_finite() {
            return Err(Error::NonFinite(name));
        }
    }
    Ok((a.re, b.re, c.re))
}

/// Z(t) assembled from validated coefficients.
pub fn sb_exponent(c: &SBCoefficients) -> Result<Superoperator> {
    c.check()?;
    Ok(c.generator().superoperator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vectorize, QubitState};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn direct(z: f64) -> (f64, f64, f64) {
        let (a, b) = if z > 0.0 {
            let s = z.sqrt();
            ((2.0 * s).sinh() / (2.0 * s), ((2.0 * s).cosh() - 1.0) / (4.0 * z))
        } else {
            let s = (-z).sqrt();
            ((2.0 * s).sin() / (2.0 * s), ((2.0 * s).cos() - 1.0) / (4.0 * z))
        };
        (a, b, (1.0 - a) / z)
    }

    #[test]
    fn entire_functions_match_closed_forms() {
        for z in [-40.0, -3.0, -0.26, -0.24, -0.1, 0.1, 0.24, 0.26, 2.0, 9.0] {
            let (a, b, c) = entire_functions(z).unwrap();
            let (ea, eb, ec) = direct(z);
            assert_relative_eq!(a, ea, max_relative = 1e-12);
            assert_relative_eq!(b, eb, max_relative = 1e-12);
            assert_relative_eq!(c, ec, max_relative = 1e-9, epsilon = 1e-13);
        }
        let (a, b, c) = entire_functions(0.0).unwrap();
        assert_eq!((a, b), (1.0, 0.5));
        assert_relative_eq!(c, -2.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn template_is_trace_annihilating_and_hermiticity_preserving() {
        let g = GeneratorCoefficients {
            shift: 0.3,
            gamma_pp: 0.2,
            gamma_mm: 0.9,
            gamma_pm: C64::new(-0.1, 0.25),
        };
        let s = g.superoperator();
        // a generator annihilates traces, so its exponential preserves them
        assert!(s.exp().unwrap().trace_defect() < 1e-14);
        assert!(s.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn blocks_do_not_mix() {
        let g = GeneratorCoefficients {
            shift: -0.4,
            gamma_pp: 0.3,
            gamma_mm: 0.5,
            gamma_pm: C64::new(0.2, -0.1),
        };
        let m = g.superoperator();
        let pops = [0usize, 3];
        let cohs = [1usize, 2];
        for &p in &pops {
            for &q in &cohs {
                assert_eq!(m.matrix().get(p, q), C64::new(0.0, 0.0));
                assert_eq!(m.matrix().get(q, p), C64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn pure_emission_is_amplitude_damping() {
        let g = 0.8;
        let z = sb_exponent(&SBCoefficients {
            gamma_mm: g,
            ..SBCoefficients::zero(1.0)
        })
        .unwrap();
        let rho = z.exp().unwrap().apply(QubitState::excited().matrix()).unwrap();
        assert_abs_diff_eq!(rho.get(0, 0).re, (-g).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(rho.get(1, 1).re, 1.0 - (-g).exp(), epsilon = 1e-14);
    }

    #[test]
    fn pure_shift_keeps_populations() {
        let z = sb_exponent(&SBCoefficients {
            xi: 1.7,
            ..SBCoefficients::zero(1.0)
        })
        .unwrap();
        let rho0 = QubitState::plus();
        let rho = z.exp().unwrap().apply(rho0.matrix()).unwrap();
        assert_abs_diff_eq!(rho.get(0, 0).re, 0.5, epsilon = 1e-15);
        // ρ_eg picks up e^{−2iΞ}
        let expect = C64::from_polar(0.5, -2.0 * 1.7);
        assert_abs_diff_eq!((rho.get(0, 1) - expect).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let z = sb_exponent(&SBCoefficients::zero(0.0)).unwrap();
        assert_eq!(z.matrix().max_abs(), 0.0);
    }

    #[test]
    fn commuting_family_returns_derivative() {
        // Γ₊₋ = Ξ = 0 and proportional rates: L_Z = Ż
        let c = SBCoefficients {
            gamma_pp: 0.2,
            gamma_mm: 0.6,
            ..SBCoefficients::zero(1.0)
        };
        let d = CoefficientDerivatives {
            d_gamma_pp: 0.1,
            d_gamma_mm: 0.3,
            ..CoefficientDerivatives::zero(1.0)
        };
        let l = liouvillian_coefficients(&c, &d).unwrap();
        assert_relative_eq!(l.gamma_pp, 0.1, max_relative = 1e-14);
        assert_relative_eq!(l.gamma_mm, 0.3, max_relative = 1e-14);
        assert_eq!(l.delta, 0.0);
        assert_eq!(l.gamma_pm, C64::new(0.0, 0.0));
    }

    #[test]
    fn symmetric_rates_reduce_to_derivative() {
        // Γ₊₊ = Γ₋₋ = g(t): the cross term vanishes and γ = ġ
        let c = SBCoefficients {
            gamma_pp: 1e-9,
            gamma_mm: 1e-9,
            ..SBCoefficients::zero(1e-4)
        };
        let d = CoefficientDerivatives {
            d_gamma_pp: 2e-5,
            d_gamma_mm: 2e-5,
            ..CoefficientDerivatives::zero(1e-4)
        };
        let l = liouvillian_coefficients(&c, &d).unwrap();
        assert_relative_eq!(l.gamma_pp, 2e-5, max_relative = 1e-14);
        assert_relative_eq!(l.gamma_mm, 2e-5, max_relative = 1e-14);
    }

    #[test]
    fn superoperator_uses_column_stacking() {
        let g = GeneratorCoefficients {
            shift: 0.0,
            gamma_pp: 0.0,
            gamma_mm: 1.0,
            gamma_pm: C64::new(0.0, 0.0),
        };
        // emission maps |e⟩⟨e| to |g⟩⟨g| − |e⟩⟨e|
        let v = vectorize(QubitState::excited().matrix()).unwrap();
        let out = g.superoperator().matrix().as_matrix() * v;
        assert_eq!(out[0], C64::from(-1.0));
        assert_eq!(out[3], C64::from(1.0));
    }
}
