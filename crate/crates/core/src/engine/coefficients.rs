//! Coefficients of the Schaller–Brandes exponent and their time derivatives.
//!
//! Every coefficient is a single frequency integral over the bath weights
//! w₊ = J(n̄+1) and w₋ = Jn̄ against an analytic kernel:
//!
//! * Γ₋₋ = ∫ w₊F(ω₀−υ) + w₋F(ω₀+υ) and Γ₊₊ = ∫ w₊F(ω₀+υ) + w₋F(ω₀−υ),
//!   with F(x) = t² sinc²(xt/2);
//! * Γ₊₋ = e^{−iω₀t} ∫ (w₊+w₋) t² sinc((ω₀+υ)t/2) sinc((ω₀−υ)t/2);
//! * Ξ = ½ ∫ (w₊+w₋) [K(ω₀−υ) + K(ω₀+υ)], with K(x) = (xt − sin xt)/x².
//!
//! The Ξ kernel is the time-domain form of the principal-value double
//! integral; `lamb` evaluates the same quantity through the tabulated
//! frequency-domain route and serves as its oracle.

use crate::bath::{OhmicBath, OMEGA0};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::quadrature::{integrate_semi_infinite_vector, make_panel_plan, sinc, Tolerance};

use super::generator::GeneratorCoefficients;

/// Γ₊₊, Γ₋₋, Γ₊₋ (with Γ₋₊ = Γ₊₋*) and Ξ at time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SBCoefficients {
    pub t: f64,
    pub gamma_pp: f64,
    pub gamma_mm: f64,
    pub gamma_pm: C64,
    pub xi: f64,
}

/// Time derivatives of [`SBCoefficients`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientDerivatives {
    pub t: f64,
    pub d_gamma_pp: f64,
    pub d_gamma_mm: f64,
    pub d_gamma_pm: C64,
    pub d_xi: f64,
}

/// Slack on the non-negativity of the diagonal rates.
pub const RATE_FLOOR: f64 = -1e-10;
/// Relative slack on |Γ₊₋|² ≤ Γ₊₊Γ₋₋.
pub const CAUCHY_SCHWARZ_SLACK: f64 = 1e-8;

impl SBCoefficients {
    pub fn zero(t: f64) -> Self {
        Self {
            t,
            gamma_pp: 0.0,
            gamma_mm: 0.0,
            gamma_pm: C64::new(0.0, 0.0),
            xi: 0.0,
        }
    }

    /// Smallest eigenvalue of [[Γ₊₊, Γ₊₋], [Γ₋₊, Γ₋₋]].
    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(self.gamma_pp, self.gamma_mm, self.gamma_pm)
    }

    /// Rejects non-finite values and rate matrices that are not positive
    /// semidefinite beyond quadrature slack.
    pub fn check(&self) -> Result<()> {
        let values = [self.gamma_pp, self.gamma_mm, self.gamma_pm.re, self.gamma_pm.im, self.xi];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("Schaller-Brandes coefficients"));
        }
        let cs = self.gamma_pm.norm_sqr() <= self.gamma_pp * self.gamma_mm * (1.0 + CAUCHY_SCHWARZ_SLACK);
        if self.gamma_pp < RATE_FLOOR || self.gamma_mm < RATE_FLOOR || !cs {
            return Err(Error::NotPositive {
                min_eigenvalue: self.min_eigenvalue(),
            });
        }
        Ok(())
    }

    pub fn generator(&self) -> GeneratorCoefficients {
        GeneratorCoefficients {
            shift: self.xi,
            gamma_pp: self.gamma_pp,
            gamma_mm: self.gamma_mm,
            gamma_pm: self.gamma_pm,
        }
    }
}

impl CoefficientDerivatives {
    pub fn zero(t: f64) -> Self {
        Self {
            t,
            d_gamma_pp: 0.0,
            d_gamma_mm: 0.0,
            d_gamma_pm: C64::new(0.0, 0.0),
            d_xi: 0.0,
        }
    }

    /// Ż in the generator template. Its rate matrix need not be positive.
    pub fn generator(&self) -> GeneratorCoefficients {
        GeneratorCoefficients {
            shift: self.d_xi,
            gamma_pp: self.d_gamma_pp,
            gamma_mm: self.d_gamma_mm,
            gamma_pm: self.d_gamma_pm,
        }
    }
}

/// Lower eigenvalue of a 2×2 Hermitian matrix, computed as det/λ_max to
/// avoid cancellation when the matrix is nearly rank one.
pub(crate) fn min_eigenvalue(a: f64, b: f64, c: C64) -> f64 {
    let tr = a + b;
    let root = ((a - b).powi(2) + 4.0 * c.norm_sqr()).sqrt();
    let upper = 0.5 * (tr + root);
    if upper > 0.0 && tr > 0.0 {
        (a * b - c.norm_sqr()) / upper
    } else {
        0.5 * (tr - root)
    }
}

/// κ(y) = (y − sin y)/y², with its odd series near zero.
#[inline]
fn kappa(y: f64) -> f64 {
    if y.abs() < 0.1 {
        let y2 = y * y;
        y * (1.0 / 6.0 - y2 * (1.0 / 120.0 - y2 * (1.0 / 5040.0 - y2 * (1.0 / 362_880.0 - y2 / 39_916_800.0))))
    } else {
        (y - y.sin()) / (y * y)
    }
}

/// Kernel values at frequency υ, ordered
/// [Γ₋₋, Γ₊₊, R, Ξ, Γ̇₋₋, Γ̇₊₊, Ṙ, Ξ̇] where Γ₊₋ = e^{−iω₀t}R.
#[inline]
fn kernel_vector(bath: &OhmicBath, t: f64, u: f64) -> [f64; 8] {
    let wp = bath.weight_plus(u);
    let wm = bath.weight_minus(u);
    let ws = wp + wm;
    let a = OMEGA0 + u;
    let b = OMEGA0 - u;
    let t2 = t * t;

    let (sa, sb) = (sinc(0.5 * a * t), sinc(0.5 * b * t));
    let (ca, cb) = ((0.5 * a * t).cos(), (0.5 * b * t).cos());
    let f_a = t2 * sa * sa;
    let f_b = t2 * sb * sb;
    let df_a = 2.0 * t * sinc(a * t);
    let df_b = 2.0 * t * sinc(b * t);
    let p = t2 * sa * sb;
    let dp = t * (ca * sb + sa * cb);
    let k = t2 * (kappa(a * t) + kappa(b * t));
    // dK/dt = t (y/2) sinc²(y/2) with y = xt
    let dk = t * (0.5 * a * t * sa * sa + 0.5 * b * t * sb * sb);

    [
        wp * f_b + wm * f_a,
        wp * f_a + wm * f_b,
        ws * p,
        0.5 * ws * k,
        wp * df_b + wm * df_a,
        wp * df_a + wm * df_b,
        ws * dp,
        0.5 * ws * dk,
    ]
}

/// Coefficients and their derivatives from one vector quadrature.
pub fn coefficients_with_derivatives(
    bath: &OhmicBath,
    t: f64,
    tol: Tolerance,
) -> Result<(SBCoefficients, CoefficientDerivatives)> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            field: "t",
            reason: format!("time must be non-negative and finite, got {t}"),
        });
    }
    if t == 0.0 {
        return Ok((SBCoefficients::zero(0.0), CoefficientDerivatives::zero(0.0)));
    }
    let plan = make_panel_plan(t, OMEGA0, bath.omega_c());
    let r = integrate_semi_infinite_vector(|u| kernel_vector(bath, t, u), &plan, tol)
        .map_err(|e| e.with_context(format!("Schaller-Brandes kernels at t = {t}")))?;
    let [g_mm, g_pp, r_pm, xi, dg_mm, dg_pp, dr_pm, dxi] = r.value;
    let phase = C64::from_polar(1.0, -OMEGA0 * t);
    let gamma_pm = phase * r_pm;
    let d_gamma_pm = phase * C64::new(dr_pm, -OMEGA0 * r_pm);
    Ok((
        SBCoefficients {
            t,
            gamma_pp: g_pp,
            gamma_mm: g_mm,
            gamma_pm,
            xi,
        },
        CoefficientDerivatives {
            t,
            d_gamma_pp: dg_pp,
            d_gamma_mm: dg_mm,
            d_gamma_pm,
            d_xi: dxi,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cold() -> OhmicBath {
        OhmicBath::reference(0.0).unwrap()
    }

    #[test]
    fn vanish_at_origin() {
        let (c, d) = coefficients_with_derivatives(&cold(), 0.0, Tolerance::default()).unwrap();
        assert_eq!(c, SBCoefficients::zero(0.0));
        assert_eq!(d, CoefficientDerivatives::zero(0.0));
    }

    #[test]
    fn quadratic_onset() {
        let t = 1e-3;
        let (c, d) = coefficients_with_derivatives(&cold(), t, Tolerance::default()).unwrap();
        // ∫J = αω_c² = 1.25
        assert_relative_eq!(c.gamma_mm / (t * t), 1.25, max_relative = 1e-4);
        assert_relative_eq!(c.gamma_pp / (t * t), 1.25, max_relative = 1e-4);
        assert_relative_eq!(d.d_gamma_mm / t, 2.5, max_relative = 1e-4);
        assert_relative_eq!(c.gamma_pm.norm() / (t * t), 1.25, max_relative = 1e-4);
    }

    #[test]
    fn kappa_branches_meet() {
        for y in [0.0999999, 0.1, 0.1000001, -0.1] {
            let direct = (y - f64::sin(y)) / (y * y);
            assert_relative_eq!(kappa(y), direct, max_relative = 1e-9);
        }
        assert_eq!(kappa(0.0), 0.0);
    }

    #[test]
    fn min_eigenvalue_matches_quadratic_formula() {
        let (a, b, c) = (0.7, 0.2, C64::new(0.1, -0.3));
        let tr: f64 = a + b;
        let det = a * b - c.norm_sqr();
        let direct = 0.5 * (tr - (tr * tr - 4.0 * det).sqrt());
        assert_relative_eq!(min_eigenvalue(a, b, c), direct, max_relative = 1e-12);
        assert_eq!(min_eigenvalue(0.0, 0.0, C64::new(0.0, 0.0)), 0.0);
    }

    #[test]
    fn check_rejects_cauchy_schwarz_violation() {
        let bad = SBCoefficients {
            t: 1.0,
            gamma_pp: 0.1,
            gamma_mm: 0.1,
            gamma_pm: C64::new(0.2, 0.0),
            xi: 0.0,
        };
        assert!(matches!(bad.check(), Err(Error::NotPositive { .. })));
        let nan = SBCoefficients { xi: f64::NAN, ..SBCoefficients::zero(1.0) };
        assert!(matches!(nan.check(), Err(Error::NonFinite(_))));
    }
}
