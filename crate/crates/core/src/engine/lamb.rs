//! Principal-value spectrum S(ω) of the bath, its interpolation table, and
//! the frequency-domain evaluation of Ξ(t) built on it.
//!
//! S(ω) = P.V. ∫₀^∞ J(υ)[(n̄+1)/(ω−υ) + n̄/(ω+υ)] dυ.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::bath::{OhmicBath, OMEGA0};
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_semi_infinite, integrate_vector, make_panel_plan, principal_value, sinc, Tolerance,
};

/// Accuracy requested of each S(ω) evaluation.
pub const SPECTRUM_TOLERANCE: Tolerance = Tolerance::new(1e-11, 1e-10);
/// Target interpolation error of the table.
pub const TABLE_TOLERANCE: f64 = 1e-7;
/// Intervals narrower than this are never split.
const MIN_SPACING: f64 = 1e-10;
/// Initial table spacing.
const COARSE_SPACING: f64 = 0.5;

/// P.V. ∫₀^∞ f(υ)/(υ − c) dυ for c > 0.
fn pv_half_line(bath: &OhmicBath, f: impl Fn(f64) -> f64 + Copy, c: f64, tol: Tolerance) -> Result<f64> {
    let near = principal_value(f, c, (0.0, 2.0 * c), tol)?;
    let plan = make_panel_plan(0.0, OMEGA0, bath.omega_c());
    let far = integrate_semi_infinite(|y| f(2.0 * c + y) / (c + y), &plan, tol)?;
    Ok(near.value + far.value)
}

/// ∫₀^∞ f(υ)/(υ + c) dυ for c > 0.
fn regular_half_line(bath: &OhmicBath, f: impl Fn(f64) -> f64, c: f64, tol: Tolerance) -> Result<f64> {
    let mut plan_points = make_panel_plan(0.0, OMEGA0, bath.omega_c()).breakpoints().to_vec();
    // resolve the 1/(υ + c) peak when c is small
    let mut x = c;
    while x < 1.0 {
        plan_points.push(x);
        x *= 4.0;
    }
    plan_points.sort_by(f64::total_cmp);
    plan_points.dedup();
    let plan = crate::quadrature::PanelPlan::new(plan_points, bath.omega_c())?;
    Ok(integrate_semi_infinite(|u| f(u) / (u + c), &plan, tol)?.value)
}

/// S(ω) evaluated directly by quadrature.
pub fn lamb_spectrum(bath: &OhmicBath, omega: f64) -> Result<f64> {
    if !omega.is_finite() {
        return Err(Error::NonFinite("omega"));
    }
    let b = *bath;
    let tol = SPECTRUM_TOLERANCE;
    let wp = move |u: f64| b.weight_plus(u);
    let wm = move |u: f64| b.weight_minus(u);
    let value = if omega == 0.0 {
        // −∫J/υ: the two Bose branches combine to the spectral density
        let plan = make_panel_plan(0.0, OMEGA0, bath.omega_c());
        let alpha = bath.alpha();
        let wc = bath.omega_c();
        -integrate_semi_infinite(|u| alpha * (-u / wc).exp(), &plan, tol)?.value
    } else if omega > 0.0 {
        let mut s = -pv_half_line(bath, wp, omega, tol)?;
        if bath.temperature() > 0.0 {
            s += regular_half_line(bath, wm, omega, tol)?;
        }
        s
    } else {
        let c = -omega;
        let mut s = -regular_half_line(bath, wp, c, tol)?;
        if bath.temperature() > 0.0 {
            s += pv_half_line(bath, wm, c, tol)?;
        }
        s
    };
    Ok(value)
}

/// Static Lamb shift of the Davies generator, [S(ω₀) − S(−ω₀)]/2.
pub fn davies_lamb_shift(bath: &OhmicBath) -> Result<f64> {
    Ok(0.5 * (lamb_spectrum(bath, OMEGA0)? - lamb_spectrum(bath, -OMEGA0)?))
}

/// S(ω) tabulated on an adaptive grid over [−Ω, Ω] with monotone cubic
/// (Fritsch–Carlson) interpolation. Outside the table S is replaced by its
/// large-|ω| expansion Σ m_k/ω^{k+1}.
#[derive(Clone, Debug)]
pub struct LambShiftTable {
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    omega_max: f64,
    moments: Vec<f64>,
}

impl LambShiftTable {
    pub fn build(bath: &OhmicBath) -> Result<Self> {
        let omega_max = (10.0 * bath.omega_c()).max(OMEGA0 + 50.0);
        let n = (omega_max / COARSE_SPACING).ceil() as usize;
        let mut nodes: Vec<f64> = (0..=2 * n)
            .map(|k| -omega_max + k as f64 * omega_max / n as f64)
            .collect();
        nodes.extend([-OMEGA0, 0.0, OMEGA0]);
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut values = nodes
            .par_iter()
            .map(|&w| lamb_spectrum(bath, w))
            .collect::<Result<Vec<f64>>>()?;

        loop {
            let slopes = pchip_slopes(&nodes, &values);
            let candidates: Vec<(usize, f64)> = nodes
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[1] - w[0] > MIN_SPACING)
                .map(|(i, w)| (i, 0.5 * (w[0] + w[1])))
                .collect();
            let checked = candidates
                .par_iter()
                .map(|&(i, m)| {
                    let exact = lamb_spectrum(bath, m)?;
                    let interp = hermite(&nodes, &values, &slopes, i, m);
                    Ok((i, m, exact, (exact - interp).abs() > TABLE_TOLERANCE))
                })
                .collect::<Result<Vec<_>>>()?;
            let inserts: Vec<(usize, f64, f64)> = checked
                .into_iter()
                .filter(|c| c.3)
                .map(|(i, m, v, _)| (i, m, v))
                .collect();
            if inserts.is_empty() {
                break;
            }
            let mut new_nodes = Vec::with_capacity(nodes.len() + inserts.len());
            let mut new_values = Vec::with_capacity(nodes.len() + inserts.len());
            let mut next = inserts.iter().peekable();
            for i in 0..nodes.len() {
                new_nodes.push(nodes[i]);
                new_values.push(values[i]);
                if let Some(&&(j, m, v)) = next.peek() {
                    if j == i {
                        new_nodes.push(m);
                        new_values.push(v);
                        next.next();
                    }
                }
            }
            nodes = new_nodes;
            values = new_values;
        }
        let slopes = pchip_slopes(&nodes, &values);
        let moments = spectrum_moments(bath)?;
        Ok(Self {
            nodes,
            values,
            slopes,
            omega_max,
            moments,
        })
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Interpolated S(ω).
    pub fn value(&self, omega: f64) -> f64 {
        if omega.abs() > self.omega_max {
            return self.asymptotic(omega);
        }
        let i = match self.nodes.binary_search_by(|x| x.total_cmp(&omega)) {
            Ok(i) => return self.values[i],
            Err(i) => i.clamp(1, self.nodes.len() - 1) - 1,
        };
        hermite(&self.nodes, &self.values, &self.slopes, i, omega)
    }

    /// Σ m_k/ω^{k+1}, truncated before the terms start to grow.
    fn asymptotic(&self, omega: f64) -> f64 {
        let mut sum = 0.0;
        let mut last = f64::INFINITY;
        let mut pow = omega;
        for &m in &self.moments {
            let term = m / pow;
            if term.abs() > last {
                break;
            }
            sum += term;
            last = term.abs();
            pow *= omega;
        }
        sum
    }
}

/// m_k = ∫ υ^k [w₊ + (−1)^k w₋] dυ for k < 8.
fn spectrum_moments(bath: &OhmicBath) -> Result<Vec<f64>> {
    let plan = make_panel_plan(0.0, OMEGA0, bath.omega_c());
    (0..8)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            integrate_semi_infinite(
                |u| u.powi(k) * (bath.weight_plus(u) + sign * bath.weight_minus(u)),
                &plan,
                Tolerance::new(0.0, 1e-12),
            )
            .map(|r| r.value)
        })
        .collect()
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = end_slope(h[0], h.get(1).copied().unwrap_or(h[0]), delta[0], delta.get(1).copied().unwrap_or(delta[0]));
    d[n - 1] = end_slope(
        h[n - 2],
        if n > 2 { h[n - 3] } else { h[n - 2] },
        delta[n - 2],
        if n > 2 { delta[n - 3] } else { delta[n - 2] },
    );
    d
}

/// One-sided three-point slope with the monotonicity safeguards.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

fn hermite(x: &[f64], y: &[f64], d: &[f64], i: usize, at: f64) -> f64 {
    let h = x[i + 1] - x[i];
    let s = (at - x[i]) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1]
}

/// Far edge of the outer ω integral; beyond it the integrand is below 1e-13.
const OUTER_CUTOFF: f64 = 1e4;

/// Ξ(t) = (1/4π) ∫ t²[sinc²((ω₀−ω)t/2) − sinc²((ω₀+ω)t/2)] S(ω) dω from the
/// table. The kernel is odd in ω, so only S(ω) − S(−ω) on ω > 0 enters.
pub fn xi_via_table(table: &LambShiftTable, t: f64, tol: Tolerance) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            field: "t",
            reason: format!("time must be non-negative and finite, got {t}"),
        });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let integrand = |w: f64| {
        let k = t * t * (sinc(0.5 * (OMEGA0 - w) * t).powi(2) - sinc(0.5 * (OMEGA0 + w) * t).powi(2));
        [k * (table.value(w) - table.value(-w))]
    };
    // one panel per oscillation period, plus the table edge and the peak
    let period = 2.0 * PI / t.max(1.0);
    let mut points = vec![0.0, OMEGA0, table.omega_max()];
    let mut w = period;
    while w < OUTER_CUTOFF {
        points.push(w);
        w += if w < table.omega_max() { 0.5 * period } else { 4.0 * period };
    }
    points.push(OUTER_CUTOFF);
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut total = 0.0;
    // integrate panel by panel to keep the adaptive heap small
    for chunk in points.windows(2) {
        total += integrate_vector(integrand, chunk[0], chunk[1], tol)?.value[0];
    }
    Ok(total / (4.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spectrum_at_zero_is_minus_alpha_omega_c() {
        for temp in [0.0, 1.0] {
            let b = OhmicBath::reference(temp).unwrap();
            assert_relative_eq!(lamb_spectrum(&b, 0.0).unwrap(), -0.25, max_relative = 1e-10);
        }
    }

    #[test]
    fn spectrum_is_continuous_through_zero() {
        for temp in [0.0, 1.0] {
            let b = OhmicBath::reference(temp).unwrap();
            let s0 = lamb_spectrum(&b, 0.0).unwrap();
            for w in [1e-7, -1e-7] {
                assert!((lamb_spectrum(&b, w).unwrap() - s0).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn cold_negative_branch_is_plain_integral() {
        // T = 0, ω = −1: −∫ αυe^{−υ/5}/(υ+1) = −α[ω_c − e^{1/ω_c}E₁(1/ω_c)]
        let b = OhmicBath::reference(0.0).unwrap();
        // E₁(0.2) = 1.2226505441838
        let expect = -0.05 * (5.0 - 0.2f64.exp() * 1.222_650_544_183_893);
        assert_relative_eq!(lamb_spectrum(&b, -1.0).unwrap(), expect, max_relative = 1e-9);
    }

    #[test]
    fn pchip_preserves_monotone_data() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.0, 0.1, 0.1, 5.0, 5.1];
        let d = pchip_slopes(&x, &y);
        for i in 0..4 {
            for k in 1..20 {
                let at = x[i] + k as f64 / 20.0;
                let v = hermite(&x, &y, &d, i, at);
                assert!(v >= y[i] - 1e-15 && v <= y[i + 1] + 1e-15);
            }
        }
    }

    #[test]
    fn pchip_is_exact_at_nodes() {
        let x = [0.0, 0.5, 1.5, 2.0];
        let y = [1.0, -1.0, 2.0, 3.0];
        let d = pchip_slopes(&x, &y);
        for i in 0..3 {
            assert_eq!(hermite(&x, &y, &d, i, x[i]), y[i]);
            assert!((hermite(&x, &y, &d, i, x[i + 1]) - y[i + 1]).abs() < 1e-15);
        }
    }
}
