//! Cauchy principal values by singularity subtraction.

use super::adaptive::{check_interval, integrate, IntegrationResult, Tolerance};
use crate::error::{Error, Result};

/// Half-width, relative to the interval length, inside which the subtracted
/// integrand is replaced by its limiting value f'(c).
const SERIES_RADIUS: f64 = 1e-6;

/// P.V. ∫_a^b f(x)/(x − c) dx for a pole strictly inside `(a, b)`.
///
/// Computed as ∫ (f(x) − f(c))/(x − c) dx + f(c)·ln((b − c)/(c − a)).
pub fn principal_value<F>(
    f: F,
    pole: f64,
    domain: (f64, f64),
    tol: Tolerance,
) -> Result<IntegrationResult<f64>>
where
    F: Fn(f64) -> f64,
{
    let (a, b) = domain;
    check_interval(a, b)?;
    if !(pole > a && pole < b) {
        return Err(Error::PoleOnBoundary { pole, a, b });
    }
    let c = pole;
    let scale = b - a;
    let fc = f(c);
    let h = (1e-3 * scale).min(0.5 * (c - a)).min(0.5 * (b - c));
    let central = |h: f64| (f(c + h) - f(c - h)) / (2.0 * h);
    let (d1, d2, d4) = (central(h), central(0.5 * h), central(0.25 * h));
    // smooth f: successive differences shrink by ~4 under step halving
    let floor = 1e-8 * (d2.abs() + fc.abs() / scale) + f64::MIN_POSITIVE;
    if !(d4 - d2).is_finite() || (d4 - d2).abs() > 0.5 * (d2 - d1).abs() + floor {
        return Err(Error::Quadrature {
            context: format!("principal value: integrand not smooth at pole {c}"),
            estimate: f64::NAN,
            error: f64::INFINITY,
            evaluations: 7,
        });
    }
    let slope = (4.0 * d4 - d2) / 3.0;
    let radius = SERIES_RADIUS * scale;

    let g = |x: f64| {
        let d = x - c;
        if d.abs() < radius {
            slope
        } else {
            (f(x) - fc) / d
        }
    };
    let left = integrate(g, a, c, tol).map_err(|e| e.with_context("principal value left of pole"))?;
    let right = integrate(g, c, b, tol).map_err(|e| e.with_context("principal value right of pole"))?;
    let log_term = fc * ((b - c) / (c - a)).ln();
    Ok(IntegrationResult {
        value: left.value + right.value + log_term,
        error_estimate: left.error_estimate + right.error_estimate,
        evaluations: left.evaluations + right.evaluations + 5,
    })
}
