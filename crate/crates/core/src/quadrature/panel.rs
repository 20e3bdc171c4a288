//! Panel plans for semi-infinite integrals with sinc-type kernels.

use std::f64::consts::PI;

use super::adaptive::{integrate_segments, IntegrationResult, Map, Tolerance};
use crate::error::{Error, Result};

/// Breakpoints partitioning `[0, ∞)`. The last breakpoint `B` starts the tail,
/// integrated under `u = exp(-(ω - B)/scale)` which maps `[B, ∞)` onto `(0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PanelPlan {
    breakpoints: Vec<f64>,
    tail_scale: f64,
}

/// Sinc peak half-widths resolved on each side of ω₀.
const PEAK_PANELS: usize = 16;
/// The oscillation grid and cutoff multiples extend to this many ω_c.
const CUTOFF_MULTIPLES: usize = 30;

impl PanelPlan {
    pub fn new(breakpoints: Vec<f64>, tail_scale: f64) -> Result<Self> {
        if breakpoints.first() != Some(&0.0) {
            return Err(Error::InvalidParameter {
                field: "breakpoints",
                reason: "first breakpoint must be 0".into(),
            });
        }
        if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter {
                field: "breakpoints",
                reason: "need at least two strictly increasing breakpoints".into(),
            });
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::NonFinite("breakpoints"));
        }
        if !(tail_scale.is_finite() && tail_scale > 0.0) {
            return Err(Error::InvalidParameter {
                field: "tail_scale",
                reason: format!("must be positive, got {tail_scale}"),
            });
        }
        Ok(Self {
            breakpoints,
            tail_scale,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn tail_scale(&self) -> f64 {
        self.tail_scale
    }

    pub fn tail_start(&self) -> f64 {
        *self.breakpoints.last().expect("non-empty")
    }

    pub(crate) fn segments(&self) -> Vec<(f64, f64, Map)> {
        let mut out: Vec<(f64, f64, Map)> = self
            .breakpoints
            .windows(2)
            .map(|w| (w[0], w[1], Map::Linear))
            .collect();
        out.push((
            0.0,
            1.0,
            Map::Tail {
                start: self.tail_start(),
                scale: self.tail_scale,
            },
        ));
        out
    }
}

/// Plan resolving the `~2π/t` wide sinc peaks at ω₀ and the oscillations of
/// period `2π/t` out to `30 ω_c`.
pub fn make_panel_plan(t: f64, omega0: f64, omega_c: f64) -> PanelPlan {
    let mut pts = vec![0.0, omega0, omega_c];
    if t <= 0.0 {
        pts.push(5.0 * omega_c);
    } else {
        let width = 2.0 * PI / t.max(1.0);
        for k in 1..=PEAK_PANELS {
            let d = k as f64 * width;
            pts.push(omega0 + d);
            if omega0 - d > 0.0 {
                pts.push(omega0 - d);
            }
        }
        let end = CUTOFF_MULTIPLES as f64 * omega_c;
        for j in 1..=CUTOFF_MULTIPLES {
            pts.push(j as f64 * omega_c);
        }
        // two oscillation periods per panel, never coarser than ω_c/2
        let step = (2.0 * width).min(0.5 * omega_c);
        let n = (end / step).ceil() as usize;
        pts.extend((1..n).map(|k| k as f64 * step));
        pts.push(end);
    }
    pts.retain(|p| p.is_finite() && *p >= 0.0);
    pts.sort_by(|a, b| a.total_cmp(b));
    let mut clean: Vec<f64> = Vec::with_capacity(pts.len());
    for p in pts {
        match clean.last() {
            Some(&last) if p - last <= 1e-12 * p.max(1.0) => {}
            _ => clean.push(p),
        }
    }
    PanelPlan::new(clean, omega_c).expect("plan construction is well-formed")
}

/// Integral of a vector-valued function over `[0, ∞)` along a panel plan.
pub fn integrate_semi_infinite_vector<const N: usize, F>(
    f: F,
    plan: &PanelPlan,
    tol: Tolerance,
) -> Result<IntegrationResult<[f64; N]>>
where
    F: Fn(f64) -> [f64; N],
{
    integrate_segments(&f, &plan.segments(), tol, "semi-infinite integral")
}

/// Integral of a real function over `[0, ∞)` along a panel plan.
pub fn integrate_semi_infinite<F>(
    f: F,
    plan: &PanelPlan,
    tol: Tolerance,
) -> Result<IntegrationResult<f64>>
where
    F: Fn(f64) -> f64,
{
    Ok(integrate_semi_infinite_vector(|x| [f(x)], plan, tol)?.map(|v| v[0]))
}
