//! Dormand–Prince 5(4) with local extrapolation, FSAL, and exact landing on
//! requested output times.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Step-control settings.
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_steps: 1_000_000,
        }
    }
}

/// Integrates y' = f(t, y) from `t0` and returns y at each output time.
/// Output times must be non-decreasing and not precede `t0`.
pub fn integrate<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    outputs: &[f64],
    opts: OdeOptions,
) -> Result<Vec<[f64; N]>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    let mut out = Vec::with_capacity(outputs.len());
    let mut t = t0;
    let mut y = y0;
    let mut k0 = f(t, &y)?;
    let span = outputs.last().map_or(0.0, |&e| e - t0);
    let mut h = (1e-3 * span).max(1e-6);
    let mut steps = 0usize;

    for &target in outputs {
        if target < t {
            return Err(Error::Integrator {
                t: target,
                reason: "output times must be non-decreasing".into(),
            });
        }
        while t < target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::Integrator {
                    t,
                    reason: format!("exceeded {} steps", opts.max_steps),
                });
            }
            let last = t + h >= target;
            let step = if last { target - t } else { h };
            let mut k = [[0.0; N]; 7];
            k[0] = k0;
            for s in 1..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        for i in 0..N {
                            ys[i] += step * a * kj[i];
                        }
                    }
                }
                if s == 6 {
                    // the seventh stage point is the fifth-order solution
                    k[6] = f(t + step, &ys)?;
                    let mut err_sq = 0.0;
                    for i in 0..N {
                        let e: f64 = step * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                        let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(ys[i].abs());
                        err_sq += (e / scale).powi(2);
                    }
                    let err = (err_sq / N as f64).sqrt();
                    if !err.is_finite() {
                        return Err(Error::Integrator {
                            t,
                            reason: "non-finite error estimate".into(),
                        });
                    }
                    let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                    if err <= 1.0 {
                        t = if last { target } else { t + step };
                        y = ys;
                        k0 = k[6];
                        if !last || factor < 1.0 {
                            h = step * factor;
                        }
                    } else {
                        h = step * factor.min(1.0);
                        if h < 1e-14 * t.abs().max(1.0) {
                            return Err(Error::Integrator {
                                t,
                                reason: "step size underflow".into(),
                            });
                        }
                    }
                } else {
                    k[s] = f(t + C[s] * step, &ys)?;
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}
