//! The integrators on their own: a semi-infinite Ohmic moment, a principal
//! value and the long sinc integral.

use rwc::quadrature::{integrate, integrate_semi_infinite, make_panel_plan, principal_value, sinc, Tolerance};

fn main() -> rwc::Result<()> {
    let tol = Tolerance::default();
    let plan = make_panel_plan(0.0, 1.0, 5.0);
    let moment = integrate_semi_infinite(|w| 0.05 * w * (-w / 5.0).exp(), &plan, tol)?;
    println!("int J = {:.12} (exact 1.25), {} evaluations", moment.value, moment.evaluations);

    // P.V. ∫₀² e^{−x}/(x − 1) dx
    let pv = principal_value(|x| (-x).exp(), 1.0, (0.0, 2.0), tol)?;
    println!("P.V. = {:.12} +/- {:.1e}", pv.value, pv.error_estimate);

    // a hard cutoff leaves an O(1/X) oscillation; averaging over one period removes it
    let raw = integrate(sinc, 0.0, 1e4, tol)?.value;
    let averaged = rwc::validation::sinc_integral_estimate(1e4)?;
    println!(
        "int_0^1e4 sinc: raw {raw:.9}, period-averaged {averaged:.9}, pi/2 = {:.9}",
        std::f64::consts::FRAC_PI_2
    );
    Ok(())
}
