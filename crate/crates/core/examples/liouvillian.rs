//! Closed-form time-local generator against the defining integral
//! L = ∫₀¹ e^{sZ} Ż e^{−sZ} ds.

use rwc::bath::OhmicBath;
use rwc::engine::Model;

fn main() -> rwc::Result<()> {
    let model = Model::new(OhmicBath::new(0.05, 5.0, 0.0)?);
    for t in [0.5, 2.0, 10.0, 20.0] {
        let closed = model.liouvillian(t)?;
        let integral = model.liouvillian_via_integral(t, 32)?;
        println!(
            "t = {t:4}: max |closed - integral| = {:.2e}",
            (closed.matrix() - integral.matrix()).max_abs()
        );
    }
    Ok(())
}
