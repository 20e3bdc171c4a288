//! The Markovian (Davies) limit and how the refined generator approaches it.

use rwc::bath::OhmicBath;
use rwc::engine::Model;

fn main() -> rwc::Result<()> {
    let model = Model::new(OhmicBath::new(0.05, 5.0, 0.0)?);
    let davies = model.davies_coefficients()?;
    println!(
        "Davies: decay {:.8}, excitation {:.8}, Lamb shift {:.8}",
        davies.gamma_mm, davies.gamma_pp, davies.shift
    );
    let reference = model.davies_generator()?;
    for t in [1.0, 10.0, 30.0, 100.0, 300.0] {
        let l = model.liouvillian_coefficients(t)?;
        let gap = (model.liouvillian(t)?.matrix() - reference.matrix()).frobenius_norm()
            / reference.matrix().frobenius_norm();
        println!("t = {t:5}: gamma-- {:.6}, Delta {:+.6}, relative distance {gap:.3e}", l.gamma_mm, l.delta);
    }
    Ok(())
}
