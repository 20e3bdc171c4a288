//! Schaller–Brandes coefficients and the instantaneous Liouvillian rates.

use rwc::bath::OhmicBath;
use rwc::engine::{liouvillian_coefficients, Model};

fn main() -> rwc::Result<()> {
    let model = Model::new(OhmicBath::new(0.05, 5.0, 0.0)?);
    println!("{:>6} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}", "t", "Gamma--", "Gamma++", "|Gamma+-|", "Xi", "gamma--", "Delta");
    for t in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0] {
        let (c, d) = model.coefficients_with_derivatives(t)?;
        let l = liouvillian_coefficients(&c, &d)?;
        println!(
            "{t:6.1} {:11.6} {:11.6} {:11.6} {:11.6} {:11.6} {:11.6}",
            c.gamma_mm,
            c.gamma_pp,
            c.gamma_pm.norm(),
            c.xi,
            l.gamma_mm,
            l.delta
        );
    }
    println!("Davies decay rate {:.6}", model.bath().davies_decay_rate());
    Ok(())
}
