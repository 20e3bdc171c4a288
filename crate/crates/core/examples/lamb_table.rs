//! The tabulated Lamb-shift spectrum S(ω) and the frequency-domain route to Ξ(t).

use rwc::bath::OhmicBath;
use rwc::engine::{davies_lamb_shift, xi_via_table, LambShiftTable, Model};
use rwc::quadrature::Tolerance;

fn main() -> rwc::Result<()> {
    let bath = OhmicBath::new(0.05, 5.0, 0.0)?;
    let table = LambShiftTable::build(&bath)?;
    println!("{} nodes on [-{w}, {w}]", table.nodes().len(), w = table.omega_max());
    for omega in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        println!("S({omega:+}) = {:.10}", table.value(omega));
    }
    println!("Davies shift {:.10}", davies_lamb_shift(&bath)?);
    let model = Model::new(bath);
    for t in [0.5, 2.0, 5.0] {
        let xi = xi_via_table(&table, t, Tolerance::new(1e-12, 1e-10))?;
        println!("Xi({t}) table {xi:.10}, time domain {:.10}", model.coefficients(t)?.xi);
    }
    Ok(())
}
