//! Propagating a state with the map and ODE backends.

use rwc::bath::OhmicBath;
use rwc::engine::{Backend, Model};
use rwc::linalg::QubitState;
use rwc::nonmarkov::trace_distance;

fn main() -> rwc::Result<()> {
    let model = Model::new(OhmicBath::new(0.05, 5.0, 0.0)?);
    let grid: Vec<f64> = (0..=10).map(|k| 3.0 * k as f64).collect();
    let rho0 = QubitState::plus();
    let by_map = model.evolve(&rho0, &grid, Backend::Map)?;
    let by_ode = model.evolve(&rho0, &grid, Backend::Ode)?;
    for ((t, a), b) in grid.iter().zip(&by_map).zip(&by_ode) {
        println!(
            "t = {t:4}: P_e {:.6}, |rho_eg| {:.6}, map-ode distance {:.1e}",
            a.excited_population(),
            a.coherence().norm(),
            trace_distance(a, b)
        );
    }
    Ok(())
}
