//! The map e^{Z(t)} is completely positive and trace preserving at every time.

use rwc::bath::OhmicBath;
use rwc::engine::Model;
use rwc::linalg::{choi_matrix, hermitian_eigenvalues};

fn main() -> rwc::Result<()> {
    for temp in [0.0, 5.0] {
        let model = Model::new(OhmicBath::new(0.05, 5.0, temp)?);
        for t in [0.5, 2.0, 10.0, 50.0] {
            let map = model.dynamical_map(t)?;
            let eig = hermitian_eigenvalues(&choi_matrix(&map)?)?;
            println!(
                "T = {temp}, t = {t:4}: Choi spectrum {:?}, trace defect {:.1e}",
                eig.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>(),
                map.trace_defect()
            );
        }
    }
    Ok(())
}
