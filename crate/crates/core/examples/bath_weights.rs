//! Spectral density, Bose occupation and thermal weights of the Ohmic bath.

use rwc::bath::OhmicBath;

fn main() -> rwc::Result<()> {
    for temp in [0.0, 1.0, 5.0] {
        let bath = OhmicBath::new(0.05, 5.0, temp)?;
        println!(
            "T = {temp}: decay {:.6}, excitation {:.6}",
            bath.davies_decay_rate(),
            bath.davies_excitation_rate()
        );
        for omega in [0.0, 0.5, 1.0, 5.0, 20.0] {
            println!(
                "  omega {omega:5.1}  J {:.6e}  w+ {:.6e}  w- {:.6e}",
                bath.spectral_density(omega)?,
                bath.thermal_weight_plus(omega)?,
                bath.thermal_weight_minus(omega)?
            );
        }
    }
    Ok(())
}
