//! Ohmic bosonic bath with exponential cutoff.
//!
//! Units: ħ = k_B = 1 and the qubit splitting ω₀ = 1, so frequencies and
//! temperatures are in units of ω₀ and times in units of 1/ω₀.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Qubit splitting. Fixed to one; every frequency is measured in it.
pub const OMEGA0: f64 = 1.0;

/// Above this ω/T the Bose factor is replaced by e^{-ω/T}.
const ASYMPTOTIC_RATIO: f64 = 700.0;

/// J(ω) = α ω e^{-ω/ω_c} at temperature T.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OhmicBath {
    alpha: f64,
    omega_c: f64,
    temperature: f64,
}

impl OhmicBath {
    pub fn new(alpha: f64, omega_c: f64, temperature: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter {
                field: "alpha",
                reason: format!("must be positive and finite, got {alpha}"),
            });
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::InvalidParameter {
                field: "omega_c",
                reason: format!("must be positive and finite, got {omega_c}"),
            });
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::InvalidParameter {
                field: "temperature",
                reason: format!("must be non-negative and finite, got {temperature}"),
            });
        }
        Ok(Self {
            alpha,
            omega_c,
            temperature,
        })
    }

    /// α = 0.05, ω_c = 5ω₀ at the given temperature.
    pub fn reference(temperature: f64) -> Result<Self> {
        Self::new(0.05, 5.0, temperature)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        Self::new(self.alpha, self.omega_c, temperature)
    }

    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        check_nonnegative(omega)?;
        Ok(self.spectral_density_unchecked(omega))
    }

    pub(crate) fn spectral_density_unchecked(&self, omega: f64) -> f64 {
        self.alpha * omega * (-omega / self.omega_c).exp()
    }

    /// Bose–Einstein occupation n̄_T(ω) = 1/(e^{ω/T} - 1).
    pub fn occupation(&self, omega: f64) -> Result<f64> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter {
                field: "omega",
                reason: format!("occupation needs ω > 0, got {omega}"),
            });
        }
        Ok(self.occupation_unchecked(omega))
    }

    pub(crate) fn occupation_unchecked(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            return 0.0;
        }
        let x = omega / self.temperature;
        if x > ASYMPTOTIC_RATIO {
            (-x).exp()
        } else {
            1.0 / x.exp_m1()
        }
    }

    /// J(ω)[n̄(ω) + 1], the emission weight.
    pub fn thermal_weight_plus(&self, omega: f64) -> Result<f64> {
        check_nonnegative(omega)?;
        Ok(self.weight_plus(omega))
    }

    /// J(ω) n̄(ω), the absorption weight. Finite at ω = 0, where it equals αT.
    pub fn thermal_weight_minus(&self, omega: f64) -> Result<f64> {
        check_nonnegative(omega)?;
        Ok(self.weight_minus(omega))
    }

    pub(crate) fn weight_plus(&self, omega: f64) -> f64 {
        if omega == 0.0 {
            return self.alpha * self.temperature;
        }
        self.spectral_density_unchecked(omega) + self.weight_minus(omega)
    }

    pub(crate) fn weight_minus(&self, omega: f64) -> f64 {
        if self.temperature == 0.0 {
            return 0.0;
        }
        if omega == 0.0 {
            return self.alpha * self.temperature;
        }
        let x = omega / self.temperature;
        let decay = (-omega / self.omega_c).exp();
        if x > ASYMPTOTIC_RATIO {
            self.alpha * omega * decay * (-x).exp()
        } else {
            // α ω / (e^{ω/T} - 1) stays accurate as ω → 0 through expm1
            self.alpha * omega / x.exp_m1() * decay
        }
    }

    /// Davies emission rate 2πJ(ω₀)(n̄(ω₀) + 1).
    pub fn davies_decay_rate(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.weight_plus(OMEGA0)
    }

    /// Davies absorption rate 2πJ(ω₀)n̄(ω₀).
    pub fn davies_excitation_rate(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.weight_minus(OMEGA0)
    }
}

fn check_nonnegative(omega: f64) -> Result<()> {
    if omega.is_finite() && omega >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "omega",
            reason: format!("frequency must be non-negative, got {omega}"),
        })
    }
}
