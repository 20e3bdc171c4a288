//! Versioned run configuration.
//!
//! A config file is a JSON object; every key is optional and falls back to
//! the defaults below. Command-line flags override file values, and the
//! merged result is validated once with field-precise messages.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::Backend;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, QubitState};
use crate::quadrature::Tolerance;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub version: u32,
    pub bath: BathConfig,
    pub grid: GridConfig,
    pub initial_state: InitialState,
    pub figure1: Figure1Config,
    pub tolerances: ToleranceConfig,
    pub output: OutputConfig,
    pub backend: Backend,
    pub frame: Frame,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            bath: BathConfig::default(),
            grid: GridConfig::default(),
            initial_state: InitialState::Excited,
            figure1: Figure1Config::default(),
            tolerances: ToleranceConfig::default(),
            output: OutputConfig::default(),
            backend: Backend::Map,
            frame: Frame::Interaction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BathConfig {
    pub alpha: f64,
    pub omega_c: f64,
    pub temperatures: Vec<f64>,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            omega_c: 5.0,
            temperatures: vec![0.0, 1.0, 5.0],
        }
    }
}

/// Uniform grid on [0, t_max] unless explicit `times` are given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub t_max: f64,
    pub steps: usize,
    pub times: Option<Vec<f64>>,
    /// Extra log-spaced points from `t_max` out to this time in `figure1`,
    /// for the approach to the Markovian limit. Zero disables.
    pub davies_tail: f64,
    pub davies_tail_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            t_max: 30.0,
            steps: 600,
            times: None,
            davies_tail: 300.0,
            davies_tail_points: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Excited,
    Ground,
    Plus,
    SigmaYPlus,
    SigmaYMinus,
    Mixed,
}

impl InitialState {
    pub fn state(self) -> QubitState {
        match self {
            InitialState::Excited => QubitState::excited(),
            InitialState::Ground => QubitState::ground(),
            InitialState::Plus => QubitState::plus(),
            InitialState::SigmaYPlus => QubitState::sigma_y_eigenstate(true),
            InitialState::SigmaYMinus => QubitState::sigma_y_eigenstate(false),
            InitialState::Mixed => QubitState::maximally_mixed(),
        }
    }
}

/// Inputs for the population and coherence columns of `figure1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Figure1Config {
    pub population_state: InitialState,
    pub coherence_state: InitialState,
}

impl Default for Figure1Config {
    fn default() -> Self {
        Self {
            population_state: InitialState::Excited,
            coherence_state: InitialState::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceConfig {
    pub abs: f64,
    pub rel: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        let t = Tolerance::default();
        Self { abs: t.abs, rel: t.rel }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub path: PathBuf,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            path: PathBuf::from("out"),
            format: Format::Csv,
        }
    }
}

/// Frame the reported states are expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Interaction,
    Lab,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub omega_c: Option<f64>,
    pub temperatures: Option<Vec<f64>>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub backend: Option<Backend>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn invalid(field: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {reason}"))
}

impl RunConfig {
    /// Parses a config document. Syntax and type errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.alpha {
            self.bath.alpha = v;
        }
        if let Some(v) = o.omega_c {
            self.bath.omega_c = v;
        }
        if let Some(v) = &o.temperatures {
            self.bath.temperatures = v.clone();
        }
        if let Some(v) = o.t_max {
            self.grid.t_max = v;
            self.grid.times = None;
        }
        if let Some(v) = o.steps {
            self.grid.steps = v;
            self.grid.times = None;
        }
        if let Some(v) = o.backend {
            self.backend = v;
        }
        if let Some(v) = &o.out {
            self.output.path = v.clone();
        }
        if let Some(v) = o.format {
            self.output.format = v;
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(invalid(
                "version",
                format!("unsupported version {} (expected {CONFIG_VERSION})", self.version),
            ));
        }
        let b = &self.bath;
        if !(b.alpha.is_finite() && b.alpha > 0.0) {
            return Err(invalid("bath.alpha", format!("must be positive and finite, got {}", b.alpha)));
        }
        if !(b.omega_c.is_finite() && b.omega_c > 0.0) {
            return Err(invalid("bath.omega_c", format!("must be positive and finite, got {}", b.omega_c)));
        }
        if b.temperatures.is_empty() {
            return Err(invalid("bath.temperatures", "must list at least one temperature"));
        }
        if let Some(t) = b.temperatures.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(invalid("bath.temperatures", format!("must be non-negative and finite, got {t}")));
        }
        let g = &self.grid;
        match &g.times {
            Some(times) => {
                if times.is_empty() {
                    return Err(invalid("grid.times", "must not be empty"));
                }
                if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
                    return Err(invalid("grid.times", "times must be non-negative and finite"));
                }
                if times.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(invalid("grid.times", "times must be strictly increasing"));
                }
            }
            None => {
                if !(g.t_max.is_finite() && g.t_max > 0.0) {
                    return Err(invalid("grid.t_max", format!("must be positive and finite, got {}", g.t_max)));
                }
                if g.steps < 2 {
                    return Err(invalid("grid.steps", "must be at least 2"));
                }
            }
        }
        if !(g.davies_tail.is_finite() && g.davies_tail >= 0.0) {
            return Err(invalid("grid.davies_tail", "must be non-negative and finite"));
        }
        let t = &self.tolerances;
        if !(t.abs.is_finite() && t.abs > 0.0) {
            return Err(invalid("tolerances.abs", format!("must be positive, got {}", t.abs)));
        }
        if !(t.rel.is_finite() && t.rel > 0.0 && t.rel < 1.0) {
            return Err(invalid("tolerances.rel", format!("must lie in (0, 1), got {}", t.rel)));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.tolerances.abs, self.tolerances.rel)
    }

    /// The propagation grid: explicit times, or `steps + 1` uniform points.
    pub fn times(&self) -> Vec<f64> {
        match &self.grid.times {
            Some(t) => t.clone(),
            None => {
                let n = self.grid.steps;
                (0..=n).map(|k| self.grid.t_max * k as f64 / n as f64).collect()
            }
        }
    }

    /// The grid extended by the log-spaced tail used for Markovian-limit output.
    pub fn times_with_tail(&self) -> Vec<f64> {
        let mut times = self.times();
        let last = *times.last().unwrap_or(&0.0);
        let end = self.grid.davies_tail;
        let n = self.grid.davies_tail_points;
        if end > last && last > 0.0 && n > 0 {
            let ratio = (end / last).ln() / n as f64;
            times.extend((1..=n).map(|k| last * (ratio * k as f64).exp()));
            if let Some(t) = times.last_mut() {
                *t = end;
            }
        }
        times
    }
}

/// Density matrix from explicit rows, for callers building custom inputs.
pub fn state_from_rows(rows: &[&[f64]]) -> Result<QubitState> {
    QubitState::new(ComplexMatrix::from_real_rows(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = RunConfig::default();
        c.validate().unwrap();
        let t = c.times();
        assert_eq!(t.len(), 601);
        assert_eq!(t[600], 30.0);
    }

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn partial_document_merges() {
        let c = RunConfig::from_json(r#"{"bath": {"alpha": 0.1}, "backend": "ode"}"#).unwrap();
        assert_eq!(c.bath.alpha, 0.1);
        assert_eq!(c.bath.omega_c, 5.0);
        assert_eq!(c.backend, Backend::Ode);
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = RunConfig::from_json("{\n  \"bath\": {\"alpha\": \"x\"}\n}").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
        let e = RunConfig::from_json(r#"{"bath": {"alpah": 1}}"#).unwrap_err().to_string();
        assert!(e.contains("alpah"), "{e}");
    }

    #[test]
    fn validation_names_field() {
        let mut c = RunConfig::default();
        c.bath.alpha = -0.1;
        assert!(c.validate().unwrap_err().to_string().contains("bath.alpha"));
        let mut c = RunConfig::default();
        c.bath.temperatures.clear();
        assert!(c.validate().unwrap_err().to_string().contains("bath.temperatures"));
        let mut c = RunConfig::default();
        c.grid.times = Some(vec![0.0, 2.0, 1.0]);
        assert!(c.validate().unwrap_err().to_string().contains("grid.times"));
        let mut c = RunConfig::default();
        c.version = 7;
        assert!(c.validate().unwrap_err().to_string().contains("version"));
    }

    #[test]
    fn overrides_take_precedence() {
        let mut c = RunConfig::from_json(r#"{"grid": {"times": [0, 1]}}"#).unwrap();
        c.apply(&Overrides {
            alpha: Some(0.02),
            steps: Some(10),
            ..Default::default()
        });
        assert_eq!(c.bath.alpha, 0.02);
        assert_eq!(c.times().len(), 11);
    }

    #[test]
    fn tail_ends_at_requested_time() {
        let c = RunConfig::default();
        let t = c.times_with_tail();
        assert_eq!(t.len(), 641);
        assert_eq!(*t.last().unwrap(), 300.0);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn initial_states_are_valid() {
        for s in [
            InitialState::Excited,
            InitialState::Ground,
            InitialState::Plus,
            InitialState::SigmaYPlus,
            InitialState::SigmaYMinus,
            InitialState::Mixed,
        ] {
            let rho = s.state();
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
        }
        assert!(state_from_rows(&[&[0.5, 0.0], &[0.0, 0.6]]).is_err());
    }
}
