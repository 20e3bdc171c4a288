//! The computations behind each subcommand. Each returns one table per
//! configured temperature, in the configured order.

use rayon::prelude::*;

use super::config::{Frame, RunConfig};
use super::output::Table;
use crate::bath::OhmicBath;
use crate::engine::{coefficient_series, liouvillian_coefficients, to_lab_frame, Model};
use crate::error::Result;
use crate::nonmarkov::{witness_series_with, WitnessStates};
use crate::validation::{self, Outcome, Settings};

pub const COEFFS_COLUMNS: [&str; 11] = [
    "t",
    "Gamma_pp",
    "Gamma_mm",
    "Re_Gamma_pm",
    "Im_Gamma_pm",
    "Xi",
    "gamma_pp",
    "gamma_mm",
    "Re_gamma_pm",
    "Im_gamma_pm",
    "Delta",
];

pub const TRAJECTORY_COLUMNS: [&str; 6] = ["t", "rho_ee", "rho_gg", "Re_rho_eg", "Im_rho_eg", "abs_rho_eg"];

pub const FIGURE1_COLUMNS: [&str; 7] = [
    "t",
    "population_rwc",
    "population_davies",
    "coherence_rwc",
    "coherence_davies",
    "Delta",
    "Delta_davies",
];

pub const FIGURE2_COLUMNS: [&str; 8] = [
    "t",
    "log_negativity",
    "l1_coherence",
    "l1_coherence_qubit",
    "trace_distance_sy",
    "g",
    "lambda_plus",
    "lambda_minus",
];

fn models(config: &RunConfig) -> Result<Vec<Model>> {
    config
        .bath
        .temperatures
        .iter()
        .map(|&temp| {
            let bath = OhmicBath::new(config.bath.alpha, config.bath.omega_c, temp)?;
            Ok(Model::new(bath).with_tolerance(config.tolerance()))
        })
        .collect()
}

/// Integrated and instantaneous coefficients.
pub fn coeffs(config: &RunConfig) -> Result<Vec<Table>> {
    let grid = config.times();
    models(config)?
        .iter()
        .map(|m| {
            let mut table = Table::new(m.bath().temperature(), &COEFFS_COLUMNS);
            for (c, d) in coefficient_series(m, &grid)? {
                let l = liouvillian_coefficients(&c, &d)?;
                table.push(vec![
                    c.t,
                    c.gamma_pp,
                    c.gamma_mm,
                    c.gamma_pm.re,
                    c.gamma_pm.im,
                    c.xi,
                    l.gamma_pp,
                    l.gamma_mm,
                    l.gamma_pm.re,
                    l.gamma_pm.im,
                    l.delta,
                ]);
            }
            Ok(table)
        })
        .collect()
}

/// Density-matrix trajectory of the configured initial state.
pub fn trajectory(config: &RunConfig) -> Result<Vec<Table>> {
    let grid = config.times();
    let rho0 = config.initial_state.state();
    models(config)?
        .iter()
        .map(|m| {
            let states = m.evolve(&rho0, &grid, config.backend)?;
            let states = match config.frame {
                Frame::Interaction => states,
                Frame::Lab => grid
                    .par_iter()
                    .zip(states.par_iter())
                    .map(|(&t, s)| to_lab_frame(s, t))
                    .collect::<Result<Vec<_>>>()?,
            };
            let mut table = Table::new(m.bath().temperature(), &TRAJECTORY_COLUMNS);
            for (t, s) in grid.iter().zip(&states) {
                let p = s.excited_population();
                let c = s.coherence();
                table.push(vec![*t, p, 1.0 - p, c.re, c.im, c.norm()]);
            }
            Ok(table)
        })
        .collect()
}

/// Population, coherence and Lamb shift against the Markovian limit.
pub fn figure1(config: &RunConfig) -> Result<Vec<Table>> {
    let grid = config.times_with_tail();
    let states = WitnessStates {
        population: config.figure1.population_state.state(),
        coherence: config.figure1.coherence_state.state(),
    };
    models(config)?
        .iter()
        .map(|m| {
            let series = witness_series_with(m, &grid, &states)?;
            let mut table = Table::new(m.bath().temperature(), &FIGURE1_COLUMNS);
            for r in &series.records {
                table.push(vec![
                    r.t,
                    r.population,
                    r.davies.population,
                    r.coherence,
                    r.davies.coherence,
                    r.delta,
                    r.davies.delta,
                ]);
            }
            Ok(table)
        })
        .collect()
}

/// Non-Markovianity witnesses.
pub fn figure2(config: &RunConfig) -> Result<Vec<Table>> {
    let grid = config.times();
    models(config)?
        .iter()
        .map(|m| {
            let series = witness_series_with(m, &grid, &WitnessStates::default())?;
            let mut table = Table::new(m.bath().temperature(), &FIGURE2_COLUMNS);
            for r in &series.records {
                table.push(vec![
                    r.t,
                    r.log_negativity,
                    r.l1_coherence,
                    r.l1_coherence_qubit,
                    r.trace_distance_sy,
                    r.g,
                    r.lambda_plus,
                    r.lambda_minus,
                ]);
            }
            Ok(table)
        })
        .collect()
}

/// Acceptance checks with the configured bath and tolerances.
pub fn validate(config: &RunConfig, mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    let settings = Settings {
        alpha: config.bath.alpha,
        omega_c: config.bath.omega_c,
        tolerance: config.tolerance(),
    };
    validation::CHECKS
        .iter()
        .map(|&(id, _)| {
            let o = validation::run(id, &settings);
            report(&o);
            o
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        let mut c = RunConfig::default();
        c.bath.temperatures = vec![0.0, 2.0];
        c.grid.t_max = 2.0;
        c.grid.steps = 4;
        c.grid.davies_tail = 0.0;
        c
    }

    #[test]
    fn coeffs_start_at_zero() {
        let tables = coeffs(&small()).unwrap();
        assert_eq!(tables.len(), 2);
        assert_eq!(tables[1].temperature, 2.0);
        assert!(tables[0].rows[0][1..].iter().all(|&v| v == 0.0));
        assert_eq!(tables[0].rows.len(), 5);
    }

    #[test]
    fn trajectory_frames_agree_on_populations() {
        let mut c = small();
        c.initial_state = super::super::InitialState::Plus;
        let a = trajectory(&c).unwrap();
        c.frame = Frame::Lab;
        let b = trajectory(&c).unwrap();
        for (x, y) in a[0].rows.iter().zip(&b[0].rows) {
            assert!((x[1] - y[1]).abs() < 1e-14);
            assert!((x[5] - y[5]).abs() < 1e-14);
        }
    }

    #[test]
    fn figures_have_declared_shape() {
        let c = small();
        let f1 = figure1(&c).unwrap();
        let f2 = figure2(&c).unwrap();
        assert_eq!(f1[0].rows[0].len(), FIGURE1_COLUMNS.len());
        assert_eq!(f2[0].rows[0].len(), FIGURE2_COLUMNS.len());
        // at t = 0 the ancilla state is maximally entangled
        assert!((f2[0].rows[0][1] - 1.0).abs() < 1e-12);
        assert!((f1[0].rows[0][1] - 1.0).abs() < 1e-12);
    }
}
