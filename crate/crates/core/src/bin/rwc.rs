//! Command-line front end. Exit codes: 0 success, 1 failed validation or
//! numerical error, 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rwc::cli::{commands, write_tables, Format, Overrides, RunConfig};
use rwc::engine::Backend;
use rwc::Error;

#[derive(Parser)]
#[command(name = "rwc", version, about = "Refined weak coupling dynamics of the spin-boson model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrated and instantaneous coefficients on the time grid.
    Coeffs(Common),
    /// Density-matrix trajectory of the configured initial state.
    Trajectory(Common),
    /// Population, coherence and Lamb shift against the Davies limit.
    Figure1(Common),
    /// Non-Markovianity witnesses.
    Figure2(Common),
    /// Run the numerical acceptance checks.
    Validate(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Map,
    Ode,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// JSON config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long = "omega-c", allow_negative_numbers = true)]
    omega_c: Option<f64>,
    /// Comma-separated temperatures.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    temps: Option<Vec<f64>>,
    #[arg(long = "t-max", allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl Common {
    fn load(&self) -> rwc::Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        config.apply(&Overrides {
            alpha: self.alpha,
            omega_c: self.omega_c,
            temperatures: self.temps.clone(),
            t_max: self.t_max,
            steps: self.steps,
            backend: self.backend.map(|b| match b {
                BackendArg::Map => Backend::Map,
                BackendArg::Ode => Backend::Ode,
            }),
            out: self.out.clone(),
            format: self.format.map(|f| match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            }),
        });
        config.validate()?;
        Ok(config)
    }
}

fn exit_code(e: &Error) -> ExitCode {
    match e {
        Error::Config(_) | Error::InvalidParameter { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::Coeffs(c) => ("coeffs", c),
        Command::Trajectory(c) => ("trajectory", c),
        Command::Figure1(c) => ("figure1", c),
        Command::Figure2(c) => ("figure2", c),
        Command::Validate(c) => ("validate", c),
    };
    let config = match common.load() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    if name == "validate" {
        let outcomes = commands::validate(&config, |o| println!("{o}"));
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        println!("{} of {} checks passed", outcomes.len() - failed, outcomes.len());
        return if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) };
    }
    let run = match name {
        "coeffs" => commands::coeffs(&config),
        "trajectory" => commands::trajectory(&config),
        "figure1" => commands::figure1(&config),
        _ => commands::figure2(&config),
    };
    match run.and_then(|tables| write_tables(name, &tables, &config)) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
