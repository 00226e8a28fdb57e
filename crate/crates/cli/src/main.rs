//! `whstab`: batch front-end for weakly-hard stability analysis.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use whstab_core::{ActuatorMode, Constraint, Strategy};

use config::{ConfigError, Format, Overrides};

/// Exit statuses.
pub mod status {
    pub const OK: u8 = 0;
    pub const FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const EMPTY_LANGUAGE: u8 = 3;
    pub const INFEASIBLE: u8 = 4;
    pub const UNSTABLE: u8 = 10;
    pub const INCONCLUSIVE: u8 = 11;
}

#[derive(Parser)]
#[command(
    name = "whstab",
    version,
    about = "Stability of control loops under weakly-hard deadline constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the constraint graph as DOT or JSON.
    Fsm {
        #[command(flatten)]
        common: Common,
        /// Skip minimization.
        #[arg(long)]
        raw: bool,
    },
    /// Bound the constrained joint spectral radius and report a verdict.
    ///
    /// Exit status 0 means stable, 10 unstable, 11 inconclusive.
    Stability {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        jsr: JsrFlags,
        /// Analyze every constraint on its own, one report each.
        #[arg(long)]
        each: bool,
    },
    /// Compare two constraint sets: harder, equivalent, easier or incomparable.
    Dominance {
        #[arg(long, required = true, num_args = 1..)]
        left: Vec<Constraint>,
        #[arg(long, required = true, num_args = 1..)]
        right: Vec<Constraint>,
        #[arg(long, default_value = "kill")]
        strategy: Strategy,
        /// Strategy of the right-hand set when it differs from the left.
        #[arg(long)]
        right_strategy: Option<Strategy>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Simulate the closed loop along an outcome sequence and print CSV.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Outcomes such as `HMHH`.
        #[arg(long, default_value = "")]
        sequence: String,
        /// Initial plant state, or the full closed-loop state.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Vec<f64>,
        /// Repeat the sequence until this many steps are taken.
        #[arg(long)]
        steps: Option<usize>,
        /// Do not check the sequence against the constraints.
        #[arg(long)]
        unchecked: bool,
    },
    /// List the available bound estimators.
    Methods,
}

#[derive(Args)]
struct Common {
    /// JSON analysis configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in plant/controller pair (p1c1, p2c2).
    #[arg(long)]
    system: Option<String>,
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long)]
    actuator: Option<ActuatorMode>,
    /// Weakly-hard constraint, e.g. `anymiss(1,3)`; repeatable.
    #[arg(long = "constraint", short = 'c')]
    constraints: Vec<Constraint>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct JsrFlags {
    /// Bound estimator (see `whstab methods`).
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    /// Maximum product length of the upper-bound search.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
}

impl Common {
    fn overrides(&self, jsr: Option<&JsrFlags>) -> Overrides {
        Overrides {
            system: self.system.clone(),
            strategy: self.strategy,
            actuator: self.actuator,
            constraints: self.constraints.clone(),
            method: jsr.and_then(|j| j.method.clone()),
            delta: jsr.and_then(|j| j.delta),
            depth: jsr.and_then(|j| j.depth),
            budget: jsr.and_then(|j| j.budget),
        }
    }

    fn resolve(&self, jsr: Option<&JsrFlags>) -> Result<config::AnalysisConfig, ConfigError> {
        let doc = self.config.as_deref().map(config::read_doc).transpose()?;
        config::AnalysisConfig::resolve(doc, &self.overrides(jsr))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("whstab: {}", e.message);
            e.code
        }
    };
    ExitCode::from(code)
}

fn run(command: Command) -> Result<u8, commands::Failure> {
    let (common, jsr) = match &command {
        Command::Fsm { common, .. } | Command::Simulate { common, .. } => (Some(common), None),
        Command::Stability { common, jsr, .. } => (Some(common), Some(jsr)),
        _ => (None, None),
    };
    let cfg = match common {
        Some(c) => {
            let cfg = c.resolve(jsr)?;
            if c.dump_config {
                let text = serde_json::to_string_pretty(&cfg.to_doc()).expect("config serializes");
                commands::emit(c.output.as_deref(), &format!("{text}\n"))?;
                return Ok(status::OK);
            }
            Some(cfg)
        }
        None => None,
    };
    match command {
        Command::Fsm { common, raw } => {
            let format = common.format.or(cfg.as_ref().and_then(|c| c.format));
            commands::fsm(&cfg.unwrap(), raw, format, common.output.as_deref())
        }
        Command::Stability { common, each, .. } => {
            let format = common.format.or(cfg.as_ref().and_then(|c| c.format));
            commands::stability(&cfg.unwrap(), each, format, common.output.as_deref())
        }
        Command::Simulate {
            common,
            sequence,
            x0,
            steps,
            unchecked,
        } => commands::simulate(
            &cfg.unwrap(),
            &sequence,
            &x0,
            steps,
            unchecked,
            common.output.as_deref(),
        ),
        Command::Dominance {
            left,
            right,
            strategy,
            right_strategy,
            output,
        } => commands::dominance(
            left,
            strategy,
            right,
            right_strategy.unwrap_or(strategy),
            output.as_deref(),
        ),
        Command::Methods => commands::methods(),
    }
}
