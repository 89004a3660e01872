use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tdmetric::app::{self, exit, AppError, Emit};
use tdmetric::evolution::EvolutionMode;
use tdmetric::model::builtin_scenario_specs;

#[derive(Parser)]
#[command(
    name = "tdmetric",
    version,
    about = "Evolution under time-dependent metric operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one scenario and report its invariants.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured modes; repeatable.
        #[arg(long = "mode")]
        modes: Vec<EvolutionMode>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        emit: Option<Vec<Emit>>,
    },
    /// Repeat a run over values of one scenario parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated list; may be empty.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the built-in scenarios.
    ListScenarios,
    /// Run the built-in invariant suite and the randomized theorem check.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        random: usize,
    },
}

fn parse_values(text: &str) -> Result<Vec<f64>, AppError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| AppError::Validation(format!("bad sweep value `{s}`: {e}")))
        })
        .collect()
}

fn execute(cli: Cli) -> Result<i32, AppError> {
    match cli.command {
        Command::Run {
            config,
            modes,
            out,
            emit,
        } => {
            let mut cfg = app::load_config(&config)?;
            if !modes.is_empty() {
                cfg.modes = modes;
            }
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            if let Some(emit) = emit {
                cfg.emit = emit;
            }
            let report = app::run(&cfg)?;
            for m in &report.modes {
                let (td, un, ob) = m.verdict.flags();
                println!(
                    "{} {:<18} drift={:.3e} intertwining={} gph={:.3e} time_dependent={td} unitary={un} observable={ob} consistent={}",
                    report.scenario.name,
                    m.mode.as_str(),
                    m.max_unitarity_drift,
                    m.max_intertwining_residual.map_or("n/a".to_string(), |v| format!("{v:.3e}")),
                    m.max_generalized_ph_residual,
                    m.verdict.consistent_with_theorem,
                );
            }
            Ok(report.exit_code())
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let mut cfg = app::load_config(&config)?;
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            let values = parse_values(&values)?;
            let (reports, rows) = app::sweep(&cfg, &param, &values)?;
            for r in &rows {
                println!(
                    "{param}={} {:<18} drift={:.3e} observability_defect={:.3e}",
                    r.value,
                    r.mode.as_str(),
                    r.max_unitarity_drift,
                    r.observability_defect
                );
            }
            if reports.iter().all(|r| r.all_consistent) {
                Ok(exit::SUCCESS)
            } else {
                Ok(exit::INCONSISTENT)
            }
        }
        Command::ListScenarios => {
            for spec in builtin_scenario_specs() {
                println!(
                    "{:<16} dim={} params={:?} metric={}",
                    spec.name,
                    spec.dim(),
                    spec.parameters(),
                    serde_json::to_string(&spec.metric)?
                );
            }
            Ok(exit::SUCCESS)
        }
        Command::Verify { seed, random } => {
            let report = app::verify(seed, random)?;
            for check in &report.checks {
                println!("{}", check.line());
            }
            for v in &report.theorem_violations {
                println!("violation: {v}");
            }
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::OPERATIONAL_ERROR as u8)
        }
    }
}
