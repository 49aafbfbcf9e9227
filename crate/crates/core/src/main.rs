use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use risjam::channel::PhaseConfig;
use risjam::harness::{figure_spec, oracle_exhaustive, run_sweep, write_csv, Figure};
use risjam::optimizer::{alternate, Instance, SolverSettings};
use risjam::scenario::load_scenario;
use risjam::{Error, Result};

const EXIT_FAILURE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "risjam",
    version,
    about = "RIS-assisted anti-jamming downlink simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the SJNR of one phase configuration at full power.
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// JSON file `{"thetas": [...]}`; identity phases when omitted.
        #[arg(long)]
        phases: Option<PathBuf>,
        /// Print the channel set to stderr.
        #[arg(long)]
        dump_channels: bool,
    },
    /// Jointly optimize transmit power and RIS phases.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        /// Stream SDP iterations to stderr as JSON lines.
        #[arg(long)]
        dump_trace: bool,
        #[arg(long)]
        dump_channels: bool,
    },
    /// Reproduce one of the reference sweeps as CSV.
    Sweep {
        #[arg(long, value_parser = parse_figure)]
        figure: Figure,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the swept grid (SI units, or element counts).
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        /// Override the RIS shapes, e.g. `3x3,5x5`.
        #[arg(long, value_delimiter = ',', value_parser = parse_size)]
        sizes: Option<Vec<(usize, usize)>>,
        /// Record wall-clock runtimes (makes the output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Exhaustive search over quantized phases.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        levels: usize,
    },
}

fn parse_figure(s: &str) -> std::result::Result<Figure, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (r, c) = s
        .split_once('x')
        .ok_or_else(|| format!("expected ROWSxCOLS, got `{s}`"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{s}`: {e}"));
    Ok((parse(r)?, parse(c)?))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn dump_channels(instance: &Instance) -> Result<()> {
    let mut err = io::stderr().lock();
    serde_json::to_writer(&mut err, &instance.channels)?;
    writeln!(err)?;
    Ok(())
}

/// Returns `true` when every solve converged.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Eval {
            config,
            phases,
            dump_channels: dump,
        } => {
            let scenario = load_scenario(config)?;
            let instance = Instance::from_scenario(&scenario)?;
            if dump {
                dump_channels(&instance)?;
            }
            let phases: PhaseConfig<f64> = match phases {
                Some(path) => serde_json::from_reader(File::open(path)?)?,
                None => PhaseConfig::identity(scenario.num_elements()),
            };
            if phases.len() != scenario.num_elements() {
                return Err(Error::InvalidArgument(format!(
                    "{} phases given for {} elements",
                    phases.len(),
                    scenario.num_elements()
                )));
            }
            print_json(&instance.evaluate(&phases, scenario.p_tx_max)?)?;
            Ok(true)
        }
        Command::Optimize {
            config,
            seed,
            restarts,
            dump_trace,
            dump_channels: dump,
        } => {
            let scenario = load_scenario(config)?;
            if dump {
                dump_channels(&Instance::from_scenario(&scenario)?)?;
            }
            let settings = SolverSettings {
                seed,
                restarts,
                record_sdp_trace: dump_trace,
                ..SolverSettings::default()
            };
            let result = alternate(&scenario, &settings)?;
            if dump_trace {
                let mut err = io::stderr().lock();
                for record in &result.sdp_trace {
                    serde_json::to_writer(&mut err, record)?;
                    writeln!(err)?;
                }
            }
            print_json(&result)?;
            Ok(result.converged && result.solver_converged)
        }
        Command::Sweep {
            figure,
            config,
            out,
            seed,
            grid,
            sizes,
            timing,
        } => {
            let scenario = load_scenario(config)?;
            let mut spec = figure_spec(figure, scenario, seed);
            if let Some(grid) = grid {
                spec.grid = grid;
            }
            if let Some(sizes) = sizes {
                spec.ris_sizes = sizes;
            }
            spec.timing = timing;
            let rows = run_sweep(&spec)?;
            write_csv(&rows, BufWriter::new(File::create(out)?))?;
            Ok(rows.iter().all(|r| r.converged))
        }
        Command::Oracle { config, levels } => {
            let scenario = load_scenario(config)?;
            print_json(&oracle_exhaustive(&scenario, levels)?.report)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("warning: solver did not converge; output is the best point found");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_FAILURE
            })
        }
    }
}
