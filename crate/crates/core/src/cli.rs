//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation or file operation fails,
//! 2 on a usage error.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::circuit::detection_readout;
use crate::decoherence::{dynamics_sweep, ChannelSpec};
use crate::discord::{discord_with, DiscordOptions};
use crate::qmat::{DensityMatrix, Subsystem};
use crate::states;
use crate::tomography::{measure_all, reconstruct, TomographyRecord};
use crate::witness::{map_value_direct, optimize_c, COptOptions, C_OPT};

const STATE_HELP: &str = "Built-in name (sigma, bell, mixed, zero, random) or path to a \
DensityMatrix JSON file {\"dim\", \"rows\", \"cols\", \"re\", \"im\"}";

#[derive(Debug, Parser)]
#[command(
    name = "ncwitness",
    version,
    about = "Nonclassicality witness, discord and decoherence experiments on two-qubit states"
)]
pub struct Cli {
    /// Seed for every random draw (random states, tomography noise, optimizer restarts).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a state as DensityMatrix JSON.
    State(StateArgs),
    /// Evaluate the witness map; emits a WitnessReport JSON object.
    Witness(WitnessArgs),
    /// Compute quantum discord; emits a DiscordResult JSON object.
    Discord(DiscordArgs),
    /// Evolve sigma under T1/T2 relaxation; writes CSV `time_s,map_value,discord_bits,fidelity`.
    Dynamics(DynamicsArgs),
    /// Simulate Pauli tomography; emits a record {"labels", "values", "noise_sigma", "seed"}.
    #[command(name = "tomo-measure")]
    TomoMeasure(TomoMeasureArgs),
    /// Reconstruct a state from a tomography record; emits DensityMatrix JSON.
    #[command(name = "tomo-reconstruct")]
    TomoReconstruct(TomoReconstructArgs),
    /// Re-derive the witness constant by maximizing over PCC states.
    #[command(name = "optimize-c")]
    OptimizeC(OptimizeCArgs),
    /// CH/CNOT detection readout; emits {"z1", "z2", "z2p"}.
    Readout(ReadoutArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long, help = STATE_HELP)]
    pub state: String,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long, help = STATE_HELP)]
    pub state: String,
    /// Witness constant c.
    #[arg(long, default_value_t = C_OPT)]
    pub c: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct DiscordArgs {
    #[arg(long, help = STATE_HELP)]
    pub state: String,
    /// Measured subsystem.
    #[arg(long, default_value = "A", value_parser = parse_subsystem)]
    pub measured: Subsystem,
    /// Coarse grid points per angle before local refinement.
    #[arg(long, default_value_t = 61)]
    pub grid: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct DynamicsArgs {
    /// ChannelSpec JSON: {"t1_q1", "t2_q1", "t1_q2", "t2_q2", "j_coupling", "include_j"}
    /// (seconds, Hz). Defaults to placeholder values when omitted.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// `standard` (times 2n/J for n = 0, 1, 3, ..., 50; `paper` is an alias)
    /// or comma-separated seconds.
    #[arg(long, default_value = "standard")]
    pub schedule: String,
    /// Also write each evolved state as DensityMatrix JSON into this directory.
    #[arg(long)]
    pub states_dir: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct TomoMeasureArgs {
    #[arg(long, help = STATE_HELP)]
    pub state: String,
    /// Standard deviation of additive Gaussian noise on each expectation value.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct TomoReconstructArgs {
    /// Tomography record JSON produced by `tomo-measure`.
    #[arg(long)]
    pub record: PathBuf,
    /// Emit the WitnessReport of the reconstructed state instead of the state.
    #[arg(long)]
    pub map_value: bool,
    /// Witness constant used with --map-value.
    #[arg(long, default_value_t = C_OPT)]
    pub c: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct OptimizeCArgs {
    /// Nelder-Mead restarts per round.
    #[arg(long, default_value_t = 64)]
    pub starts: usize,
    /// Evaluation budget per restart.
    #[arg(long, default_value_t = 4000)]
    pub max_evals: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct ReadoutArgs {
    #[arg(long, help = STATE_HELP)]
    pub state: String,
    #[command(flatten)]
    pub out: Output,
}

fn parse_subsystem(s: &str) -> Result<Subsystem, String> {
    s.parse::<Subsystem>().map_err(|e| e.to_string())
}

/// Failure of a subcommand, mapped to exit code 1.
#[derive(Debug)]
pub struct RunError(pub String);

impl<E: std::fmt::Display> From<E> for RunError {
    fn from(e: E) -> Self {
        RunError(e.to_string())
    }
}

type RunResult = std::result::Result<(), RunError>;

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(RunError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> RunResult {
    match &cli.command {
        Command::State(a) => {
            let rho = load_state(&a.state, cli.seed)?;
            emit_json(&rho, &a.out, stdout)
        }
        Command::Witness(a) => {
            let rho = load_state(&a.state, cli.seed)?;
            emit_json(&map_value_direct(&rho, a.c)?, &a.out, stdout)
        }
        Command::Discord(a) => {
            let rho = load_state(&a.state, cli.seed)?;
            let options = DiscordOptions {
                grid: a.grid,
                ..DiscordOptions::default()
            };
            emit_json(&discord_with(&rho, a.measured, &options)?, &a.out, stdout)
        }
        Command::Dynamics(a) => run_dynamics(a, stdout),
        Command::TomoMeasure(a) => {
            let rho = load_state(&a.state, cli.seed)?;
            emit_json(&measure_all(&rho, a.noise, cli.seed)?, &a.out, stdout)
        }
        Command::TomoReconstruct(a) => {
            let record: TomographyRecord = read_json(&a.record)?;
            let rho = reconstruct(&record)?;
            if a.map_value {
                emit_json(&map_value_direct(&rho, a.c)?, &a.out, stdout)
            } else {
                emit_json(&rho, &a.out, stdout)
            }
        }
        Command::OptimizeC(a) => {
            let options = COptOptions {
                starts: a.starts,
                max_evals: a.max_evals,
                seed: cli.seed,
                ..COptOptions::default()
            };
            emit_json(&optimize_c(&options)?, &a.out, stdout)
        }
        Command::Readout(a) => {
            let rho = load_state(&a.state, cli.seed)?;
            emit_json(&detection_readout(&rho)?, &a.out, stdout)
        }
    }
}

fn run_dynamics(a: &DynamicsArgs, stdout: &mut dyn Write) -> RunResult {
    let spec = match &a.spec {
        Some(path) => ChannelSpec::from_json_file(path)?,
        None => ChannelSpec::default(),
    };
    let schedule = parse_schedule(&a.schedule, &spec)?;
    let points = dynamics_sweep(&spec, &schedule)?;

    let mut csv = String::from("time_s,map_value,discord_bits,fidelity\n");
    for p in &points {
        writeln!(
            csv,
            "{:.6},{:.6},{:.6},{:.6}",
            p.time, p.map_value, p.discord, p.fidelity_vs_ideal
        )?;
    }
    if let Some(dir) = &a.states_dir {
        fs::create_dir_all(dir).map_err(|e| RunError(format!("{}: {e}", dir.display())))?;
        for (i, p) in points.iter().enumerate() {
            let path = dir.join(format!("state_{i:02}.json"));
            write_file(&path, &to_json(&p.state)?)?;
        }
    }
    emit_text(&csv, &a.out, stdout)
}

/// `standard` (alias `paper`) or a comma-separated list of times in seconds.
pub fn parse_schedule(text: &str, spec: &ChannelSpec) -> std::result::Result<Vec<f64>, RunError> {
    if matches!(text, "standard" | "paper") {
        return Ok(spec.standard_schedule());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| RunError(format!("bad schedule entry {s:?}: {e}")))
        })
        .collect()
}

/// Resolves a built-in state name or reads a DensityMatrix JSON file.
pub fn load_state(arg: &str, seed: u64) -> std::result::Result<DensityMatrix, RunError> {
    if let Some(rho) = states::builtin(arg) {
        return Ok(rho);
    }
    if arg == "random" {
        return Ok(states::random_density(4, seed)?);
    }
    read_json(Path::new(arg))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, RunError> {
    let text =
        fs::read_to_string(path).map_err(|e| RunError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        RunError(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn to_json<T: Serialize>(value: &T) -> std::result::Result<String, RunError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn write_file(path: &Path, text: &str) -> RunResult {
    fs::write(path, text).map_err(|e| RunError(format!("{}: {e}", path.display())))
}

fn emit_text(text: &str, out: &Output, stdout: &mut dyn Write) -> RunResult {
    match &out.output {
        Some(path) => write_file(path, text),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn emit_json<T: Serialize>(value: &T, out: &Output, stdout: &mut dyn Write) -> RunResult {
    emit_text(&to_json(value)?, out, stdout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("ncwitness").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn witness_sigma() {
        let (code, out, _) = run_capture(&["witness", "--state", "sigma"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["map_value"].as_f64().unwrap() + 0.067862).abs() < 1e-9);
        assert_eq!(v["ncc_detected"], true);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["witness", "--bogus"]).0, 2);
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["discord", "--state", "bell", "--measured", "C"]).0, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["dynamics", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("--schedule"));
    }

    #[test]
    fn missing_file_exits_one() {
        let (code, _, err) = run_capture(&["witness", "--state", "/nonexistent/state.json"]);
        assert_eq!(code, 1);
        assert!(err.contains("/nonexistent/state.json"));
    }

    #[test]
    fn schedule_parsing() {
        let spec = ChannelSpec::default();
        assert_eq!(parse_schedule("standard", &spec).unwrap().len(), 16);
        assert_eq!(parse_schedule("paper", &spec).unwrap(), spec.standard_schedule());
        assert_eq!(parse_schedule("0, 0.1,0.2", &spec).unwrap(), vec![0.0, 0.1, 0.2]);
        assert!(parse_schedule("0,x", &spec).is_err());
    }
}
