//! Command-line front end. Exit codes: 0 ok, 1 usage or config error,
//! 2 divergence, 3 non-convergence, 4 verification failure.

use crate::action::{action_gradient_flat, action_value, Functional};
use crate::domain::{parse_config, DiscreteLoop, ProblemSpec};
use crate::error::Error;
use crate::integrate::{integrate, Picture, DEFAULT_STEPS};
use crate::io::{orbit_result_json, read_loop, write_loop, write_trajectory};
use crate::orbits::{
    best_result, multi_start_shooting, multi_start_variational, seeded_guesses, seeded_loops, Method,
    SearchOptions,
};
use crate::verify::{config_report, preset_report, Report, SHIPPED_PRESETS};
use clap::{Args, Parser, Subcommand};
use nalgebra::Vector4;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DIVERGENCE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

pub const THREADS_ENV: &str = "ROTORSYM_THREADS";

const SHOOTING_SPREAD: f64 = 0.1;
const LOOP_SPREAD: f64 = 0.01;
const MULTI_START_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(name = "rotorsym", version, about = "Charged particles in time-dependent planar magnetic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one trajectory and write it as CSV.
    Simulate(SimulateArgs),
    /// Search for a 1-periodic orbit.
    FindOrbit(FindOrbitArgs),
    /// Evaluate an action functional on a loop file.
    Action(ActionArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "canonical", value_parser = ["canonical", "twisted", "force", "euler-flow"])]
    picture: String,
    /// Initial state `q1,q2,p1,p2`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_state)]
    z0: Vector4<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    t1: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FindOrbitArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_parser = ["shooting", "variational"])]
    method: String,
    #[arg(long, default_value = "canonical", value_parser = ["canonical", "twisted", "force", "euler-flow"])]
    picture: String,
    /// Initial guess for shooting.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_state)]
    z0: Option<Vector4<f64>>,
    /// Loop guess for the variational method.
    #[arg(long = "loop")]
    loop_path: Option<PathBuf>,
    #[arg(long, default_value = "classical", value_parser = ["classical", "symplectic"])]
    functional: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Number of starts: the guess plus perturbed copies.
    #[arg(long, default_value_t = 1)]
    seed_count: usize,
    /// Result JSON; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Orbit loop CSV; defaults to `<out>.loop.csv` when `--out` is given.
    #[arg(long)]
    loop_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ActionArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long = "loop")]
    loop_path: PathBuf,
    #[arg(long, default_value = "classical", value_parser = ["classical", "symplectic"])]
    functional: String,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with_all = ["all_presets", "presets"])]
    config: Option<PathBuf>,
    /// Every shipped preset plus all acceptance criteria.
    #[arg(long, conflicts_with = "presets")]
    all_presets: bool,
    /// Comma-separated shipped preset names plus all acceptance criteria.
    #[arg(long, value_delimiter = ',')]
    presets: Option<Vec<String>>,
    /// Report CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_state(s: &str) -> Result<Vector4<f64>, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated numbers, got {}", parts.len()));
    }
    let mut z = Vector4::zeros();
    for (k, p) in parts.iter().enumerate() {
        z[k] = p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"))?;
        if !z[k].is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
    }
    Ok(z)
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Divergence { .. } => EXIT_DIVERGENCE,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn with_path(path: &Path, e: impl std::fmt::Display) -> Failure {
    usage(format!("{}: {e}", path.display()))
}

fn load_spec(path: &Path) -> Result<ProblemSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| with_path(path, e))?;
    parse_config(&text).map_err(|e| with_path(path, e))
}

fn load_loop(path: &Path) -> Result<DiscreteLoop, Failure> {
    let file = File::open(path).map_err(|e| with_path(path, e))?;
    Ok(read_loop(BufReader::new(file), &path.display().to_string())?)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    Ok(BufWriter::new(File::create(path).map_err(|e| with_path(path, e))?))
}

fn thread_count() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(usage(format!("{THREADS_ENV}: {e}"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        },
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
/// Diagnostics go to standard error prefixed with `error:`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let text = e.to_string();
                    let text = text.strip_prefix("error: ").unwrap_or(&text);
                    let _ = write!(stderr, "error: {text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut buffer = Vec::new();
    let result = thread_count().and_then(|threads| match threads {
        None => dispatch(cli.command, &mut buffer),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| usage(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(cli.command, &mut buffer))),
    });
    let _ = stdout.write_all(&buffer);
    let _ = stdout.flush();
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Simulate(a) => simulate(a, stdout),
        Command::FindOrbit(a) => find_orbit(a, stdout),
        Command::Action(a) => action(a, stdout),
        Command::Verify(a) => verify(a, stdout),
    }
}

fn simulate(a: SimulateArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let spec = load_spec(&a.config)?;
    let picture: Picture = a.picture.parse()?;
    let traj = integrate(&spec, picture, &a.z0, 0.0, a.t1, a.steps)?;
    match &a.out {
        Some(path) => write_trajectory(create(path)?, &traj)?,
        None => write_trajectory(stdout, &traj)?,
    }
    Ok(EXIT_OK)
}

fn find_orbit(a: FindOrbitArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let spec = load_spec(&a.config)?;
    let method: Method = a.method.parse()?;
    if a.seed_count == 0 {
        return Err(usage("--seed-count must be at least 1"));
    }
    let mut opts = SearchOptions::new(a.tol, a.max_iter);
    opts.steps = a.steps;
    let results = match method {
        Method::Shooting => {
            let z0 = a.z0.ok_or_else(|| usage("--method shooting requires --z0"))?;
            let picture: Picture = a.picture.parse()?;
            let guesses = seeded_guesses(&z0, a.seed_count, SHOOTING_SPREAD, MULTI_START_SEED);
            multi_start_shooting(&spec, picture, &guesses, &opts)?
        }
        Method::Variational => {
            let path = a.loop_path.as_ref().ok_or_else(|| usage("--method variational requires --loop"))?;
            let functional: Functional = a.functional.parse()?;
            let guess = load_loop(path)?;
            let guesses = seeded_loops(&guess, a.seed_count, LOOP_SPREAD, MULTI_START_SEED);
            multi_start_variational(&spec, functional, &guesses, &opts)?
        }
    };
    let best = best_result(results).expect("at least one start");

    let loop_path = a.loop_out.clone().or_else(|| {
        a.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".loop.csv");
            PathBuf::from(s)
        })
    });
    if let Some(path) = &loop_path {
        write_loop(create(path)?, &best.orbit)?;
    }
    let json = orbit_result_json(&best, loop_path.as_deref().and_then(Path::to_str));
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{json}")?;
            w.flush()?;
        }
        None => writeln!(stdout, "{json}")?,
    }
    Ok(if best.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn action(a: ActionArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let spec = load_spec(&a.config)?;
    let lp = load_loop(&a.loop_path)?;
    let functional: Functional = a.functional.parse()?;
    let value = action_value(&spec, functional, &lp)?;
    let grad = action_gradient_flat(&spec, functional, &lp)?;
    let sup = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let doc = serde_json::json!({
        "functional": functional.as_str(),
        "samples": lp.n(),
        "value": value,
        "gradient_sup_norm": sup,
    });
    writeln!(stdout, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
    Ok(EXIT_OK)
}

fn verify(a: VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let report: Report = if let Some(path) = &a.config {
        let spec = load_spec(path)?;
        config_report(&path.display().to_string(), &spec)
    } else if a.all_presets {
        let names: Vec<&str> = SHIPPED_PRESETS.iter().map(|(n, _)| *n).collect();
        preset_report(&names)?
    } else if let Some(list) = &a.presets {
        let names: Vec<&str> = list.iter().map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
        if names.is_empty() {
            return Err(usage("empty preset list"));
        }
        preset_report(&names)?
    } else {
        return Err(usage("verify needs one of --config, --all-presets, --presets"));
    };

    write!(stdout, "{}", report.to_table())?;
    let failed = report.failures().count();
    writeln!(stdout, "{} checks, {} failed", report.rows.len(), failed)?;
    if let Some(path) = &a.out {
        let mut w = create(path)?;
        w.write_all(report.to_csv().as_bytes())?;
        w.flush()?;
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_VERIFICATION })
}
