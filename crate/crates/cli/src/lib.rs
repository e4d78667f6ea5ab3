//! Command implementations behind the `sicsep` binary.
//!
//! [`run`] parses arguments and returns everything the process would emit, so
//! commands can be exercised without spawning it.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use sicsep::criteria::{
    bound_thm1, bound_thm2, detect_bipartite, detect_k_nonseparable, detect_multipartite, exceeds,
    j_bipartite,
};
use sicsep::oracles::{brute_force_j, ppt_check, DEFAULT_ENUMERATION_LIMIT};
use sicsep::states::{isotropic, load_state};
use sicsep::{
    CriterionVerdict, DensityMatrix, Error, GeneralSicPovm, PartitionSpec, Result, Solver, Theorem,
};

/// Environment variable holding the default seed for heuristic runs.
pub const SEED_VAR: &str = "SICSEP_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn fail(stdout: String, stderr: String) -> Self {
        Self {
            stdout,
            stderr,
            code: EXIT_ERROR,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sicsep",
    version,
    about = "Entanglement detection with general SIC-POVMs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build or validate POVM files.
    #[command(subcommand)]
    Povm(PovmCommand),
    /// Evaluate a separability criterion on a state file.
    Detect(DetectArgs),
    /// Sweep isotropic states over a noise grid and print CSV.
    ScanIsotropic(ScanArgs),
    /// Independent checks: PPT test or brute-force J.
    Oracle(OracleArgs),
}

#[derive(Debug, Subcommand)]
enum PovmCommand {
    Build(BuildArgs),
    Validate { path: PathBuf },
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("param").required(true).args(["t", "a", "max_t"]))]
struct BuildArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    max_t: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    theorem: u8,
    /// One POVM file per subsystem (or per block with --partition).
    #[arg(long, num_args = 1..)]
    povm: Vec<PathBuf>,
    /// Build each POVM at the largest feasible t.
    #[arg(long, conflicts_with = "povm")]
    auto: bool,
    /// Replace the second POVM by the conjugate of the first.
    #[arg(long)]
    conjugate_b: bool,
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Blocks separated by ',' and parties within a block by ';', 1-based.
    #[arg(long)]
    partition: Option<String>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum Mode {
    Exact,
    Heuristic,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    p_start: f64,
    #[arg(long)]
    p_end: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("check").required(true).args(["ppt", "brute_j"]))]
struct OracleArgs {
    #[arg(long)]
    ppt: bool,
    #[arg(long)]
    brute_j: bool,
    #[arg(long)]
    state: PathBuf,
    /// Parties to transpose, 1-based and ';'-separated.
    #[arg(long, required_if_eq("ppt", "true"))]
    cut: Option<String>,
    #[arg(long, num_args = 1..)]
    povm: Vec<PathBuf>,
    #[arg(long, conflicts_with = "povm")]
    auto: bool,
    #[arg(long)]
    conjugate_b: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    limit: u64,
}

/// Runs one invocation. `env_seed` is the value of [`SEED_VAR`], if set.
pub fn run<I, S>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(String::new(), text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Povm(PovmCommand::Build(args)) => povm_build(&args),
        Command::Povm(PovmCommand::Validate { path }) => return povm_validate(&path),
        Command::Detect(args) => detect(&args, env_seed),
        Command::ScanIsotropic(args) => scan_isotropic(&args),
        Command::Oracle(args) => oracle(&args),
    };
    match result {
        Ok(stdout) => Outcome::ok(stdout),
        Err(e) => Outcome::fail(String::new(), format!("error: {e}\n")),
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are finite");
    s.push('\n');
    s
}

fn povm_build(args: &BuildArgs) -> Result<String> {
    let povm = match (args.t, args.a) {
        (Some(t), _) => GeneralSicPovm::build_from_t(args.dim, t)?,
        (_, Some(a)) => GeneralSicPovm::build_from_a(args.dim, a)?,
        _ => GeneralSicPovm::build_max(args.dim)?,
    };
    povm.save(&args.out)?;
    Ok(to_json(&json!({
        "dim": povm.dim(),
        "t": povm.t(),
        "a": povm.a(),
        "min_eigenvalue": povm.min_eigenvalue(),
    })))
}

fn povm_validate(path: &std::path::Path) -> Outcome {
    let povm = match GeneralSicPovm::load(path) {
        Ok(p) => p,
        Err(e) => return Outcome::fail(String::new(), format!("error: {e}\n")),
    };
    let residuals = povm.residuals();
    let stdout = to_json(&serde_json::to_value(residuals).expect("plain struct"));
    match povm.validate() {
        Ok(_) => Outcome::ok(stdout),
        Err(e) => Outcome::fail(stdout, format!("error: {e}\n")),
    }
}

fn load_povms(
    paths: &[PathBuf],
    auto: bool,
    dims: &[usize],
    conjugate_b: bool,
) -> Result<Vec<GeneralSicPovm>> {
    let mut povms = if auto {
        dims.iter()
            .map(|&d| GeneralSicPovm::build_max(d))
            .collect::<Result<Vec<_>>>()?
    } else if paths.is_empty() {
        return Err(Error::ParameterOutOfRange(
            "give --povm files or --auto".into(),
        ));
    } else {
        paths
            .iter()
            .map(GeneralSicPovm::load)
            .collect::<Result<Vec<_>>>()?
    };
    if conjugate_b {
        if dims.len() != 2 || dims[0] != dims[1] {
            return Err(Error::DimensionMismatch(format!(
                "--conjugate-b needs two subsystems of equal dimension, got {dims:?}"
            )));
        }
        povms.truncate(1);
        let b = povms[0].conjugate();
        povms.push(b);
    }
    let got: Vec<usize> = povms.iter().map(|p| p.dim()).collect();
    if got != dims {
        return Err(Error::DimensionMismatch(format!(
            "POVM dimensions {got:?} do not match subsystem dimensions {dims:?}"
        )));
    }
    Ok(povms)
}

fn verdict_json(v: &CriterionVerdict) -> Value {
    json!({
        "theorem": v.theorem,
        "j": v.j_value,
        "j_mode": v.j_mode,
        "bound": v.bound,
        "detected": v.detected,
        "inconclusive": v.inconclusive,
        "assignment": v.assignment.rows(),
    })
}

fn detect(args: &DetectArgs, env_seed: Option<&str>) -> Result<String> {
    let theorem = Theorem::from_number(args.theorem).expect("range checked by the parser");
    let rho: DensityMatrix = load_state(&args.state)?;
    let solver = match args.mode {
        Mode::Exact => Solver::Exact,
        Mode::Heuristic => {
            let seed = match (args.seed, env_seed) {
                (Some(s), _) => s,
                (None, Some(s)) => s.trim().parse().map_err(|_| {
                    Error::Parse(format!("{SEED_VAR}={s:?} is not an unsigned integer"))
                })?,
                (None, None) => 0,
            };
            Solver::Heuristic {
                restarts: args.restarts.unwrap_or(Solver::DEFAULT_RESTARTS),
                seed,
            }
        }
    };
    let verdict = match &args.partition {
        Some(spec) => {
            let partition = PartitionSpec::parse(spec, rho.dims())?;
            let povms = load_povms(
                &args.povm,
                args.auto,
                partition.block_dims(),
                args.conjugate_b,
            )?;
            let refs: Vec<&GeneralSicPovm> = povms.iter().collect();
            detect_k_nonseparable(&rho, &partition, &refs, theorem, solver)?
        }
        None => {
            let povms = load_povms(&args.povm, args.auto, rho.dims(), args.conjugate_b)?;
            let refs: Vec<&GeneralSicPovm> = povms.iter().collect();
            if theorem.is_bipartite() {
                if refs.len() != 2 {
                    return Err(Error::DimensionMismatch(format!(
                        "{theorem} needs a bipartite state, got {} parties",
                        refs.len()
                    )));
                }
                detect_bipartite(&rho, refs[0], refs[1], theorem)?
            } else {
                detect_multipartite(&rho, &refs, theorem, solver)?
            }
        }
    };
    Ok(to_json(&verdict_json(&verdict)))
}

/// `steps` points from `start` to `end` inclusive.
pub fn grid(start: f64, end: f64, steps: usize) -> Vec<f64> {
    let h = (end - start) / (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                end
            } else {
                start + i as f64 * h
            }
        })
        .collect()
}

fn scan_isotropic(args: &ScanArgs) -> Result<String> {
    let range_ok = 0.0 <= args.p_start && args.p_start < args.p_end && args.p_end <= 1.0;
    if !range_ok || args.steps < 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "need 0 <= p-start < p-end <= 1 and steps >= 2, got [{}, {}] with {} steps",
            args.p_start, args.p_end, args.steps
        )));
    }
    let pa = match args.a {
        Some(a) => GeneralSicPovm::build_from_a(args.dim, a)?,
        None => GeneralSicPovm::build_max(args.dim)?,
    };
    let pb = pa.conjugate();
    let (d, a) = (pa.dim(), pa.a());
    let b1 = bound_thm1(d, a, d, a)?;
    let b2 = bound_thm2(d, a, d, a)?;
    let rows = grid(args.p_start, args.p_end, args.steps)
        .into_par_iter()
        .map(|p| {
            let rho: DensityMatrix = isotropic(d, p)?;
            let j = j_bipartite(&rho, &pa, &pb)?.value();
            Ok((p, j))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = String::from("p,j,bound_t1,bound_t2,detected_t1,detected_t2\n");
    for (p, j) in rows {
        writeln!(
            out,
            "{p},{j},{b1},{b2},{},{}",
            exceeds(j, b1),
            exceeds(j, b2)
        )
        .expect("string write");
    }
    Ok(out)
}

fn parse_cut(spec: &str, parties: usize) -> Result<Vec<usize>> {
    spec.split(';')
        .map(|tok| match tok.trim().parse::<usize>() {
            Ok(p) if (1..=parties).contains(&p) => Ok(p - 1),
            _ => Err(Error::InvalidPartition(format!(
                "bad cut entry {tok:?} for {parties} parties"
            ))),
        })
        .collect()
}

fn oracle(args: &OracleArgs) -> Result<String> {
    let rho: DensityMatrix = load_state(&args.state)?;
    if args.ppt {
        let cut = parse_cut(args.cut.as_deref().unwrap_or_default(), rho.parties())?;
        let report = ppt_check(&rho, &cut)?;
        return Ok(to_json(
            &serde_json::to_value(&report).expect("plain struct"),
        ));
    }
    let povms = load_povms(&args.povm, args.auto, rho.dims(), args.conjugate_b)?;
    let refs: Vec<&GeneralSicPovm> = povms.iter().collect();
    let j = brute_force_j(&rho, &refs, args.limit)?;
    Ok(to_json(&json!({ "j": j })))
}
