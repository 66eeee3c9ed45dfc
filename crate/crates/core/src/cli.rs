//! The `cpnorm` command line.
//!
//! Exit codes: 0 success, 1 invariant violation, 2 usage or parse error,
//! 3 dimension cap exceeded.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::campaign::{
    gap_search, replay_witness, run_campaign, CampaignConfig, GapSearchConfig, GapWitness,
    VerifyKind,
};
use crate::error::{Error, Result};
use crate::norm_opt::{hermitian_induced_norm, induced_norm, AscentMethod, OptConfig};
use crate::superop::Superoperator;
use crate::NormSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

/// Default dimension cap for commands that run the optimizer.
pub const CLI_DIM_CAP: usize = 4;

#[derive(Parser, Debug)]
#[command(
    name = "cpnorm",
    version,
    about = "Induced Schatten norms of linear maps on matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a map as JSON.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Estimate the induced p→q norm of a map.
    Norm(NormArgs),
    /// Run a verification campaign and write a JSON-lines report.
    Verify(VerifyArgs),
    /// Search interpolations between CP maps and their transposes for a gap
    /// between the full and Hermitian norms.
    GapSearch(GapArgs),
    /// Recompute both norms of a gap-search witness.
    Replay {
        /// A gap-search report or a bare witness.
        file: PathBuf,
    },
    /// Test complete positivity or k-positivity of a map.
    Positivity {
        map: PathBuf,
        /// Omit for the complete-positivity test.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, env = "CPNORM_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Random CP map with Gaussian Kraus operators.
    Cp {
        #[arg(value_parser = positive)]
        m: usize,
        #[arg(value_parser = positive)]
        n: usize,
        #[arg(value_parser = positive)]
        kraus_rank: usize,
        #[arg(long, env = "CPNORM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The transpose map on `M_m`.
    Transpose {
        #[arg(value_parser = positive)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    DualPower,
    RetractionGradient,
}

#[derive(Args, Debug)]
struct NormArgs {
    map: PathBuf,
    #[arg(long, default_value = "1")]
    p: NormSpec,
    #[arg(long, default_value = "1")]
    q: NormSpec,
    /// Restrict to Hermitian inputs.
    #[arg(long)]
    hermitian: bool,
    #[arg(long, env = "CPNORM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64, value_parser = positive)]
    multistarts: usize,
    #[arg(long, default_value_t = 500, value_parser = positive)]
    max_iters: usize,
    #[arg(long, value_enum, default_value_t = Method::DualPower)]
    method: Method,
    #[arg(long, default_value_t = CLI_DIM_CAP)]
    max_dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Proposition,
    Lemma,
    Chain,
    Pinching,
    Msigma,
    Image,
    Reduction,
}

impl From<Kind> for VerifyKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Proposition => VerifyKind::Proposition,
            Kind::Lemma => VerifyKind::Lemma,
            Kind::Chain => VerifyKind::Chain,
            Kind::Pinching => VerifyKind::Pinching,
            Kind::Msigma => VerifyKind::Msigma,
            Kind::Image => VerifyKind::Image,
            Kind::Reduction => VerifyKind::Reduction,
        }
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    what: Kind,
    #[arg(long, value_parser = positive)]
    trials: Option<usize>,
    /// Comma-separated `MxN` pairs.
    #[arg(long, value_delimiter = ',', value_parser = parse_dims)]
    dims: Option<Vec<(usize, usize)>>,
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<NormSpec>>,
    #[arg(long, value_delimiter = ',')]
    q_grid: Option<Vec<NormSpec>>,
    #[arg(long)]
    no_ky_fan: bool,
    #[arg(long, env = "CPNORM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long, value_parser = positive)]
    pairs: Option<usize>,
    #[arg(long, default_value_t = 64, value_parser = positive)]
    multistarts: usize,
    #[arg(long, default_value_t = CLI_DIM_CAP)]
    max_dim: usize,
    /// Include per-trial wall time (breaks byte-identical reruns).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GapArgs {
    #[arg(long, default_value_t = 20, value_parser = positive)]
    budget: usize,
    #[arg(long, default_value_t = 3, value_parser = positive)]
    m: usize,
    #[arg(long, default_value_t = 3, value_parser = positive)]
    n: usize,
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<NormSpec>>,
    #[arg(long, value_delimiter = ',')]
    q_grid: Option<Vec<NormSpec>>,
    /// Only search certified-CP maps.
    #[arg(long)]
    cp_only: bool,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[arg(long, env = "CPNORM_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64, value_parser = positive)]
    multistarts: usize,
    #[arg(long, default_value_t = CLI_DIM_CAP)]
    max_dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (m, n) = s
        .split_once('x')
        .ok_or_else(|| format!("expected MxN, got {s:?}"))?;
    Ok((positive(m.trim())?, positive(n.trim())?))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `out` unless a command writes a file.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::TooLarge { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn load_map(path: &PathBuf) -> Result<Superoperator> {
    Superoperator::from_json(&fs::read_to_string(path)?)
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen { kind } => {
            let (map, path) = match kind {
                GenKind::Cp {
                    m,
                    n,
                    kraus_rank,
                    seed,
                    out,
                } => (Superoperator::random_cp_map(m, n, kraus_rank, seed)?, out),
                GenKind::Transpose { m, out } => (Superoperator::transpose_map(m)?, out),
            };
            emit(&with_newline(map.to_json()), path.as_ref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Norm(a) => {
            let map = load_map(&a.map)?;
            let cfg = OptConfig {
                multistarts: a.multistarts,
                max_iters: a.max_iters,
                max_dim: a.max_dim,
                method: match a.method {
                    Method::DualPower => AscentMethod::DualPower,
                    Method::RetractionGradient => AscentMethod::RetractionGradient,
                },
                ..OptConfig::with_seed(a.seed)
            };
            let est = if a.hermitian {
                hermitian_induced_norm(&map, a.p, a.q, &cfg)?
            } else {
                induced_norm(&map, a.p, a.q, &cfg)?
            };
            emit(&with_newline(est.to_json()), a.out.as_ref(), out)?;
            let _ = writeln!(err, "value {}", est.value);
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            let mut cfg = CampaignConfig::new(a.what.into(), a.seed);
            if let Some(t) = a.trials {
                cfg.trials = t;
            }
            if let Some(d) = a.dims {
                cfg.dims = d;
            }
            if let Some(g) = a.p_grid {
                cfg.p_grid = g;
            }
            if let Some(g) = a.q_grid {
                cfg.q_grid = g;
            }
            if let Some(t) = a.tolerance {
                cfg.tolerance = t;
            }
            if let Some(p) = a.pairs {
                cfg.pairs = p;
            }
            cfg.ky_fan = !a.no_ky_fan;
            cfg.multistarts = a.multistarts;
            cfg.max_dim = a.max_dim;
            cfg.timings = a.timings;
            let report = run_campaign(&cfg)?;
            emit(&report.to_json_lines(), a.out.as_ref(), out)?;
            let s = &report.summary;
            let _ = writeln!(
                err,
                "{}: {} records, {} failures, worst slack {:e}{}",
                s.kind,
                s.records,
                s.failures.len(),
                s.worst_slack,
                s.max_gap
                    .map(|g| format!(", max gap {g:e}"))
                    .unwrap_or_default()
            );
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::GapSearch(a) => {
            let mut cfg = GapSearchConfig::new(a.budget, a.m, a.n, a.seed);
            if let Some(g) = a.p_grid {
                cfg.p_grid = g;
            }
            if let Some(g) = a.q_grid {
                cfg.q_grid = g;
            }
            cfg.cp_only = a.cp_only;
            cfg.tolerance = a.tolerance;
            cfg.multistarts = a.multistarts;
            cfg.max_dim = a.max_dim;
            let report = gap_search(&cfg)?;
            emit(&with_newline(report.to_json()), a.out.as_ref(), out)?;
            let _ = writeln!(
                err,
                "max gap {:e} at trial {} (t = {}, p = {}, q = {})",
                report.max_gap,
                report.witness.trial,
                report.witness.t,
                report.witness.p,
                report.witness.q
            );
            Ok(if report.failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Replay { file } => {
            let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(file)?)?;
            let witness: GapWitness = match value.get("witness") {
                Some(w) => serde_json::from_value(w.clone())?,
                None => serde_json::from_value(value)?,
            };
            let check = replay_witness(&witness)?;
            emit(&with_newline(serde_json::to_string(&check)?), None, out)?;
            Ok(if check.gap_error <= 1e-8 {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
        Command::Positivity {
            map,
            k,
            trials,
            seed,
        } => {
            let map = load_map(&map)?;
            let report = match k {
                Some(k) => map.is_k_positive(k, trials, seed)?,
                None => map.is_completely_positive(1e-9)?,
            };
            emit(&with_newline(serde_json::to_string(&report)?), None, out)?;
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("cpnorm").chain(args.iter().copied()),
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
    fn gen_is_deterministic() {
        let a = call(&["gen", "cp", "2", "2", "3", "--seed", "7"]);
        let b = call(&["gen", "cp", "2", "2", "3", "--seed", "7"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        assert!(a.1.contains("\"kraus\""));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["gen", "cp", "2", "2", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["gap-search", "--budget", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "nothing"]).0, EXIT_USAGE);
        assert_eq!(call(&["norm", "/nonexistent/map.json"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn dims_parse() {
        assert_eq!(parse_dims("2x3"), Ok((2, 3)));
        assert!(parse_dims("2by3").is_err());
        assert!(parse_dims("0x3").is_err());
    }

    #[test]
    fn verify_exit_codes() {
        assert_eq!(call(&["verify", "pinching", "--trials", "5"]).0, EXIT_OK);
        assert_eq!(
            call(&["verify", "proposition", "--dims", "5x5"]).0,
            EXIT_CAP
        );
    }
}
