//! Command-line front end.
//!
//! [`run`] parses arguments, dispatches to the library and returns the exit
//! code with captured output, so the binary is a thin wrapper and tests can
//! drive every subcommand in-process.
//!
//! Exit codes: 0 on success or a feasible pattern, 1 on an infeasible
//! pattern, failed verification or a failed construction, 2 on usage or
//! input errors.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::builder::{
    self, construct, construct_subcode, min_extension_degree, CodeArtifact, ConstructOptions, Strategy, DEFAULT_MAX_ATTEMPTS,
    DEFAULT_SEED,
};
use crate::error::Error;
use crate::field::{FElem, FieldCtx};
use crate::io::{ArtifactJson, FieldSpec};
use crate::matrix::Matrix;
use crate::oracle::{theorem4_check, verify_artifact, Theorem4Options, Verdict, VerificationReport, DEFAULT_BUDGET};
use crate::patterns::{check_feasible, complete_pattern, compute_ell, hall_reduce, BipartiteSpec, ZeroPattern};

#[derive(Parser, Debug)]
#[command(name = "gabidulin", version, about = "Support-constrained Gabidulin codes")]
pub struct Cli {
    /// RNG seed; every random choice derives from it.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Codewords enumerated before distance checks fall back to sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Random,
    Enumerate,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the subset condition of a pattern.
    CheckPattern { pattern: String },
    /// Grow every row of a feasible pattern to k-1 zeros.
    CompletePattern { pattern: String },
    /// Compute ℓ and the best achievable rank distance n-ℓ+1.
    Ell { pattern: String },
    /// Build a Gabidulin code satisfying a feasible pattern.
    Construct(BuildArgs),
    /// Build a maximal-rank-distance subcode for any pattern.
    Subcode(BuildArgs),
    /// Re-check an artifact against a pattern.
    Verify {
        artifact: String,
        #[arg(long)]
        pattern: String,
    },
    /// Randomized full-row-rank test of the stacked S-matrices.
    Theorem4 {
        pattern: String,
        #[arg(long, default_value_t = 3)]
        r_max: usize,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 25)]
        escalation: usize,
        /// Test field; defaults to F_{2^20}.
        #[arg(long)]
        field: Option<String>,
    },
    /// Trim a bipartite graph to exact degrees c + d_i.
    HallReduce { graph: String },
    /// Reproduce the worked F_16 example and check it against the golden values.
    Demo {
        /// Override the modulus, lowest coefficient first, e.g. 1,0,0,1,1.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u64>>,
    },
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    pub pattern: String,
    /// Field as JSON; defaults to q^s with the smallest admissible s.
    #[arg(long)]
    pub field: Option<String>,
    /// Base field size used when no field is given.
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
    pub max_attempts: u64,
    #[arg(long, value_enum, default_value_t = StrategyArg::Random)]
    pub strategy: StrategyArg,
    /// Fixed evaluation points as canonical integers, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<u64>>,
    /// Allow an extension degree below the existence bound.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stdout: String, stderr: String) -> Self {
        Outcome { code, stdout, stderr }
    }
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPattern(_) | Error::InvalidGraph(_) | Error::NotCanonical(_) => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { Outcome::ok(text) } else { Outcome::fail(2, String::new(), text) };
        }
    };
    match dispatch(&cli) {
        Ok(out) => out,
        Err(Failure::Usage(msg)) => Outcome::fail(2, String::new(), format!("error: {msg}\n")),
        Err(Failure::Runtime(e)) => Outcome::fail(1, String::new(), format!("error: {e}\n")),
    }
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn load_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid JSON in {arg}: {e}")))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    let pretty = cli.format == Format::Pretty;
    match &cli.command {
        Command::CheckPattern { pattern } => {
            let pat: ZeroPattern = load_json(pattern)?;
            let report = check_feasible(&pat)?;
            let status = if report.feasible { "feasible" } else { "infeasible" };
            let out = if pretty {
                match &report.violating {
                    None => format!("feasible (ℓ = {}, min slack {})\n", report.ell, report.min_slack),
                    Some(omega) => format!("infeasible: violating Ω = {}\n", set_text(omega)),
                }
            } else {
                to_json(&json!({
                    "status": status,
                    "feasible": report.feasible,
                    "violating": report.violating,
                    "ell": report.ell,
                    "tightness": report.tightness,
                    "min_slack": report.min_slack,
                }))
            };
            Ok(Outcome { code: if report.feasible { 0 } else { 1 }, stdout: out, stderr: String::new() })
        }
        Command::CompletePattern { pattern } => {
            let pat: ZeroPattern = load_json(pattern)?;
            let done = complete_pattern(&pat)?;
            let out = if pretty { pattern_text(&done) } else { to_json(&done) };
            Ok(Outcome::ok(out))
        }
        Command::Ell { pattern } => {
            let pat: ZeroPattern = load_json(pattern)?;
            let ell = compute_ell(&pat)?;
            let best = (pat.n + 1).checked_sub(ell);
            let out = if pretty {
                format!("ℓ = {ell} (k = {}), best rank distance {}\n", pat.k, best.map_or("none".into(), |d| d.to_string()))
            } else {
                to_json(&json!({ "ell": ell, "k": pat.k, "feasible": ell == pat.k, "max_rank_distance": best }))
            };
            Ok(Outcome::ok(out))
        }
        Command::Construct(args) => build(cli, args, false),
        Command::Subcode(args) => build(cli, args, true),
        Command::Verify { artifact, pattern } => {
            let art = load_json::<ArtifactJson>(artifact)?.into_artifact()?;
            let pat: ZeroPattern = load_json(pattern)?;
            let report = verify_artifact(&art, &pat, cli.budget);
            let out = if pretty { report_text(&art.field, &report) } else { to_json(&report) };
            Ok(Outcome { code: if report.passed { 0 } else { 1 }, stdout: out, stderr: String::new() })
        }
        Command::Theorem4 { pattern, r_max, trials, escalation, field } => {
            let pat: ZeroPattern = load_json(pattern)?;
            let spec = match field {
                Some(f) => load_json(f)?,
                None => FieldSpec { p: 2, s: 20, modulus: None },
            };
            let field = Arc::new(spec.build()?);
            let opts = Theorem4Options { r_max: *r_max, trials: *trials, escalation: *escalation, seed: cli.seed };
            let report = theorem4_check(&field, &pat, &opts)?;
            let out = if pretty {
                let mut s = format!("condition {}: {:?}\n", if report.condition { "holds" } else { "fails" }, report.verdict);
                for r in &report.rounds {
                    let _ = writeln!(s, "  r = {}: {}/{} full rank{}", r.r, r.full_rank, r.trials, if r.escalated { " (escalated)" } else { "" });
                }
                s
            } else {
                to_json(&report)
            };
            let code = if report.verdict == Verdict::Consistent { 0 } else { 1 };
            Ok(Outcome { code, stdout: out, stderr: String::new() })
        }
        Command::HallReduce { graph } => {
            let g: BipartiteSpec = load_json(graph)?;
            let reduced = hall_reduce(&g)?;
            let out = if pretty {
                let mut s = String::new();
                for i in 1..=reduced.u {
                    let nb: Vec<usize> = reduced.edges.iter().filter(|e| e.0 == i).map(|e| e.1).collect();
                    let _ = writeln!(s, "{i}: {}", set_text(&nb));
                }
                s
            } else {
                to_json(&json!({
                    "u": reduced.u,
                    "v": reduced.v,
                    "edges": reduced.edges,
                    "c": reduced.c,
                    "demands": reduced.demands,
                }))
            };
            Ok(Outcome::ok(out))
        }
        Command::Demo { modulus } => match demo_worked_example(modulus.as_deref(), cli.budget) {
            Ok(report) => Ok(Outcome::ok(if pretty { report.pretty.clone() } else { to_json(&report) })),
            Err(e @ Error::GoldenMismatch(_)) => Ok(Outcome::fail(1, String::new(), format!("error: {e}\n"))),
            Err(e) => Err(e.into()),
        },
    }
}

fn build(cli: &Cli, args: &BuildArgs, subcode: bool) -> Result<Outcome, Failure> {
    let pat: ZeroPattern = load_json(&args.pattern)?;
    let spec = match &args.field {
        Some(f) => load_json(f)?,
        None => {
            let dim = if subcode { compute_ell(&pat)? } else { pat.k };
            let s = min_extension_degree(args.q, pat.n, dim.min(pat.n))?;
            FieldSpec { p: args.q, s, modulus: None }
        }
    };
    let field = Arc::new(spec.build()?);
    let strategy = match (&args.alphas, args.strategy) {
        (Some(vals), _) => Strategy::Fixed(vals.iter().map(|&v| field.elem(v)).collect::<Result<_, _>>()?),
        (None, StrategyArg::Random) => Strategy::Random,
        (None, StrategyArg::Enumerate) => Strategy::Enumerate,
    };
    let opts = ConstructOptions { seed: cli.seed, max_attempts: args.max_attempts, strategy, force: args.force };
    let art = if subcode { construct_subcode(&pat, &field, &opts)? } else { construct(&pat, &field, &opts)? };
    let report = verify_artifact(&art, &pat, cli.budget);
    let mut stderr: String = art.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
    if !report.passed {
        stderr.push_str("error: constructed artifact failed verification\n");
        return Ok(Outcome::fail(1, to_json(&report), stderr));
    }
    let out = if cli.format == Format::Pretty { artifact_text(&art) } else { to_json(&ArtifactJson::from(&art)) };
    Ok(Outcome { code: 0, stdout: out, stderr })
}

fn set_text(items: &[usize]) -> String {
    let parts: Vec<String> = items.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn pattern_text(p: &ZeroPattern) -> String {
    let mut s = format!("n = {}, k = {}\n", p.n, p.k);
    for (i, z) in p.zeros.iter().enumerate() {
        let items: Vec<usize> = z.iter().copied().collect();
        let _ = writeln!(s, "Z_{} = {}", i + 1, set_text(&items));
    }
    s
}

/// Aligned matrix in power-of-generator form.
pub fn matrix_text(field: &FieldCtx, m: &Matrix) -> String {
    let cells: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(|&e| field.display_power(e)).collect()).collect();
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    let mut s = String::new();
    for row in cells {
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(s, "  [ {} ]", padded.join("  "));
    }
    s
}

fn artifact_text(art: &CodeArtifact) -> String {
    let f = &art.field;
    let mut s = format!(
        "F_{}^{} modulus {:?}, mode {:?}, attempts {}, seed {}\n",
        f.p(),
        f.s(),
        f.modulus(),
        art.mode,
        art.attempts,
        art.seed
    );
    let alphas: Vec<String> = art.alphas.iter().map(|&a| f.display_power(a)).collect();
    let _ = writeln!(s, "alphas = ({})", alphas.join(", "));
    let _ = write!(s, "T =\n{}", matrix_text(f, &art.t));
    let _ = write!(s, "G =\n{}", matrix_text(f, &art.g));
    s
}

fn report_text(field: &FieldCtx, report: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let _ = writeln!(s, "{:<20} {} {}", c.name, if c.passed { "ok  " } else { "FAIL" }, c.detail);
    }
    if let Some(d) = &report.distances {
        let word: Vec<String> = d.witness_codeword.iter().map(|&e| field.display_power(e)).collect();
        let _ = writeln!(s, "witness codeword ({})", word.join(", "));
    }
    let _ = writeln!(s, "{}", if report.passed { "PASS" } else { "FAIL" });
    s
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub status: &'static str,
    pub det_t: u64,
    pub det_t_power: String,
    #[serde(rename = "G")]
    pub g: Vec<Vec<u64>>,
    pub g_power: Vec<Vec<String>>,
    pub rank_distance: Option<usize>,
    pub verification: VerificationReport,
    #[serde(skip)]
    pub pretty: String,
}

/// Exponents of the generator in the worked example; `None` is zero.
const GOLDEN_G: [[Option<u64>; 4]; 3] = [
    [None, None, Some(10), Some(3)],
    [Some(7), None, None, Some(14)],
    [Some(5), Some(11), None, None],
];

const GOLDEN_DET: u64 = 13;

/// Builds `F_16` (modulus `x^4 + x + 1` unless overridden), fixes
/// `α = (1, a, a^2, a^3)`, and compares `det T` and `G` with the golden
/// values before running full verification.
pub fn demo_worked_example(modulus: Option<&[u64]>, budget: u64) -> Result<DemoReport, Error> {
    let modulus = modulus.unwrap_or(&[1, 1, 0, 0, 1]);
    let field = Arc::new(FieldCtx::new(2, 4, Some(modulus))?);
    let a = field.x_class();
    let power = |e: u64| field.pow(a, e);
    let alphas: Vec<FElem> = (0..4).map(power).collect();
    let pat = ZeroPattern::new(4, 3, vec![vec![1, 2], vec![2, 3], vec![3, 4]])?;
    let opts = ConstructOptions { strategy: Strategy::Fixed(alphas), ..Default::default() };
    let art = builder::construct(&pat, &field, &opts)?;

    let det = art.t.det(&field)?;
    if det != power(GOLDEN_DET) {
        return Err(Error::GoldenMismatch(format!("det T = {} instead of a^{GOLDEN_DET}", field.display_power(det))));
    }
    for (i, row) in GOLDEN_G.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            let expected = cell.map_or(FElem::ZERO, power);
            if art.g[(i, j)] != expected {
                return Err(Error::GoldenMismatch(format!(
                    "G[{}][{}] = {} instead of {}",
                    i + 1,
                    j + 1,
                    field.display_power(art.g[(i, j)]),
                    field.display_power(expected)
                )));
            }
        }
    }

    let verification = verify_artifact(&art, &pat, budget);
    if !verification.passed {
        return Err(Error::GoldenMismatch("verification failed".into()));
    }
    let rank_distance = verification.distances.as_ref().map(|d| d.d_r.value);
    let g_power: Vec<Vec<String>> =
        art.g.to_rows().iter().map(|r| r.iter().map(|&e| field.display_power(e)).collect()).collect();
    let mut pretty = String::from("F_16 with a^4 + a + 1, alphas = (1, a, a^2, a^3)\n");
    let _ = writeln!(pretty, "det T = {} ({})", field.display_power(det), det.value());
    let _ = write!(pretty, "T =\n{}", matrix_text(&field, &art.t));
    let _ = write!(pretty, "G =\n{}", matrix_text(&field, &art.g));
    let _ = writeln!(pretty, "G (integer form) = {:?}", crate::io::matrix_to_ints(&art.g));
    let _ = writeln!(pretty, "rank distance = {}", rank_distance.unwrap_or(0));
    pretty.push_str("PASS\n");
    Ok(DemoReport {
        status: "PASS",
        det_t: det.value(),
        det_t_power: field.display_power(det),
        g: crate::io::matrix_to_ints(&art.g),
        g_power,
        rank_distance,
        verification,
        pretty,
    })
}
