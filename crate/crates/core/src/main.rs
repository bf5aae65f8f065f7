//! `combquot`: JSON in, canonical JSON out.
//!
//! Exit codes: 0 success, 1 computational error, 2 usage or malformed input.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use combquot::acceptance::{format_line, run_all};
use combquot::birational::quadric::{fmt_linear_form, quadric_variable_names};
use combquot::birational::verify::{CheckMode, VerifyOptions, DEFAULT_SEED};
use combquot::birational::{mutation_generators, quadric_boundary, verify_coxeter, verify_equivariance};
use combquot::catalog::{chart_weights, standard_fan, ChartSpec, FanKind};
use combquot::json::{
    parse, parse_rational_vector, to_canonical_string, ChamberComplexJson, FanJson, FanProjectionJson, JInt, JsonError,
    MatrixJson, PolytopeJson, WeightSystemJson,
};
use combquot::linalg::{transposed_gale_dual, RatVec};
use combquot::polyhedral::Fan;
use combquot::quotients::{
    chow_polytope, fiber_polytope, git_chambers, git_quotient_fan, lattice_semistable_support, quotient_fan,
    quotient_fan_general, semistable_support, WeightSystem,
};

#[derive(Parser)]
#[command(name = "combquot", version, about = "Exact combinatorial quotients of torus actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Read JSON from this file instead of stdin.
    #[arg(long, short = 'i')]
    input: Option<PathBuf>,
    /// Inline JSON input.
    #[arg(long, conflicts_with = "input")]
    json: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WithV {
    #[command(flatten)]
    io: Input,
    /// Linearization as "r1,r2,...", entries integers or p/q.
    #[arg(long, allow_hyphen_values = true)]
    v: String,
}

#[derive(Subcommand)]
enum Command {
    /// Transposed Gale dual of a weight matrix (matrix or weight-system JSON).
    Gale(Input),
    /// Quotient fan of a weight system.
    QuotientFan(Input),
    /// Quotient fan of {"fan", "projection"}.
    QuotientFanGeneral(Input),
    /// GIT chambers of a weight system.
    GitChambers(Input),
    /// Fiber polytope over a linearization.
    FiberPolytope(WithV),
    /// Normal fan of the fiber polytope over a linearization.
    GitFan(WithV),
    /// Coordinates not forced unstable at a linearization.
    Semistable {
        #[command(flatten)]
        a: WithV,
        /// Use lattice points over v itself instead of its saturation.
        #[arg(long)]
        literal: bool,
    },
    /// Chow polytope of a weight system.
    ChowPolytope(Input),
    /// Recognize a fan, or test it against a standard fan.
    Identify {
        #[command(flatten)]
        io: Input,
        /// projective_space:d, product:d1,d2,... or permutohedral:d
        #[arg(long)]
        against: Option<FanKind>,
    },
    /// Weight system of a catalog chart.
    Catalog {
        /// ptpn, quadric_odd, quadric_even, grassmann or product_diagonal
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        copies: Option<usize>,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// A standard fan.
    CatalogFan {
        kind: FanKind,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Relations among the Grassmannian mutation maps.
    #[command(subcommand)]
    Mutations(MutationsCmd),
    /// Quadric chart transitions.
    #[command(subcommand)]
    Quadric(QuadricCmd),
    /// Run every acceptance criterion and print a pass/fail table.
    VerifyPaper {
        /// Emit JSON instead of the table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum MutationsCmd {
    /// Coxeter relations and equivariance of the quotient map.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        mode: Option<CheckMode>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum QuadricCmd {
    /// Boundary divisors pulled back to the first chart.
    Boundary {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        even: bool,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Compute(combquot::Error),
}

impl From<combquot::Error> for Failure {
    fn from(e: combquot::Error) -> Self {
        match e {
            combquot::Error::InvalidParameters(_) => Failure::Usage(e.to_string()),
            e => Failure::Compute(e),
        }
    }
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(Option<PathBuf>, String), Failure>;

fn read_input(io: &Input) -> Result<String, Failure> {
    if let Some(s) = &io.json {
        return Ok(s.clone());
    }
    match &io.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

/// Conversion of well-formed JSON into a domain value; failures are input
/// errors, named after the top-level field.
fn convert<T>(field: &str, r: combquot::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(format!("invalid value at `{field}`: {e}")))
}

fn weights(io: &Input) -> Result<WeightSystem, Failure> {
    let j: WeightSystemJson = parse(&read_input(io)?)?;
    convert("weights", j.to_weights())
}

fn fan_input(io: &Input) -> Result<Fan, Failure> {
    let j: FanJson = parse(&read_input(io)?)?;
    convert("max_cones", j.to_fan())
}

fn vector(v: &str) -> Result<RatVec, Failure> {
    parse_rational_vector(v).map_err(|e| Failure::Usage(format!("invalid --v: {e}")))
}

fn out<T: Serialize>(path: &Option<PathBuf>, v: &T) -> Outcome {
    Ok((path.clone(), to_canonical_string(v)))
}

fn gale(io: &Input) -> Outcome {
    let text = read_input(io)?;
    let probe: Value = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("invalid JSON: {e}")))?;
    let w = if probe.get("weights").is_some() {
        let j: WeightSystemJson = parse(&text)?;
        convert("weights", j.to_weights())?.matrix().clone()
    } else {
        let j: MatrixJson = parse(&text)?;
        convert("rows", j.to_matrix())?
    };
    out(&io.output, &MatrixJson::from_matrix(&transposed_gale_dual(&w)?))
}

fn identify(io: &Input, against: &Option<FanKind>) -> Outcome {
    let fan = fan_input(io)?;
    let report = fan.report();
    if let Some(kind) = against {
        let m = fan.isomorphism(&standard_fan(kind)?)?;
        return out(
            &io.output,
            &json!({
                "against": kind.to_string(),
                "isomorphic": m.is_some(),
                "matrix": m.map(|m| MatrixJson::from_matrix(&m)),
            }),
        );
    }
    let mut found = None;
    for kind in candidates(&fan) {
        if let Some(m) = fan.isomorphism(&standard_fan(&kind)?)? {
            found = Some((kind, m));
            break;
        }
    }
    out(
        &io.output,
        &json!({
            "identified": found.as_ref().map(|(k, _)| k.to_string()),
            "matrix": found.map(|(_, m)| MatrixJson::from_matrix(&m)),
            "report": report,
        }),
    )
}

/// Projective space, then products, then the permutohedral fan; each
/// candidate is only tried when the ray count fits.
fn candidates(fan: &Fan) -> Vec<FanKind> {
    let r = fan.report();
    let d = fan.rank();
    let mut v = Vec::new();
    if !r.is_complete || d == 0 {
        return v;
    }
    if r.is_smooth && r.ray_count == d + 1 {
        v.push(FanKind::ProjectiveSpace(d));
    }
    if r.is_smooth {
        for parts in partitions(d, d) {
            if parts.len() >= 2 && parts.iter().map(|p| p + 1).sum::<usize>() == r.ray_count {
                v.push(FanKind::Product(parts));
            }
        }
    }
    if d < usize::BITS as usize - 1 && r.ray_count == (1 << (d + 1)) - 2 {
        v.push(FanKind::Permutohedral(d));
    }
    v
}

/// Partitions of `n` into nonincreasing parts at most `max`.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut all = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            all.push(rest);
        }
    }
    all
}

fn mutations_verify(n: usize, k: usize, mode: Option<CheckMode>, seed: u64, output: &Option<PathBuf>) -> Outcome {
    let opts = VerifyOptions {
        mode,
        seed,
        ..Default::default()
    };
    let coxeter = verify_coxeter(&mutation_generators(n, k)?, &opts)?;
    let equivariance = verify_equivariance(n, k, &opts)?;
    let ok = coxeter.all_hold && equivariance.all_hold;
    out(
        output,
        &json!({ "n": n, "k": k, "all_hold": ok, "coxeter": coxeter, "equivariance": equivariance }),
    )
}

fn quadric_boundary_cmd(n: usize, even: bool, output: &Option<PathBuf>) -> Outcome {
    let names = quadric_variable_names(n, even);
    let forms: Vec<Value> = quadric_boundary(n, even)?
        .iter()
        .map(|f| {
            json!({
                "coefficients": f.iter().cloned().map(JInt).collect::<Vec<_>>(),
                "form": fmt_linear_form(f, &names),
            })
        })
        .collect();
    out(
        output,
        &json!({ "n": n, "even": even, "variables": names, "forms": forms }),
    )
}

fn verify_paper(as_json: bool) -> Result<(String, bool), Failure> {
    let outcomes = run_all();
    let all = outcomes.iter().all(|o| o.passed);
    let text = if as_json {
        to_canonical_string(&json!({ "all_pass": all, "criteria": outcomes }))
    } else {
        let mut t: Vec<String> = outcomes.iter().map(format_line).collect();
        let passed = outcomes.iter().filter(|o| o.passed).count();
        t.push(format!("{passed}/{} criteria pass", outcomes.len()));
        t.join("\n")
    };
    Ok((text, all))
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Gale(io) => gale(&io),
        Command::QuotientFan(io) => out(&io.output, &FanJson::from_fan(&quotient_fan(&weights(&io)?)?)),
        Command::QuotientFanGeneral(io) => {
            let j: FanProjectionJson = parse(&read_input(&io)?)?;
            let fan = convert("fan", j.fan.to_fan())?;
            let q = convert("projection", j.projection.to_matrix())?;
            out(&io.output, &FanJson::from_fan(&quotient_fan_general(&fan, &q)?))
        }
        Command::GitChambers(io) => out(
            &io.output,
            &ChamberComplexJson::from_complex(&git_chambers(&weights(&io)?)?),
        ),
        Command::FiberPolytope(a) => {
            let ws = weights(&a.io)?;
            let p = fiber_polytope(&ws, &vector(&a.v)?)?;
            out(&a.io.output, &PolytopeJson::from_polytope(&p))
        }
        Command::GitFan(a) => {
            let ws = weights(&a.io)?;
            out(
                &a.io.output,
                &FanJson::from_fan(&git_quotient_fan(&ws, &vector(&a.v)?)?),
            )
        }
        Command::Semistable { a, literal } => {
            let ws = weights(&a.io)?;
            let v = vector(&a.v)?;
            let s = if literal {
                lattice_semistable_support(&ws, &v)?
            } else {
                semistable_support(&ws, &v)?
            };
            out(
                &a.io.output,
                &json!({ "labels": ws.labels(), "literal": literal, "semistable": s }),
            )
        }
        Command::ChowPolytope(io) => out(
            &io.output,
            &PolytopeJson::from_polytope(&chow_polytope(&weights(&io)?)?),
        ),
        Command::Identify { io, against } => identify(&io, &against),
        Command::Catalog {
            family,
            n,
            k,
            copies,
            output,
        } => {
            let spec = ChartSpec::parse(&family, n, k, copies)?;
            out(&output, &WeightSystemJson::from_weights(&chart_weights(&spec)?))
        }
        Command::CatalogFan { kind, output } => out(&output, &FanJson::from_fan(&standard_fan(&kind)?)),
        Command::Mutations(MutationsCmd::Verify {
            n,
            k,
            mode,
            seed,
            output,
        }) => mutations_verify(n, k, mode, seed, &output),
        Command::Quadric(QuadricCmd::Boundary { n, even, output }) => quadric_boundary_cmd(n, even, &output),
        Command::VerifyPaper { .. } => unreachable!("handled in main"),
    }
}

/// A closed pipe downstream is not an error of ours.
fn print_stdout(text: &str) -> ExitCode {
    let mut lock = std::io::stdout().lock();
    match writeln!(lock, "{text}") {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(path: Option<PathBuf>, text: &str) -> ExitCode {
    match path {
        Some(p) => match std::fs::write(&p, format!("{text}\n")) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", p.display());
                ExitCode::from(2)
            }
        },
        None => print_stdout(text),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifyPaper { json } => verify_paper(json).map(|(text, all)| {
            let code = print_stdout(&text);
            if all {
                code
            } else {
                ExitCode::from(1)
            }
        }),
        cmd => dispatch(cmd).map(|(path, text)| emit(path, &text)),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
