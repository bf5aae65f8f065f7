//! Coxeter relations and equivariance, checked symbolically or by exact
//! evaluation at seeded random rational points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::map::{projective_eq, MultiProjectiveMap};
use super::mutations::{grassmann_quotient_map, grassmann_weyl_chart_map, mutation_affine};
use super::rational::RationalMap;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Symbolic,
    Eval,
}

impl FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(CheckMode::Symbolic),
            "eval" => Ok(CheckMode::Eval),
            other => Err(Error::InvalidParameters(format!("unknown mode {other}"))),
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMode::Symbolic => "symbolic",
            CheckMode::Eval => "eval",
        })
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const MIN_SAMPLES: usize = 20;
/// Coordinate bound for sampled numerators and denominators.
pub const SAMPLE_BOUND: i64 = 1000;
/// Auto mode switches to evaluation above this many variables.
pub const SYMBOLIC_VARIABLE_LIMIT: usize = 12;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// `None` picks symbolic mode up to [`SYMBOLIC_VARIABLE_LIMIT`] variables.
    pub mode: Option<CheckMode>,
    pub seed: u64,
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: None,
            seed: DEFAULT_SEED,
            samples: MIN_SAMPLES,
        }
    }
}

impl VerifyOptions {
    fn resolve(&self, nvars: usize) -> CheckMode {
        self.mode.unwrap_or(if nvars <= SYMBOLIC_VARIABLE_LIMIT {
            CheckMode::Symbolic
        } else {
            CheckMode::Eval
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
    /// Reduced defect (symbolic) or offending sample (eval) on failure.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub kind: String,
    pub mode: CheckMode,
    /// Evaluation mode is probabilistic; the flag is always emitted.
    pub probabilistic: bool,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub relations: Vec<RelationCheck>,
    pub all_hold: bool,
}

impl RelationReport {
    fn new(kind: &str, mode: CheckMode, opts: &VerifyOptions, relations: Vec<RelationCheck>) -> Self {
        let eval = mode == CheckMode::Eval;
        RelationReport {
            kind: kind.into(),
            mode,
            probabilistic: eval,
            seed: eval.then_some(opts.seed),
            samples: eval.then_some(opts.samples.max(MIN_SAMPLES)),
            all_hold: relations.iter().all(|r| r.holds),
            relations,
        }
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)),
        BigInt::from(rng.gen_range(1..=SAMPLE_BOUND)),
    )
}

fn fmt_point(p: &[Vec<BigRational>]) -> String {
    let parts: Vec<String> = p
        .iter()
        .map(|f| {
            let c: Vec<String> = f.iter().map(ToString::to_string).collect();
            format!("[{}]", c.join(":"))
        })
        .collect();
    parts.join("x")
}

/// Coxeter words of `S_{n+1}` on generators `1..=n`, with display names.
pub fn coxeter_words(n: usize) -> Vec<(String, Vec<usize>)> {
    let mut out = Vec::new();
    for i in 1..=n {
        out.push((format!("r{i}^2"), vec![i, i]));
    }
    for i in 1..n {
        out.push((format!("(r{i} r{})^3", i + 1), [i, i + 1].repeat(3)));
    }
    for i in 1..=n {
        for j in i + 2..=n {
            out.push((format!("(r{i} r{j})^2"), [i, j].repeat(2)));
        }
    }
    out
}

/// Checks `r_i² = (r_i r_{i+1})³ = (r_i r_j)² = id` for `maps = [r₁, …, rₙ]`.
pub fn verify_coxeter(maps: &[MultiProjectiveMap], opts: &VerifyOptions) -> Result<RelationReport> {
    let first = maps
        .first()
        .ok_or_else(|| Error::InvalidParameters("no generators".into()))?;
    for m in maps {
        if m.source() != first.source() || m.target() != first.source() {
            return Err(Error::SignatureMismatch("generators must share one signature".into()));
        }
    }
    let mode = opts.resolve(first.names().len());
    let words = coxeter_words(maps.len());
    let relations = parallel_map(&words, |idx, (name, word)| {
        let (holds, witness) = match mode {
            CheckMode::Symbolic => word_symbolic(maps, word),
            CheckMode::Eval => word_eval(maps, word, opts, idx as u64),
        };
        RelationCheck {
            relation: name.clone(),
            holds,
            witness,
        }
    });
    Ok(RelationReport::new("coxeter", mode, opts, relations))
}

fn word_symbolic(maps: &[MultiProjectiveMap], word: &[usize]) -> (bool, Option<String>) {
    let mut acc = maps[word[word.len() - 1] - 1].clone();
    for &g in word[..word.len() - 1].iter().rev() {
        acc = match maps[g - 1].compose(&acc) {
            Ok(m) => m,
            Err(e) => return (false, Some(e.to_string())),
        };
    }
    match acc.identity_defect() {
        None => (true, None),
        Some(d) => (false, Some(d.fmt_with(acc.names()))),
    }
}

fn word_eval(maps: &[MultiProjectiveMap], word: &[usize], opts: &VerifyOptions, stream: u64) -> (bool, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    let sig = maps[0].source().to_vec();
    let want = opts.samples.max(MIN_SAMPLES);
    let (mut done, mut tries) = (0, 0);
    while done < want {
        tries += 1;
        if tries > 50 * want {
            return (
                false,
                Some(format!("only {done} of {want} samples avoided the base locus")),
            );
        }
        let pt: Vec<Vec<BigRational>> = sig
            .iter()
            .map(|&d| (0..=d).map(|_| random_rational(&mut rng)).collect())
            .collect();
        let mut img = pt.clone();
        let mut ok = true;
        for &g in word.iter().rev() {
            match maps[g - 1].apply_point(&img) {
                Ok(p) => img = p,
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if !projective_eq(&img, &pt) {
            return (false, Some(format!("{} -> {}", fmt_point(&pt), fmt_point(&img))));
        }
        done += 1;
    }
    (true, None)
}

/// Checks `q ∘ r_i = μ(r_i) ∘ q` on the chart for `i = 1..=n`.
pub fn verify_equivariance(n: usize, k: usize, opts: &VerifyOptions) -> Result<RelationReport> {
    let q = grassmann_quotient_map(n, k)?;
    let mode = opts.resolve(q.source_names().len());
    let pairs: Vec<(RationalMap, RationalMap)> = (1..=n)
        .map(|i| Ok((grassmann_weyl_chart_map(n, k, i)?, mutation_affine(n, k, i)?)))
        .collect::<Result<_>>()?;
    let relations = parallel_map(&pairs, |idx, (chart, mutation)| {
        let i = idx + 1;
        let (holds, witness) = match mode {
            CheckMode::Symbolic => equivariance_symbolic(&q, chart, mutation),
            CheckMode::Eval => equivariance_eval(&q, chart, mutation, opts, idx as u64),
        };
        RelationCheck {
            relation: format!("q.r{i} = mu(r{i}).q"),
            holds,
            witness,
        }
    });
    Ok(RelationReport::new("equivariance", mode, opts, relations))
}

fn equivariance_symbolic(q: &RationalMap, chart: &RationalMap, mutation: &RationalMap) -> (bool, Option<String>) {
    let (lhs, rhs) = match (q.compose(chart), mutation.compose(q)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return (false, Some(e.to_string())),
    };
    for (idx, (a, b)) in lhs.components().iter().zip(rhs.components()).enumerate() {
        if a != b {
            let d = a.sub(b);
            return (
                false,
                Some(format!(
                    "{}: {}",
                    lhs.target_names()[idx],
                    d.fmt_with(lhs.source_names())
                )),
            );
        }
    }
    (true, None)
}

fn equivariance_eval(
    q: &RationalMap,
    chart: &RationalMap,
    mutation: &RationalMap,
    opts: &VerifyOptions,
    stream: u64,
) -> (bool, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    let nu = q.source_names().len();
    let want = opts.samples.max(MIN_SAMPLES);
    let (mut done, mut tries) = (0, 0);
    while done < want {
        tries += 1;
        if tries > 50 * want {
            return (false, Some(format!("only {done} of {want} samples avoided the poles")));
        }
        let u: Vec<BigRational> = (0..nu).map(|_| random_rational(&mut rng)).collect();
        let lhs = chart.eval(&u).and_then(|v| q.eval(&v));
        let rhs = q.eval(&u).and_then(|v| mutation.eval(&v));
        let (Some(l), Some(r)) = (lhs, rhs) else { continue };
        if l != r {
            return (
                false,
                Some(format!(
                    "{} -> {} vs {}",
                    fmt_point(&[u]),
                    fmt_point(&[l]),
                    fmt_point(&[r])
                )),
            );
        }
        done += 1;
    }
    (true, None)
}

/// Order-preserving parallel map over a slice.
fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let f = &f;
                s.spawn(move || f(i, item))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
