//! Rational maps between products of projective spaces.

use std::collections::BTreeSet;
use std::ops::Range;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{gcd, Poly};
use super::rational::{RationalFunction, RationalMap};
use crate::{Error, Result};

/// Variable ranges of the factors of a signature `[d₁, d₂, …]`, each
/// factor `ℙ^d` contributing `d+1` homogeneous coordinates.
pub fn factor_ranges(sig: &[usize]) -> Vec<Range<usize>> {
    let mut start = 0;
    sig.iter()
        .map(|&d| {
            let r = start..start + d + 1;
            start += d + 1;
            r
        })
        .collect()
}

fn total_vars(sig: &[usize]) -> usize {
    sig.iter().map(|d| d + 1).sum()
}

/// Components are stored per target factor, multihomogeneous in the source
/// variables, with common factors removed and the first nonzero component
/// scaled to leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiProjectiveMap {
    source: Vec<usize>,
    target: Vec<usize>,
    names: Vec<String>,
    components: Vec<Vec<Poly>>,
}

impl MultiProjectiveMap {
    pub fn new(source: Vec<usize>, target: Vec<usize>, names: Vec<String>, components: Vec<Vec<Poly>>) -> Result<Self> {
        let n = total_vars(&source);
        if names.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: names.len(),
            });
        }
        if components.len() != target.len() {
            return Err(Error::SignatureMismatch(format!(
                "{} component tuples for {} target factors",
                components.len(),
                target.len()
            )));
        }
        let ranges = factor_ranges(&source);
        for (t, comps) in components.iter().enumerate() {
            if comps.len() != target[t] + 1 {
                return Err(Error::DimensionMismatch {
                    expected: target[t] + 1,
                    got: comps.len(),
                });
            }
            if comps.iter().any(|c| c.nvars() != n) {
                return Err(Error::SignatureMismatch("component in the wrong variables".into()));
            }
            if comps.iter().all(Poly::is_zero) {
                return Err(Error::UnsupportedShape(format!("factor {t} has only zero components")));
            }
            for r in &ranges {
                let vars: Vec<usize> = r.clone().collect();
                let degs: BTreeSet<Option<u32>> = comps
                    .iter()
                    .filter(|c| !c.is_zero())
                    .map(|c| c.degree_in_set(&vars))
                    .collect();
                if degs.len() != 1 || degs.contains(&None) {
                    return Err(Error::UnsupportedShape(format!(
                        "factor {t} is not multihomogeneous of a single degree"
                    )));
                }
            }
        }
        let components = components.into_iter().map(normalize_factor).collect();
        Ok(MultiProjectiveMap {
            source,
            target,
            names,
            components,
        })
    }

    pub fn identity(sig: Vec<usize>, names: Vec<String>) -> Result<Self> {
        let n = total_vars(&sig);
        let comps = factor_ranges(&sig)
            .into_iter()
            .map(|r| r.map(|i| Poly::var(n, i)).collect())
            .collect();
        Self::new(sig.clone(), sig, names, comps)
    }

    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn components(&self) -> &[Vec<Poly>] {
        &self.components
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MultiProjectiveMap) -> Result<MultiProjectiveMap> {
        if inner.target != self.source {
            return Err(Error::SignatureMismatch(format!(
                "inner target {:?} differs from outer source {:?}",
                inner.target, self.source
            )));
        }
        let args: Vec<Poly> = inner.components.iter().flatten().cloned().collect();
        let comps = self
            .components
            .iter()
            .map(|f| f.iter().map(|c| c.substitute(&args)).collect())
            .collect();
        Self::new(inner.source.clone(), self.target.clone(), inner.names.clone(), comps)
    }

    pub fn apply_point(&self, pt: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
        check_point(&self.source, pt)?;
        let flat: Vec<BigRational> = pt.iter().flatten().cloned().collect();
        self.components
            .iter()
            .map(|f| {
                let img: Vec<BigRational> = f.iter().map(|c| c.eval(&flat)).collect();
                if img.iter().all(Zero::is_zero) {
                    Err(Error::Indeterminate)
                } else {
                    Ok(img)
                }
            })
            .collect()
    }

    /// Equality up to per-factor scaling: all 2×2 minors of each pair of
    /// component tuples vanish.
    pub fn equivalent(&self, other: &MultiProjectiveMap) -> bool {
        self.first_defect(other).is_none()
    }

    /// A nonzero 2×2 minor witnessing that the maps differ.
    pub fn first_defect(&self, other: &MultiProjectiveMap) -> Option<Poly> {
        if self.source != other.source || self.target != other.target {
            return Some(Poly::one(0));
        }
        for (f, g) in self.components.iter().zip(&other.components) {
            for i in 0..f.len() {
                for j in i + 1..f.len() {
                    let m = &(&f[i] * &g[j]) - &(&f[j] * &g[i]);
                    if !m.is_zero() {
                        return Some(m);
                    }
                }
            }
        }
        None
    }

    pub fn identity_defect(&self) -> Option<Poly> {
        if self.source != self.target {
            return Some(Poly::one(0));
        }
        let id = Self::identity(self.source.clone(), self.names.clone()).expect("identity");
        self.first_defect(&id)
    }

    /// Affine form in the charts where the last coordinate of every factor
    /// is 1.
    pub fn dehomogenize(&self, source_names: Vec<String>, target_names: Vec<String>) -> Result<RationalMap> {
        let na = self.source.iter().sum::<usize>();
        let mut args = Vec::new();
        let mut next = 0;
        for &d in &self.source {
            for _ in 0..d {
                args.push(Poly::var(na, next));
                next += 1;
            }
            args.push(Poly::one(na));
        }
        let mut comps = Vec::new();
        for f in &self.components {
            let last = f.last().expect("nonempty").substitute(&args);
            for c in &f[..f.len() - 1] {
                comps.push(RationalFunction::new(c.substitute(&args), last.clone())?);
            }
        }
        RationalMap::new(source_names, target_names, comps)
    }

    /// Number of pairs `{zₐ = z_b = 0}` inside one source factor of
    /// dimension at least 2 on which every component of some target factor
    /// vanishes. Only maps whose factors are monomial or linear qualify.
    pub fn base_locus_components(&self) -> Result<usize> {
        for (t, f) in self.components.iter().enumerate() {
            let monomial = f.iter().all(|c| c.is_zero() || c.is_monomial());
            let linear = f.iter().all(|c| c.is_zero() || c.total_degree() == Some(1));
            if !monomial && !linear {
                return Err(Error::UnsupportedShape(format!(
                    "factor {t} is neither monomial nor linear"
                )));
            }
        }
        let n = self.names.len();
        let mut count = 0;
        for r in factor_ranges(&self.source) {
            if r.len() < 3 {
                continue;
            }
            for a in r.clone() {
                for b in a + 1..r.end {
                    let args: Vec<Poly> = (0..n)
                        .map(|v| {
                            if v == a || v == b {
                                Poly::zero(n)
                            } else {
                                Poly::var(n, v)
                            }
                        })
                        .collect();
                    let hit = self
                        .components
                        .iter()
                        .any(|f| f.iter().all(|c| c.substitute(&args).is_zero()));
                    count += hit as usize;
                }
            }
        }
        Ok(count)
    }

    pub fn describe(&self) -> Vec<String> {
        self.components
            .iter()
            .map(|f| {
                let parts: Vec<String> = f.iter().map(|c| c.fmt_with(&self.names)).collect();
                format!("[{}]", parts.join(" : "))
            })
            .collect()
    }
}

fn normalize_factor(comps: Vec<Poly>) -> Vec<Poly> {
    let g = comps.iter().fold(Poly::zero(comps[0].nvars()), |g, c| gcd(&g, c));
    let mut out: Vec<Poly> = comps.iter().map(|c| c.div_exact(&g).expect("gcd divides")).collect();
    let lc = out
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| c.leading_coefficient())
        .expect("nonzero factor");
    if !lc.is_one() {
        out = out.iter().map(|c| c.scale(&lc.recip())).collect();
    }
    out
}

fn check_point(sig: &[usize], pt: &[Vec<BigRational>]) -> Result<()> {
    if pt.len() != sig.len() {
        return Err(Error::SignatureMismatch(format!(
            "point has {} factors, expected {}",
            pt.len(),
            sig.len()
        )));
    }
    for (p, &d) in pt.iter().zip(sig) {
        if p.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                got: p.len(),
            });
        }
        if p.iter().all(Zero::is_zero) {
            return Err(Error::InvalidParameters("zero vector is not a projective point".into()));
        }
    }
    Ok(())
}

/// Equality of points of a product of projective spaces.
pub fn projective_eq(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(p, q)| {
            p.len() == q.len() && (0..p.len()).all(|i| (i + 1..p.len()).all(|j| &p[i] * &q[j] == &p[j] * &q[i]))
        })
}
