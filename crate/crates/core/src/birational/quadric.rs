//! Chart transitions between combinatorial quotients of quadric charts and
//! the boundary hyperplanes they pull back.
//!
//! The odd quotient is `ℙ^{n−1}` with coordinates `(y₁:⋯:yₙ)`, the even one
//! `ℙ^{n−2}` with `(y₂:⋯:yₙ)`. Transitions are linear, so they are stored
//! as integer matrices acting on column vectors of coordinates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::map::MultiProjectiveMap;
use super::poly::Poly;
use crate::linalg::{primitive, IntVec, IntegerMatrix};
use crate::{Error, Result};

fn check_odd(n: usize, i: usize) -> Result<()> {
    if n >= 2 && (2..=n).contains(&i) {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("need 2 ≤ i ≤ n, got n={n}, i={i}")))
    }
}

/// `(y₁ : −Σyⱼ : y₂ : ⋯ : ŷᵢ : ⋯ : yₙ)`, as displayed.
pub fn quadric_transition(n: usize, i: usize) -> Result<IntegerMatrix> {
    check_odd(n, i)?;
    let mut rows = vec![unit(n, 0), vec![BigInt::from(-1); n]];
    rows.extend((1..n).filter(|&j| j != i - 1).map(|j| unit(n, j)));
    IntegerMatrix::from_rows(n, rows)
}

/// The displayed map with `−Σyⱼ` moved to position `i`: it replaces `yᵢ`
/// by `−Σyⱼ` and is an involution. It differs from
/// [`quadric_transition`] by a permutation of the target coordinates.
pub fn quadric_transition_involutive(n: usize, i: usize) -> Result<IntegerMatrix> {
    check_odd(n, i)?;
    Ok(replace_row(n, i - 1))
}

/// `𝒞U_{Pᵢ} → 𝒞U_{P_{n+i}}` is the identity.
pub fn quadric_antipodal_transition(n: usize) -> IntegerMatrix {
    IntegerMatrix::identity(n)
}

/// Even case on `(y₂:⋯:yₙ)`: replaces `yᵢ` by `−Σ_{j≥2} yⱼ`.
pub fn quadric_even_transition(n: usize, i: usize) -> Result<IntegerMatrix> {
    if n < 3 || !(2..=n).contains(&i) {
        return Err(Error::InvalidParameters(format!(
            "need n ≥ 3 and 2 ≤ i ≤ n, got n={n}, i={i}"
        )));
    }
    Ok(replace_row(n - 1, i - 2))
}

fn unit(n: usize, j: usize) -> IntVec {
    let mut v = vec![BigInt::zero(); n];
    v[j] = BigInt::one();
    v
}

fn replace_row(n: usize, r: usize) -> IntegerMatrix {
    let rows = (0..n)
        .map(|j| if j == r { vec![BigInt::from(-1); n] } else { unit(n, j) })
        .collect();
    IntegerMatrix::from_rows(n, rows).expect("square")
}

/// The linear map `y ↦ M y` as a self-map of `ℙ^{d}`.
pub fn linear_map(m: &IntegerMatrix, names: Vec<String>) -> Result<MultiProjectiveMap> {
    let d = m.cols();
    let comps = (0..m.rows())
        .map(|r| {
            m.row(r).iter().enumerate().fold(Poly::zero(d), |acc, (j, c)| {
                &acc + &Poly::var(d, j).scale(&c.clone().into())
            })
        })
        .collect();
    MultiProjectiveMap::new(vec![d - 1], vec![m.rows() - 1], names, vec![comps])
}

pub fn quadric_variable_names(n: usize, even: bool) -> Vec<String> {
    let first = if even { 2 } else { 1 };
    (first..=n).map(|j| format!("y{j}")).collect()
}

/// Linear forms up to sign and scaling: primitive, first nonzero entry
/// positive.
fn normalize_form(v: &[BigInt]) -> Result<IntVec> {
    let mut p = primitive(v)?;
    if p.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        p = p.iter().map(|x| -x).collect();
    }
    Ok(p)
}

/// Pullbacks of the chart boundary hyperplanes under every transition and
/// the identity chart, deduplicated and sorted.
pub fn quadric_boundary(n: usize, even: bool) -> Result<Vec<IntVec>> {
    let mut forms = BTreeSet::new();
    if even {
        if n < 3 {
            return Err(Error::InvalidParameters("even quadrics need n ≥ 3".into()));
        }
        let mut charts = vec![IntegerMatrix::identity(n - 1)];
        for i in 2..=n {
            charts.push(quadric_even_transition(n, i)?);
        }
        for m in &charts {
            for r in 0..m.rows() {
                forms.insert(normalize_form(m.row(r))?);
            }
        }
    } else {
        if n < 2 {
            return Err(Error::InvalidParameters("odd quadrics need n ≥ 2".into()));
        }
        let mut charts = vec![IntegerMatrix::identity(n)];
        for i in 2..=n {
            charts.push(quadric_transition(n, i)?);
        }
        // boundary of each chart: {yⱼ = 0}, j ≥ 2
        for m in &charts {
            for r in 1..m.rows() {
                forms.insert(normalize_form(m.row(r))?);
            }
        }
    }
    Ok(forms.into_iter().collect())
}

/// `{y₁+⋯+yₙ, y₂, …, yₙ}` (odd) or `{y₂+⋯+yₙ, y₂, …, yₙ}` (even).
pub fn expected_quadric_boundary(n: usize, even: bool) -> Vec<IntVec> {
    let d = if even { n - 1 } else { n };
    let mut forms: BTreeSet<IntVec> = BTreeSet::new();
    forms.insert(vec![BigInt::one(); d]);
    for j in (if even { 0 } else { 1 })..d {
        forms.insert(unit(d, j));
    }
    forms.into_iter().collect()
}

pub fn fmt_linear_form(form: &[BigInt], names: &[String]) -> String {
    let p = Poly::zero(form.len());
    let p = form.iter().enumerate().fold(p, |acc, (j, c)| {
        &acc + &Poly::var(form.len(), j).scale(&c.clone().into())
    });
    p.fmt_with(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(m: &IntegerMatrix) -> IntegerMatrix {
        m.mul(m).unwrap()
    }

    #[test]
    fn displayed_matrices() {
        assert_eq!(
            quadric_transition(3, 2).unwrap(),
            IntegerMatrix::from_i64(&[&[1, 0, 0], &[-1, -1, -1], &[0, 0, 1]])
        );
        assert_eq!(
            quadric_transition(3, 3).unwrap(),
            IntegerMatrix::from_i64(&[&[1, 0, 0], &[-1, -1, -1], &[0, 1, 0]])
        );
        assert_eq!(sq(&quadric_transition(3, 2).unwrap()), IntegerMatrix::identity(3));
        // the displayed i = 3 map is not an involution
        assert_ne!(sq(&quadric_transition(3, 3).unwrap()), IntegerMatrix::identity(3));
        assert!(quadric_transition(3, 1).is_err());
    }

    #[test]
    fn involutive_forms() {
        for n in 2..=5 {
            for i in 2..=n {
                let lit = quadric_transition(n, i).unwrap();
                let inv = quadric_transition_involutive(n, i).unwrap();
                assert_eq!(sq(&inv), IntegerMatrix::identity(n));
                assert!(!lit.determinant().is_zero());
                // same rows up to order
                let a: BTreeSet<IntVec> = lit.to_rows().into_iter().collect();
                let b: BTreeSet<IntVec> = inv.to_rows().into_iter().collect();
                assert_eq!(a, b);
            }
            for i in (2..=n).filter(|_| n >= 3) {
                let e = quadric_even_transition(n, i).unwrap();
                assert_eq!(sq(&e), IntegerMatrix::identity(n - 1));
            }
            assert_eq!(sq(&quadric_antipodal_transition(n)), IntegerMatrix::identity(n));
        }
    }

    #[test]
    fn boundaries() {
        for n in [2, 3, 4, 5] {
            assert_eq!(quadric_boundary(n, false).unwrap(), expected_quadric_boundary(n, false));
        }
        for n in [3, 4, 5] {
            assert_eq!(quadric_boundary(n, true).unwrap(), expected_quadric_boundary(n, true));
        }
        let names = quadric_variable_names(3, false);
        let shown: Vec<String> = quadric_boundary(3, false)
            .unwrap()
            .iter()
            .map(|f| fmt_linear_form(f, &names))
            .collect();
        assert_eq!(shown, ["y3", "y2", "y1 + y2 + y3"]);
        assert!(quadric_boundary(2, true).is_err());
    }

    #[test]
    fn transitions_as_maps() {
        let m = linear_map(
            &quadric_transition_involutive(4, 3).unwrap(),
            quadric_variable_names(4, false),
        )
        .unwrap();
        assert!(m.compose(&m).unwrap().identity_defect().is_none());
        assert_eq!(m.base_locus_components().unwrap(), 0);
    }
}
