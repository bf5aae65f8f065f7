//! Double description method over the integers.
//!
//! Computes generators of `{x : a·x ≥ 0 for a in ineqs, e·x = 0 for e in eqs}`
//! as a lineality basis plus the extreme rays of the pointed part. Rays are
//! kept primitive; adjacency is decided combinatorially from zero sets.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{dot, primitive, IntVec};

#[derive(Clone, Debug, Default)]
pub(crate) struct Generators {
    pub rays: Vec<IntVec>,
    pub lineality: Vec<IntVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        Self(vec![0; bits.div_ceil(64).max(1)])
    }

    fn full_prefix(bits: usize, total: usize) -> Self {
        let mut s = Self::new(total);
        for i in 0..bits {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: IntVec,
    zeros: BitSet,
}

fn combine(pa: &BigInt, pv: &[BigInt], na: &BigInt, nv: &[BigInt]) -> IntVec {
    // pa > 0 > na: (pa)·n − (na)·p lies on the hyperplane and is a positive
    // combination of p and n.
    let v: IntVec = pv.iter().zip(nv).map(|(p, n)| pa * n - na * p).collect();
    primitive(&v).unwrap_or(v)
}

/// Generators of the cone cut out by `ineqs` (≥ 0) and `eqs` (= 0) in `ℚ^dim`.
pub(crate) fn double_description(dim: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> Generators {
    let total = ineqs.len();
    let mut lineality: Vec<IntVec> = (0..dim)
        .map(|i| {
            let mut e = vec![BigInt::zero(); dim];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for a in eqs {
        debug_assert_eq!(a.len(), dim);
        if let Some(pos) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(pos);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            project_out(&mut lineality, &mut rays, a, &l0, &al0);
        } else {
            rays = cut(&rays, a, None, false);
        }
    }

    for (k, a) in ineqs.iter().enumerate() {
        debug_assert_eq!(a.len(), dim);
        if let Some(pos) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(pos);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            project_out(&mut lineality, &mut rays, a, &l0, &al0);
            for r in rays.iter_mut() {
                r.zeros.insert(k);
            }
            rays.push(Ray {
                v: primitive(&l0).unwrap_or(l0),
                zeros: BitSet::full_prefix(k, total),
            });
        } else {
            rays = cut(&rays, a, Some(k), true);
        }
    }

    Generators {
        rays: rays.into_iter().map(|r| r.v).collect(),
        lineality,
    }
}

/// Removes `l0` from the lineality space by projecting everything onto
/// `a⊥` along `l0`. Requires `a·l0 = al0 > 0`.
fn project_out(lineality: &mut [IntVec], rays: &mut [Ray], a: &[BigInt], l0: &[BigInt], al0: &BigInt) {
    let proj = |v: &[BigInt]| -> IntVec {
        let av = dot(a, v);
        if av.is_zero() {
            return v.to_vec();
        }
        let w: IntVec = v.iter().zip(l0).map(|(x, y)| al0 * x - &av * y).collect();
        primitive(&w).unwrap_or(w)
    };
    for l in lineality.iter_mut() {
        *l = proj(l);
    }
    for r in rays.iter_mut() {
        r.v = proj(&r.v);
    }
}

fn cut(rays: &[Ray], a: &[BigInt], bit: Option<usize>, keep_positive: bool) -> Vec<Ray> {
    let values: Vec<BigInt> = rays.iter().map(|r| dot(a, &r.v)).collect();
    let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

    let mut out: Vec<Ray> = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        let sign_ok = values[i].is_zero() || (keep_positive && values[i].is_positive());
        if sign_ok {
            let mut r = r.clone();
            if values[i].is_zero() {
                if let Some(k) = bit {
                    r.zeros.insert(k);
                }
            }
            out.push(r);
        }
    }
    for &p in &pos {
        for &n in &neg {
            let common = rays[p].zeros.and(&rays[n].zeros);
            let adjacent = rays
                .iter()
                .enumerate()
                .all(|(i, r)| i == p || i == n || !common.is_subset(&r.zeros));
            if !adjacent {
                continue;
            }
            let mut zeros = common;
            if let Some(k) = bit {
                zeros.insert(k);
            }
            out.push(Ray {
                v: combine(&values[p], &rays[p].v, &values[n], &rays[n].v),
                zeros,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    fn sorted(mut v: Vec<IntVec>) -> Vec<IntVec> {
        v.sort();
        v
    }

    #[test]
    fn orthant() {
        let g = double_description(2, &[int_vec(&[1, 0]), int_vec(&[0, 1])], &[]);
        assert!(g.lineality.is_empty());
        assert_eq!(sorted(g.rays), vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn half_plane_has_lineality() {
        let g = double_description(2, &[int_vec(&[1, 0])], &[]);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays.len(), 1);
    }

    #[test]
    fn square_pyramid_cone() {
        // cone over the square with vertices (±1, ±1) at height 1
        let ineqs = vec![
            int_vec(&[1, 0, 1]),
            int_vec(&[-1, 0, 1]),
            int_vec(&[0, 1, 1]),
            int_vec(&[0, -1, 1]),
        ];
        let g = double_description(3, &ineqs, &[]);
        assert!(g.lineality.is_empty());
        assert_eq!(
            sorted(g.rays),
            vec![
                int_vec(&[-1, -1, 1]),
                int_vec(&[-1, 1, 1]),
                int_vec(&[1, -1, 1]),
                int_vec(&[1, 1, 1])
            ]
        );
    }

    #[test]
    fn equations_restrict() {
        let g = double_description(
            3,
            &[int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0]), int_vec(&[0, 0, 1])],
            &[int_vec(&[1, -1, 0])],
        );
        assert!(g.lineality.is_empty());
        assert_eq!(sorted(g.rays), vec![int_vec(&[0, 0, 1]), int_vec(&[1, 1, 0])]);
    }

    #[test]
    fn infeasible_is_origin() {
        let g = double_description(1, &[int_vec(&[1]), int_vec(&[-1])], &[]);
        assert!(g.rays.is_empty() && g.lineality.is_empty());
    }
}
