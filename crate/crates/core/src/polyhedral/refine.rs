//! Common refinement of a collection of cones.
//!
//! The refinement is found by walking cells. For a point `w` off every
//! boundary of the inputs, the cell of `w` starts as the intersection of the
//! input cones that contain `w`; if some other input still meets its interior
//! the cell is cut by that cone's facet hyperplanes on the side of `w`. For
//! chamber complexes of vector configurations no cut is ever needed: the
//! intersection of the basis cones containing a generic point is the chamber.
//! When these cells fail to form a fan (inputs meeting along pieces of their
//! boundaries), the refinement falls back to the regions of the arrangement
//! of all facet hyperplanes inside the support.
//! Cells are explored by stepping across each facet at a generic point.
//! Inputs of less than the top dimension are dropped: the top-dimensional
//! cones already cover the support for every use in this crate.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cone::Cone;
use super::fan::Fan;
use crate::linalg::{dot, primitive, primitive_from_rational, saturate_rows, IntVec, IntegerMatrix, RatVec};
use crate::{Error, Result};

const SEED: u64 = 0x5eed;

/// Refines `cones` (all of lattice rank `rank`) into a fan with the same
/// support. Output is canonical and independent of input order.
pub fn common_refinement(rank: usize, cones: &[Cone]) -> Result<Fan> {
    for c in cones {
        if c.rank() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: c.rank(),
            });
        }
    }
    if rank == 0 {
        return Ok(Fan::trivial());
    }
    let top = cones.iter().map(Cone::dim).max().unwrap_or(0);
    if top == 0 {
        return Fan::from_cones(rank, &[Cone::origin(rank)]);
    }
    let mut inputs: Vec<Cone> = cones.iter().filter(|c| c.dim() == top).cloned().collect();
    inputs.sort_by(|a, b| (a.rays(), a.lineality()).cmp(&(b.rays(), b.lineality())));
    inputs.dedup_by(|a, b| a.set_eq(b));
    if top == rank {
        let cells = refine_checked(rank, &inputs)?;
        return Fan::from_cones(rank, &cells);
    }

    // Work inside the common span of the top-dimensional cones.
    let gens: Vec<IntVec> = inputs
        .iter()
        .flat_map(|c| c.rays().iter().chain(c.lineality()).cloned())
        .collect();
    let basis = saturate_rows(&IntegerMatrix::from_rows(rank, gens.clone())?);
    if basis.rows() != top {
        return Err(Error::UnsupportedShape(
            "top-dimensional cones span different subspaces".into(),
        ));
    }
    let to_local = |v: &IntVec| primitive_from_rational(&coordinates(&basis, v));
    let local: Vec<Cone> = inputs
        .iter()
        .map(|c| {
            let mut g: Vec<IntVec> = c.rays().iter().map(to_local).collect();
            for l in c.lineality() {
                let v = to_local(l);
                g.push(v.iter().map(|x| -x).collect());
                g.push(v);
            }
            Cone::from_generators(top, &g)
        })
        .collect::<Result<_>>()?;
    let cells = refine_checked(top, &local)?;
    let bt = basis.transpose();
    let lifted: Vec<Cone> = cells
        .iter()
        .map(|c| {
            if !c.is_pointed() {
                return Err(Error::NotPointed);
            }
            let g: Vec<IntVec> = c.rays().iter().map(|r| bt.mul_vec(r)).collect();
            Cone::from_generators(rank, &g)
        })
        .collect::<Result<_>>()?;
    Fan::from_cones(rank, &lifted)
}

/// Coordinates of `v` (assumed in the row span) in the row basis `b`.
pub(crate) fn coordinates(b: &IntegerMatrix, v: &[BigInt]) -> RatVec {
    let d = b.rows();
    let gram = b.mul(&b.transpose()).expect("shapes agree");
    let inv = gram.rational_inverse().expect("independent rows");
    let proj = b.mul_vec(v);
    (0..d)
        .map(|j| {
            (0..d).fold(BigRational::zero(), |acc, i| {
                acc + BigRational::from_integer(proj[i].clone()) * &inv[i][j]
            })
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Chamber,
    Arrangement,
}

struct Walker<'a> {
    rank: usize,
    inputs: &'a [Cone],
    mode: Mode,
    hyperplanes: Vec<IntVec>,
    rng: ChaCha8Rng,
}

impl<'a> Walker<'a> {
    fn new(rank: usize, inputs: &'a [Cone], mode: Mode) -> Self {
        let hyperplanes: BTreeSet<IntVec> = inputs
            .iter()
            .flat_map(|c| c.facets().iter().chain(c.equations()))
            .map(canonical_hyperplane)
            .collect();
        Self {
            rank,
            inputs,
            mode,
            hyperplanes: hyperplanes.into_iter().collect(),
            rng: ChaCha8Rng::seed_from_u64(SEED),
        }
    }

    /// A point `Σ cᵢ rᵢ` with random positive weights that lies on no
    /// hyperplane except those vanishing on all of `rays`.
    fn generic_combination(&mut self, rays: &[IntVec]) -> IntVec {
        let bound = 8 + rays.len() as i64 * 4;
        loop {
            let mut p = vec![BigInt::zero(); self.rank];
            for r in rays {
                let c = BigInt::from(self.rng.gen_range(1..=bound));
                for (a, b) in p.iter_mut().zip(r) {
                    *a += &c * b;
                }
            }
            let ok = self
                .hyperplanes
                .iter()
                .all(|h| !dot(h, &p).is_zero() || rays.iter().all(|r| dot(h, r).is_zero()));
            if ok {
                return primitive(&p).unwrap_or(p);
            }
        }
    }

    fn containing(&self, w: &[BigInt]) -> Vec<usize> {
        (0..self.inputs.len()).filter(|&i| self.inputs[i].contains(w)).collect()
    }

    /// The cell of a generic point `w` of the support.
    fn cell(&self, w: &[BigInt], containing: &[usize]) -> Result<Cone> {
        if self.mode == Mode::Arrangement {
            let oriented: Vec<IntVec> = self
                .hyperplanes
                .iter()
                .map(|h| {
                    if dot(h, w).is_negative() {
                        h.iter().map(|x| -x).collect()
                    } else {
                        h.clone()
                    }
                })
                .collect();
            return Cone::from_inequalities(self.rank, &oriented, &[]);
        }
        let mut ineqs: Vec<IntVec> = Vec::new();
        let mut eqs: Vec<IntVec> = Vec::new();
        for &i in containing {
            ineqs.extend(self.inputs[i].facets().iter().cloned());
            eqs.extend(self.inputs[i].equations().iter().cloned());
        }
        let mut k = Cone::from_inequalities(self.rank, &ineqs, &eqs)?;
        loop {
            let mut cuts: BTreeSet<IntVec> = BTreeSet::new();
            for (i, c) in self.inputs.iter().enumerate() {
                if containing.contains(&i) || !meets_interior(&k, c)? {
                    continue;
                }
                for f in c.facets() {
                    let crosses = k.rays().iter().any(|r| dot(f, r).is_positive()) || !k.lineality().is_empty();
                    if dot(f, w).is_negative() && crosses {
                        cuts.insert(f.iter().map(|x| -x).collect());
                    }
                }
            }
            if cuts.is_empty() {
                return Ok(k);
            }
            let mut all: Vec<IntVec> = k.facets().to_vec();
            all.extend(cuts);
            k = Cone::from_inequalities(self.rank, &all, k.equations())?;
        }
    }

    /// A generic point just across the facet `f` of `k`, or `None` when the
    /// facet lies on the boundary of the support.
    fn step_across(&mut self, k: &Cone, f: &IntVec) -> Option<IntVec> {
        let on_facet: Vec<IntVec> = k
            .rays()
            .iter()
            .filter(|r| dot(f, r).is_zero())
            .cloned()
            .chain(
                k.lineality()
                    .iter()
                    .flat_map(|l| [l.clone(), l.iter().map(|x| -x).collect()]),
            )
            .collect();
        let r = self.generic_combination(&on_facet);
        // Largest safe step: stay on the same side of every hyperplane not
        // through r.
        let mut t: Option<BigRational> = None;
        for h in &self.hyperplanes {
            let hr = dot(h, &r);
            let hf = dot(h, f);
            if hr.is_zero() || hf.is_zero() {
                continue;
            }
            let q = BigRational::new(hr.abs(), hf.abs());
            if t.as_ref().is_none_or(|t| &q < t) {
                t = Some(q);
            }
        }
        let t = t.map_or_else(|| BigRational::from_integer(1.into()), |t| t / BigInt::from(2));
        let w: IntVec = r.iter().zip(f).map(|(a, b)| a * t.denom() - b * t.numer()).collect();
        let w = primitive(&w).ok()?;
        self.inputs.iter().any(|c| c.contains(&w)).then_some(w)
    }
}

fn canonical_hyperplane(f: &IntVec) -> IntVec {
    let p = primitive(f).unwrap_or_else(|_| f.clone());
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => p.iter().map(|x| -x).collect(),
        _ => p,
    }
}

/// True when `c` meets the interior of the full-dimensional cone `k`.
fn meets_interior(k: &Cone, c: &Cone) -> Result<bool> {
    let gens_k: Vec<&IntVec> = k.rays().iter().collect();
    let gens_c: Vec<&IntVec> = c.rays().iter().collect();
    if k.lineality().is_empty() && c.lineality().is_empty() {
        let separated = c
            .facets()
            .iter()
            .any(|f| gens_k.iter().all(|r| !dot(f, r).is_positive()))
            || k.facets()
                .iter()
                .any(|f| gens_c.iter().all(|r| !dot(f, r).is_positive()));
        if separated {
            return Ok(false);
        }
    }
    Ok(k.intersect(c)?.dim() == k.rank())
}

/// Minimal cells when they form a fan, arrangement regions otherwise.
fn refine_checked(rank: usize, inputs: &[Cone]) -> Result<Vec<Cone>> {
    let cells = refine_full(rank, inputs, Mode::Chamber)?;
    if cells.iter().all(Cone::is_pointed) {
        let fan = Fan::from_cones(rank, &cells)?;
        if fan.check_valid().is_ok() {
            return Ok(cells);
        }
    }
    refine_full(rank, inputs, Mode::Arrangement)
}

fn refine_full(rank: usize, inputs: &[Cone], mode: Mode) -> Result<Vec<Cone>> {
    let mut walker = Walker::new(rank, inputs, mode);
    let mut seen: BTreeSet<(Vec<IntVec>, Vec<IntVec>)> = BTreeSet::new();
    let mut cells: Vec<Cone> = Vec::new();
    let mut queue: VecDeque<IntVec> = VecDeque::new();
    for c in inputs {
        let gens: Vec<IntVec> = c
            .rays()
            .iter()
            .cloned()
            .chain(
                c.lineality()
                    .iter()
                    .flat_map(|l| [l.clone(), l.iter().map(|x| -x).collect()]),
            )
            .collect();
        queue.push_back(walker.generic_combination(&gens));
    }
    while let Some(w) = queue.pop_front() {
        if cells.iter().any(|k| k.contains(&w)) {
            continue;
        }
        let containing = walker.containing(&w);
        let k = walker.cell(&w, &containing)?;
        if !seen.insert((k.rays().to_vec(), k.lineality().to_vec())) {
            continue;
        }
        for f in k.facets().to_vec() {
            if let Some(next) = walker.step_across(&k, &f) {
                queue.push_back(next);
            }
        }
        cells.push(k);
    }
    Ok(cells)
}

/// The chamber complex of a vector configuration spanning `ℚ^rank`: the
/// common refinement of all full-dimensional cones over bases.
pub fn chamber_fan(rank: usize, vectors: &[IntVec]) -> Result<Fan> {
    if rank == 0 {
        return Ok(Fan::trivial());
    }
    let cones = basis_cones(rank, vectors)?;
    if cones.is_empty() {
        return Err(Error::NotSurjective);
    }
    let cells = refine_full(rank, &cones, Mode::Chamber)?;
    Fan::from_cones(rank, &cells)
}

/// Common refinement of cones whose generic cells are the intersections of
/// the inputs containing them, as for images of all cones of a fan under a
/// lattice surjection. Only full-dimensional inputs take part.
pub fn chamber_refinement(rank: usize, cones: &[Cone]) -> Result<Fan> {
    if rank == 0 {
        return Ok(Fan::trivial());
    }
    let mut inputs: Vec<Cone> = cones
        .iter()
        .filter(|c| c.rank() == rank && c.is_full_dimensional())
        .cloned()
        .collect();
    if inputs.is_empty() {
        return Err(Error::NotSurjective);
    }
    inputs.sort_by(|a, b| (a.rays(), a.lineality()).cmp(&(b.rays(), b.lineality())));
    inputs.dedup_by(|a, b| a.set_eq(b));
    let cells = refine_full(rank, &inputs, Mode::Chamber)?;
    Fan::from_cones(rank, &cells)
}

/// Chambers of a vector configuration as cones (no pointedness required).
pub fn chamber_cells(rank: usize, vectors: &[IntVec]) -> Result<Vec<Cone>> {
    if rank == 0 {
        return Ok(vec![Cone::origin(0)]);
    }
    let cones = basis_cones(rank, vectors)?;
    if cones.is_empty() {
        return Err(Error::NotSurjective);
    }
    let mut cells = refine_full(rank, &cones, Mode::Chamber)?;
    cells.sort_by(|a, b| a.rays().cmp(b.rays()));
    Ok(cells)
}

/// Full-dimensional simplicial cones spanned by `rank` of the vectors.
fn basis_cones(rank: usize, vectors: &[IntVec]) -> Result<Vec<Cone>> {
    let mut distinct: Vec<IntVec> = vectors
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .map(|v| primitive(v))
        .collect::<Result<_>>()?;
    distinct.sort();
    distinct.dedup();
    let mut out: Vec<Cone> = Vec::new();
    let mut seen: BTreeSet<Vec<IntVec>> = BTreeSet::new();
    let mut idx: Vec<usize> = (0..rank).collect();
    if distinct.len() < rank {
        return Ok(out);
    }
    loop {
        let gens: Vec<IntVec> = idx.iter().map(|&i| distinct[i].clone()).collect();
        if IntegerMatrix::from_rows(rank, gens.clone())?.rank() == rank {
            let c = Cone::from_generators(rank, &gens)?;
            if seen.insert(c.rays().to_vec()) {
                out.push(c);
            }
        }
        // next combination in lexicographic order
        let n = distinct.len();
        let Some(pos) = (0..rank).rev().find(|&i| idx[i] != i + n - rank) else {
            break;
        };
        idx[pos] += 1;
        for j in pos + 1..rank {
            idx[j] = idx[j - 1] + 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;
    use proptest::prelude::*;

    fn cone(gens: &[&[i64]]) -> Cone {
        let rank = gens[0].len();
        Cone::from_generators(rank, &gens.iter().map(|g| int_vec(g)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn overlapping_pair() {
        let f = common_refinement(2, &[cone(&[&[1, 0], &[0, 1]]), cone(&[&[1, 1], &[1, -1]])]).unwrap();
        assert_eq!(
            f.rays(),
            &[int_vec(&[0, 1]), int_vec(&[1, -1]), int_vec(&[1, 0]), int_vec(&[1, 1])]
        );
        assert_eq!(f.max_cones().len(), 3);
        assert!(f.check_valid().is_ok());
    }

    #[test]
    fn single_cone() {
        let c = cone(&[&[1, 0], &[1, 2]]);
        let f = common_refinement(2, std::slice::from_ref(&c)).unwrap();
        assert_eq!(f.max_cones().len(), 1);
        assert!(f.cone(0).set_eq(&c));
    }

    #[test]
    fn projected_orthant_faces() {
        // images of the coordinate vectors under the odd-quadric projection, n = 3
        let cols = [[-2, -2], [1, 0], [0, 1], [1, 0], [0, 1]];
        let mut cones = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                let c = cone(&[&cols[i], &cols[j]]);
                if c.dim() == 2 {
                    cones.push(c);
                }
            }
        }
        let f = common_refinement(2, &cones).unwrap();
        assert_eq!(f.rays(), &[int_vec(&[-1, -1]), int_vec(&[0, 1]), int_vec(&[1, 0])]);
        assert!(f.is_complete());
    }

    #[test]
    fn lower_dimensional_support() {
        let f = common_refinement(3, &[cone(&[&[1, 0, 0], &[1, 1, 0]]), cone(&[&[0, 1, 0], &[1, 1, 0]])]).unwrap();
        assert_eq!(f.max_cones().len(), 2);
        let g = common_refinement(2, &[cone(&[&[1, 1]])]).unwrap();
        assert_eq!(g.rays(), &[int_vec(&[1, 1])]);
        assert_eq!(common_refinement(0, &[]).unwrap(), Fan::trivial());
    }

    #[test]
    fn chamber_complex_of_square_configuration() {
        // all full-dimensional basis cones of (±1, 1)-type vectors
        let v = [[1, 0], [1, 1], [0, 1], [-1, 1]];
        let mut cones = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                cones.push(cone(&[&v[i], &v[j]]));
            }
        }
        let f = common_refinement(2, &cones).unwrap();
        assert_eq!(f.max_cones().len(), 3);
        assert!(f.check_valid().is_ok());
    }

    fn random_cones() -> impl Strategy<Value = Vec<Vec<Vec<i64>>>> {
        prop::collection::vec(prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3..5), 1..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn refinement_is_a_valid_order_independent_fan(raw in random_cones()) {
            let cones: Vec<Cone> = raw
                .iter()
                .map(|g| Cone::from_generators(3, &g.iter().map(|v| int_vec(v)).collect::<Vec<_>>()).unwrap())
                .filter(|c| c.is_pointed() && c.is_full_dimensional())
                .collect();
            prop_assume!(!cones.is_empty());
            let f = common_refinement(3, &cones).unwrap();
            prop_assert!(f.check_valid().is_ok());
            let mut rev = cones.clone();
            rev.reverse();
            prop_assert_eq!(&common_refinement(3, &rev).unwrap(), &f);
            for c in &cones {
                // every input is covered by the output cells inside it
                let inside: Vec<Cone> = f.cones().into_iter().filter(|k| c.contains_cone(k)).collect();
                prop_assert!(!inside.is_empty());
                let cover = Fan::from_cones(3, &inside).unwrap();
                let single = Fan::from_cones(3, std::slice::from_ref(c)).unwrap();
                prop_assert!(single.is_coarsening_of(&cover));
            }
        }
    }
}
