use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::dd::double_description;
use crate::linalg::{dot, primitive, rat_dot, saturate_rows, IntVec, IntegerMatrix};
use crate::{Error, Result};

/// A rational polyhedral cone carried in both representations.
///
/// V-side: primitive extreme rays plus a lattice basis of the lineality
/// space. H-side: primitive inner facet normals (`f·x ≥ 0`) plus a lattice
/// basis of the equations cutting out the linear span.
#[derive(Clone, Debug)]
pub struct Cone {
    rank: usize,
    rays: Vec<IntVec>,
    lineality: Vec<IntVec>,
    facets: Vec<IntVec>,
    equations: Vec<IntVec>,
}

fn lattice_basis(rank: usize, vectors: Vec<IntVec>) -> Vec<IntVec> {
    if vectors.is_empty() {
        return vectors;
    }
    let m = IntegerMatrix::from_rows(rank, vectors).expect("vectors share the rank");
    saturate_rows(&m).to_rows()
}

fn canonical_rays(mut rays: Vec<IntVec>) -> Vec<IntVec> {
    rays.retain(|r| r.iter().any(|x| !x.is_zero()));
    for r in rays.iter_mut() {
        *r = primitive(r).expect("nonzero");
    }
    rays.sort();
    rays.dedup();
    rays
}

impl Cone {
    /// The cone generated by `generators` (zero vectors are ignored).
    pub fn from_generators(rank: usize, generators: &[IntVec]) -> Result<Self> {
        for g in generators {
            if g.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: g.len(),
                });
            }
        }
        let gens: Vec<IntVec> = generators
            .iter()
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let dual = double_description(rank, &gens, &[]);
        let facets = canonical_rays(dual.rays);
        let equations = lattice_basis(rank, dual.lineality);
        let primal = double_description(rank, &facets, &equations);
        Ok(Self {
            rank,
            rays: canonical_rays(primal.rays),
            lineality: lattice_basis(rank, primal.lineality),
            facets,
            equations,
        })
    }

    /// The cone `{x : f·x ≥ 0 ∀f ∈ inequalities, e·x = 0 ∀e ∈ equations}`.
    pub fn from_inequalities(rank: usize, inequalities: &[IntVec], equations: &[IntVec]) -> Result<Self> {
        for g in inequalities.iter().chain(equations) {
            if g.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: g.len(),
                });
            }
        }
        let primal = double_description(rank, inequalities, equations);
        let rays = canonical_rays(primal.rays);
        let lineality = lattice_basis(rank, primal.lineality);
        let dual = double_description(rank, &rays, &lineality);
        Ok(Self {
            rank,
            rays,
            lineality,
            facets: canonical_rays(dual.rays),
            equations: lattice_basis(rank, dual.lineality),
        })
    }

    pub fn positive_orthant(rank: usize) -> Self {
        let basis: Vec<IntVec> = IntegerMatrix::identity(rank).to_rows();
        Self::from_generators(rank, &basis).expect("orthant")
    }

    pub fn origin(rank: usize) -> Self {
        Self::from_generators(rank, &[]).expect("origin")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[IntVec] {
        &self.lineality
    }

    pub fn facets(&self) -> &[IntVec] {
        &self.facets
    }

    pub fn equations(&self) -> &[IntVec] {
        &self.equations
    }

    pub fn dim(&self) -> usize {
        self.rank - self.equations.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    /// Simplicial: pointed with as many rays as its dimension.
    pub fn is_simplicial(&self) -> bool {
        self.is_pointed() && self.rays.len() == self.dim()
    }

    /// `{u : u·x ≥ 0 ∀x ∈ self}`.
    pub fn dual(&self) -> Self {
        Self {
            rank: self.rank,
            rays: self.facets.clone(),
            lineality: self.equations.clone(),
            facets: self.rays.clone(),
            equations: self.lineality.clone(),
        }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero()) && self.facets.iter().all(|f| !dot(f, x).is_negative())
    }

    pub fn contains_rational(&self, x: &[BigRational]) -> bool {
        self.equations.iter().all(|e| rat_dot(e, x).is_zero())
            && self.facets.iter().all(|f| !rat_dot(f, x).is_negative())
    }

    /// Membership in the relative interior.
    pub fn relative_interior_contains(&self, x: &[BigInt]) -> bool {
        self.equations.iter().all(|e| dot(e, x).is_zero()) && self.facets.iter().all(|f| dot(f, x).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
            && other.lineality.iter().all(|l| {
                let neg: IntVec = l.iter().map(|x| -x).collect();
                self.contains(l) && self.contains(&neg)
            })
    }

    /// Equality as point sets.
    pub fn set_eq(&self, other: &Cone) -> bool {
        self.rank == other.rank && self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.rank != other.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        let ineqs: Vec<IntVec> = self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<IntVec> = self.equations.iter().chain(&other.equations).cloned().collect();
        Cone::from_inequalities(self.rank, &ineqs, &eqs)
    }

    /// A point in the relative interior: the sum of the extreme rays.
    pub fn interior_point(&self) -> IntVec {
        let mut p = vec![BigInt::zero(); self.rank];
        for r in &self.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += b;
            }
        }
        p
    }

    /// Ray indices lying on each facet.
    pub fn facet_ray_sets(&self) -> Vec<BTreeSet<usize>> {
        self.facets
            .iter()
            .map(|f| {
                (0..self.rays.len())
                    .filter(|&i| dot(f, &self.rays[i]).is_zero())
                    .collect()
            })
            .collect()
    }

    /// All faces of a pointed cone, as sets of ray indices, from the cone
    /// itself down to the apex (the empty set).
    pub fn faces(&self) -> Result<Vec<BTreeSet<usize>>> {
        if !self.is_pointed() {
            return Err(Error::NotPointed);
        }
        let all: BTreeSet<usize> = (0..self.rays.len()).collect();
        let facet_sets = self.facet_ray_sets();
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        faces.insert(all.clone());
        let mut frontier = vec![all];
        while let Some(face) = frontier.pop() {
            for fs in &facet_sets {
                let sub: BTreeSet<usize> = face.intersection(fs).copied().collect();
                if sub.len() < face.len() && faces.insert(sub.clone()) {
                    frontier.push(sub);
                }
            }
        }
        Ok(faces.into_iter().collect())
    }

    /// The face of `self` generated by the given ray indices' minimal
    /// containing face: rays tight on every facet that is tight on `points`.
    pub fn smallest_face_containing(&self, points: &[IntVec]) -> Cone {
        let tight: Vec<&IntVec> = self
            .facets
            .iter()
            .filter(|f| points.iter().all(|p| dot(f, p).is_zero()))
            .collect();
        let rays: Vec<IntVec> = self
            .rays
            .iter()
            .filter(|r| tight.iter().all(|f| dot(f, r).is_zero()))
            .cloned()
            .collect();
        let mut gens = rays;
        for l in &self.lineality {
            gens.push(l.clone());
            gens.push(l.iter().map(|x| -x).collect());
        }
        Cone::from_generators(self.rank, &gens).expect("same rank")
    }

    /// True when `other ⊆ self` is a face of `self`.
    pub fn has_face(&self, other: &Cone) -> bool {
        if !self.contains_cone(other) {
            return false;
        }
        let mut pts = other.rays.clone();
        for l in &other.lineality {
            pts.push(l.clone());
            pts.push(l.iter().map(|x| -x).collect());
        }
        if pts.is_empty() {
            return self.is_pointed();
        }
        let face = self.smallest_face_containing(&pts);
        other.contains_cone(&face)
    }

    /// Image under a linear map given by an integer matrix (columns index the
    /// source coordinates).
    pub fn image(&self, q: &IntegerMatrix) -> Result<Cone> {
        if q.cols() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: q.cols(),
            });
        }
        let mut gens: Vec<IntVec> = self.rays.iter().map(|r| q.mul_vec(r)).collect();
        for l in &self.lineality {
            let v = q.mul_vec(l);
            gens.push(v.iter().map(|x| -x).collect());
            gens.push(v);
        }
        Cone::from_generators(q.rows(), &gens)
    }
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
    fn dual_examples() {
        let q = Cone::positive_orthant(2);
        assert!(q.dual().set_eq(&q));

        let c = cone(&[&[1, 0], &[1, 1]]);
        assert!(c.dual().set_eq(&cone(&[&[0, 1], &[1, -1]])));

        let plane = cone(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert!(plane.dual().set_eq(&Cone::origin(2)));
        assert_eq!(plane.lineality().len(), 2);
    }

    #[test]
    fn intersect_examples() {
        let a = cone(&[&[1, 0], &[1, 1]]);
        let b = cone(&[&[1, 1], &[0, 1]]);
        let ab = a.intersect(&b).unwrap();
        assert_eq!(ab.rays(), &[int_vec(&[1, 1])]);
        assert_eq!(ab.dim(), 1);
        assert!(a.intersect(&a).unwrap().set_eq(&a));
        let neg = cone(&[&[-1, 0], &[0, -1]]);
        assert!(Cone::positive_orthant(2)
            .intersect(&neg)
            .unwrap()
            .set_eq(&Cone::origin(2)));
    }

    #[test]
    fn redundant_generators_are_dropped() {
        let c = cone(&[&[1, 0], &[2, 2], &[0, 3], &[1, 1]]);
        assert_eq!(c.rays(), &[int_vec(&[0, 1]), int_vec(&[1, 0])]);
    }

    #[test]
    fn faces_of_square_cone() {
        let c = cone(&[&[1, 1, 1], &[1, -1, 1], &[-1, 1, 1], &[-1, -1, 1]]);
        let faces = c.faces().unwrap();
        // apex, 4 rays, 4 facets, the cone
        assert_eq!(faces.len(), 10);
    }

    #[test]
    fn face_recognition() {
        let q = Cone::positive_orthant(3);
        let f = cone(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(q.has_face(&f));
        let diag = cone(&[&[1, 1, 0]]);
        assert!(!q.has_face(&diag));
        assert!(q.has_face(&Cone::origin(3)));
    }

    fn small_cone() -> impl Strategy<Value = Cone> {
        (1usize..5).prop_flat_map(|rank| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, rank), 1..6).prop_map(move |gens| {
                let gens: Vec<IntVec> = gens.iter().map(|g| int_vec(g)).collect();
                Cone::from_generators(rank, &gens).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn double_dual_is_identity(c in small_cone()) {
            prop_assert!(c.dual().dual().set_eq(&c));
            let d = c.dual();
            let recomputed = Cone::from_generators(c.rank(), &d.rays().iter().cloned()
                .chain(d.lineality().iter().cloned())
                .chain(d.lineality().iter().map(|l| l.iter().map(|x| -x).collect()))
                .collect::<Vec<_>>()).unwrap();
            prop_assert!(recomputed.set_eq(&d));
            // every ray satisfies every facet inequality
            for r in c.rays() {
                prop_assert!(c.contains(r));
            }
        }
    }
}
