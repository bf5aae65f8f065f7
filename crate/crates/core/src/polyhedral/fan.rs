use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::cone::Cone;
use crate::linalg::{has_unit_invariants, primitive, IntVec, IntegerMatrix};
use crate::{Error, Result};

/// Default cap on the ray count for [`Fan::isomorphism`].
pub const ISOMORPHISM_RAY_CAP: usize = 14;

/// A fan given by primitive rays and maximal cones (sets of ray indices).
///
/// The representation is canonical: rays are sorted lexicographically, each
/// cone lists its ray indices in increasing order and cones are sorted, so
/// structural equality is equality of fans.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVec>,
    max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanReport {
    pub is_smooth: bool,
    pub is_simplicial: bool,
    pub is_complete: bool,
    pub picard_number: Option<usize>,
    pub ray_count: usize,
    pub max_cone_count: usize,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<IntVec>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let mut prim = Vec::with_capacity(rays.len());
        for r in &rays {
            if r.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: r.len(),
                });
            }
            prim.push(primitive(r).map_err(|_| Error::InvalidFan("zero ray".into()))?);
        }
        for c in &max_cones {
            if let Some(&bad) = c.iter().find(|&&i| i >= prim.len()) {
                return Err(Error::InvalidFan(format!("ray index {bad} out of range")));
            }
        }
        let cones: Vec<Vec<IntVec>> = max_cones
            .iter()
            .map(|c| c.iter().map(|&i| prim[i].clone()).collect())
            .collect();
        Ok(Self::from_ray_lists(rank, cones))
    }

    fn from_ray_lists(rank: usize, cones: Vec<Vec<IntVec>>) -> Self {
        let ray_set: BTreeSet<IntVec> = cones.iter().flatten().cloned().collect();
        let rays: Vec<IntVec> = ray_set.into_iter().collect();
        let index: BTreeMap<&IntVec, usize> = rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut max_cones: Vec<Vec<usize>> = cones
            .iter()
            .map(|c| {
                let mut ids: Vec<usize> = c.iter().map(|r| index[r]).collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            })
            .collect();
        max_cones.sort();
        max_cones.dedup();
        Self { rank, rays, max_cones }
    }

    /// Builds a fan from pointed cones, which become the maximal cones.
    pub fn from_cones(rank: usize, cones: &[Cone]) -> Result<Self> {
        let mut lists = Vec::with_capacity(cones.len());
        for c in cones {
            if c.rank() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: c.rank(),
                });
            }
            if !c.is_pointed() {
                return Err(Error::NotPointed);
            }
            lists.push(c.rays().to_vec());
        }
        Ok(Self::from_ray_lists(rank, lists))
    }

    /// The fan in rank 0 consisting of the origin.
    pub fn trivial() -> Self {
        Self {
            rank: 0,
            rays: vec![],
            max_cones: vec![vec![]],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn cone(&self, i: usize) -> Cone {
        let gens: Vec<IntVec> = self.max_cones[i].iter().map(|&r| self.rays[r].clone()).collect();
        Cone::from_generators(self.rank, &gens).expect("rays share the rank")
    }

    pub fn cones(&self) -> Vec<Cone> {
        (0..self.max_cones.len()).map(|i| self.cone(i)).collect()
    }

    /// Every cone of the fan (all faces of maximal cones) as ray index sets.
    pub fn all_cones(&self) -> Vec<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for (i, c) in self.max_cones.iter().enumerate() {
            let cone = self.cone(i);
            let local: Vec<usize> = cone
                .rays()
                .iter()
                .map(|r| self.rays.iter().position(|x| x == r).expect("ray of the fan"))
                .collect();
            debug_assert_eq!(local.len(), c.len());
            for face in cone.faces().expect("fan cones are pointed") {
                out.insert(face.iter().map(|&j| local[j]).collect::<BTreeSet<usize>>());
            }
        }
        out.into_iter().collect()
    }

    /// Walls (facets of maximal cones) with their multiplicity.
    fn wall_counts(&self) -> BTreeMap<BTreeSet<usize>, usize> {
        let mut walls = BTreeMap::new();
        for (i, c) in self.max_cones.iter().enumerate() {
            let cone = self.cone(i);
            let local: Vec<usize> = cone
                .rays()
                .iter()
                .map(|r| c[self.max_cones[i].iter().position(|&g| &self.rays[g] == r).expect("ray")])
                .collect();
            for fs in cone.facet_ray_sets() {
                let wall: BTreeSet<usize> = fs.iter().map(|&j| local[j]).collect();
                *walls.entry(wall).or_insert(0) += 1;
            }
        }
        walls
    }

    pub fn is_pure_full_dimensional(&self) -> bool {
        self.cones().iter().all(Cone::is_full_dimensional)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones().iter().all(Cone::is_simplicial)
    }

    pub fn is_smooth(&self) -> bool {
        self.max_cones.iter().enumerate().all(|(i, c)| {
            if !self.cone(i).is_simplicial() {
                return false;
            }
            if c.is_empty() {
                return true;
            }
            let gens: Vec<IntVec> = c.iter().map(|&r| self.rays[r].clone()).collect();
            has_unit_invariants(&IntegerMatrix::from_rows(self.rank, gens).expect("rank"))
        })
    }

    /// Pure full-dimensional, with every wall shared by exactly two cones.
    pub fn is_complete(&self) -> bool {
        self.is_pure_full_dimensional() && self.wall_counts().values().all(|&n| n == 2)
    }

    pub fn report(&self) -> FanReport {
        let is_simplicial = self.is_simplicial();
        let is_complete = self.is_complete();
        FanReport {
            is_smooth: self.is_smooth(),
            is_simplicial,
            is_complete,
            picard_number: (is_simplicial && is_complete).then(|| self.rays.len() - self.rank),
            ray_count: self.rays.len(),
            max_cone_count: self.max_cones.len(),
        }
    }

    /// Checks the fan axiom on maximal cones: every pairwise intersection is
    /// a face of both. Returns a description of the first violation.
    pub fn check_valid(&self) -> std::result::Result<(), String> {
        let cones = self.cones();
        for (i, c) in cones.iter().enumerate() {
            if !c.is_pointed() {
                return Err(format!("cone {i} is not pointed"));
            }
        }
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let meet = cones[i].intersect(&cones[j]).map_err(|e| e.to_string())?;
                if !cones[i].has_face(&meet) || !cones[j].has_face(&meet) {
                    return Err(format!("cones {i} and {j} meet outside a common face"));
                }
            }
        }
        Ok(())
    }

    /// True when every maximal cone of `self` is a union of cones of `fine`
    /// and both fans have the same support.
    pub fn is_coarsening_of(&self, fine: &Fan) -> bool {
        if self.rank != fine.rank {
            return false;
        }
        let coarse_cones = self.cones();
        let fine_cones = fine.cones();
        let mut owner = vec![None; fine_cones.len()];
        for (f, fc) in fine_cones.iter().enumerate() {
            let p = fc.interior_point();
            let found = coarse_cones
                .iter()
                .position(|cc| cc.contains(&p) && cc.contains_cone(fc));
            match found {
                Some(c) => owner[f] = Some(c),
                None => return false,
            }
        }
        for (c, cc) in coarse_cones.iter().enumerate() {
            let inside: Vec<usize> = (0..fine_cones.len()).filter(|&f| owner[f] == Some(c)).collect();
            if inside.is_empty() {
                return false;
            }
            if inside.iter().any(|&f| fine_cones[f].dim() != cc.dim()) {
                return false;
            }
            let mut walls: BTreeMap<BTreeSet<IntVec>, usize> = BTreeMap::new();
            for &f in &inside {
                let fc = &fine_cones[f];
                for fs in fc.facet_ray_sets() {
                    let wall: BTreeSet<IntVec> = fs.iter().map(|&j| fc.rays()[j].clone()).collect();
                    *walls.entry(wall).or_insert(0) += 1;
                }
            }
            for (wall, n) in walls {
                let on_boundary = cc
                    .facets()
                    .iter()
                    .any(|facet| wall.iter().all(|r| crate::linalg::dot(facet, r).is_zero()))
                    && {
                        let gens: Vec<IntVec> = wall.iter().cloned().collect();
                        Cone::from_generators(self.rank, &gens).expect("rank").dim() + 1 == cc.dim()
                    };
                let expected = if on_boundary { 1 } else { 2 };
                if n != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Number of maximal cones containing each ray.
    fn ray_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.rays.len()];
        for c in &self.max_cones {
            for &r in c {
                d[r] += 1;
            }
        }
        d
    }

    fn spanning_ray_basis(&self) -> Option<Vec<usize>> {
        let mut basis: Vec<usize> = Vec::new();
        for i in 0..self.rays.len() {
            let mut trial: Vec<IntVec> = basis.iter().map(|&b| self.rays[b].clone()).collect();
            trial.push(self.rays[i].clone());
            let m = IntegerMatrix::from_rows(self.rank, trial).expect("rank");
            if m.rank() == basis.len() + 1 {
                basis.push(i);
                if basis.len() == self.rank {
                    break;
                }
            }
        }
        (basis.len() == self.rank).then_some(basis)
    }

    /// Searches for a unimodular `M` with `M·ρ ∈ rays(other)` for every ray
    /// `ρ` and mapping maximal cones onto maximal cones. Exhaustive over
    /// assignments of a ray basis, pruned by ray degrees.
    pub fn isomorphism(&self, other: &Fan) -> Result<Option<IntegerMatrix>> {
        self.isomorphism_with_cap(other, ISOMORPHISM_RAY_CAP)
    }

    pub fn isomorphism_with_cap(&self, other: &Fan, cap: usize) -> Result<Option<IntegerMatrix>> {
        if self.rank != other.rank
            || self.rays.len() != other.rays.len()
            || self.max_cones.len() != other.max_cones.len()
        {
            return Ok(None);
        }
        if self.rays.len() > cap {
            return Err(Error::TooManyRays {
                rays: self.rays.len(),
                cap,
            });
        }
        let sizes = |f: &Fan| {
            let mut s: Vec<usize> = f.max_cones.iter().map(Vec::len).collect();
            s.sort_unstable();
            s
        };
        let (da, db) = (self.ray_degrees(), other.ray_degrees());
        let mut sa = da.clone();
        let mut sb = db.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sizes(self) != sizes(other) || sa != sb {
            return Ok(None);
        }
        if self.rank == 0 {
            return Ok(Some(IntegerMatrix::identity(0)));
        }
        let Some(basis) = self.spanning_ray_basis() else {
            return Err(Error::InvalidFan("rays do not span the lattice".into()));
        };
        let src = IntegerMatrix::from_columns(
            self.rank,
            &basis.iter().map(|&b| self.rays[b].clone()).collect::<Vec<_>>(),
        )?;
        let src_inv = src.rational_inverse().expect("basis is independent");
        let target_cones: BTreeSet<BTreeSet<usize>> =
            other.max_cones.iter().map(|c| c.iter().copied().collect()).collect();
        let target_index: BTreeMap<&IntVec, usize> = other.rays.iter().enumerate().map(|(i, r)| (r, i)).collect();

        let mut choice = Vec::with_capacity(basis.len());
        let mut used = vec![false; other.rays.len()];
        let mut found = None;
        self.search(
            other,
            &basis,
            &da,
            &db,
            &src_inv,
            &target_cones,
            &target_index,
            &mut choice,
            &mut used,
            &mut found,
        );
        Ok(found)
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        other: &Fan,
        basis: &[usize],
        da: &[usize],
        db: &[usize],
        src_inv: &[Vec<num_rational::BigRational>],
        target_cones: &BTreeSet<BTreeSet<usize>>,
        target_index: &BTreeMap<&IntVec, usize>,
        choice: &mut Vec<usize>,
        used: &mut [bool],
        found: &mut Option<IntegerMatrix>,
    ) {
        if found.is_some() {
            return;
        }
        if choice.len() == basis.len() {
            if let Some(m) = self.try_assignment(other, choice, src_inv, target_cones, target_index) {
                *found = Some(m);
            }
            return;
        }
        let next = basis[choice.len()];
        for t in 0..other.rays.len() {
            if used[t] || db[t] != da[next] {
                continue;
            }
            used[t] = true;
            choice.push(t);
            self.search(
                other,
                basis,
                da,
                db,
                src_inv,
                target_cones,
                target_index,
                choice,
                used,
                found,
            );
            choice.pop();
            used[t] = false;
        }
    }

    fn try_assignment(
        &self,
        other: &Fan,
        choice: &[usize],
        src_inv: &[Vec<num_rational::BigRational>],
        target_cones: &BTreeSet<BTreeSet<usize>>,
        target_index: &BTreeMap<&IntVec, usize>,
    ) -> Option<IntegerMatrix> {
        let d = self.rank;
        // M = T · S⁻¹ where S, T hold the basis rays and their images as columns.
        let mut rows = Vec::with_capacity(d);
        for i in 0..d {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                let mut acc = num_rational::BigRational::zero();
                for (k, &t) in choice.iter().enumerate() {
                    let tv = &other.rays[t][i];
                    if !tv.is_zero() {
                        acc += num_rational::BigRational::from_integer(tv.clone()) * &src_inv[k][j];
                    }
                }
                if !acc.is_integer() {
                    return None;
                }
                row.push(acc.to_integer());
            }
            rows.push(row);
        }
        let m = IntegerMatrix::from_rows(d, rows).ok()?;
        if !m.determinant().abs().is_one() {
            return None;
        }
        let mut image = Vec::with_capacity(self.rays.len());
        for r in &self.rays {
            image.push(*target_index.get(&m.mul_vec(r))?);
        }
        let mut seen = image.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != image.len() {
            return None;
        }
        let mapped: BTreeSet<BTreeSet<usize>> = self
            .max_cones
            .iter()
            .map(|c| c.iter().map(|&r| image[r]).collect())
            .collect();
        (&mapped == target_cones).then_some(m)
    }

    /// Applies a lattice automorphism to every ray.
    pub fn transform(&self, m: &IntegerMatrix) -> Result<Fan> {
        if !m.is_unimodular() || m.rows() != self.rank {
            return Err(Error::InvalidParameters("transform must be unimodular".into()));
        }
        let cones = self
            .max_cones
            .iter()
            .map(|c| c.iter().map(|&r| m.mul_vec(&self.rays[r])).collect())
            .collect();
        Ok(Self::from_ray_lists(self.rank, cones))
    }

    /// The product fan in `ℤ^(r₁+r₂)`.
    pub fn direct_sum(&self, other: &Fan) -> Fan {
        let rank = self.rank + other.rank;
        let lift = |r: &IntVec, left: bool| -> IntVec {
            let mut v = vec![BigInt::zero(); rank];
            let off = if left { 0 } else { self.rank };
            for (i, x) in r.iter().enumerate() {
                v[off + i] = x.clone();
            }
            v
        };
        let mut cones = Vec::new();
        for a in &self.max_cones {
            for b in &other.max_cones {
                let c: Vec<IntVec> = a
                    .iter()
                    .map(|&i| lift(&self.rays[i], true))
                    .chain(b.iter().map(|&j| lift(&other.rays[j], false)))
                    .collect();
                cones.push(c);
            }
        }
        Self::from_ray_lists(rank, cones)
    }

    /// The smallest maximal cone containing `x`, if any.
    pub fn locate(&self, x: &[BigInt]) -> Option<usize> {
        (0..self.max_cones.len()).find(|&i| self.cone(i).contains(x))
    }

    pub fn has_ray(&self, r: &[BigInt]) -> bool {
        primitive(r).is_ok_and(|p| self.rays.contains(&p))
    }
}

/// Searches for a unimodular `M` under which `coarse` becomes a coarsening
/// of `fine` (rays of a coarsening are rays of the refinement, so a basis of
/// coarse rays is matched against fine rays).
pub fn coarsening_embedding(coarse: &Fan, fine: &Fan) -> Result<Option<IntegerMatrix>> {
    if coarse.rank != fine.rank {
        return Ok(None);
    }
    if coarse.rank == 0 {
        return Ok(Some(IntegerMatrix::identity(0)));
    }
    let Some(basis) = coarse.spanning_ray_basis() else {
        return Err(Error::InvalidFan("rays do not span the lattice".into()));
    };
    let src = IntegerMatrix::from_columns(
        coarse.rank,
        &basis.iter().map(|&b| coarse.rays[b].clone()).collect::<Vec<_>>(),
    )?;
    let src_inv = src.rational_inverse().expect("independent basis");
    let n = fine.rays.len();
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    while let Some(choice) = stack.pop() {
        if choice.len() == basis.len() {
            let cols: Vec<IntVec> = choice.iter().map(|&t| fine.rays[t].clone()).collect();
            let t = IntegerMatrix::from_columns(coarse.rank, &cols)?;
            let mut rows = Vec::new();
            let mut integral = true;
            for i in 0..coarse.rank {
                let mut row = Vec::new();
                for j in 0..coarse.rank {
                    let mut acc = num_rational::BigRational::zero();
                    for k in 0..coarse.rank {
                        acc += num_rational::BigRational::from_integer(t[(i, k)].clone()) * &src_inv[k][j];
                    }
                    integral &= acc.is_integer();
                    row.push(acc.to_integer());
                }
                rows.push(row);
            }
            if !integral {
                continue;
            }
            let m = IntegerMatrix::from_rows(coarse.rank, rows)?;
            if !m.is_unimodular() {
                continue;
            }
            let moved = coarse.transform(&m)?;
            if moved.rays.iter().all(|r| fine.rays.contains(r)) && moved.is_coarsening_of(fine) {
                return Ok(Some(m));
            }
            continue;
        }
        for t in (0..n).rev() {
            if !choice.contains(&t) {
                let mut c = choice.clone();
                c.push(t);
                stack.push(c);
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;

    pub(crate) fn p2() -> Fan {
        Fan::new(
            2,
            vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    fn hexagon() -> Fan {
        let rays = [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]];
        Fan::new(
            2,
            rays.iter().map(|r| int_vec(r)).collect(),
            (0..6).map(|i| vec![i, (i + 1) % 6]).collect(),
        )
        .unwrap()
    }

    fn p1xp1() -> Fan {
        let rays = [[1, 0], [0, 1], [-1, 0], [0, -1]];
        Fan::new(
            2,
            rays.iter().map(|r| int_vec(r)).collect(),
            (0..4).map(|i| vec![i, (i + 1) % 4]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn reports() {
        let r = p2().report();
        assert!(r.is_smooth && r.is_complete && r.is_simplicial);
        assert_eq!(r.picard_number, Some(1));
        let h = hexagon().report();
        assert!(h.is_smooth && h.is_complete);
        assert_eq!(h.picard_number, Some(4));
        let orthant = Fan::new(2, vec![int_vec(&[1, 0]), int_vec(&[0, 1])], vec![vec![0, 1]]).unwrap();
        let o = orthant.report();
        assert!(!o.is_complete);
        assert_eq!(o.picard_number, None);
        let t = Fan::trivial().report();
        assert!(t.is_complete && t.is_smooth);
        assert_eq!(t.picard_number, Some(0));
    }

    #[test]
    fn canonical_form_ignores_input_order() {
        let a = p2();
        let b = Fan::new(
            2,
            vec![int_vec(&[-2, -2]), int_vec(&[0, 1]), int_vec(&[1, 0])],
            vec![vec![2, 0], vec![0, 1], vec![1, 2]],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn isomorphism_examples() {
        let m = p2().isomorphism(&p2()).unwrap().unwrap();
        assert!(m.is_unimodular());
        assert_eq!(p2().transform(&m).unwrap(), p2());
        assert_eq!(p2().isomorphism(&p1xp1()).unwrap(), None);
        let h2 = hexagon()
            .transform(&IntegerMatrix::from_i64(&[&[2, 1], &[1, 1]]))
            .unwrap();
        let m = hexagon().isomorphism(&h2).unwrap().unwrap();
        assert_eq!(hexagon().transform(&m).unwrap(), h2);
    }

    #[test]
    fn isomorphism_cap() {
        assert!(matches!(
            hexagon().isomorphism_with_cap(&hexagon(), 5),
            Err(Error::TooManyRays { rays: 6, cap: 5 })
        ));
    }

    #[test]
    fn validity_and_coarsening() {
        assert!(hexagon().check_valid().is_ok());
        assert!(p2().is_coarsening_of(&hexagon()));
        assert!(p1xp1().is_coarsening_of(&hexagon()));
        assert!(!hexagon().is_coarsening_of(&p2()));
        assert!(hexagon().is_coarsening_of(&hexagon()));
        let overlapping = Fan::new(
            2,
            vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[1, 1])],
            vec![vec![0, 1], vec![0, 2]],
        )
        .unwrap();
        assert!(overlapping.check_valid().is_err());
    }

    #[test]
    fn embedding_search() {
        let m = coarsening_embedding(&p2(), &hexagon()).unwrap();
        assert!(m.is_some());
        let flipped = p2().transform(&IntegerMatrix::from_i64(&[&[-1, 0], &[0, -1]])).unwrap();
        assert!(!flipped.is_coarsening_of(&p2()));
        assert!(coarsening_embedding(&flipped, &p2()).unwrap().is_some());
    }

    #[test]
    fn products() {
        let p1 = Fan::new(1, vec![int_vec(&[1]), int_vec(&[-1])], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(p1.direct_sum(&p1), p1xp1());
    }
}
