//! Quotients of affine charts by torus actions.
//!
//! A chart with coordinates `x₁…x_N` acted on with weights `m₁…m_N ∈ ℤʳ`
//! is described by its weight matrix `W`. The lattice map `q` is given by a
//! transposed Gale dual `Q`, and the quotient fan is the chamber complex of
//! the columns of `Q`. GIT quotients are indexed by the chambers of the
//! columns of `W`; the quotient at `v` is the toric variety of the normal fan
//! of `{x ≥ 0 : W·x = v}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::{
    dot, has_unit_invariants, primitive, transposed_gale_dual, unimodular_extension, IntVec, IntegerMatrix, RatVec,
};
use crate::polyhedral::{chamber_cells, chamber_fan, chamber_refinement, minkowski_sum, Cone, Fan, Polytope};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    w: IntegerMatrix,
    labels: Vec<String>,
}

impl WeightSystem {
    /// `w` must have full row rank. Labels default to `x1…xN`.
    pub fn new(w: IntegerMatrix, labels: Option<Vec<String>>) -> Result<Self> {
        if w.rank() != w.rows() {
            return Err(Error::NotFullRank);
        }
        let labels = match labels {
            Some(l) if l.len() != w.cols() => {
                return Err(Error::DimensionMismatch {
                    expected: w.cols(),
                    got: l.len(),
                })
            }
            Some(l) => l,
            None => (1..=w.cols()).map(|i| format!("x{i}")).collect(),
        };
        Ok(Self { w, labels })
    }

    pub fn from_weights(rank: usize, weights: &[IntVec], labels: Option<Vec<String>>) -> Result<Self> {
        Self::new(IntegerMatrix::from_columns(rank, weights)?, labels)
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.w
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Rank `r` of the acting torus.
    pub fn rank(&self) -> usize {
        self.w.rows()
    }

    /// Number `N` of coordinates.
    pub fn len(&self) -> usize {
        self.w.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.w.cols() == 0
    }

    pub fn weights(&self) -> Vec<IntVec> {
        self.w.columns()
    }

    pub fn gale(&self) -> Result<GaleProjection> {
        Ok(GaleProjection {
            q: transposed_gale_dual(&self.w)?,
        })
    }

    /// The cone `π(P)` spanned by the weights.
    pub fn weight_cone(&self) -> Cone {
        Cone::from_generators(self.rank(), &self.weights()).expect("columns have the row count")
    }
}

/// The surjection `q : ℤᴺ → ℤᴺ⁻ʳ` as a saturated HNF matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaleProjection {
    q: IntegerMatrix,
}

impl GaleProjection {
    pub fn matrix(&self) -> &IntegerMatrix {
        &self.q
    }

    pub fn into_matrix(self) -> IntegerMatrix {
        self.q
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullDefiniteness {
    pub fully_definite: bool,
    /// Unimodular `U` with `U·W ≥ 0` entrywise and no zero column.
    pub certificate: Option<IntegerMatrix>,
}

/// Fully definite means nonnegative weights without zero columns in some
/// lattice basis. That holds exactly when no weight vanishes and the weights
/// span a pointed cone: a strictly positive primitive covector `c` extends to
/// a basis, and the other basis vectors can be sheared into the dual cone by
/// adding multiples of `c`.
pub fn is_fully_definite(w: &IntegerMatrix) -> FullDefiniteness {
    let no = FullDefiniteness {
        fully_definite: false,
        certificate: None,
    };
    let cols = w.columns();
    if cols.iter().any(|c| c.iter().all(Zero::is_zero)) {
        return no;
    }
    let cone = Cone::from_generators(w.rows(), &cols).expect("column length is the row count");
    if !cone.is_pointed() {
        return no;
    }
    let dual = cone.dual();
    let mut c = dual.interior_point();
    if c.iter().all(Zero::is_zero) {
        // rank 0: nothing to certify
        return FullDefiniteness {
            fully_definite: true,
            certificate: Some(IntegerMatrix::identity(w.rows())),
        };
    }
    c = primitive(&c).expect("nonzero");
    let pairings: Vec<BigInt> = cols.iter().map(|m| dot(&c, m)).collect();
    debug_assert!(pairings.iter().all(Signed::is_positive));
    let base = unimodular_extension(&c).expect("primitive");
    let mut rows = vec![c.clone()];
    for j in 1..w.rows() {
        let b = base.row(j).to_vec();
        let mut lambda = BigInt::zero();
        for (m, cm) in cols.iter().zip(&pairings) {
            let need = (-dot(&b, m)).div_ceil(cm);
            if need > lambda {
                lambda = need;
            }
        }
        rows.push(b.iter().zip(&c).map(|(x, y)| x + &lambda * y).collect());
    }
    let u = IntegerMatrix::from_rows(w.rows(), rows).expect("square");
    FullDefiniteness {
        fully_definite: true,
        certificate: Some(u),
    }
}

/// Checks a certificate independently of how it was built.
pub fn certificate_is_valid(w: &IntegerMatrix, u: &IntegerMatrix) -> bool {
    if !u.is_unimodular() || u.cols() != w.rows() {
        return false;
    }
    let uw = u.mul(w).expect("shapes agree");
    uw.columns()
        .iter()
        .all(|c| c.iter().all(|x| !x.is_negative()) && c.iter().any(|x| !x.is_zero()))
}

/// The quotient fan of the positive orthant under `q`: the chamber complex
/// of the columns of `q`.
pub fn quotient_fan_of_projection(q: &IntegerMatrix) -> Result<Fan> {
    if q.rows() == 0 {
        return Ok(Fan::trivial());
    }
    chamber_fan(q.rows(), &q.columns())
}

pub fn quotient_fan(ws: &WeightSystem) -> Result<Fan> {
    quotient_fan_of_projection(ws.gale()?.matrix())
}

/// Quotient of an arbitrary fan by a saturated surjection `q`.
pub fn quotient_fan_general(f: &Fan, q: &IntegerMatrix) -> Result<Fan> {
    if q.cols() != f.rank() {
        return Err(Error::DimensionMismatch {
            expected: f.rank(),
            got: q.cols(),
        });
    }
    if q.rank() != q.rows() || (q.rows() > 0 && !has_unit_invariants(q)) {
        return Err(Error::NotSurjective);
    }
    if q.rows() == 0 {
        return Ok(Fan::trivial());
    }
    let mut images = Vec::new();
    for cone in f.all_cones() {
        let gens: Vec<IntVec> = cone.iter().map(|&r| q.mul_vec(&f.rays()[r])).collect();
        let image = Cone::from_generators(q.rows(), &gens)?;
        if image.is_full_dimensional() {
            images.push(image);
        }
    }
    chamber_refinement(q.rows(), &images)
}

/// GIT chambers inside the weight cone, each with an integral interior point.
#[derive(Clone, Debug)]
pub struct ChamberComplex {
    pub rank: usize,
    pub support: Cone,
    pub chambers: Vec<Cone>,
    pub representatives: Vec<IntVec>,
}

pub fn git_chambers(ws: &WeightSystem) -> Result<ChamberComplex> {
    let chambers = chamber_cells(ws.rank(), &ws.weights())?;
    let representatives = chambers.iter().map(Cone::interior_point).collect();
    Ok(ChamberComplex {
        rank: ws.rank(),
        support: ws.weight_cone(),
        chambers,
        representatives,
    })
}

/// `{x ∈ ℚᴺ : x ≥ 0, W·x = v}`.
pub fn fiber_polytope(ws: &WeightSystem, v: &[BigRational]) -> Result<Polytope> {
    let (r, n) = (ws.rank(), ws.len());
    if v.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: v.len(),
        });
    }
    let ineqs: Vec<IntVec> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n + 1];
            row[i] = BigInt::one();
            row
        })
        .collect();
    let eqs: Vec<IntVec> = (0..r)
        .map(|j| {
            let den = v[j].denom().clone();
            let mut row: IntVec = ws.matrix().row(j).iter().map(|x| x * &den).collect();
            row.push(-(&v[j] * BigRational::from_integer(den)).to_integer());
            row
        })
        .collect();
    Polytope::new(n, ineqs, eqs)
}

pub fn integral_point(v: &[BigInt]) -> RatVec {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Normal fan of the fiber over `v`. When the fiber spans `ker W` this fan
/// lives in the same coordinates as the quotient fan (the direction lattice
/// of the fiber is then the row lattice of `Q`).
pub fn git_quotient_fan(ws: &WeightSystem, v: &[BigRational]) -> Result<Fan> {
    let p = fiber_polytope(ws, v)?;
    match p.vertices() {
        Err(Error::Unbounded) => return Err(Error::NotFullyDefinite),
        Err(e) => return Err(e),
        Ok(vs) if vs.is_empty() => return Err(Error::Empty),
        Ok(_) => {}
    }
    p.normal_fan()
}

/// For each coordinate, whether some point of the fiber over `v` has that
/// coordinate zero (equivalently some vertex does, the fiber being bounded
/// and the coordinate nonnegative). This is the lattice-point test over a
/// large enough multiple `k·v`, so it depends only on the ray of `v`; the
/// pattern at a chamber interior deletes exactly the orbit closures the
/// chamber misses.
pub fn semistable_support(ws: &WeightSystem, v: &[BigRational]) -> Result<Vec<bool>> {
    let p = fiber_polytope(ws, v)?;
    let vs = match p.vertices() {
        Err(Error::Unbounded) => return Err(Error::NotFullyDefinite),
        Err(e) => return Err(e),
        Ok(vs) if vs.is_empty() => return Err(Error::Empty),
        Ok(vs) => vs,
    };
    Ok((0..ws.len()).map(|i| vs.iter().any(|x| x[i].is_zero())).collect())
}

/// The same test with lattice points of the fiber over `v` itself. Below
/// the saturation level it can force extra coordinates positive: on the odd
/// quadric of rank 3 at `v = (−3, −1, −1)` the face `x₁ = 0` is a nonempty
/// rational segment without lattice points.
pub fn lattice_semistable_support(ws: &WeightSystem, v: &[BigRational]) -> Result<Vec<bool>> {
    let p = fiber_polytope(ws, v)?;
    match p.vertices() {
        Err(Error::Unbounded) => return Err(Error::NotFullyDefinite),
        Err(e) => return Err(e),
        Ok(vs) if vs.is_empty() => return Err(Error::Empty),
        Ok(_) => {}
    }
    (0..ws.len())
        .map(|i| {
            let mut row = vec![BigInt::zero(); ws.len() + 1];
            row[i] = BigInt::one();
            let mut eqs = p.equations().to_vec();
            eqs.push(row);
            let face = Polytope::new(ws.len(), p.inequalities().to_vec(), eqs)?;
            Ok(face.find_lattice_point()?.is_some())
        })
        .collect()
}

/// Minkowski sum of the fibers over one integral point of each chamber.
pub fn chow_polytope(ws: &WeightSystem) -> Result<Polytope> {
    if !is_fully_definite(ws.matrix()).fully_definite {
        return Err(Error::NotFullyDefinite);
    }
    let cx = git_chambers(ws)?;
    let fibers: Vec<Polytope> = cx
        .representatives
        .iter()
        .map(|v| fiber_polytope(ws, &integral_point(v)))
        .collect::<Result<_>>()?;
    minkowski_sum(&fibers)
}

/// Least common multiple of the denominators, used to scale rational
/// representatives to integral ones.
pub fn clear_denominators(v: &[BigRational]) -> IntVec {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, rat};
    use proptest::prelude::*;

    fn b(n: usize) -> WeightSystem {
        // −e₁, eᵢ − e₁ (i ≥ 2), −eᵢ − e₁ (i ≥ 2)
        let mut cols = vec![];
        let e = |i: usize, s: i64| {
            let mut v = vec![0i64; n];
            v[0] = -1;
            if i > 0 {
                v[i] += s;
            }
            int_vec(&v)
        };
        cols.push(e(0, 0));
        for i in 1..n {
            cols.push(e(i, 1));
        }
        for i in 1..n {
            cols.push(e(i, -1));
        }
        WeightSystem::from_weights(n, &cols, None).unwrap()
    }

    fn p2_fan() -> Fan {
        Fan::new(
            2,
            vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap()
    }

    fn rv(v: &[i64]) -> RatVec {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let w = IntegerMatrix::from_i64(&[&[1, 0], &[2, 0]]);
        assert_eq!(WeightSystem::new(w, None), Err(Error::NotFullRank));
    }

    #[test]
    fn full_definiteness_examples() {
        let b2 = IntegerMatrix::from_i64(&[&[-1, -1, -1], &[0, 1, -1]]);
        let fd = is_fully_definite(&b2);
        assert!(fd.fully_definite);
        assert!(certificate_is_valid(&b2, fd.certificate.as_ref().unwrap()));
        assert!(!is_fully_definite(&IntegerMatrix::from_i64(&[&[1, -1]])).fully_definite);
        assert!(!is_fully_definite(&IntegerMatrix::from_i64(&[&[1, 0]])).fully_definite);
        assert!(!is_fully_definite(&IntegerMatrix::from_i64(&[&[1, 0], &[0, 0]])).fully_definite);
    }

    #[test]
    fn certificate_rejects_bad_matrices() {
        let w = IntegerMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert!(certificate_is_valid(&w, &IntegerMatrix::identity(2)));
        assert!(!certificate_is_valid(&w, &IntegerMatrix::from_i64(&[&[2, 0], &[0, 1]])));
        assert!(!certificate_is_valid(
            &w,
            &IntegerMatrix::from_i64(&[&[0, 1], &[1, -2]])
        ));
    }

    #[test]
    fn odd_quadric_quotient_is_projective_plane() {
        assert_eq!(quotient_fan(&b(3)).unwrap(), p2_fan());
    }

    #[test]
    fn tangent_bundle_quotient() {
        let w = IntegerMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1]]);
        let ws = WeightSystem::new(w, None).unwrap();
        let f = quotient_fan(&ws).unwrap();
        assert_eq!(f.rays(), &[int_vec(&[-1]), int_vec(&[1])]);
        assert_eq!(git_chambers(&ws).unwrap().chambers.len(), 2);
    }

    #[test]
    fn degenerate_square_system() {
        let ws = WeightSystem::new(IntegerMatrix::from_i64(&[&[1]]), None).unwrap();
        assert_eq!(quotient_fan(&ws).unwrap(), Fan::trivial());
        let cx = git_chambers(&ws).unwrap();
        assert_eq!(cx.chambers.len(), 1);
        assert_eq!(semistable_support(&ws, &rv(&[1])).unwrap(), vec![false]);
    }

    #[test]
    fn general_quotient_examples() {
        let p1 = Fan::new(1, vec![int_vec(&[1]), int_vec(&[-1])], vec![vec![0], vec![1]]).unwrap();
        let to_point = IntegerMatrix::zeros(0, 1);
        assert_eq!(quotient_fan_general(&p1, &to_point).unwrap(), Fan::trivial());
        assert_eq!(
            quotient_fan_general(&p2_fan(), &IntegerMatrix::identity(2)).unwrap(),
            p2_fan()
        );
        let not_saturated = IntegerMatrix::from_i64(&[&[2, 0]]);
        assert_eq!(
            quotient_fan_general(&p2_fan(), &not_saturated),
            Err(Error::NotSurjective)
        );
    }

    #[test]
    fn odd_quadric_chambers() {
        assert_eq!(git_chambers(&b(3)).unwrap().chambers.len(), 4);
        let cx = git_chambers(&b(3)).unwrap();
        for (c, v) in cx.chambers.iter().zip(&cx.representatives) {
            assert!(c.relative_interior_contains(v));
            assert_eq!(git_quotient_fan(&b(3), &integral_point(v)).unwrap(), p2_fan());
        }
    }

    #[test]
    fn fibers() {
        let b2 = WeightSystem::new(IntegerMatrix::from_i64(&[&[-1, -1, -1], &[0, 1, -1]]), None).unwrap();
        let p = fiber_polytope(&b2, &rv(&[-2, 0])).unwrap();
        assert_eq!(p.vertices().unwrap(), vec![rv(&[0, 1, 1]), rv(&[2, 0, 0])]);
        let fan = git_quotient_fan(&b2, &rv(&[-2, 0])).unwrap();
        assert_eq!(fan.report().ray_count, 2);
        assert_eq!(git_quotient_fan(&b2, &rv(&[0, 0])).unwrap(), Fan::trivial());
        assert_eq!(semistable_support(&b2, &rv(&[0, 0])).unwrap(), vec![true; 3]);
        let u = WeightSystem::new(IntegerMatrix::from_i64(&[&[1, -1]]), None).unwrap();
        assert!(!fiber_polytope(&u, &rv(&[0])).unwrap().is_bounded());
        assert_eq!(git_quotient_fan(&u, &rv(&[0])), Err(Error::NotFullyDefinite));
        let outside = fiber_polytope(&b2, &rv(&[1, 0])).unwrap();
        assert!(outside.is_empty().unwrap());
    }

    #[test]
    fn rational_linearization() {
        let b2 = WeightSystem::new(IntegerMatrix::from_i64(&[&[-1, -1, -1], &[0, 1, -1]]), None).unwrap();
        let p = fiber_polytope(&b2, &[rat(-1, 2), rat(0, 1)]).unwrap();
        assert_eq!(
            p.vertices().unwrap(),
            vec![
                vec![rat(0, 1), rat(1, 4), rat(1, 4)],
                vec![rat(1, 2), rat(0, 1), rat(0, 1)]
            ]
        );
    }

    #[test]
    fn semistable_pattern_in_a_chamber() {
        // v = (−3, 1, 1) lies in cone{−e₁, e₂−e₁, e₃−e₁}; the fiber's vertices
        // are (1,1,1,0,0), (0,3/2,1,1/2,0), (0,1,3/2,0,1/2).
        let flags = semistable_support(&b(3), &rv(&[-3, 1, 1])).unwrap();
        assert_eq!(flags, vec![true, false, false, true, true]);
    }

    #[test]
    fn chow_polytope_of_odd_quadric() {
        let p = chow_polytope(&b(3)).unwrap();
        assert_eq!(p.normal_fan().unwrap(), quotient_fan(&b(3)).unwrap());
        let not_fd = WeightSystem::new(IntegerMatrix::from_i64(&[&[1, -1]]), None).unwrap();
        assert!(matches!(chow_polytope(&not_fd), Err(Error::NotFullyDefinite)));
    }

    #[test]
    fn single_chamber_chow_is_its_fiber() {
        let ws = WeightSystem::new(IntegerMatrix::from_i64(&[&[1, 1, 1]]), None).unwrap();
        let cx = git_chambers(&ws).unwrap();
        assert_eq!(cx.chambers.len(), 1);
        let fiber = fiber_polytope(&ws, &integral_point(&cx.representatives[0])).unwrap();
        assert_eq!(
            chow_polytope(&ws).unwrap().vertices().unwrap(),
            fiber.vertices().unwrap()
        );
    }

    fn unimodular_2x2() -> impl Strategy<Value = IntegerMatrix> {
        prop::collection::vec((0usize..2, -2i64..=2), 1..5).prop_map(|ops| {
            let mut m = IntegerMatrix::identity(2);
            for (i, c) in ops {
                let mut e = IntegerMatrix::identity(2);
                let mut rows = e.to_rows();
                rows[i][1 - i] = BigInt::from(c);
                e = IntegerMatrix::from_rows(2, rows).unwrap();
                m = e.mul(&m).unwrap();
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn quotient_fan_is_basis_invariant(u in unimodular_2x2()) {
            let q = b(3).gale().unwrap().into_matrix();
            let moved = quotient_fan_of_projection(&u.mul(&q).unwrap()).unwrap();
            prop_assert_eq!(moved, quotient_fan(&b(3)).unwrap().transform(&u).unwrap());
        }

        #[test]
        fn certificates_hold_for_pointed_systems(cols in prop::collection::vec(prop::collection::vec(0i64..=3, 3), 3..6)) {
            // nonnegative columns are pointed; shear by a fixed unimodular map
            let g = IntegerMatrix::from_i64(&[&[1, 2, 0], &[0, 1, -1], &[1, 2, 1]]);
            prop_assume!(g.is_unimodular());
            prop_assume!(cols.iter().all(|c| c.iter().any(|&x| x != 0)));
            let w = g.mul(&IntegerMatrix::from_columns(3, &cols.iter().map(|c| int_vec(c)).collect::<Vec<_>>()).unwrap()).unwrap();
            let fd = is_fully_definite(&w);
            prop_assert!(fd.fully_definite);
            prop_assert!(certificate_is_valid(&w, fd.certificate.as_ref().unwrap()));
        }
    }
}
