use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cone::Cone;
use super::fan::Fan;
use crate::linalg::{integer_kernel, primitive_from_rational, IntVec, IntegerMatrix, RatVec};
use crate::{Error, Result};

/// A rational polyhedron `{x : c·x + b ≥ 0, e·x + d = 0}`, stored as integer
/// rows `[c…, b]` and `[e…, d]`.
#[derive(Clone, Debug)]
pub struct Polytope {
    rank: usize,
    inequalities: Vec<IntVec>,
    equations: Vec<IntVec>,
    vertices: Option<Vec<RatVec>>,
}

fn homogenize(p: &[BigRational]) -> IntVec {
    let den = p.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut v: IntVec = p.iter().map(|x| (x * &den).to_integer()).collect();
    v.push(den);
    v
}

impl Polytope {
    pub fn new(rank: usize, inequalities: Vec<IntVec>, equations: Vec<IntVec>) -> Result<Self> {
        for row in inequalities.iter().chain(&equations) {
            if row.len() != rank + 1 {
                return Err(Error::DimensionMismatch {
                    expected: rank + 1,
                    got: row.len(),
                });
            }
        }
        Ok(Self {
            rank,
            inequalities,
            equations,
            vertices: None,
        })
    }

    /// Convex hull of finitely many rational points.
    pub fn from_vertices(rank: usize, points: &[RatVec]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty);
        }
        for p in points {
            if p.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: p.len(),
                });
            }
        }
        let gens: Vec<IntVec> = points.iter().map(|p| homogenize(p)).collect();
        let cone = Cone::from_generators(rank + 1, &gens)?;
        let mut vertices: Vec<RatVec> = cone
            .rays()
            .iter()
            .map(|r| {
                let t = &r[rank];
                r[..rank]
                    .iter()
                    .map(|x| BigRational::new(x.clone(), t.clone()))
                    .collect()
            })
            .collect();
        vertices.sort();
        Ok(Self {
            rank,
            inequalities: cone.facets().to_vec(),
            equations: cone.equations().to_vec(),
            vertices: Some(vertices),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn inequalities(&self) -> &[IntVec] {
        &self.inequalities
    }

    pub fn equations(&self) -> &[IntVec] {
        &self.equations
    }

    /// Exact vertex list, sorted. Empty for the empty polytope; an error when
    /// the polyhedron has a nonzero recession cone.
    pub fn vertices(&self) -> Result<Vec<RatVec>> {
        if let Some(v) = &self.vertices {
            return Ok(v.clone());
        }
        let d = self.rank;
        let mut ineqs = self.inequalities.clone();
        let mut t = vec![BigInt::zero(); d + 1];
        t[d] = BigInt::one();
        ineqs.push(t);
        let cone = Cone::from_inequalities(d + 1, &ineqs, &self.equations)?;
        let mut vertices = Vec::new();
        let mut recession = !cone.lineality().is_empty();
        for r in cone.rays() {
            if r[d].is_positive() {
                vertices.push(
                    r[..d]
                        .iter()
                        .map(|x| BigRational::new(x.clone(), r[d].clone()))
                        .collect::<RatVec>(),
                );
            } else {
                recession = true;
            }
        }
        if vertices.is_empty() {
            return Ok(vec![]);
        }
        if recession {
            return Err(Error::Unbounded);
        }
        vertices.sort();
        Ok(vertices)
    }

    /// Some lattice point, if any. Branches on coordinates in order, each
    /// bounded by the vertex range of the slice fixed so far.
    pub fn find_lattice_point(&self) -> Result<Option<IntVec>> {
        let mut found = None;
        self.lattice_search(0, &mut |x| {
            found = Some(x);
            false
        })?;
        Ok(found)
    }

    /// All lattice points, sorted.
    pub fn lattice_points(&self) -> Result<Vec<IntVec>> {
        let mut all = Vec::new();
        self.lattice_search(0, &mut |x| {
            all.push(x);
            true
        })?;
        all.sort();
        Ok(all)
    }

    /// Returns false once `visit` asks to stop.
    fn lattice_search(&self, j: usize, visit: &mut dyn FnMut(IntVec) -> bool) -> Result<bool> {
        let vs = self.vertices()?;
        if vs.is_empty() {
            return Ok(true);
        }
        if j == self.rank {
            // every coordinate is pinned, so the single vertex is integral
            let x: IntVec = vs[0].iter().map(|c| c.to_integer()).collect();
            return Ok(visit(x));
        }
        let lo = vs.iter().map(|v| v[j].ceil()).min().expect("nonempty").to_integer();
        let hi = vs.iter().map(|v| v[j].floor()).max().expect("nonempty").to_integer();
        let mut a = lo;
        while a <= hi {
            let mut row = vec![BigInt::zero(); self.rank + 1];
            row[j] = BigInt::one();
            row[self.rank] = -a.clone();
            let mut eqs = self.equations.clone();
            eqs.push(row);
            let slice = Polytope::new(self.rank, self.inequalities.clone(), eqs)?;
            if !slice.lattice_search(j + 1, visit)? {
                return Ok(false);
            }
            a += 1;
        }
        Ok(true)
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self.vertices(), Err(Error::Unbounded))
    }

    pub fn is_empty(&self) -> Result<bool> {
        match self.vertices() {
            Ok(v) => Ok(v.is_empty()),
            Err(Error::Unbounded) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn nonempty_vertices(&self) -> Result<Vec<RatVec>> {
        let v = self.vertices()?;
        if v.is_empty() {
            return Err(Error::Empty);
        }
        Ok(v)
    }

    /// Saturated basis (HNF rows) of the lattice of the affine span's
    /// direction space.
    pub fn direction_lattice(&self) -> Result<IntegerMatrix> {
        let v = self.nonempty_vertices()?;
        let diffs: Vec<IntVec> = v[1..]
            .iter()
            .map(|w| {
                let d: RatVec = w.iter().zip(&v[0]).map(|(a, b)| a - b).collect();
                primitive_from_rational(&d)
            })
            .collect();
        let d = IntegerMatrix::from_rows(self.rank, diffs)?;
        Ok(integer_kernel(&integer_kernel(&d)))
    }

    /// Inner normal fan, in the dual of the direction lattice `M`: an integer
    /// covector `c` corresponds to `M·c`.
    pub fn normal_fan(&self) -> Result<Fan> {
        Ok(self.normal_fan_with_lattice()?.0)
    }

    pub fn normal_fan_with_lattice(&self) -> Result<(Fan, IntegerMatrix)> {
        let v = self.nonempty_vertices()?;
        let m = self.direction_lattice()?;
        let d = m.rows();
        if d == 0 {
            return Ok((Fan::trivial(), m));
        }
        // Coordinates of w − v₀ in the basis M: a = (w − v₀)·Mᵀ·(M·Mᵀ)⁻¹.
        let gram = m.mul(&m.transpose())?;
        let gram_inv = gram.rational_inverse().expect("basis rows are independent");
        let coords: Vec<RatVec> = v
            .iter()
            .map(|w| {
                let diff: RatVec = w.iter().zip(&v[0]).map(|(a, b)| a - b).collect();
                let proj: RatVec = m.mul_rat_vec(&diff);
                (0..d)
                    .map(|j| (0..d).fold(BigRational::zero(), |acc, i| acc + &proj[i] * &gram_inv[i][j]))
                    .collect()
            })
            .collect();
        let mut cones = Vec::with_capacity(v.len());
        for a in &coords {
            let edges: Vec<IntVec> = coords
                .iter()
                .filter(|b| *b != a)
                .map(|b| {
                    let e: RatVec = b.iter().zip(a).map(|(x, y)| x - y).collect();
                    primitive_from_rational(&e)
                })
                .collect();
            cones.push(Cone::from_generators(d, &edges)?.dual());
        }
        Ok((Fan::from_cones(d, &cones)?, m))
    }

    /// Image under the affine map `x ↦ A·x`.
    pub fn linear_image(&self, a: &IntegerMatrix) -> Result<Polytope> {
        let v = self.nonempty_vertices()?;
        let pts: Vec<RatVec> = v.iter().map(|p| a.mul_rat_vec(p)).collect();
        Polytope::from_vertices(a.rows(), &pts)
    }
}

/// Minkowski sum of bounded nonempty polytopes: pairwise vertex sums, then
/// the convex hull, folded left to right.
pub fn minkowski_sum(ps: &[Polytope]) -> Result<Polytope> {
    let Some(first) = ps.first() else {
        return Err(Error::Empty);
    };
    let rank = first.rank;
    let mut acc = first.nonempty_vertices()?;
    for p in &ps[1..] {
        if p.rank != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                got: p.rank,
            });
        }
        let vs = p.nonempty_vertices()?;
        let mut sums = Vec::with_capacity(acc.len() * vs.len());
        for a in &acc {
            for b in &vs {
                sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect::<RatVec>());
            }
        }
        sums.sort();
        sums.dedup();
        acc = Polytope::from_vertices(rank, &sums)?.nonempty_vertices()?;
    }
    Polytope::from_vertices(rank, &acc)
}
