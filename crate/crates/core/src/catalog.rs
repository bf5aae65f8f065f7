//! Example families: weight matrices of Bruhat charts, their expected Gale
//! duals, standard fans and fixed-point weights.
//!
//! Coordinate orders:
//! - `ptpn`: weights `α₁, α₁+α₂, …, α₁+⋯+αₙ, α₂+⋯+αₙ, …, αₙ`, rows in the
//!   simple-root basis.
//! - `quadric_odd`: `ρ₁, ρ₂⁺…ρₙ⁺, ρ₂⁻…ρₙ⁻` with weights `−e₁, eᵢ−e₁, −eᵢ−e₁`.
//! - `quadric_even`: `ρ₂⁺…ρₙ⁺, ρ₂⁻…ρₙ⁻` with weights `eᵢ−e₁, −eᵢ−e₁`.
//! - `grassmann`: `u^j_ℓ` in `(j, ℓ)` lexicographic order, `j = 0..k`,
//!   `ℓ = k+1..n`, with weight `t_ℓ − t_j` (`t₀ = 0`), rows `t₁…tₙ`.
//! - `product_diagonal`: `k` affine coordinates per copy of `ℙᵏ`, weights
//!   `e₁…e_k` in each copy.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::linalg::{integer_kernel, IntVec, IntegerMatrix, RatVec};
use crate::polyhedral::{Fan, Polytope};
use crate::quotients::WeightSystem;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartSpec {
    Ptpn { n: usize },
    QuadricOdd { n: usize },
    QuadricEven { n: usize },
    Grassmann { n: usize, k: usize },
    ProductDiagonal { k: usize, copies: usize },
}

impl ChartSpec {
    /// Builds a spec from a family name and the relevant parameters.
    pub fn parse(family: &str, n: Option<usize>, k: Option<usize>, copies: Option<usize>) -> Result<Self> {
        let need = |x: Option<usize>, name: &str| {
            x.ok_or_else(|| Error::InvalidParameters(format!("{family} requires --{name}")))
        };
        let spec = match family {
            "ptpn" => ChartSpec::Ptpn { n: need(n, "n")? },
            "quadric_odd" => ChartSpec::QuadricOdd { n: need(n, "n")? },
            "quadric_even" => ChartSpec::QuadricEven { n: need(n, "n")? },
            "grassmann" => ChartSpec::Grassmann {
                n: need(n, "n")?,
                k: need(k, "k")?,
            },
            "product_diagonal" => ChartSpec::ProductDiagonal {
                k: need(k, "k")?,
                copies: need(copies, "copies")?,
            },
            other => return Err(Error::InvalidParameters(format!("unknown family {other}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ChartSpec::Ptpn { n } => n >= 2,
            ChartSpec::QuadricOdd { n } => n >= 2,
            ChartSpec::QuadricEven { n } => n >= 3,
            ChartSpec::Grassmann { n, k } => k >= 1 && k + 2 <= n,
            ChartSpec::ProductDiagonal { k, copies } => k >= 1 && copies >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("parameters out of range for {self}")))
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ChartSpec::Ptpn { .. } => "ptpn",
            ChartSpec::QuadricOdd { .. } => "quadric_odd",
            ChartSpec::QuadricEven { .. } => "quadric_even",
            ChartSpec::Grassmann { .. } => "grassmann",
            ChartSpec::ProductDiagonal { .. } => "product_diagonal",
        }
    }
}

impl fmt::Display for ChartSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChartSpec::Ptpn { n } => write!(f, "ptpn(n={n})"),
            ChartSpec::QuadricOdd { n } => write!(f, "quadric_odd(n={n})"),
            ChartSpec::QuadricEven { n } => write!(f, "quadric_even(n={n})"),
            ChartSpec::Grassmann { n, k } => write!(f, "grassmann(n={n},k={k})"),
            ChartSpec::ProductDiagonal { k, copies } => {
                write!(f, "product_diagonal(k={k},copies={copies})")
            }
        }
    }
}

fn unit(len: usize, i: usize, s: i64) -> IntVec {
    let mut v = vec![BigInt::zero(); len];
    v[i] = BigInt::from(s);
    v
}

fn add(a: &IntVec, b: &IntVec) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn chart_weights(spec: &ChartSpec) -> Result<WeightSystem> {
    spec.validate()?;
    let (rank, cols, labels): (usize, Vec<IntVec>, Vec<String>) = match *spec {
        ChartSpec::Ptpn { n } => {
            let span =
                |a: usize, b: usize| -> IntVec { (1..=n).map(|i| BigInt::from((a <= i && i <= b) as i64)).collect() };
            let name = |a: usize, b: usize| (a..=b).map(|i| format!("a{i}")).collect::<Vec<_>>().join("+");
            let mut cols = Vec::new();
            let mut labels = Vec::new();
            for j in 1..=n {
                cols.push(span(1, j));
                labels.push(name(1, j));
            }
            for i in 2..=n {
                cols.push(span(i, n));
                labels.push(name(i, n));
            }
            (n, cols, labels)
        }
        ChartSpec::QuadricOdd { n } => {
            let e1 = unit(n, 0, -1);
            let mut cols = vec![e1.clone()];
            let mut labels = vec!["rho1".to_string()];
            for i in 1..n {
                cols.push(add(&unit(n, i, 1), &e1));
                labels.push(format!("rho{}+", i + 1));
            }
            for i in 1..n {
                cols.push(add(&unit(n, i, -1), &e1));
                labels.push(format!("rho{}-", i + 1));
            }
            (n, cols, labels)
        }
        ChartSpec::QuadricEven { n } => {
            let e1 = unit(n, 0, -1);
            let mut cols = Vec::new();
            let mut labels = Vec::new();
            for i in 1..n {
                cols.push(add(&unit(n, i, 1), &e1));
                labels.push(format!("rho{}+", i + 1));
            }
            for i in 1..n {
                cols.push(add(&unit(n, i, -1), &e1));
                labels.push(format!("rho{}-", i + 1));
            }
            (n, cols, labels)
        }
        ChartSpec::Grassmann { n, k } => {
            let mut cols = Vec::new();
            let mut labels = Vec::new();
            for j in 0..=k {
                for l in k + 1..=n {
                    // t_ℓ − t_j in the basis t₁…tₙ
                    let mut v = unit(n, l - 1, 1);
                    if j > 0 {
                        v[j - 1] = BigInt::from(-1);
                    }
                    cols.push(v);
                    labels.push(format!("u{j}_{l}"));
                }
            }
            (n, cols, labels)
        }
        ChartSpec::ProductDiagonal { k, copies } => {
            let mut cols = Vec::new();
            let mut labels = Vec::new();
            for c in 0..copies {
                for i in 0..k {
                    cols.push(unit(k, i, 1));
                    labels.push(format!("x{}_{}", c + 1, i + 1));
                }
            }
            (k, cols, labels)
        }
    };
    WeightSystem::from_weights(rank, &cols, Some(labels))
}

/// `Δᵐ = (I_m | −1)`, of shape `m × (m+1)`.
pub fn delta(m: usize) -> IntegerMatrix {
    IntegerMatrix::identity(m).hcat(&IntegerMatrix::filled(m, 1, -1))
}

/// The projection matrices as displayed for each family.
pub fn expected_gale(spec: &ChartSpec) -> Result<IntegerMatrix> {
    spec.validate()?;
    Ok(match *spec {
        ChartSpec::Ptpn { n } => IntegerMatrix::identity(n - 1)
            .hcat(&IntegerMatrix::filled(n - 1, 1, -1))
            .hcat(&IntegerMatrix::identity(n - 1)),
        ChartSpec::QuadricOdd { n } => IntegerMatrix::filled(n - 1, 1, -2)
            .hcat(&IntegerMatrix::identity(n - 1))
            .hcat(&IntegerMatrix::identity(n - 1)),
        ChartSpec::QuadricEven { n } => {
            // rows (…, −1, 1, …) in both halves
            let mut rows = Vec::new();
            for i in 0..n - 2 {
                let mut half = vec![BigInt::zero(); n - 1];
                half[i] = BigInt::from(-1);
                half[i + 1] = BigInt::one();
                rows.push([half.clone(), half].concat());
            }
            IntegerMatrix::from_rows(2 * n - 2, rows)?
        }
        ChartSpec::Grassmann { n, k } => delta(k).kron(&delta(n - k - 1)),
        ChartSpec::ProductDiagonal { .. } => {
            return Err(Error::InvalidParameters(
                "no displayed projection for product_diagonal".into(),
            ))
        }
    })
}

/// Change of basis from `t₁…tₙ` to simple roots `α₁…αₙ` (`tⱼ = α₁+⋯+αⱼ`).
/// In the new basis every Grassmannian chart weight is nonnegative.
pub fn t_to_simple_roots(n: usize) -> IntegerMatrix {
    let rows: Vec<IntVec> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((j >= i) as i64)).collect())
        .collect();
    IntegerMatrix::from_rows(n, rows).expect("square")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanKind {
    ProjectiveSpace(usize),
    Product(Vec<usize>),
    Permutohedral(usize),
}

impl FromStr for FanKind {
    type Err = Error;

    /// `projective_space:d`, `product:d1,d2,…` or `permutohedral:d`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameters(format!("expected kind:params, got {s}")))?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidParameters(format!("{s}: {e}")))?;
        let one = || match nums.as_slice() {
            [d] => Ok(*d),
            _ => Err(Error::InvalidParameters(format!("{name} takes one dimension"))),
        };
        let kind = match name {
            "projective_space" => FanKind::ProjectiveSpace(one()?),
            "permutohedral" => FanKind::Permutohedral(one()?),
            "product" => FanKind::Product(nums.clone()),
            other => return Err(Error::InvalidParameters(format!("unknown fan kind {other}"))),
        };
        if nums.contains(&0) || nums.is_empty() {
            return Err(Error::InvalidParameters("dimensions must be at least 1".into()));
        }
        Ok(kind)
    }
}

impl fmt::Display for FanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanKind::ProjectiveSpace(d) => write!(f, "projective_space:{d}"),
            FanKind::Permutohedral(d) => write!(f, "permutohedral:{d}"),
            FanKind::Product(ds) => {
                let parts: Vec<String> = ds.iter().map(ToString::to_string).collect();
                write!(f, "product:{}", parts.join(","))
            }
        }
    }
}

fn projective_space_fan(d: usize) -> Fan {
    let mut rays: Vec<IntVec> = (0..d).map(|i| unit(d, i, 1)).collect();
    rays.push(vec![BigInt::from(-1); d]);
    let cones: Vec<Vec<usize>> = (0..=d).map(|skip| (0..=d).filter(|&i| i != skip).collect()).collect();
    Fan::new(d, rays, cones).expect("well formed")
}

pub fn standard_fan(kind: &FanKind) -> Result<Fan> {
    match kind {
        FanKind::ProjectiveSpace(d) if *d >= 1 => Ok(projective_space_fan(*d)),
        FanKind::Product(ds) if !ds.is_empty() && ds.iter().all(|&d| d >= 1) => Ok(ds
            .iter()
            .map(|&d| projective_space_fan(d))
            .reduce(|a, b| a.direct_sum(&b))
            .expect("nonempty")),
        FanKind::Permutohedral(d) if *d >= 1 => {
            let pts = permutations(d + 1);
            let verts: Vec<RatVec> = pts
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|&x| BigRational::from_integer(BigInt::from(x as i64)))
                        .collect()
                })
                .collect();
            Polytope::from_vertices(d + 1, &verts)?.normal_fan()
        }
        _ => Err(Error::InvalidParameters("dimensions must be at least 1".into())),
    }
}

/// All permutations of `1..=m`, in lexicographic order.
fn permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=m).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..m.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..m).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// The fan of `(ℙᵏ)^copies` and the saturated surjection whose kernel is
/// the diagonal copy of `ℤᵏ`.
pub fn diagonal_action_projection(k: usize, copies: usize) -> Result<(Fan, IntegerMatrix)> {
    ChartSpec::ProductDiagonal { k, copies }.validate()?;
    let fan = standard_fan(&FanKind::Product(vec![k; copies]))?;
    let mut diag = IntegerMatrix::identity(k);
    for _ in 1..copies {
        diag = diag.hcat(&IntegerMatrix::identity(k));
    }
    Ok((fan, integer_kernel(&diag)))
}

#[derive(Clone, Debug)]
pub struct FixedPointWeightData {
    pub points: Vec<(String, IntVec)>,
    /// Convex hull of the weights.
    pub polytope: Polytope,
}

/// Weights of the torus-fixed points. Quadrics use `ℤⁿ` (`±eᵢ`); the
/// Grassmannian uses the characters `e₀…eₙ` of the diagonal torus of
/// `GL(n+1)` and the fixed point `I` has weight `Σ_{i∈I} eᵢ`.
pub fn fixed_point_weights(spec: &ChartSpec) -> Result<FixedPointWeightData> {
    spec.validate()?;
    let points: Vec<(String, IntVec)> = match *spec {
        ChartSpec::QuadricOdd { n } | ChartSpec::QuadricEven { n } => (0..2 * n)
            .map(|i| {
                let w = if i < n { unit(n, i, 1) } else { unit(n, i - n, -1) };
                (format!("P{}", i + 1), w)
            })
            .collect(),
        ChartSpec::Grassmann { n, k } => subsets(n + 1, k + 1)
            .into_iter()
            .map(|s| {
                let mut w = vec![BigInt::zero(); n + 1];
                for &i in &s {
                    w[i] = BigInt::one();
                }
                let name: Vec<String> = s.iter().map(ToString::to_string).collect();
                (format!("I{{{}}}", name.join(",")), w)
            })
            .collect(),
        _ => {
            return Err(Error::InvalidParameters(
                "fixed-point weights exist for quadrics and Grassmannians".into(),
            ))
        }
    };
    let rank = points[0].1.len();
    let verts: Vec<RatVec> = points
        .iter()
        .map(|(_, w)| w.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    Ok(FixedPointWeightData {
        polytope: Polytope::from_vertices(rank, &verts)?,
        points,
    })
}

/// `size`-element subsets of `0..n` in lexicographic order.
fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..size).collect();
    if size > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..size).rev().find(|&i| cur[i] != i + n - size) else {
            return out;
        };
        cur[pos] += 1;
        for j in pos + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, row_lattice_basis, transposed_gale_dual};
    use crate::quotients::{certificate_is_valid, is_fully_definite};

    fn all_specs() -> Vec<ChartSpec> {
        let mut v = vec![];
        for n in 2..=5 {
            v.push(ChartSpec::Ptpn { n });
            v.push(ChartSpec::QuadricOdd { n });
        }
        for n in 3..=5 {
            v.push(ChartSpec::QuadricEven { n });
        }
        for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)] {
            v.push(ChartSpec::Grassmann { n, k });
        }
        for (k, copies) in [(1, 2), (1, 3), (2, 2)] {
            v.push(ChartSpec::ProductDiagonal { k, copies });
        }
        v
    }

    #[test]
    fn small_weight_matrices() {
        let w = chart_weights(&ChartSpec::Ptpn { n: 2 }).unwrap();
        assert_eq!(w.matrix(), &IntegerMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1]]));
        let b3 = chart_weights(&ChartSpec::QuadricOdd { n: 3 }).unwrap();
        assert_eq!(
            b3.weights(),
            vec![
                int_vec(&[-1, 0, 0]),
                int_vec(&[-1, 1, 0]),
                int_vec(&[-1, 0, 1]),
                int_vec(&[-1, -1, 0]),
                int_vec(&[-1, 0, -1])
            ]
        );
        assert_eq!(b3.labels()[3], "rho2-");
    }

    #[test]
    fn grassmann_5_2_matches_display() {
        let w = chart_weights(&ChartSpec::Grassmann { n: 5, k: 2 }).unwrap();
        let displayed = IntegerMatrix::from_i64(&[
            &[0, 0, 0, -1, -1, -1, 0, 0, 0],
            &[0, 0, 0, 0, 0, 0, -1, -1, -1],
            &[1, 0, 0, 1, 0, 0, 1, 0, 0],
            &[0, 1, 0, 0, 1, 0, 0, 1, 0],
            &[0, 0, 1, 0, 0, 1, 0, 0, 1],
        ]);
        assert_eq!(w.matrix(), &displayed);
    }

    #[test]
    fn expected_gale_examples() {
        assert_eq!(
            expected_gale(&ChartSpec::QuadricOdd { n: 3 }).unwrap(),
            IntegerMatrix::from_i64(&[&[-2, 1, 0, 1, 0], &[-2, 0, 1, 0, 1]])
        );
        assert_eq!(
            expected_gale(&ChartSpec::QuadricEven { n: 3 }).unwrap(),
            IntegerMatrix::from_i64(&[&[-1, 1, -1, 1]])
        );
        assert!(expected_gale(&ChartSpec::ProductDiagonal { k: 1, copies: 2 }).is_err());
    }

    #[test]
    fn expected_gale_spans_the_kernel() {
        for spec in all_specs() {
            let Ok(g) = expected_gale(&spec) else { continue };
            let w = chart_weights(&spec).unwrap();
            assert!(w.matrix().mul(&g.transpose()).unwrap().is_zero(), "{spec}");
            assert_eq!(
                row_lattice_basis(&g),
                transposed_gale_dual(w.matrix()).unwrap(),
                "{spec}"
            );
        }
    }

    #[test]
    fn catalog_charts_are_fully_definite() {
        for spec in all_specs() {
            let w = chart_weights(&spec).unwrap();
            let fd = is_fully_definite(w.matrix());
            assert!(fd.fully_definite, "{spec}");
            assert!(
                certificate_is_valid(w.matrix(), fd.certificate.as_ref().unwrap()),
                "{spec}"
            );
        }
    }

    #[test]
    fn simple_root_basis_is_a_certificate() {
        for (n, k) in [(3, 1), (4, 2), (5, 2)] {
            let w = chart_weights(&ChartSpec::Grassmann { n, k }).unwrap();
            assert!(certificate_is_valid(w.matrix(), &t_to_simple_roots(n)));
        }
    }

    #[test]
    fn subtorus_gale() {
        for (n, k) in [(4, 1), (4, 2), (5, 2)] {
            let w = chart_weights(&ChartSpec::Grassmann { n, k }).unwrap();
            let sub = w.matrix().select_rows(&(k..n).collect::<Vec<_>>());
            let expected = delta(k).kron(&IntegerMatrix::identity(n - k));
            assert_eq!(
                transposed_gale_dual(&sub).unwrap(),
                row_lattice_basis(&expected),
                "({n},{k})"
            );
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(ChartSpec::parse("grassmann", Some(4), Some(3), None).is_err());
        assert!(ChartSpec::parse("quadric_even", Some(2), None, None).is_err());
        assert!(ChartSpec::parse("ptpn", Some(1), None, None).is_err());
        assert!(ChartSpec::parse("product_diagonal", None, Some(1), Some(1)).is_err());
        assert!(ChartSpec::parse("nope", Some(3), None, None).is_err());
        assert_eq!(
            ChartSpec::parse("grassmann", Some(4), Some(2), None).unwrap(),
            ChartSpec::Grassmann { n: 4, k: 2 }
        );
    }

    #[test]
    fn standard_fans() {
        let p1 = standard_fan(&FanKind::ProjectiveSpace(1)).unwrap();
        assert_eq!(p1.rays(), &[int_vec(&[-1]), int_vec(&[1])]);
        assert_eq!(standard_fan(&FanKind::Permutohedral(1)).unwrap(), p1);
        let hex = standard_fan(&FanKind::Permutohedral(2)).unwrap();
        let expected = Fan::new(
            2,
            [[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]]
                .iter()
                .map(|r| int_vec(r))
                .collect(),
            (0..6).map(|i| vec![i, (i + 1) % 6]).collect(),
        )
        .unwrap();
        assert!(hex.isomorphism(&expected).unwrap().is_some());
        let p1p1 = standard_fan(&FanKind::Product(vec![1, 1])).unwrap();
        assert_eq!(p1p1.report().picard_number, Some(2));
        assert_eq!("product:1,2".parse::<FanKind>().unwrap(), FanKind::Product(vec![1, 2]));
        assert!("permutohedral:0".parse::<FanKind>().is_err());
        assert_eq!(permutations(3).len(), 6);
    }

    #[test]
    fn diagonal_projections() {
        let (fan, q) = diagonal_action_projection(1, 3).unwrap();
        assert_eq!(fan.rank(), 3);
        assert_eq!((q.rows(), q.cols()), (2, 3));
        assert!(q.mul_vec(&int_vec(&[1, 1, 1])).iter().all(|x| x.is_zero()));
        let (fan, q) = diagonal_action_projection(2, 2).unwrap();
        assert_eq!(fan.report().ray_count, 6);
        assert_eq!((q.rows(), q.cols()), (2, 4));
        assert!(q.mul_vec(&int_vec(&[1, 0, 1, 0])).iter().all(|x| x.is_zero()));
        assert!(q.mul_vec(&int_vec(&[0, 1, 0, 1])).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn weight_polytopes() {
        let cross = fixed_point_weights(&ChartSpec::QuadricOdd { n: 2 }).unwrap();
        assert_eq!(cross.polytope.vertices().unwrap().len(), 4);
        let oct = fixed_point_weights(&ChartSpec::Grassmann { n: 3, k: 1 }).unwrap();
        assert_eq!(oct.points.len(), 6);
        assert_eq!(oct.polytope.vertices().unwrap().len(), 6);
        let mut ws: Vec<&IntVec> = oct.points.iter().map(|(_, w)| w).collect();
        ws.sort();
        ws.dedup();
        assert_eq!(ws.len(), 6);
        assert!(fixed_point_weights(&ChartSpec::Ptpn { n: 2 }).is_err());
    }
}
