//! Exact integer and rational linear algebra.
//!
//! Hermite normal forms use the row convention `U·A = H` with `H` in upper
//! row-echelon form: pivots are positive, and the entries above a pivot are
//! reduced into `[0, pivot)`. Kernels and Gale duals are returned as
//! row bases in this normal form, so equal lattices give identical matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type IntVec = Vec<BigInt>;
pub type RatVec = Vec<BigRational>;

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntegerMatrix{:?}", self.to_rows())
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`; an empty
    /// row list yields a `0 × cols` matrix.
    pub fn from_rows(cols: usize, rows: Vec<IntVec>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { rows: n, cols, data })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| int_vec(r)).collect()).expect("ragged literal matrix")
    }

    pub fn from_columns(rows: usize, columns: &[IntVec]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVec {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul_rat_vec(&self, v: &[BigRational]) -> RatVec {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| {
                    acc + BigRational::from_integer(a.clone()) * b
                })
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Selects a subset of rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self {
            rows: idx.len(),
            cols: self.cols,
            data: idx.iter().flat_map(|&i| self.row(i).to_vec()).collect(),
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<IntVec> = idx.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &cols).expect("consistent column heights")
    }

    pub fn rank(&self) -> usize {
        hermite_normal_form(self).0.nonzero_rows()
    }

    fn nonzero_rows(&self) -> usize {
        (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|x| !x.is_zero()))
            .count()
    }

    /// Determinant of a square matrix (exact, via rational elimination).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = to_rational(self);
        let n = self.rows;
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return BigInt::zero();
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            let pivot = m[col][col].clone();
            det *= &pivot;
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] / &pivot;
                for c in col..n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
        det.to_integer()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// Exact inverse over the rationals, `None` when singular.
    pub fn rational_inverse(&self) -> Option<Vec<RatVec>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut m = to_rational(self);
        let mut inv: Vec<RatVec> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(p, col);
            inv.swap(p, col);
            let pivot = m[col][col].clone();
            for c in 0..n {
                m[col][c] /= &pivot;
                inv[col][c] /= &pivot;
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for c in 0..n {
                    let a = &f * &m[col][c];
                    m[r][c] -= a;
                    let b = &f * &inv[col][c];
                    inv[r][c] -= b;
                }
            }
        }
        Some(inv)
    }

    /// Inverse of a unimodular matrix as an integer matrix.
    pub fn unimodular_inverse(&self) -> Option<Self> {
        if !self.is_unimodular() {
            return None;
        }
        let inv = self.rational_inverse()?;
        let rows = inv
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.to_integer()).collect())
            .collect();
        Some(Self::from_rows(self.cols, rows).expect("square"))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hcat of matrices with different heights");
        let rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend_from_slice(other.row(i));
                r
            })
            .collect();
        Self::from_rows(self.cols + other.cols, rows).expect("consistent widths")
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vcat of matrices with different widths");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scaled(&self, c: i64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// The matrix with all entries equal to `value`.
    pub fn filled(rows: usize, cols: usize, value: i64) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::from(value); rows * cols],
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

fn to_rational(m: &IntegerMatrix) -> Vec<RatVec> {
    (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

pub fn int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn rat_dot(a: &[BigInt], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .fold(BigRational::zero(), |acc, (x, y)| {
            acc + BigRational::from_integer(x.clone()) * y
        })
}

pub fn vec_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divides a nonzero vector by the gcd of its coordinates.
pub fn primitive(v: &[BigInt]) -> Result<IntVec> {
    let g = vec_gcd(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    vec_gcd(v).is_one()
}

/// Clears denominators of a rational vector and returns the primitive
/// integer vector on the same ray (or the zero vector).
pub fn primitive_from_rational(v: &[BigRational]) -> IntVec {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: IntVec = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive(&ints).unwrap_or(ints)
}

/// Row-style Hermite normal form: returns `(H, U)` with `U·A = H`,
/// `det U = ±1`, `H` upper echelon with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix) {
    let m = a.rows;
    let n = a.cols;
    let mut h: Vec<IntVec> = a.to_rows();
    let mut u: Vec<IntVec> = IntegerMatrix::identity(m).to_rows();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        loop {
            let pivot = (row..m)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(p) = pivot else { break };
            h.swap(row, p);
            u.swap(row, p);
            let mut done = true;
            for i in row + 1..m {
                if h[i][col].is_zero() {
                    continue;
                }
                let q = h[i][col].div_floor(&h[row][col]);
                sub_scaled(&mut h, i, row, &q);
                sub_scaled(&mut u, i, row, &q);
                if !h[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            negate(&mut h[row]);
            negate(&mut u[row]);
        }
        for i in 0..row {
            let q = h[i][col].div_floor(&h[row][col]);
            if !q.is_zero() {
                sub_scaled(&mut h, i, row, &q);
                sub_scaled(&mut u, i, row, &q);
            }
        }
        row += 1;
    }
    (
        IntegerMatrix::from_rows(n, h).expect("rows keep their width"),
        IntegerMatrix::from_rows(m, u).expect("rows keep their width"),
    )
}

fn sub_scaled(rows: &mut [IntVec], target: usize, source: usize, q: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = rows.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn negate(v: &mut IntVec) {
    for x in v.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Canonical basis (HNF rows, zero rows dropped) of the lattice spanned by
/// the rows of `a`.
pub fn row_lattice_basis(a: &IntegerMatrix) -> IntegerMatrix {
    let (h, _) = hermite_normal_form(a);
    let r = h.nonzero_rows();
    h.select_rows(&(0..r).collect::<Vec<_>>())
}

/// Basis of the saturated lattice `{x ∈ ℤⁿ : A·x = 0}`, one basis vector per
/// row, in Hermite normal form.
pub fn integer_kernel(a: &IntegerMatrix) -> IntegerMatrix {
    let n = a.cols;
    let (h, u) = hermite_normal_form(&a.transpose());
    let rank = h.nonzero_rows();
    let kernel = u.select_rows(&(rank..n).collect::<Vec<_>>());
    row_lattice_basis(&kernel)
}

/// Saturation of the lattice spanned by the rows of `a`, as an HNF basis.
pub fn saturate_rows(a: &IntegerMatrix) -> IntegerMatrix {
    integer_kernel(&integer_kernel(a))
}

/// The transposed Gale dual of a weight matrix: a saturated, HNF-canonical
/// basis `Q` of the integer kernel, so that `W·Qᵀ = 0`.
pub fn transposed_gale_dual(w: &IntegerMatrix) -> Result<IntegerMatrix> {
    if w.rank() != w.rows {
        return Err(Error::NotFullRank);
    }
    Ok(integer_kernel(w))
}

/// Nonzero invariant factors of the Smith normal form, in divisibility order.
pub fn smith_invariants(a: &IntegerMatrix) -> Vec<BigInt> {
    let mut m = a.clone();
    loop {
        m = hermite_normal_form(&m).0;
        m = hermite_normal_form(&m.transpose()).0;
        let diagonal = (0..m.rows).all(|i| (0..m.cols).all(|j| i == j || m[(i, j)].is_zero()));
        if diagonal {
            break;
        }
    }
    let mut d: Vec<BigInt> = (0..m.rows.min(m.cols))
        .map(|i| m[(i, i)].abs())
        .filter(|x| !x.is_zero())
        .collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// True when the rows of `a` span a saturated sublattice (all Smith
/// invariant factors are 1).
pub fn has_unit_invariants(a: &IntegerMatrix) -> bool {
    smith_invariants(a).iter().all(One::is_one)
}

/// A unimodular matrix whose first row is the given primitive vector.
pub fn unimodular_extension(v: &[BigInt]) -> Result<IntegerMatrix> {
    let g = vec_gcd(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !g.is_one() {
        return Err(Error::NotPrimitive(g.to_string()));
    }
    let n = v.len();
    let col = IntegerMatrix::from_columns(n, &[v.to_vec()])?;
    // U·v = e₁ since the HNF pivot of a primitive column is 1, so v is the
    // first column of U⁻¹ and (U⁻¹)ᵀ has first row v.
    let (_, u) = hermite_normal_form(&col);
    let inv = u.unimodular_inverse().expect("HNF transform is unimodular");
    Ok(inv.transpose())
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_i64_lossy(x: &BigInt) -> Option<i64> {
    x.to_i64()
}
