//! Weyl group actions on the Grassmannian chart at `I₀ = {0,…,k}` and the
//! induced mutation maps on `(ℙ^{n−k−1})^k`.
//!
//! Variables:
//! - chart: `u^j_ℓ` (`j = 0..k`, `ℓ = k+1..n`), sorted by `(j, ℓ)`;
//! - quotient torus: `y^j_ℓ` (`j < k`, `ℓ = k+1..n−1`), sorted by `(j, ℓ)`;
//! - homogeneous: `z^j_ℓ` (`j < k`, `ℓ = k+1..n`), factor `j` in position
//!   `j`, with `y^j_ℓ = z^j_ℓ / z^j_n`.
//!
//! `r_i` is the transposition `(i−1, i)` of `{0,…,n}`.

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::map::{projective_eq, MultiProjectiveMap};
use super::poly::Poly;
use super::rational::{RationalFunction, RationalMap};
use crate::{Error, Result};

fn check(n: usize, k: usize) -> Result<()> {
    if k >= 1 && k + 2 <= n {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("need 1 ≤ k ≤ n−2, got n={n}, k={k}")))
    }
}

fn check_generator(n: usize, i: usize) -> Result<()> {
    if (1..=n).contains(&i) {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!(
            "generator r_{i} out of range 1..={n}"
        )))
    }
}

fn transpose(i: usize, x: usize) -> usize {
    if x + 1 == i {
        i
    } else if x == i {
        i - 1
    } else {
        x
    }
}

#[derive(Clone, Copy, Debug)]
struct Layout {
    n: usize,
    k: usize,
}

impl Layout {
    fn u(&self, j: usize, l: usize) -> usize {
        j * (self.n - self.k) + (l - self.k - 1)
    }

    fn nu(&self) -> usize {
        (self.k + 1) * (self.n - self.k)
    }

    fn z(&self, j: usize, l: usize) -> usize {
        self.u(j, l)
    }

    fn nz(&self) -> usize {
        self.k * (self.n - self.k)
    }

    fn ny(&self) -> usize {
        self.k * (self.n - self.k - 1)
    }

    fn u_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for j in 0..=self.k {
            for l in self.k + 1..=self.n {
                out.push(format!("u{j}_{l}"));
            }
        }
        out
    }

    fn z_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for j in 0..self.k {
            for l in self.k + 1..=self.n {
                out.push(format!("z{j}_{l}"));
            }
        }
        out
    }

    fn y_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for j in 0..self.k {
            for l in self.k + 1..self.n {
                out.push(format!("y{j}_{l}"));
            }
        }
        out
    }
}

pub fn chart_variable_names(n: usize, k: usize) -> Result<Vec<String>> {
    check(n, k)?;
    Ok(Layout { n, k }.u_names())
}

pub fn quotient_variable_names(n: usize, k: usize) -> Result<Vec<String>> {
    check(n, k)?;
    Ok(Layout { n, k }.y_names())
}

pub fn homogeneous_variable_names(n: usize, k: usize) -> Result<Vec<String>> {
    check(n, k)?;
    Ok(Layout { n, k }.z_names())
}

/// `r_i` acting on the chart coordinates `u^j_ℓ`.
pub fn grassmann_weyl_chart_map(n: usize, k: usize, i: usize) -> Result<RationalMap> {
    check(n, k)?;
    check_generator(n, i)?;
    let lay = Layout { n, k };
    let nu = lay.nu();
    let u = |j, l| RationalFunction::var(nu, lay.u(j, l));
    let mut comps = vec![RationalFunction::constant(nu, BigRational::zero()); nu];
    for j in 0..=k {
        for l in k + 1..=n {
            comps[lay.u(j, l)] = if i <= k {
                u(transpose(i, j), l)
            } else if i > k + 1 {
                u(j, transpose(i, l))
            } else {
                // column swap k ↔ k+1 followed by row reduction
                let pivot = u(k, k + 1);
                match (j == k, l == k + 1) {
                    (true, true) => pivot.inv()?,
                    (true, false) => u(k, l).div(&pivot)?,
                    (false, true) => u(j, k + 1)
                        .div(&pivot)?
                        .mul(&RationalFunction::constant(nu, -BigRational::one())),
                    (false, false) => pivot.mul(&u(j, l)).sub(&u(k, l).mul(&u(j, k + 1))).div(&pivot)?,
                }
            };
        }
    }
    RationalMap::new(lay.u_names(), lay.u_names(), comps)
}

/// `y^j_ℓ = u^j_ℓ u^k_n / (u^k_ℓ u^j_n)`.
pub fn grassmann_quotient_map(n: usize, k: usize) -> Result<RationalMap> {
    check(n, k)?;
    let lay = Layout { n, k };
    let nu = lay.nu();
    let u = |j, l| RationalFunction::var(nu, lay.u(j, l));
    let mut comps = Vec::new();
    for j in 0..k {
        for l in k + 1..n {
            comps.push(u(j, l).mul(&u(k, n)).div(&u(k, l).mul(&u(j, n)))?);
        }
    }
    RationalMap::new(lay.u_names(), lay.y_names(), comps)
}

/// The mutation `μ(r_i)` on `(ℙ^{n−k−1})^k` in homogeneous coordinates.
pub fn mutation_map(n: usize, k: usize, i: usize) -> Result<MultiProjectiveMap> {
    check(n, k)?;
    check_generator(n, i)?;
    let lay = Layout { n, k };
    let nz = lay.nz();
    let z = |j, l| Poly::var(nz, lay.z(j, l));
    let ls: Vec<usize> = (k + 1..=n).collect();
    let comps: Vec<Vec<Poly>> = (0..k)
        .map(|j| {
            if i < k {
                ls.iter().map(|&l| z(transpose(i, j), l)).collect()
            } else if i == k {
                // [z^j_ℓ / z^{k−1}_ℓ] and [1 / z^{k−1}_ℓ], denominators cleared
                ls.iter()
                    .map(|&l| {
                        let others = ls
                            .iter()
                            .filter(|&&m| m != l)
                            .fold(Poly::one(nz), |acc, &m| &acc * &z(k - 1, m));
                        if j + 1 == k {
                            others
                        } else {
                            &z(j, l) * &others
                        }
                    })
                    .collect()
            } else if i == k + 1 {
                ls.iter()
                    .map(|&l| if l == k + 1 { -&z(j, l) } else { &z(j, l) - &z(j, k + 1) })
                    .collect()
            } else {
                ls.iter().map(|&l| z(j, transpose(i, l))).collect()
            }
        })
        .collect();
    MultiProjectiveMap::new(vec![n - k - 1; k], vec![n - k - 1; k], lay.z_names(), comps)
}

/// `μ(r_i)` in the affine coordinates `y^j_ℓ = z^j_ℓ / z^j_n`.
pub fn mutation_affine(n: usize, k: usize, i: usize) -> Result<RationalMap> {
    let lay = Layout { n, k };
    let m = mutation_map(n, k, i)?;
    debug_assert_eq!(m.source().iter().sum::<usize>(), lay.ny());
    m.dehomogenize(lay.y_names(), lay.y_names())
}

pub fn mutation_generators(n: usize, k: usize) -> Result<Vec<MultiProjectiveMap>> {
    (1..=n).map(|i| mutation_map(n, k, i)).collect()
}

pub type ProjectivePoint = Vec<Vec<BigRational>>;

/// `p₁ = [1:⋯:1]`, `p₂ = [1:0:⋯:0]`, …, `pₙ = [0:⋯:0:1]` in `ℙ^{n−2}` with
/// coordinates `[z₂:⋯:zₙ]`.
pub fn lines_points(n: usize) -> Result<Vec<ProjectivePoint>> {
    check(n, 1)?;
    let d = n - 1;
    let mut pts = vec![vec![vec![BigRational::one(); d]]];
    for m in 0..d {
        let mut p = vec![BigRational::zero(); d];
        p[m] = BigRational::one();
        pts.push(vec![p]);
    }
    Ok(pts)
}

/// Orbit of `start` under the group generated by `maps`, breadth first.
pub fn point_orbit(maps: &[MultiProjectiveMap], start: &ProjectivePoint) -> Result<Vec<ProjectivePoint>> {
    let mut orbit = vec![start.clone()];
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(p) = queue.pop_front() {
        for m in maps {
            let q = m.apply_point(&p)?;
            if !orbit.iter().any(|o| projective_eq(o, &q)) {
                orbit.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{chart_weights, expected_gale, ChartSpec};
    use crate::linalg::{rat, row_lattice_basis};

    fn affine(n: usize, k: usize) -> Vec<RationalFunction> {
        let ny = Layout { n, k }.ny();
        (0..ny).map(|i| RationalFunction::var(ny, i)).collect()
    }

    #[test]
    fn lines_table_n4() {
        let r2 = mutation_map(4, 1, 2).unwrap();
        assert_eq!(r2.describe(), vec!["[z0_2 : z0_2 - z0_3 : z0_2 - z0_4]"]);
        let r3 = mutation_map(4, 1, 3).unwrap();
        assert_eq!(r3.describe(), vec!["[z0_3 : z0_2 : z0_4]"]);
        let r1 = mutation_map(4, 1, 1).unwrap();
        assert_eq!(r1.describe(), vec!["[z0_3*z0_4 : z0_2*z0_4 : z0_2*z0_3]"]);
        assert_eq!(r1.base_locus_components().unwrap(), 3);
        assert_eq!(r2.base_locus_components().unwrap(), 0);
    }

    #[test]
    fn single_coordinate_case() {
        // n=3, k=1: r₁, r₃ invert y and r₂ is y ↦ y/(y−1)
        let y = affine(3, 1).remove(0);
        let one = RationalFunction::constant(1, rat(1, 1));
        assert_eq!(mutation_affine(3, 1, 1).unwrap().components()[0], y.inv().unwrap());
        assert_eq!(mutation_affine(3, 1, 3).unwrap().components()[0], y.inv().unwrap());
        assert_eq!(
            mutation_affine(3, 1, 2).unwrap().components()[0],
            y.div(&y.sub(&one)).unwrap()
        );
        let q = grassmann_quotient_map(3, 1).unwrap();
        assert_eq!(q.describe(), vec!["y0_2 = u0_2*u1_3/(u0_3*u1_2)"]);
    }

    #[test]
    fn chart_map_cases() {
        let r1 = grassmann_weyl_chart_map(4, 2, 1).unwrap();
        assert_eq!(r1.components()[0], RationalFunction::var(6, 2));
        let r4 = grassmann_weyl_chart_map(4, 1, 4).unwrap();
        assert_eq!(r4.components()[1], RationalFunction::var(6, 2));
        let r2 = grassmann_weyl_chart_map(3, 1, 2).unwrap();
        assert_eq!(
            r2.describe(),
            vec![
                "u0_2 = -u0_2/u1_2",
                "u0_3 = (-u0_2*u1_3 + u0_3*u1_2)/u1_2",
                "u1_2 = 1/u1_2",
                "u1_3 = u1_3/u1_2"
            ]
        );
        for (n, k) in [(3, 1), (4, 2)] {
            for i in 1..=n {
                let r = grassmann_weyl_chart_map(n, k, i).unwrap();
                let sq = r.compose(&r).unwrap();
                assert_eq!(sq, RationalMap::identity(Layout { n, k }.u_names()), "({n},{k}) r{i}");
            }
        }
        assert!(grassmann_weyl_chart_map(3, 1, 4).is_err());
        assert!(grassmann_weyl_chart_map(3, 2, 1).is_err());
    }

    #[test]
    fn quotient_map_is_invariant_and_gale() {
        for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)] {
            let q = grassmann_quotient_map(n, k).unwrap();
            let e = q.exponent_matrix().unwrap();
            let w = chart_weights(&ChartSpec::Grassmann { n, k }).unwrap();
            assert!(w.matrix().mul(&e.transpose()).unwrap().is_zero());
            let g = expected_gale(&ChartSpec::Grassmann { n, k }).unwrap();
            assert_eq!(row_lattice_basis(&e), row_lattice_basis(&g));
        }
    }

    #[test]
    fn mutation_table_shapes() {
        let m = mutation_map(5, 2, 2).unwrap();
        assert_eq!(m.source(), &[2, 2]);
        assert_eq!(m.base_locus_components().unwrap(), 3);
        for i in [1, 3, 4, 5] {
            assert_eq!(mutation_map(5, 2, i).unwrap().base_locus_components().unwrap(), 0);
        }
        // ℙ¹ factors: the inversion has no base points
        assert_eq!(mutation_map(4, 2, 2).unwrap().base_locus_components().unwrap(), 0);
        let swap = mutation_map(4, 2, 1).unwrap();
        assert_eq!(swap.describe(), vec!["[z1_3 : z1_4]", "[z0_3 : z0_4]"]);
    }

    #[test]
    fn lines_points_permuted() {
        for n in [4, 5] {
            let pts = lines_points(n).unwrap();
            let r2 = mutation_map(n, 1, 2).unwrap();
            let img = r2.apply_point(&pts[0]).unwrap();
            assert!(projective_eq(&img, &pts[1]));
            for i in 3..=n {
                let r = mutation_map(n, 1, i).unwrap();
                assert!(projective_eq(&r.apply_point(&pts[i - 2]).unwrap(), &pts[i - 1]));
                assert!(projective_eq(&r.apply_point(&pts[i - 1]).unwrap(), &pts[i - 2]));
            }
            let gens: Vec<_> = (2..=n).map(|i| mutation_map(n, 1, i).unwrap()).collect();
            let orbit = point_orbit(&gens, &pts[0]).unwrap();
            assert_eq!(orbit.len(), n);
            assert!(pts.iter().all(|p| orbit.iter().any(|o| projective_eq(o, p))));
            let r1 = mutation_map(n, 1, 1).unwrap();
            assert_eq!(r1.apply_point(&pts[1]), Err(Error::Indeterminate));
        }
    }
}
