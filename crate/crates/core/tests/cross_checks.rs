//! Cross-module checks against facts that do not come from this crate.

use combquot::catalog::{chart_weights, standard_fan, ChartSpec, FanKind};
use combquot::quotients::{
    chow_polytope, fiber_polytope, git_chambers, integral_point, lattice_semistable_support, quotient_fan,
    semistable_support,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

fn gr(n: usize, k: usize) -> combquot::polyhedral::Fan {
    quotient_fan(&chart_weights(&ChartSpec::Grassmann { n, k }).unwrap()).unwrap()
}

// The quotient fan of the Grassmann chart is the secondary fan of
// Δᵏ × Δⁿ⁻ᵏ⁻¹, so maximal cones count its triangulations:
// (m+1)! for Δ¹ × Δᵐ, and 108 for Δ² × Δ² (all regular).
#[test]
fn max_cones_count_triangulations_of_simplex_products() {
    assert_eq!(gr(3, 1).report().max_cone_count, 2);
    assert_eq!(gr(4, 1).report().max_cone_count, 6);
    assert_eq!(gr(5, 1).report().max_cone_count, 24);
    assert_eq!(gr(5, 2).report().max_cone_count, 108);
}

#[test]
fn grassmann_duality_k_to_n_minus_k_minus_1() {
    for (n, k) in [(4, 1), (5, 1)] {
        let a = gr(n, k);
        let b = gr(n, n - k - 1);
        assert!(a.isomorphism(&b).unwrap().is_some(), "({n},{k})");
    }
}

#[test]
fn lines_match_braid_fan_counts() {
    // permutohedral fan of dimension d: 2^{d+1} − 2 rays, (d+1)! cones
    for (n, rays, cones) in [(4, 6, 6), (5, 14, 24)] {
        let r = gr(n, 1).report();
        assert_eq!((r.ray_count, r.max_cone_count), (rays, cones));
        let p = standard_fan(&FanKind::Permutohedral(n - 2)).unwrap().report();
        assert_eq!((p.ray_count, p.max_cone_count), (rays, cones));
    }
}

#[test]
fn chow_normal_fan_on_a_larger_chart() {
    let ws = chart_weights(&ChartSpec::Grassmann { n: 5, k: 1 }).unwrap();
    assert_eq!(
        chow_polytope(&ws).unwrap().normal_fan().unwrap(),
        quotient_fan(&ws).unwrap()
    );
}

#[test]
fn quadric_chamber_counts_double() {
    // odd quadric of rank n: one chamber per sign pattern of the n−1 pairs
    for n in 2..=5 {
        let ws = chart_weights(&ChartSpec::QuadricOdd { n }).unwrap();
        assert_eq!(git_chambers(&ws).unwrap().chambers.len(), 1 << (n - 1));
    }
}

fn brute_support(ws: &combquot::quotients::WeightSystem, v: &[BigInt], bound: i64) -> Vec<bool> {
    let n = ws.len();
    let mut seen = vec![false; n];
    let mut x = vec![0i64; n];
    loop {
        let xb: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        if ws.matrix().mul_vec(&xb) == v {
            for i in 0..n {
                seen[i] |= x[i] == 0;
            }
        }
        // odometer over [0, bound]^n
        let mut i = 0;
        while i < n && x[i] == bound {
            x[i] = 0;
            i += 1;
        }
        if i == n {
            return seen;
        }
        x[i] += 1;
    }
}

// Both supports against brute-force enumeration of fiber lattice points:
// the literal one over v, the saturated one over k·v with k clearing the
// vertex denominators.
#[test]
fn semistable_supports_match_lattice_enumeration() {
    let mut differ = 0;
    for spec in [
        ChartSpec::QuadricOdd { n: 3 },
        ChartSpec::Grassmann { n: 4, k: 1 },
        ChartSpec::Ptpn { n: 3 },
    ] {
        let ws = chart_weights(&spec).unwrap();
        for v in git_chambers(&ws).unwrap().representatives {
            let vr = integral_point(&v);
            let verts = fiber_polytope(&ws, &vr).unwrap().vertices().unwrap();
            let k = verts
                .iter()
                .flatten()
                .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
            let max = |vs: &[Vec<num_rational::BigRational>], s: &BigInt| {
                vs.iter()
                    .flatten()
                    .map(|x| {
                        (x * num_rational::BigRational::from_integer(s.clone()))
                            .ceil()
                            .to_integer()
                            .to_i64()
                            .unwrap()
                    })
                    .max()
                    .unwrap()
            };
            let literal = lattice_semistable_support(&ws, &vr).unwrap();
            assert_eq!(
                literal,
                brute_support(&ws, &v, max(&verts, &BigInt::from(1))),
                "{spec} at {v:?}"
            );
            let kv: Vec<BigInt> = v.iter().map(|x| x * &k).collect();
            let saturated = semistable_support(&ws, &vr).unwrap();
            assert_eq!(
                saturated,
                brute_support(&ws, &kv, max(&verts, &k)),
                "{spec} at {k}·{v:?}"
            );
            differ += usize::from(literal != saturated);
        }
    }
    // the quadric representatives sit below the saturation level
    assert!(differ > 0);
}

// At every odd quadric chamber the saturated pattern deletes one of each
// pair ρᵢ^± and never ρ₁.
#[test]
fn odd_quadric_stable_sets_delete_one_of_each_pair() {
    for n in 2..=4 {
        let ws = chart_weights(&ChartSpec::QuadricOdd { n }).unwrap();
        for v in git_chambers(&ws).unwrap().representatives {
            let s = semistable_support(&ws, &integral_point(&v)).unwrap();
            assert!(s[0]);
            for i in 1..n {
                // columns: ρ₁, ρ₂⁺..ρₙ⁺, ρ₂⁻..ρₙ⁻
                assert!(s[i] ^ s[i + n - 1], "n={n} v={v:?} {s:?}");
            }
        }
    }
}
