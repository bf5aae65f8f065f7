//! The acceptance suite, shared by `combquot verify-paper` and the
//! `acceptance` test target. Each criterion returns a pass flag and a
//! one-line detail; time limits are pinned below.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::birational::quadric::{expected_quadric_boundary, quadric_antipodal_transition, quadric_even_transition};
use crate::birational::verify::{verify_coxeter, verify_equivariance, CheckMode, VerifyOptions};
use crate::birational::{
    lines_points, mutation_generators, mutation_map, point_orbit, projective_eq, quadric_boundary, quadric_transition,
    quadric_transition_involutive, MultiProjectiveMap,
};
use crate::catalog::{chart_weights, diagonal_action_projection, expected_gale, standard_fan, ChartSpec, FanKind};
use crate::linalg::{primitive, row_lattice_basis, transposed_gale_dual, IntVec, IntegerMatrix};
use crate::polyhedral::{coarsening_embedding, Fan};
use crate::quotients::{
    certificate_is_valid, chow_polytope, git_chambers, git_quotient_fan, integral_point, is_fully_definite,
    quotient_fan, quotient_fan_general,
};
use crate::{Error, Result};

pub const QUADRIC_TIME_LIMIT: Duration = Duration::from_secs(10);
pub const COXETER_TIME_LIMIT: Duration = Duration::from_secs(60);
pub const STRESS_TIME_LIMIT: Duration = Duration::from_secs(300);

/// The transposed Gale dual displayed for `(n, k) = (5, 2)`, verbatim.
pub const DISPLAYED_GALE_5_2: [[i64; 9]; 4] = [
    [1, 0, 1, 0, 0, 0, -1, 0, 1],
    [0, 1, -1, 0, 0, 0, 0, -1, 1],
    [0, 0, 0, 1, 0, -1, -1, 0, 1],
    [0, 0, 0, 0, 1, -1, 0, -1, 1],
];

/// Criteria expected to fail, with the reason recorded in the ledger.
pub const KNOWN_UNATTAINABLE: &[u8] = &[4];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

type Check = fn() -> Result<(bool, String)>;

pub fn criteria() -> Vec<(u8, &'static str, Check)> {
    vec![
        (1, "quadric quotients are projective spaces", c1_quadrics as Check),
        (2, "P(T_Pn) quotients and Gale [I|-1|I]", c2_ptpn),
        (3, "lines: permutohedral quotient fans", c3_lines),
        (4, "Grassmannian Gale identity", c4_gale),
        (5, "odd quadric GIT chambers", c5_chambers),
        (6, "quadric boundary divisors", c6_boundary),
        (7, "Coxeter relations of the mutations", c7_coxeter),
        (8, "equivariance of the quotient map", c8_equivariance),
        (9, "lines: point permutation", c9_points),
        (10, "(P1)^3 diagonal quotient vs Gr chart", c10_diagonal),
        (11, "Gr(4,1) vs Gr(4,2) duality", c11_duality),
        (12, "Chow polytope normal fan", c12_chow),
        (13, "coarsenings of the Gr(4,2) quotient", c13_coarsenings),
        (14, "Gr(5,2) stress case", c14_stress),
        (15, "full definiteness certificates", c15_definite),
    ]
}

pub fn run_one(id: u8, title: &'static str, check: Check) -> CriterionOutcome {
    let t = Instant::now();
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome {
        id,
        title,
        passed,
        detail,
        millis: t.elapsed().as_millis(),
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    criteria()
        .into_iter()
        .map(|(id, title, c)| run_one(id, title, c))
        .collect()
}

pub fn format_line(o: &CriterionOutcome) -> String {
    format!(
        "[{}] {:>2} {:<42} {:>7} ms  {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.id,
        o.title,
        o.millis,
        o.detail
    )
}

fn spec_fan(spec: ChartSpec) -> Result<Fan> {
    quotient_fan(&chart_weights(&spec)?)
}

fn iso(a: &Fan, b: &Fan) -> Result<bool> {
    Ok(a.isomorphism(b)?.is_some())
}

/// Unimodular `U` with `q = U·e`, when the row lattices agree.
fn basis_change(q: &IntegerMatrix, e: &IntegerMatrix) -> Option<IntegerMatrix> {
    let eet = e.mul(&e.transpose()).ok()?;
    let inv = eet.rational_inverse()?;
    let qet = q.mul(&e.transpose()).ok()?;
    let rows: Option<Vec<IntVec>> = (0..qet.rows())
        .map(|i| {
            (0..inv.len())
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for (k, inv_k) in inv.iter().enumerate() {
                        acc += BigRational::from_integer(qet[(i, k)].clone()) * &inv_k[j];
                    }
                    acc.is_integer().then(|| acc.to_integer())
                })
                .collect()
        })
        .collect();
    let u = IntegerMatrix::from_rows(e.rows(), rows?).ok()?;
    (u.is_unimodular() && u.mul(e).ok()? == *q).then_some(u)
}

/// Quotient fan rays expressed in the basis where the projection is `e`,
/// compared with the distinct primitive columns of `e`.
fn rays_in_displayed_basis(spec: ChartSpec, e: &IntegerMatrix) -> Result<bool> {
    let ws = chart_weights(&spec)?;
    let q = ws.gale()?.into_matrix();
    let Some(u) = basis_change(&q, e) else { return Ok(false) };
    let fan = quotient_fan(&ws)?.transform(&u.unimodular_inverse().expect("unimodular"))?;
    let rays: BTreeSet<IntVec> = fan.rays().iter().cloned().collect();
    let cols: BTreeSet<IntVec> = e.columns().iter().map(|c| primitive(c)).collect::<Result<_>>()?;
    Ok(rays == cols)
}

fn c1_quadrics() -> Result<(bool, String)> {
    let t = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for n in 2..=5 {
        let spec = ChartSpec::QuadricOdd { n };
        let fan = spec_fan(spec)?;
        let good = iso(&fan, &standard_fan(&FanKind::ProjectiveSpace(n - 1))?)?
            && rays_in_displayed_basis(spec, &expected_gale(&spec)?)?;
        ok &= good;
        notes.push(format!("odd{n}:{}", if good { "P" } else { "x" }));
    }
    for n in 3..=5 {
        let spec = ChartSpec::QuadricEven { n };
        let fan = spec_fan(spec)?;
        let good = iso(&fan, &standard_fan(&FanKind::ProjectiveSpace(n - 2))?)?
            && rays_in_displayed_basis(spec, &expected_gale(&spec)?)?;
        ok &= good;
        notes.push(format!("even{n}:{}", if good { "P" } else { "x" }));
    }
    let el = t.elapsed();
    ok &= el <= QUADRIC_TIME_LIMIT;
    Ok((
        ok,
        format!("{} in {:?} (limit {:?})", notes.join(" "), el, QUADRIC_TIME_LIMIT),
    ))
}

fn c2_ptpn() -> Result<(bool, String)> {
    let mut ok = true;
    for n in 2..=5 {
        let spec = ChartSpec::Ptpn { n };
        let ws = chart_weights(&spec)?;
        let e = expected_gale(&spec)?;
        ok &= transposed_gale_dual(ws.matrix())? == row_lattice_basis(&e);
        ok &= iso(&quotient_fan(&ws)?, &standard_fan(&FanKind::ProjectiveSpace(n - 1))?)?;
        ok &= rays_in_displayed_basis(spec, &e)?;
    }
    Ok((ok, "n=2..5: Gale row space [I|-1|I], fan P^(n-1)".into()))
}

fn c3_lines() -> Result<(bool, String)> {
    let mut ok = true;
    let mut counts = String::new();
    for n in 3..=5 {
        let fan = spec_fan(ChartSpec::Grassmann { n, k: 1 })?;
        ok &= iso(&fan, &standard_fan(&FanKind::Permutohedral(n - 2))?)?;
        if n == 4 {
            let r = fan.report();
            ok &= r.ray_count == 6 && r.max_cone_count == 6;
            counts = format!("n=4: {} rays, {} cones", r.ray_count, r.max_cone_count);
        }
    }
    Ok((ok, counts))
}

fn c4_gale() -> Result<(bool, String)> {
    let mut ok = true;
    for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)] {
        let spec = ChartSpec::Grassmann { n, k };
        let w = chart_weights(&spec)?;
        ok &= transposed_gale_dual(w.matrix())? == row_lattice_basis(&expected_gale(&spec)?);
    }
    let formula_ok = ok;
    let rows: Vec<&[i64]> = DISPLAYED_GALE_5_2.iter().map(|r| r.as_slice()).collect();
    let displayed = IntegerMatrix::from_i64(&rows);
    let w = chart_weights(&ChartSpec::Grassmann { n: 5, k: 2 })?;
    let display_ok = transposed_gale_dual(w.matrix())? == row_lattice_basis(&displayed);
    let bad_rows: Vec<usize> = (0..4)
        .filter(|&i| !w.matrix().mul_vec(displayed.row(i)).iter().all(Zero::is_zero))
        .map(|i| i + 1)
        .collect();
    Ok((
        formula_ok && display_ok,
        format!(
            "Kronecker formula {} for all six; displayed (5,2) matrix {} (rows outside ker W: {:?})",
            if formula_ok { "matches" } else { "FAILS" },
            if display_ok { "matches" } else { "differs after HNF" },
            bad_rows
        ),
    ))
}

fn c5_chambers() -> Result<(bool, String)> {
    let mut ok = true;
    let mut counts = Vec::new();
    for (n, expected) in [(3, 4), (4, 8)] {
        let ws = chart_weights(&ChartSpec::QuadricOdd { n })?;
        let cx = git_chambers(&ws)?;
        ok &= cx.chambers.len() == expected;
        counts.push(cx.chambers.len());
        let qf = quotient_fan(&ws)?;
        let pn = standard_fan(&FanKind::ProjectiveSpace(n - 1))?;
        for v in &cx.representatives {
            let g = git_quotient_fan(&ws, &integral_point(v))?;
            ok &= g == qf && iso(&g, &pn)?;
        }
    }
    Ok((
        ok,
        format!("chamber counts {counts:?} (want [4, 8]); every GIT fan is P^(n-1)"),
    ))
}

fn c6_boundary() -> Result<(bool, String)> {
    let mut ok = true;
    for n in [3, 4] {
        ok &= quadric_boundary(n, false)? == expected_quadric_boundary(n, false);
        ok &= quadric_boundary(n, true)? == expected_quadric_boundary(n, true);
        let id = IntegerMatrix::identity(n);
        for i in 2..=n {
            let m = quadric_transition_involutive(n, i)?;
            ok &= m.mul(&m)? == id;
            let e = quadric_even_transition(n, i)?;
            ok &= e.mul(&e)? == IntegerMatrix::identity(n - 1);
        }
        let a = quadric_antipodal_transition(n);
        ok &= a.mul(&a)? == id;
    }
    let literal_involutions = (2..=4)
        .filter(|&i| {
            let m = quadric_transition(4, i).expect("valid");
            m.mul(&m).expect("square") == IntegerMatrix::identity(4)
        })
        .count();
    Ok((
        ok,
        format!(
            "boundary sets match for n=3,4 (odd and even); involutive transitions square to id; \
             displayed coordinate order is an involution for {literal_involutions} of 3 maps at n=4"
        ),
    ))
}

fn corrupted(m: &MultiProjectiveMap) -> Result<MultiProjectiveMap> {
    let mut comps = m.components().to_vec();
    comps[0][0] = -&comps[0][0];
    MultiProjectiveMap::new(m.source().to_vec(), m.target().to_vec(), m.names().to_vec(), comps)
}

const RELATION_CASES: [(usize, usize); 4] = [(3, 1), (4, 1), (4, 2), (5, 2)];

/// Symbolic everywhere; the largest case is also sampled.
fn modes_for(n: usize, k: usize) -> Vec<CheckMode> {
    if (n, k) == (5, 2) {
        vec![CheckMode::Symbolic, CheckMode::Eval]
    } else {
        vec![CheckMode::Symbolic]
    }
}

fn c7_coxeter() -> Result<(bool, String)> {
    let t = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, k) in RELATION_CASES {
        let gens = mutation_generators(n, k)?;
        for mode in modes_for(n, k) {
            let opts = VerifyOptions {
                mode: Some(mode),
                ..Default::default()
            };
            let rep = verify_coxeter(&gens, &opts)?;
            ok &= rep.all_hold;
            notes.push(format!("({n},{k}) {mode}:{}", rep.relations.len()));
        }
    }
    let mut gens = mutation_generators(4, 1)?;
    gens[1] = corrupted(&gens[1])?;
    let neg = verify_coxeter(&gens, &VerifyOptions::default())?;
    let negative_ok = !neg.all_hold && neg.relations.iter().any(|r| r.relation == "r2^2" && !r.holds);
    ok &= negative_ok;
    let el = t.elapsed();
    ok &= el <= COXETER_TIME_LIMIT;
    Ok((
        ok,
        format!(
            "{}; corrupted r2 rejected: {negative_ok}; {:?} (limit {:?})",
            notes.join(" "),
            el,
            COXETER_TIME_LIMIT
        ),
    ))
}

fn c8_equivariance() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (n, k) in RELATION_CASES {
        for mode in modes_for(n, k) {
            let rep = verify_equivariance(
                n,
                k,
                &VerifyOptions {
                    mode: Some(mode),
                    ..Default::default()
                },
            )?;
            ok &= rep.all_hold && rep.relations.len() == n;
            notes.push(format!("({n},{k}) {mode}"));
        }
    }
    Ok((ok, notes.join(" ")))
}

fn c9_points() -> Result<(bool, String)> {
    let mut ok = true;
    let mut sizes = Vec::new();
    for n in [4, 5] {
        let pts = lines_points(n)?;
        let gens: Vec<MultiProjectiveMap> = (2..=n).map(|i| mutation_map(n, 1, i)).collect::<Result<_>>()?;
        for i in 2..=n {
            let r = &gens[i - 2];
            ok &= projective_eq(&r.apply_point(&pts[i - 2])?, &pts[i - 1]);
            ok &= projective_eq(&r.apply_point(&pts[i - 1])?, &pts[i - 2]);
        }
        let orbit = point_orbit(&gens, &pts[0])?;
        ok &= orbit.len() == n && pts.iter().all(|p| orbit.iter().any(|o| projective_eq(o, p)));
        sizes.push(orbit.len());
    }
    Ok((ok, format!("orbit sizes {sizes:?} for n = [4, 5]")))
}

fn c10_diagonal() -> Result<(bool, String)> {
    let (fan, q) = diagonal_action_projection(1, 3)?;
    let diag = quotient_fan_general(&fan, &q)?;
    let chart = spec_fan(ChartSpec::Grassmann { n: 4, k: 1 })?;
    let ok = iso(&diag, &chart)?;
    Ok((ok, format!("{} rays vs {} rays", diag.rays().len(), chart.rays().len())))
}

fn c11_duality() -> Result<(bool, String)> {
    let a = spec_fan(ChartSpec::Grassmann { n: 4, k: 1 })?;
    let b = spec_fan(ChartSpec::Grassmann { n: 4, k: 2 })?;
    let mut ok = iso(&a, &b)?;
    let mut notes = vec![format!("Gr(4,1)~Gr(4,2): {ok}")];
    for m in [1, 2] {
        let (fan, q) = diagonal_action_projection(m, 2)?;
        let good = iso(
            &quotient_fan_general(&fan, &q)?,
            &standard_fan(&FanKind::Permutohedral(m))?,
        )?;
        ok &= good;
        notes.push(format!("(P{m})^2 diagonal ~ permutohedral {m}: {good}"));
    }
    Ok((ok, notes.join("; ")))
}

fn c12_chow() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for spec in [ChartSpec::QuadricOdd { n: 3 }, ChartSpec::Grassmann { n: 4, k: 1 }] {
        let ws = chart_weights(&spec)?;
        let good = chow_polytope(&ws)?.normal_fan()? == quotient_fan(&ws)?;
        ok &= good;
        notes.push(format!("{spec}: {good}"));
    }
    Ok((ok, notes.join("; ")))
}

fn c13_coarsenings() -> Result<(bool, String)> {
    let fine = spec_fan(ChartSpec::Grassmann { n: 4, k: 2 })?;
    let mut ok = true;
    let mut notes = Vec::new();
    for kind in [FanKind::Product(vec![1, 1]), FanKind::ProjectiveSpace(2)] {
        let coarse = standard_fan(&kind)?;
        let good = match coarsening_embedding(&coarse, &fine)? {
            Some(m) => coarse.transform(&m)?.is_coarsening_of(&fine),
            None => false,
        };
        ok &= good;
        notes.push(format!("{kind}: {good}"));
    }
    Ok((ok, notes.join("; ")))
}

fn c14_stress() -> Result<(bool, String)> {
    let t = Instant::now();
    let fan = spec_fan(ChartSpec::Grassmann { n: 5, k: 2 })?;
    let el = t.elapsed();
    let report = fan.report();
    let coarse = standard_fan(&FanKind::Product(vec![2, 2]))?;
    let coarsens = match coarsening_embedding(&coarse, &fan)? {
        Some(m) => coarse.transform(&m)?.is_coarsening_of(&fan),
        None => false,
    };
    let ok = el <= STRESS_TIME_LIMIT && report.is_complete && coarsens;
    Ok((
        ok,
        format!(
            "{:?} (limit {:?}); rays {}, max cones {}, complete {}, simplicial {}, smooth {}; coarsens to (P2)^2: {coarsens}",
            el, STRESS_TIME_LIMIT, report.ray_count, report.max_cone_count, report.is_complete,
            report.is_simplicial, report.is_smooth
        ),
    ))
}

fn c15_definite() -> Result<(bool, String)> {
    let mut ok = true;
    let mut count = 0;
    let mut specs = Vec::new();
    for n in 2..=5 {
        specs.push(ChartSpec::Ptpn { n });
        specs.push(ChartSpec::QuadricOdd { n });
        if n >= 3 {
            specs.push(ChartSpec::QuadricEven { n });
        }
    }
    for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)] {
        specs.push(ChartSpec::Grassmann { n, k });
    }
    for (k, copies) in [(1, 2), (1, 3), (2, 2), (2, 3)] {
        specs.push(ChartSpec::ProductDiagonal { k, copies });
    }
    for spec in &specs {
        let w = chart_weights(spec)?;
        let fd = is_fully_definite(w.matrix());
        let cert = fd
            .certificate
            .as_ref()
            .is_some_and(|u| certificate_is_valid(w.matrix(), u));
        ok &= fd.fully_definite && cert;
        count += 1;
    }
    let opposite = IntegerMatrix::from_i64(&[&[1, -1]]);
    let zero_col = IntegerMatrix::from_i64(&[&[1, 0, 2], &[0, 0, 1]]);
    let negatives = !is_fully_definite(&opposite).fully_definite && !is_fully_definite(&zero_col).fully_definite;
    ok &= negatives;
    Ok((
        ok,
        format!("{count} catalog charts certified; negative controls rejected: {negatives}"),
    ))
}

/// Smallest failing example for diagnostics: a nonzero entry of `W·gᵀ`.
pub fn kernel_defect(w: &IntegerMatrix, g: &[BigInt]) -> Option<BigInt> {
    w.mul_vec(g).into_iter().find(|x| !x.is_zero())
}

pub fn ensure_known(id: u8) -> Result<()> {
    if criteria().iter().any(|(i, _, _)| *i == id) {
        Ok(())
    } else {
        Err(Error::InvalidParameters(format!("no criterion {id}")))
    }
}
