mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use rsrepair::bounds::{ceil_bound, linear_lower_bound, trivial_bound};
use rsrepair::format::{parse_scheme, write_scheme};
use rsrepair::gf::FieldTower;
use rsrepair::repair::RepairScheme;
use rsrepair::rs::{
    grs_dual_multipliers, lagrange_coeff, lagrange_interpolate, vanishing_poly, PolyF, RsCode,
};
use rsrepair::schemes::{naive_scheme, two_coset_scheme};
use rsrepair::search::{candidates, exhaustive_search, SearchConfig};
use rsrepair::sim::{provision, ClusterConfig};
use rsrepair::FieldElem;

const SMALL: [(u32, u32); 8] = [(2, 1), (3, 1), (4, 1), (4, 2), (6, 2), (6, 3), (8, 2), (8, 4)];

fn small_tower(i: usize) -> FieldTower {
    let (m, d) = SMALL[i % SMALL.len()];
    FieldTower::new(m, d, None).unwrap()
}

fn b_elem(tower: &FieldTower, raw: u32) -> FieldElem {
    let sub = tower.subfield_elements();
    sub[raw as usize % sub.len()]
}

fn elem(tower: &FieldTower, raw: u32) -> FieldElem {
    FieldElem((raw as usize % tower.field().size()) as u16)
}

/// `|span_B(s)|` by listing every B-combination; the rank is its log.
fn brute_rank(tower: &FieldTower, s: &[FieldElem]) -> usize {
    let f = tower.field();
    let sub = tower.subfield_elements();
    let mut span = BTreeSet::from([FieldElem::ZERO]);
    for &x in s {
        let mut next = BTreeSet::new();
        for &y in &span {
            for &b in &sub {
                next.insert(y + f.mul(b, x));
            }
        }
        span = next;
    }
    let q = sub.len();
    let mut r = 0;
    let mut size = 1;
    while size < span.len() {
        size *= q;
        r += 1;
    }
    assert_eq!(size, span.len());
    r
}

/// Distinct points drawn from `seeds`.
fn distinct_points(tower: &FieldTower, seeds: &[u32], n: usize) -> Vec<FieldElem> {
    let size = tower.field().size();
    let mut pool: Vec<FieldElem> = tower.field().elements().collect();
    for (i, &s) in seeds.iter().enumerate().take(n) {
        let j = i + s as usize % (size - i);
        pool.swap(i, j);
    }
    pool.truncate(n);
    pool
}

/// A random valid scheme: random dual polynomials of degree < n - k,
/// redrawn until they have full B-rank at each erased point.
fn random_scheme(tower: &FieldTower, n: usize, k: usize, seed: u64) -> RepairScheme {
    let mut r = rng(seed);
    let f = tower.field();
    let seeds: Vec<u32> = (0..n).map(|_| r.gen()).collect();
    let points = distinct_points(tower, &seeds, n);
    let code = RsCode::new(tower.clone(), points, k).unwrap();
    let t = tower.t();
    let polys = (0..n)
        .map(|star| loop {
            let set: Vec<PolyF> = (0..t)
                .map(|_| PolyF::from_coeffs((0..n - k).map(|_| random_elem(&mut r, tower)).collect()))
                .collect();
            let at: Vec<FieldElem> = set.iter().map(|p| p.eval(f, code.point(star))).collect();
            if tower.rank_over_subfield(&at) == t {
                break set;
            }
        })
        .collect();
    RepairScheme::new(code, polys).unwrap()
}

// ---- gf ----

#[test]
fn trace_surjective_and_frobenius_fixed_points_exhaustive() {
    for tower in towers(12) {
        let f = tower.field();
        let sub: BTreeSet<FieldElem> = tower.subfield_elements().into_iter().collect();
        assert_eq!(sub.len() as u64, tower.subfield_size());
        let mut image = BTreeSet::new();
        for beta in f.elements() {
            image.insert(tower.trace(beta));
            let fixed = f.frobenius(beta, tower.d()) == beta;
            assert_eq!(fixed, sub.contains(&beta), "m={} d={} {beta}", tower.m(), tower.d());
            assert_eq!(tower.in_subfield(beta), fixed);
        }
        assert_eq!(image, sub, "m={} d={}", tower.m(), tower.d());
    }
}

#[test]
fn trace_is_b_linear_exhaustive_in_beta() {
    let mut r = rng(1);
    for tower in towers(12) {
        let f = tower.field();
        let sub = tower.subfield_elements();
        for beta in f.elements() {
            let b = sub[r.gen_range(0..sub.len())];
            let gamma = random_elem(&mut r, &tower);
            let lhs = tower.trace(f.mul(b, beta) + gamma);
            let rhs = f.mul(b, tower.trace(beta)) + tower.trace(gamma);
            assert_eq!(lhs, rhs, "m={} d={}", tower.m(), tower.d());
        }
    }
}

#[test]
fn dual_basis_delta_identity_exhaustive() {
    for tower in towers(12) {
        let f = tower.field();
        let (z, v) = (tower.basis(), tower.dual());
        for (i, &zi) in z.iter().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                let want = if i == j { FieldElem::ONE } else { FieldElem::ZERO };
                assert_eq!(tower.trace(f.mul(zi, vj)), want, "m={} d={}", tower.m(), tower.d());
            }
        }
        for x in f.elements() {
            let traces: Vec<FieldElem> = z.iter().map(|&zi| tower.trace(f.mul(zi, x))).collect();
            assert_eq!(tower.reconstruct(&traces), x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn trace_linearity(ti in 0usize..8, b in any::<u32>(), x in any::<u32>(), y in any::<u32>()) {
        let tower = small_tower(ti);
        let f = tower.field();
        let (b, x, y) = (b_elem(&tower, b), elem(&tower, x), elem(&tower, y));
        prop_assert_eq!(
            tower.trace(f.mul(b, x) + y),
            f.mul(b, tower.trace(x)) + tower.trace(y)
        );
    }

    #[test]
    fn rank_matches_span_size(ti in 0usize..6, raw in prop::collection::vec(any::<u32>(), 0..4)) {
        let tower = small_tower(ti);
        let s: Vec<FieldElem> = raw.iter().map(|&x| elem(&tower, x)).collect();
        let r = tower.rank_over_subfield(&s);
        prop_assert_eq!(r, brute_rank(&tower, &s));
        prop_assert!(r <= s.len().min(tower.t()));
    }

    #[test]
    fn rank_invariant_under_b_scaling(
        ti in 0usize..8,
        raw in prop::collection::vec(any::<u32>(), 1..6),
        which in any::<usize>(),
        b in any::<u32>(),
    ) {
        let tower = small_tower(ti);
        let f = tower.field();
        let mut s: Vec<FieldElem> = raw.iter().map(|&x| elem(&tower, x)).collect();
        let before = tower.rank_over_subfield(&s);
        let mut b = b_elem(&tower, b);
        if b.is_zero() {
            b = FieldElem::ONE;
        }
        let i = which % s.len();
        s[i] = f.mul(s[i], b);
        prop_assert_eq!(tower.rank_over_subfield(&s), before);
        prop_assert!(before <= s.len().min(tower.t()));
    }

    #[test]
    fn reconstruction_from_traces(ti in 0usize..8, seed in any::<u64>(), x in any::<u32>()) {
        let tower = small_tower(ti);
        let f = tower.field();
        let mut r = rng(seed);
        let z = loop {
            let z: Vec<FieldElem> = (0..tower.t()).map(|_| random_elem(&mut r, &tower)).collect();
            if tower.rank_over_subfield(&z) == tower.t() {
                break z;
            }
        };
        let nu = tower.dual_basis(&z).unwrap();
        let x = elem(&tower, x);
        let back: FieldElem = z
            .iter()
            .zip(&nu)
            .map(|(&zi, &vi)| f.mul(tower.trace(f.mul(zi, x)), vi))
            .sum();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn coords_round_trip(ti in 0usize..8, seed in any::<u64>()) {
        let tower = small_tower(ti);
        let f = tower.field();
        let mut r = rng(seed);
        let raw: Vec<FieldElem> = (0..tower.t()).map(|_| random_elem(&mut r, &tower)).collect();
        let basis = tower.subfield_span_basis(&raw);
        prop_assert_eq!(basis.len(), tower.rank_over_subfield(&raw));
        let sub = tower.subfield_elements();
        let c: Vec<FieldElem> = basis.iter().map(|_| sub[r.gen_range(0..sub.len())]).collect();
        let v: FieldElem = c.iter().zip(&basis).map(|(&a, &b)| f.mul(a, b)).sum();
        prop_assert_eq!(tower.coords_over_span(&basis, v).unwrap(), c);
    }
}

// ---- rs ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn horner_matches_power_sum(ti in 0usize..8, coeffs in prop::collection::vec(any::<u32>(), 0..12), x in any::<u32>()) {
        let tower = small_tower(ti);
        let p = PolyF::from_coeffs(coeffs.iter().map(|&c| elem(&tower, c)).collect());
        let x = elem(&tower, x);
        prop_assert_eq!(p.eval(tower.field(), x), power_sum_eval(&tower, &p, x));
        let center = elem(&tower, coeffs.first().copied().unwrap_or(3));
        prop_assert_eq!(p.evaluator(tower.field(), center).eval(tower.field(), x), power_sum_eval(&tower, &p, x));
    }

    #[test]
    fn interpolation_round_trip(ti in 3usize..8, seed in any::<u64>(), k in 1usize..10) {
        let tower = small_tower(ti);
        let f = tower.field();
        let mut r = rng(seed);
        let k = k.min(f.size());
        let p = PolyF::from_coeffs((0..k).map(|_| random_elem(&mut r, &tower)).collect());
        let seeds: Vec<u32> = (0..k).map(|_| r.gen()).collect();
        let pts: Vec<(FieldElem, FieldElem)> = distinct_points(&tower, &seeds, k)
            .into_iter()
            .map(|a| (a, power_sum_eval(&tower, &p, a)))
            .collect();
        prop_assert_eq!(lagrange_interpolate(f, &pts).unwrap(), p);
    }

    #[test]
    fn lagrange_identity(ti in 3usize..8, seed in any::<u64>(), k in 1usize..8) {
        let tower = small_tower(ti);
        let f = tower.field();
        let mut r = rng(seed);
        let seeds: Vec<u32> = (0..=k).map(|_| r.gen()).collect();
        let pts = distinct_points(&tower, &seeds, k + 1);
        let (star, s) = (pts[k], &pts[..k]);
        let p = PolyF::from_coeffs((0..k).map(|_| random_elem(&mut r, &tower)).collect());
        let sum: FieldElem = s
            .iter()
            .map(|&a| f.mul(lagrange_coeff(f, s, a, star).unwrap(), power_sum_eval(&tower, &p, a)))
            .sum();
        prop_assert_eq!(sum, power_sum_eval(&tower, &p, star));
    }

    #[test]
    fn rs_and_dual_grs_are_orthogonal(ti in 3usize..8, seed in any::<u64>(), n in 2usize..=16, k in 1usize..16) {
        let tower = small_tower(ti);
        let f = tower.field();
        let n = n.min(f.size());
        prop_assume!(k < n);
        let mut r = rng(seed);
        let seeds: Vec<u32> = (0..n).map(|_| r.gen()).collect();
        let pts = distinct_points(&tower, &seeds, n);
        let code = RsCode::new(tower.clone(), pts.clone(), k).unwrap();
        let lambda = grs_dual_multipliers(f, &pts).unwrap();
        let dual = RsCode::grs(tower.clone(), pts, n - k, lambda).unwrap();
        let c = code.encode(&random_message(&mut r, &code)).unwrap();
        let e = dual.encode(&random_message(&mut r, &dual)).unwrap();
        let dot: FieldElem = c.iter().zip(&e).map(|(&a, &b)| f.mul(a, b)).sum();
        prop_assert_eq!(dot, FieldElem::ZERO);
    }

    #[test]
    fn decode_from_any_k_positions(ti in 3usize..8, seed in any::<u64>(), n in 2usize..=16, k in 1usize..16) {
        let tower = small_tower(ti);
        let n = n.min(tower.field().size());
        prop_assume!(k < n);
        let mut r = rng(seed);
        let seeds: Vec<u32> = (0..n).map(|_| r.gen()).collect();
        let pts = distinct_points(&tower, &seeds, n);
        let lam: Vec<FieldElem> = (0..n).map(|_| loop {
            let x = random_elem(&mut r, &tower);
            if !x.is_zero() { break x; }
        }).collect();
        let code = RsCode::grs(tower.clone(), pts, k, lam).unwrap();
        let msg = random_message(&mut r, &code);
        let word = code.encode(&msg).unwrap();
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = r.gen_range(i..n);
            idx.swap(i, j);
        }
        prop_assert_eq!(code.decode_from(&word, &idx[..k]).unwrap(), msg);
    }

    #[test]
    fn stuff_ratio_is_independent_of_s(seed in any::<u64>(), n in 6usize..=16, k in 2usize..6) {
        let tower = small_tower(7);
        let f = tower.field();
        prop_assume!(k + 2 <= n);
        let mut r = rng(seed);
        let seeds: Vec<u32> = (0..n).map(|_| r.gen()).collect();
        let a = distinct_points(&tower, &seeds, n);
        let (alpha, star) = (a[0], a[n - 1]);
        let middle = &a[1..n - 1];
        // two k-subsets of A \ {a*} that both contain alpha
        let s1: Vec<FieldElem> = std::iter::once(alpha).chain(middle[..k - 1].iter().copied()).collect();
        let s2: Vec<FieldElem> = std::iter::once(alpha).chain(middle[middle.len() - (k - 1)..].iter().copied()).collect();
        let ratio = |s: &[FieldElem]| {
            let rest: Vec<FieldElem> = a.iter().copied().filter(|x| !s.contains(x)).collect();
            let pbar = vanishing_poly(f, &rest).unwrap();
            let d = pbar.derivative();
            f.div(f.mul(lagrange_coeff(f, s, alpha, star).unwrap(), d.eval(f, star)), pbar.eval(f, alpha))
        };
        prop_assert_eq!(ratio(&s1), ratio(&s2));
    }

    #[test]
    fn vanishing_derivative_is_product_of_differences(ti in 3usize..8, seed in any::<u64>(), n in 1usize..12) {
        let tower = small_tower(ti);
        let f = tower.field();
        let n = n.min(f.size());
        let mut r = rng(seed);
        let seeds: Vec<u32> = (0..n).map(|_| r.gen()).collect();
        let roots = distinct_points(&tower, &seeds, n);
        let d = vanishing_poly(f, &roots).unwrap().derivative();
        for &a in &roots {
            let prod = roots.iter().filter(|&&b| b != a).fold(FieldElem::ONE, |acc, &b| f.mul(acc, a - b));
            prop_assert_eq!(d.eval(f, a), prod);
        }
    }
}

#[test]
fn mds_distance_on_enumerable_codes() {
    for (m, n, k) in [(2, 4, 1), (2, 4, 2), (2, 3, 3), (3, 8, 3), (3, 7, 5), (4, 10, 3), (4, 16, 4), (5, 12, 3)] {
        let tower = FieldTower::new(m, 1, None).unwrap();
        let size = tower.field().size();
        let pts: Vec<FieldElem> = tower.field().elements().skip(size - n).collect();
        let code = RsCode::new(tower, pts, k).unwrap();
        assert_eq!(code.mds_distance().unwrap(), n - k + 1, "GF(2^{m}) n={n} k={k}");
    }
}

// ---- repair ----

#[test]
fn random_schemes_round_trip() {
    for (seed, (ti, n, k)) in [(3, 6, 3), (3, 9, 4), (1, 8, 5), (5, 12, 6), (4, 10, 8), (7, 14, 10), (2, 7, 2)]
        .into_iter()
        .enumerate()
    {
        let tower = small_tower(ti);
        let scheme = random_scheme(&tower, n, k, seed as u64);
        let report = scheme.validate().unwrap();
        let code = scheme.code();
        let mut r = rng(100 + seed as u64);
        for _ in 0..10 {
            let msg = random_message(&mut r, code);
            let word = code.encode(&msg).unwrap();
            for star in 0..n {
                let tr = scheme.repair(&word, star).unwrap();
                assert_eq!(tr.reconstructed, word[star]);
                assert_eq!(tr.downloaded_subsymbols, report.per_star[star].subsymbols);
                assert!(tr.exchanges.iter().all(|e| e.index != star));
            }
        }
        assert_eq!(parse_scheme(&write_scheme(&scheme)).unwrap(), scheme);
    }
}

#[test]
fn suite_schemes_validate_and_repair_everywhere() {
    let mut r = rng(7);
    for (name, scheme) in scheme_suite() {
        let report = scheme.validate().unwrap();
        let code = scheme.code();
        for _ in 0..3 {
            let word = code.encode(&random_message(&mut r, code)).unwrap();
            for star in 0..code.n() {
                let tr = scheme.repair(&word, star).unwrap();
                assert_eq!(tr.reconstructed, word[star], "{name} at {star}");
                assert_eq!(tr.downloaded_subsymbols, report.per_star[star].subsymbols, "{name}");
            }
        }
    }
}

#[test]
fn multiplier_identity_on_random_messages() {
    let mut r = rng(11);
    for (name, scheme) in scheme_suite().into_iter().filter(|(_, s)| s.code().n() <= 64) {
        let code = scheme.code();
        let f = code.field();
        for _ in 0..20 {
            let word = code.encode(&random_message(&mut r, code)).unwrap();
            for star in 0..code.n() {
                let mult = scheme.multipliers(star).unwrap();
                for (i, &z) in mult.zeta.iter().enumerate() {
                    let sum: FieldElem = (0..code.n())
                        .filter(|&a| a != star)
                        .map(|a| f.mul(mult.mu[a][i], f.div(word[a], code.multiplier(a))))
                        .sum();
                    let at_star = f.div(word[star], code.multiplier(star));
                    assert_eq!(sum, f.mul(z, at_star), "{name} at {star}");
                }
            }
        }
    }
}

#[test]
fn from_mu_inverts_multipliers() {
    for (name, scheme) in scheme_suite().into_iter().filter(|(_, s)| s.code().n() <= 64) {
        let code = scheme.code();
        let per_star: Vec<_> = (0..code.n()).map(|s| scheme.multipliers(s).unwrap()).collect();
        assert_eq!(RepairScheme::from_mu(code.clone(), &per_star).unwrap(), scheme, "{name}");
    }
}

#[test]
fn cutset_subset_inequality() {
    for (name, scheme) in scheme_suite() {
        assert_eq!(cutset_violation(&scheme, 1000, 5), None, "{name}");
    }
    for seed in 0..6 {
        let scheme = random_scheme(&small_tower(3 + seed as usize % 3), 8, 4, 50 + seed);
        assert_eq!(cutset_violation(&scheme, 1000, seed), None);
    }
}

#[test]
fn grs_and_rs_repair_agree() {
    let mut r = rng(13);
    for (name, scheme) in scheme_suite().into_iter().filter(|(_, s)| s.code().n() <= 64) {
        let rs = scheme.code().without_multipliers();
        let n = rs.n();
        let lam: Vec<FieldElem> = (0..n)
            .map(|_| loop {
                let x = random_elem(&mut r, rs.tower());
                if !x.is_zero() {
                    break x;
                }
            })
            .collect();
        let grs = RsCode::grs(rs.tower().clone(), rs.points().to_vec(), rs.k(), lam.clone()).unwrap();
        let a = RepairScheme::new(rs.clone(), scheme.polys().to_vec()).unwrap();
        let b = RepairScheme::new(grs.clone(), scheme.polys().to_vec()).unwrap();
        let f = rs.field();
        let msg = random_message(&mut r, &rs);
        let (wa, wb) = (rs.encode(&msg).unwrap(), grs.encode(&msg).unwrap());
        for star in 0..n {
            let (ta, tb) = (a.repair(&wa, star).unwrap(), b.repair(&wb, star).unwrap());
            assert_eq!(f.div(tb.reconstructed, lam[star]), ta.reconstructed, "{name}");
            assert_eq!(ta.downloaded_subsymbols, tb.downloaded_subsymbols, "{name}");
        }
    }
}

#[test]
fn naive_scheme_downloads_k_symbols() {
    for (m, d, n, k) in [(4, 2, 16, 5), (4, 1, 10, 3), (6, 3, 20, 19), (2, 2, 4, 2), (8, 4, 14, 10)] {
        let tower = FieldTower::new(m, d, None).unwrap();
        let pts = tower.field().elements().take(n).collect();
        let scheme = naive_scheme(RsCode::new(tower.clone(), pts, k).unwrap()).unwrap();
        let report = scheme.validate().unwrap();
        assert!(report.per_star.iter().all(|s| s.subsymbols == k * tower.t()));
    }
}

// ---- schemes ----

#[test]
fn two_coset_rank_pattern() {
    for (m, n, k) in [(4, 6, 4), (4, 6, 2), (6, 14, 12), (8, 30, 28), (8, 10, 7)] {
        let tower = FieldTower::new(m, m / 2, None).unwrap();
        let f = tower.field();
        let scheme = two_coset_scheme(&tower, n, k).unwrap();
        let report = scheme.validate().unwrap();
        let code = scheme.code();
        for (star, s) in report.per_star.iter().enumerate() {
            for a in (0..n).filter(|&a| a != star) {
                let same = tower.in_subfield(f.div(code.point(a), code.point(star)));
                assert_eq!(s.dims[a], if same { 2 } else { 1 }, "m={m} n={n} star={star} a={a}");
            }
        }
    }
}

// ---- bounds ----

/// For `k = n(1 - 1/q)` the trace scheme downloads `n - 1`; the gap to the
/// linear bound must lie in `[0, 1)`.
#[test]
fn trace_optimality_gap_below_one() {
    let mut failures = Vec::new();
    for tower in towers(12) {
        let (n, q) = (tower.field().size(), tower.subfield_size() as usize);
        let k = n - n / q;
        if k == 0 {
            failures.push(format!("m={} d={}: k = 0", tower.m(), tower.d()));
            continue;
        }
        let lb = linear_lower_bound(n, k, q as u64).unwrap();
        let gap = (n - 1) as f64 - lb;
        if !(0.0..1.0).contains(&gap) || ceil_bound(lb) != (n - 1) as u64 {
            failures.push(format!("m={} d={}: n-1={} lb={lb:.4} gap={gap:.4}", tower.m(), tower.d(), n - 1));
        }
    }
    assert!(failures.is_empty(), "gap outside [0, 1):\n{}", failures.join("\n"));
}

proptest! {
    #[test]
    fn linear_bound_monotone(n in 3usize..2000, k in 1usize..2000, d in 1u32..8) {
        prop_assume!(k + 1 < n);
        let q = 1u64 << d;
        let lb = linear_lower_bound(n, k, q).unwrap();
        prop_assert!(linear_lower_bound(n, k + 1, q).unwrap() > lb);
        prop_assert!(linear_lower_bound(n, k, q * 2).unwrap() < lb);
        prop_assert!(lb >= 0.0);
    }
}

#[test]
fn trivial_bound_below_every_scheme() {
    let mut all: Vec<(String, RepairScheme)> = scheme_suite();
    all.extend((0..4).map(|s| (format!("random {s}"), random_scheme(&small_tower(3), 9, 4, s))));
    for (name, scheme) in all {
        let report = scheme.validate().unwrap();
        let floor = trivial_bound(report.k, report.t);
        for s in &report.per_star {
            assert!(s.subsymbols >= floor, "{name}: {} < {floor}", s.subsymbols);
        }
    }
}

// ---- search ----

fn small_search_code() -> RsCode {
    let tower = FieldTower::new(4, 2, None).unwrap();
    let pts = tower.field().elements().skip(3).take(6).collect();
    RsCode::new(tower, pts, 3).unwrap()
}

#[test]
fn search_is_deterministic_across_workers() {
    let code = small_search_code();
    let run = |jobs| {
        let cfg = SearchConfig {
            jobs: Some(jobs),
            ..SearchConfig::default()
        };
        let r = exhaustive_search(&code, &cfg).unwrap();
        (serde_json::to_string(&r).unwrap(), write_scheme(&r.scheme))
    };
    let one = run(1);
    assert_eq!(one, run(2));
    assert_eq!(one, run(3));
}

#[test]
fn search_is_minimal_against_brute_force() {
    let code = small_search_code();
    let tower = code.tower();
    let t = tower.t();
    for cfg in [
        SearchConfig::default(),
        SearchConfig {
            roots_in_a_only: true,
            ..SearchConfig::default()
        },
        SearchConfig {
            scalars: true,
            max_degree: Some(1),
            ..SearchConfig::default()
        },
    ] {
        let cands = candidates(&code, &cfg).unwrap();
        let n = code.n();
        let expected_cands = if cfg.roots_in_a_only {
            // monic, degree n-k-1, distinct roots in A: C(n, n-k-1)
            15
        } else if cfg.scalars {
            16 * 16 - 1
        } else {
            1 + 16 + 256
        };
        assert_eq!(cands.len(), expected_cands);
        let result = exhaustive_search(&code, &cfg).unwrap();
        assert_eq!(result.candidates, cands.len());
        let pairs = (cands.len() * (cands.len() - 1) / 2 + cands.len()) as u128;
        assert_eq!(result.tuples_per_star, pairs);
        assert_eq!(result.candidates_examined, pairs * n as u128);
        assert_eq!(result.scheme.validate().unwrap(), result.report);

        let vals: Vec<Vec<FieldElem>> = cands
            .iter()
            .map(|p| code.points().iter().map(|&a| power_sum_eval(tower, p, a)).collect())
            .collect();
        for star in 0..n {
            let mut best = usize::MAX;
            for i in 0..cands.len() {
                for j in i..cands.len() {
                    if brute_rank(tower, &[vals[i][star], vals[j][star]]) < t {
                        continue;
                    }
                    let b: usize = (0..n)
                        .filter(|&a| a != star)
                        .map(|a| brute_rank(tower, &[vals[i][a], vals[j][a]]))
                        .sum();
                    best = best.min(b);
                }
            }
            assert_eq!(result.report.per_star[star].subsymbols, best, "star {star}");
        }
    }
}

// ---- sim ----

#[test]
fn sim_conservation_and_accounting() {
    for (name, scheme) in scheme_suite().into_iter().filter(|(_, s)| s.code().n() <= 32) {
        let code = scheme.code().clone();
        let (n, t, d) = (code.n(), scheme.tower().t() as u64, scheme.tower().d() as u64);
        let stripes = n * t as usize + 3;
        let mut cl = provision(&ClusterConfig {
            scheme: scheme.clone(),
            m_stripes: stripes,
            seed: 21,
        })
        .unwrap();
        for (s, msg) in cl.messages().iter().enumerate() {
            let idx: Vec<usize> = (0..n).rev().collect();
            assert_eq!(&code.decode_from(&cl.stripe(s), &idx).unwrap(), msg, "{name}");
        }
        let before = cl.servers().to_vec();
        let expected: Vec<u64> = (0..n)
            .map(|node| {
                (0..stripes)
                    .map(|s| scheme.repair(&cl.stripe(s), node).unwrap().downloaded_subsymbols as u64 * d)
                    .sum()
            })
            .collect();
        let all: Vec<usize> = (0..n).collect();
        let c = cl.campaign(&all).unwrap();
        assert!(c.conserved && c.all_verified, "{name}");
        assert_eq!(cl.servers(), &before[..]);
        for (rep, want) in c.reports.iter().zip(&expected) {
            assert_eq!(rep.downstream_bits, *want, "{name}");
            assert_eq!(rep.upstream_bits, n as u64 * t * d);
            assert!(rep.upstream_bits < rep.downstream_bits, "{name}");
            assert_eq!(rep.naive_downstream_bits, stripes as u64 * code.k() as u64 * t * d);
        }
    }
}
