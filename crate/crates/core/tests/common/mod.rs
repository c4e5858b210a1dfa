#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsrepair::gf::FieldTower;
use rsrepair::repair::RepairScheme;
use rsrepair::rs::{PolyF, RsCode};
use rsrepair::schemes::{hdfs_scheme, naive_scheme, trace_scheme, two_coset_scheme};
use rsrepair::FieldElem;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_elem(rng: &mut impl Rng, tower: &FieldTower) -> FieldElem {
    FieldElem(rng.gen_range(0..tower.field().size()) as u16)
}

pub fn random_message(rng: &mut impl Rng, code: &RsCode) -> PolyF {
    PolyF::from_coeffs((0..code.k()).map(|_| random_elem(rng, code.tower())).collect())
}

/// Every `(m, d)` with `d | m` and `m <= max_m`.
pub fn towers(max_m: u32) -> Vec<FieldTower> {
    (1..=max_m)
        .flat_map(|m| (1..=m).filter(move |d| m % d == 0).map(move |d| (m, d)))
        .map(|(m, d)| FieldTower::new(m, d, None).unwrap())
        .collect()
}

/// Sum of `x^i` by repeated multiplication; independent of Horner.
pub fn power_sum_eval(tower: &FieldTower, p: &PolyF, x: FieldElem) -> FieldElem {
    let f = tower.field();
    let mut acc = FieldElem::ZERO;
    let mut xi = FieldElem::ONE;
    for &c in p.coeffs() {
        acc += f.mul(c, xi);
        xi = f.mul(xi, x);
    }
    acc
}

/// Every scheme the suites exercise, with a label.
pub fn scheme_suite() -> Vec<(String, RepairScheme)> {
    let mut out = Vec::new();
    for (m, d, k) in [(2, 1, 2), (4, 2, 12), (4, 1, 8), (6, 3, 56), (6, 2, 48), (8, 4, 240)] {
        let t = FieldTower::new(m, d, None).unwrap();
        out.push((format!("trace GF(2^{m})/GF(2^{d}) k={k}"), trace_scheme(&t, k).unwrap()));
    }
    for (m, n, k) in [(4, 6, 4), (4, 6, 2), (6, 14, 12), (8, 30, 28)] {
        let t = FieldTower::new(m, m / 2, None).unwrap();
        out.push((format!("two_coset GF(2^{m}) n={n} k={k}"), two_coset_scheme(&t, n, k).unwrap()));
    }
    for (m, d, n, k) in [(4, 2, 16, 5), (4, 2, 9, 8), (3, 1, 8, 3), (8, 4, 14, 10)] {
        let t = FieldTower::new(m, d, None).unwrap();
        let pts = t.field().elements().take(n).collect();
        let code = RsCode::new(t, pts, k).unwrap();
        out.push((format!("naive GF(2^{m})/GF(2^{d}) n={n} k={k}"), naive_scheme(code).unwrap()));
    }
    out.push(("hdfs14_10".into(), hdfs_scheme()));
    out
}

/// `sum_{a in T} d_a >= t` for all `|T| = n - k` subsets of `A \ {a*}`:
/// exhaustive when `n <= 16`, otherwise `samples` random subsets.
/// Returns the first violation as `(star, T)`.
pub fn cutset_violation(scheme: &RepairScheme, samples: usize, seed: u64) -> Option<(usize, Vec<usize>)> {
    let code = scheme.code();
    let (n, k, t) = (code.n(), code.k(), scheme.tower().t());
    let report = scheme.validate().unwrap();
    let size = n - k;
    let mut rng = rng(seed);
    for (star, s) in report.per_star.iter().enumerate() {
        let others: Vec<usize> = (0..n).filter(|&a| a != star).collect();
        let check = |set: &[usize]| set.iter().map(|&i| s.dims[others[i]]).sum::<usize>() >= t;
        if n <= 16 {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                if !check(&idx) {
                    return Some((star, idx.iter().map(|&i| others[i]).collect()));
                }
                let r = size;
                let m = others.len();
                let Some(i) = (0..r).rev().find(|&i| idx[i] != i + m - r) else { break };
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        } else {
            for _ in 0..samples {
                let mut pool: Vec<usize> = (0..others.len()).collect();
                for i in 0..size {
                    let j = rng.gen_range(i..pool.len());
                    pool.swap(i, j);
                }
                if !check(&pool[..size]) {
                    return Some((star, pool[..size].iter().map(|&i| others[i]).collect()));
                }
            }
        }
    }
    None
}
