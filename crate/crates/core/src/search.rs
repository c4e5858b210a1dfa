//! Exhaustive search for low-bandwidth repair schemes on small codes.
//!
//! For each erasure position independently, every multiset of `t`
//! candidate polynomials is scored by `sum_a d_a`; the cheapest tuple with
//! full rank at `a*` wins, ties going to the lexicographically first tuple
//! of candidate indices.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldTower};
use crate::repair::{RepairScheme, SchemeReport};
use crate::rs::{PolyF, RsCode};
use crate::schemes::{hdfs_code, HDFS_BITS};

/// Default cap on tuples examined per erasure position.
pub const DEFAULT_PER_STAR_BUDGET: u128 = 200_000_000;

/// Cap on the number of single candidate polynomials.
pub const MAX_CANDIDATES: u128 = 1 << 22;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Only monic polynomials of degree `max_degree` whose roots are
    /// distinct points of A.
    pub roots_in_a_only: bool,
    /// Defaults to `n - k - 1`.
    pub max_degree: Option<usize>,
    pub per_star_budget: Option<u128>,
    /// Admit every non-zero polynomial instead of monic ones only.
    /// Ignored with `roots_in_a_only`.
    pub scalars: bool,
    /// Worker threads; `None` uses the global pool, `Some(1)` is sequential.
    pub jobs: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            roots_in_a_only: false,
            max_degree: None,
            per_star_budget: Some(DEFAULT_PER_STAR_BUDGET),
            scalars: false,
            jobs: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    #[serde(skip)]
    pub scheme: RepairScheme,
    pub report: SchemeReport,
    pub per_star_bits: Vec<usize>,
    /// Indices into the candidate list chosen for each position.
    pub chosen: Vec<Vec<usize>>,
    pub candidates: usize,
    pub tuples_per_star: u128,
    /// Tuples scored, summed over all positions.
    pub candidates_examined: u128,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

/// Candidate polynomials in the order that defines tie-breaking.
pub fn candidates(code: &RsCode, cfg: &SearchConfig) -> Result<Vec<PolyF>> {
    let bound = code.n() - code.k();
    let deg = cfg.max_degree.unwrap_or(bound - 1);
    if deg >= bound {
        return Err(Error::DegreeTooHigh {
            star: "-".into(),
            index: 0,
            degree: deg,
            bound,
        });
    }
    let f = code.field();
    let q = f.size() as u128;
    if cfg.roots_in_a_only {
        let count = binomial(code.n() as u128, deg as u128);
        check_candidates(count)?;
        let mut out = Vec::with_capacity(count as usize);
        for_each_combination(code.n(), deg, |idx| {
            let roots: Vec<FieldElem> = idx.iter().map(|&i| code.point(i)).collect();
            out.push(PolyF::from_roots(f, &roots));
        });
        return Ok(out);
    }
    let mut out = Vec::new();
    if cfg.scalars {
        let count = q.checked_pow(deg as u32 + 1).unwrap_or(u128::MAX) - 1;
        check_candidates(count)?;
        for_each_vector(f.size(), deg + 1, |v| {
            if v.iter().any(|x| !x.is_zero()) {
                out.push(PolyF::from_coeffs(v.to_vec()));
            }
        });
    } else {
        let count: u128 = (0..=deg as u32)
            .map(|e| q.checked_pow(e).unwrap_or(u128::MAX))
            .fold(0u128, |a, b| a.saturating_add(b));
        check_candidates(count)?;
        for e in 0..=deg {
            for_each_vector(f.size(), e, |v| {
                let mut c = v.to_vec();
                c.push(FieldElem::ONE);
                out.push(PolyF::from_coeffs(c));
            });
        }
    }
    Ok(out)
}

fn check_candidates(count: u128) -> Result<()> {
    if count > MAX_CANDIDATES {
        return Err(Error::SearchSpaceTooLarge {
            size: count,
            budget: MAX_CANDIDATES,
        });
    }
    Ok(())
}

fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Number of size-`t` multisets drawn from `count` items.
pub fn multiset_count(count: usize, t: usize) -> u128 {
    if count == 0 {
        return 0;
    }
    binomial((count + t - 1) as u128, t as u128)
}

fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize])) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        f(&idx);
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every vector in `F^len`, lowest coordinate varying slowest.
fn for_each_vector(size: usize, len: usize, mut f: impl FnMut(&[FieldElem])) {
    let mut v = vec![FieldElem::ZERO; len];
    loop {
        f(&v);
        let mut pos = len;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if (v[pos].0 as usize) + 1 < size {
                v[pos].0 += 1;
                break;
            }
            v[pos] = FieldElem::ZERO;
        }
    }
}

struct Table<'a> {
    tower: &'a FieldTower,
    n: usize,
    t: usize,
    // values[c * n + a] = candidate c at point a
    values: Vec<FieldElem>,
    // B*-line of each value: v^(q-1), zero for zero
    lines: Vec<FieldElem>,
}

impl Table<'_> {
    #[inline]
    fn value(&self, c: usize, a: usize) -> FieldElem {
        self.values[c * self.n + a]
    }

    fn rank_at(&self, tuple: &[usize], a: usize, buf: &mut Vec<FieldElem>) -> usize {
        if self.t == 1 {
            return usize::from(!self.value(tuple[0], a).is_zero());
        }
        if self.t == 2 {
            let (x, y) = (tuple[0] * self.n + a, tuple[1] * self.n + a);
            let zx = self.values[x].is_zero();
            let zy = self.values[y].is_zero();
            return match (zx, zy) {
                (true, true) => 0,
                (true, false) | (false, true) => 1,
                _ if self.lines[x] == self.lines[y] => 1,
                _ => 2,
            };
        }
        buf.clear();
        buf.extend(tuple.iter().map(|&c| self.value(c, a)));
        self.tower.rank_over_subfield(buf)
    }

    /// Cost of `tuple` for erasure `star`, or `None` without full rank there.
    fn cost(&self, tuple: &[usize], star: usize, limit: usize, buf: &mut Vec<FieldElem>) -> Option<usize> {
        if self.rank_at(tuple, star, buf) != self.t {
            return None;
        }
        let mut total = 0;
        for a in 0..self.n {
            if a != star {
                total += self.rank_at(tuple, a, buf);
                if total > limit {
                    return None;
                }
            }
        }
        Some(total)
    }
}

type Best = Option<(usize, Vec<usize>)>;

fn better(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if (y.0, &y.1) < (x.0, &x.1) { y } else { x }),
    }
}

/// Best tuple whose first index is `first`, scanning the rest in lex order.
fn scan_block(table: &Table, star: usize, first: usize, count: usize) -> Best {
    let t = table.t;
    let mut tuple = vec![first; t];
    let mut buf = Vec::with_capacity(t);
    let mut best: Best = None;
    loop {
        let limit = best.as_ref().map_or(usize::MAX, |b| b.0);
        if let Some(c) = table.cost(&tuple, star, limit, &mut buf) {
            if best.as_ref().is_none_or(|b| c < b.0) {
                best = Some((c, tuple.clone()));
            }
        }
        // next non-decreasing tuple with tuple[0] fixed
        let Some(i) = (1..t).rev().find(|&i| tuple[i] + 1 < count) else {
            return best;
        };
        tuple[i] += 1;
        for j in i + 1..t {
            tuple[j] = tuple[i];
        }
    }
}

/// Searches every erasure position of `code` and assembles the result.
pub fn exhaustive_search(code: &RsCode, cfg: &SearchConfig) -> Result<SearchResult> {
    let start = Instant::now();
    let cands = candidates(code, cfg)?;
    let tower = code.tower();
    let (n, t) = (code.n(), tower.t());
    let per_star = multiset_count(cands.len(), t);
    if let Some(budget) = cfg.per_star_budget {
        if per_star > budget {
            return Err(Error::SearchSpaceTooLarge {
                size: per_star,
                budget,
            });
        }
    }
    let f = tower.field();
    let q1 = tower.subfield_size() - 1;
    let values: Vec<FieldElem> = cands
        .iter()
        .flat_map(|p| code.points().iter().map(move |&a| p.eval(f, a)))
        .collect();
    let lines = values.iter().map(|&v| f.pow(v, q1)).collect();
    let table = Table {
        tower,
        n,
        t,
        values,
        lines,
    };
    let count = cands.len();
    let run = || -> Vec<Best> {
        (0..n)
            .into_par_iter()
            .map(|star| {
                (0..count)
                    .into_par_iter()
                    .map(|first| scan_block(&table, star, first, count))
                    .reduce(|| None, better)
            })
            .collect()
    };
    let bests = match cfg.jobs {
        Some(1) => (0..n)
            .map(|star| (0..count).map(|first| scan_block(&table, star, first, count)).fold(None, better))
            .collect(),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut chosen = Vec::with_capacity(n);
    for (star, b) in bests.into_iter().enumerate() {
        match b {
            Some((_, tuple)) => chosen.push(tuple),
            None => {
                return Err(Error::NoValidTuple {
                    star: code.point(star).to_string(),
                })
            }
        }
    }
    let polys = chosen
        .iter()
        .map(|tuple| tuple.iter().map(|&c| cands[c].clone()).collect())
        .collect();
    let scheme = RepairScheme::new(code.clone(), polys)?;
    let report = scheme.validate()?;
    Ok(SearchResult {
        per_star_bits: report.per_star_bits(),
        report,
        scheme,
        chosen,
        candidates: count,
        tuples_per_star: per_star,
        candidates_examined: per_star * n as u128,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// One row of [`TableComparison`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositionComparison {
    pub position: usize,
    pub table_bits: usize,
    pub result_bits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableComparison {
    pub positions: Vec<PositionComparison>,
    /// Positions where the result beats the table.
    pub improvements: Vec<usize>,
    /// Positions where the result is worse than the table.
    pub regressions: Vec<usize>,
    pub within_table: bool,
}

/// Compares a scheme for the built-in (14,10) code with the published table.
pub fn compare_with_table(scheme: &RepairScheme) -> Result<TableComparison> {
    if *scheme.code() != hdfs_code() {
        return Err(Error::WrongCode);
    }
    let bits = scheme.validate()?.per_star_bits();
    let positions: Vec<PositionComparison> = bits
        .iter()
        .zip(HDFS_BITS)
        .enumerate()
        .map(|(position, (&result_bits, table_bits))| PositionComparison {
            position,
            table_bits,
            result_bits,
        })
        .collect();
    let improvements: Vec<usize> = positions
        .iter()
        .filter(|p| p.result_bits < p.table_bits)
        .map(|p| p.position)
        .collect();
    let regressions: Vec<usize> = positions
        .iter()
        .filter(|p| p.result_bits > p.table_bits)
        .map(|p| p.position)
        .collect();
    Ok(TableComparison {
        within_table: regressions.is_empty(),
        positions,
        improvements,
        regressions,
    })
}

pub fn verify_against_table(result: &SearchResult) -> Result<TableComparison> {
    compare_with_table(&result.scheme)
}
