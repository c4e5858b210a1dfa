//! Linear repair schemes as families of dual polynomials, their validation,
//! and execution by trace queries.
//!
//! A scheme fixes, for every evaluation point `a*`, polynomials
//! `p_1 .. p_t` of degree below `n - k` whose values at `a*` are a B-basis
//! of F. Node `a` then answers `d_a = dim_B span{p_i(a)}` trace queries.
//! In characteristic 2 the sign in `p(a*) = -zeta` disappears, so
//! `zeta_i = p_i(a*)` throughout.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::span::{Offer, SpanBuilder};
use crate::gf::{FieldElem, FieldTower};
use crate::rs::{lagrange_interpolate, PolyF, RsCode};

/// Dual polynomials for every erasure position of a code.
#[derive(Clone, Debug)]
pub struct RepairScheme {
    code: RsCode,
    polys: Vec<Vec<PolyF>>,
    plans: Vec<OnceLock<RepairPlan>>,
}

impl PartialEq for RepairScheme {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && self.polys == other.polys
    }
}

/// Per-erasure summary produced by [`RepairScheme::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub alpha_star: String,
    /// `d_a` for every position of A, in code order; the erased slot is 0.
    pub dims: Vec<usize>,
    pub subsymbols: usize,
    pub bits: usize,
    pub locality: usize,
}

/// Bandwidth of a validated scheme.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemeReport {
    pub m: u32,
    pub d: u32,
    pub t: usize,
    pub n: usize,
    pub k: usize,
    pub per_star: Vec<StarReport>,
    pub bandwidth_subsymbols: usize,
    pub bandwidth_bits: usize,
    pub max_locality: usize,
}

impl SchemeReport {
    pub fn per_star_bits(&self) -> Vec<usize> {
        self.per_star.iter().map(|s| s.bits).collect()
    }

    pub fn per_star_subsymbols(&self) -> Vec<usize> {
        self.per_star.iter().map(|s| s.subsymbols).collect()
    }
}

/// `zeta_i = p_i(a*)` and `mu[a][i]`, the coefficient of `f(a)` in
/// `zeta_i f(a*) = sum_{a != a*} mu[a][i] f(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multipliers {
    pub star: usize,
    pub zeta: Vec<FieldElem>,
    /// Indexed by code position; the row at `star` is all zero.
    pub mu: Vec<Vec<FieldElem>>,
}

/// Query sets for one erasure, derived once and reused across codewords.
#[derive(Clone, Debug)]
pub struct RepairPlan {
    star: usize,
    zeta: Vec<FieldElem>,
    nu: Vec<FieldElem>,
    nodes: Vec<NodePlan>,
}

#[derive(Clone, Debug)]
struct NodePlan {
    index: usize,
    queries: Vec<FieldElem>,
    // coords[i][j]: B-coefficient of queries[j] in mu_i
    coords: Vec<Vec<FieldElem>>,
}

impl RepairPlan {
    pub fn star(&self) -> usize {
        self.star
    }

    pub fn zeta(&self) -> &[FieldElem] {
        &self.zeta
    }

    /// Dual basis of `zeta` under the trace.
    pub fn nu(&self) -> &[FieldElem] {
        &self.nu
    }

    /// `(position, Q_a)` for every node that is queried.
    pub fn queries(&self) -> impl Iterator<Item = (usize, &[FieldElem])> {
        self.nodes.iter().map(|n| (n.index, n.queries.as_slice()))
    }

    pub fn subsymbols(&self) -> usize {
        self.nodes.iter().map(|n| n.queries.len()).sum()
    }
}

/// What one surviving node was asked and answered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeExchange {
    pub index: usize,
    pub point: FieldElem,
    pub queries: Vec<FieldElem>,
    pub responses: Vec<FieldElem>,
}

/// Record of a single repair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairTranscript {
    pub star_index: usize,
    pub alpha_star: FieldElem,
    pub exchanges: Vec<NodeExchange>,
    pub reconstructed: FieldElem,
    pub downloaded_subsymbols: usize,
    pub downloaded_bits: usize,
}

impl RepairScheme {
    /// `polys[s]` holds `P(a*)` for `a* = code.point(s)`.
    pub fn new(code: RsCode, polys: Vec<Vec<PolyF>>) -> Result<RepairScheme> {
        let n = code.n();
        if polys.len() != n {
            return Err(Error::InvalidScheme(format!(
                "{} polynomial sets for {} evaluation points",
                polys.len(),
                n
            )));
        }
        let scheme = RepairScheme {
            plans: (0..n).map(|_| OnceLock::new()).collect(),
            code,
            polys,
        };
        for s in 0..n {
            scheme.check_star(s)?;
        }
        Ok(scheme)
    }

    pub fn code(&self) -> &RsCode {
        &self.code
    }

    pub fn tower(&self) -> &FieldTower {
        self.code.tower()
    }

    pub fn polys(&self) -> &[Vec<PolyF>] {
        &self.polys
    }

    pub fn polys_at(&self, star: usize) -> &[PolyF] {
        &self.polys[star]
    }

    fn star_name(&self, star: usize) -> String {
        self.code.point(star).to_string()
    }

    fn check_star(&self, star: usize) -> Result<()> {
        let t = self.tower().t();
        let set = &self.polys[star];
        if set.len() != t {
            return Err(Error::InvalidScheme(format!(
                "alpha* = {} has {} polynomials, need t = {}",
                self.star_name(star),
                set.len(),
                t
            )));
        }
        let bound = self.code.n() - self.code.k();
        for (index, p) in set.iter().enumerate() {
            if let Some(degree) = p.degree() {
                if degree >= bound {
                    return Err(Error::DegreeTooHigh {
                        star: self.star_name(star),
                        index,
                        degree,
                        bound,
                    });
                }
            }
        }
        let zeta = self.zeta(star);
        let rank = self.tower().rank_over_subfield(&zeta);
        if rank != t {
            return Err(Error::RankDeficientAtStar {
                star: self.star_name(star),
                rank,
                t,
            });
        }
        Ok(())
    }

    fn zeta(&self, star: usize) -> Vec<FieldElem> {
        let f = self.code.field();
        let a = self.code.point(star);
        self.polys[star].iter().map(|p| p.eval(f, a)).collect()
    }

    /// `values[i][a] = p_i(a)` for the polynomials of `star`.
    fn values(&self, star: usize) -> Vec<Vec<FieldElem>> {
        let f = self.code.field();
        let center = self.code.point(star);
        self.polys[star]
            .iter()
            .map(|p| {
                let ev = p.evaluator(f, center);
                self.code.points().iter().map(|&a| ev.eval(f, a)).collect()
            })
            .collect()
    }

    fn star_report(&self, star: usize) -> StarReport {
        let tower = self.tower();
        let values = self.values(star);
        let mut buf = Vec::with_capacity(values.len());
        let dims: Vec<usize> = (0..self.code.n())
            .map(|a| {
                if a == star {
                    return 0;
                }
                buf.clear();
                buf.extend(values.iter().map(|row| row[a]));
                tower.rank_over_subfield(&buf)
            })
            .collect();
        let subsymbols = dims.iter().sum();
        StarReport {
            alpha_star: self.star_name(star),
            locality: dims.iter().filter(|&&x| x > 0).count(),
            bits: subsymbols * tower.d() as usize,
            subsymbols,
            dims,
        }
    }

    /// Re-checks every invariant and measures per-node dimensions.
    pub fn validate(&self) -> Result<SchemeReport> {
        let n = self.code.n();
        (0..n).try_for_each(|s| self.check_star(s))?;
        let per_star: Vec<StarReport> = (0..n)
            .into_par_iter()
            .map(|s| self.star_report(s))
            .collect();
        let tower = self.tower();
        let bandwidth_subsymbols = per_star.iter().map(|s| s.subsymbols).max().unwrap_or(0);
        Ok(SchemeReport {
            m: tower.m(),
            d: tower.d(),
            t: tower.t(),
            n,
            k: self.code.k(),
            max_locality: per_star.iter().map(|s| s.locality).max().unwrap_or(0),
            bandwidth_bits: bandwidth_subsymbols * tower.d() as usize,
            bandwidth_subsymbols,
            per_star,
        })
    }

    /// `zeta` and `mu` for erasure position `star`.
    pub fn multipliers(&self, star: usize) -> Result<Multipliers> {
        self.check_index(star)?;
        self.check_star(star)?;
        let f = self.code.field();
        let lambda = self.code.dual_multipliers();
        let values = self.values(star);
        let inv_star = f.inv(lambda[star]);
        let mu = (0..self.code.n())
            .map(|a| {
                if a == star {
                    return vec![FieldElem::ZERO; values.len()];
                }
                let scale = f.mul(lambda[a], inv_star);
                values.iter().map(|row| f.mul(row[a], scale)).collect()
            })
            .collect();
        Ok(Multipliers {
            star,
            zeta: self.zeta(star),
            mu,
        })
    }

    fn check_index(&self, star: usize) -> Result<()> {
        if star >= self.code.n() {
            return Err(Error::PointNotInCode {
                point: format!("#{star}"),
            });
        }
        Ok(())
    }

    /// The cached query plan for `star`.
    pub fn plan(&self, star: usize) -> Result<&RepairPlan> {
        self.check_index(star)?;
        if let Some(p) = self.plans[star].get() {
            return Ok(p);
        }
        let plan = self.build_plan(star)?;
        Ok(self.plans[star].get_or_init(|| plan))
    }

    fn build_plan(&self, star: usize) -> Result<RepairPlan> {
        let tower = self.tower();
        let field = tower.field();
        let m = self.multipliers(star)?;
        let nu = tower.dual_basis(&m.zeta)?;
        let t = m.zeta.len();
        let mut nodes = Vec::new();
        for (a, row) in m.mu.iter().enumerate() {
            if a == star {
                continue;
            }
            let mut span = SpanBuilder::new(field, tower.sub_basis());
            let mut coords: Vec<Vec<FieldElem>> = Vec::with_capacity(t);
            for &mu in row {
                coords.push(match span.offer(mu) {
                    Offer::Member(c) => c,
                    Offer::Added(idx) => {
                        let mut c = vec![FieldElem::ZERO; idx + 1];
                        c[idx] = FieldElem::ONE;
                        c
                    }
                });
            }
            let queries = span.into_basis();
            if queries.is_empty() {
                continue;
            }
            for c in &mut coords {
                c.resize(queries.len(), FieldElem::ZERO);
            }
            nodes.push(NodePlan {
                index: a,
                queries,
                coords,
            });
        }
        Ok(RepairPlan {
            star,
            zeta: m.zeta,
            nu,
            nodes,
        })
    }

    /// Rebuilds `codeword[star]` from trace queries to the other nodes.
    /// The erased slot is never read.
    pub fn repair(&self, codeword: &[FieldElem], star: usize) -> Result<RepairTranscript> {
        let n = self.code.n();
        if codeword.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: codeword.len(),
            });
        }
        let plan = self.plan(star)?;
        let tower = self.tower();
        let field = tower.field();
        let t = plan.zeta.len();
        let mut star_traces = vec![FieldElem::ZERO; t];
        let mut exchanges = Vec::with_capacity(plan.nodes.len());
        for node in &plan.nodes {
            let a = node.index;
            // a node of a GRS code knows its multiplier and strips it
            let value = field.div(codeword[a], self.code.multiplier(a));
            let responses: Vec<FieldElem> = node
                .queries
                .iter()
                .map(|&g| tower.trace(field.mul(g, value)))
                .collect();
            for (acc, c) in star_traces.iter_mut().zip(&node.coords) {
                *acc += c
                    .iter()
                    .zip(&responses)
                    .map(|(&x, &r)| field.mul(x, r))
                    .sum::<FieldElem>();
            }
            exchanges.push(NodeExchange {
                index: a,
                point: self.code.point(a),
                queries: node.queries.clone(),
                responses,
            });
        }
        let f_star: FieldElem = star_traces
            .iter()
            .zip(&plan.nu)
            .map(|(&c, &v)| field.mul(c, v))
            .sum();
        let downloaded_subsymbols = plan.subsymbols();
        Ok(RepairTranscript {
            star_index: star,
            alpha_star: self.code.point(star),
            exchanges,
            reconstructed: field.mul(f_star, self.code.multiplier(star)),
            downloaded_bits: downloaded_subsymbols * tower.d() as usize,
            downloaded_subsymbols,
        })
    }

    /// Repair by evaluation point rather than position.
    pub fn repair_point(&self, codeword: &[FieldElem], point: FieldElem) -> Result<RepairTranscript> {
        let star = self.code.require_position(point)?;
        self.repair(codeword, star)
    }

    /// Inverse of [`RepairScheme::multipliers`]: recovers each `p_i` from
    /// `p_i(a*) = zeta_i` and `p_i(a) = mu[a][i] * lambda_{a*} / lambda_a`.
    pub fn from_mu(code: RsCode, per_star: &[Multipliers]) -> Result<RepairScheme> {
        let n = code.n();
        if per_star.len() != n {
            return Err(Error::InvalidScheme(format!(
                "{} multiplier sets for {} evaluation points",
                per_star.len(),
                n
            )));
        }
        let field = code.field().clone();
        let lambda = code.dual_multipliers().to_vec();
        let mut polys = vec![Vec::new(); n];
        for m in per_star {
            let s = m.star;
            if s >= n || !polys[s].is_empty() || m.mu.len() != n {
                return Err(Error::InvalidScheme(format!(
                    "malformed multiplier set for position {s}"
                )));
            }
            let mut set = Vec::with_capacity(m.zeta.len());
            for (i, &z) in m.zeta.iter().enumerate() {
                let pts: Vec<(FieldElem, FieldElem)> = (0..n)
                    .map(|a| {
                        let y = if a == s {
                            z
                        } else {
                            let mu = m.mu[a].get(i).copied().unwrap_or_default();
                            field.mul(mu, field.div(lambda[s], lambda[a]))
                        };
                        (code.point(a), y)
                    })
                    .collect();
                let p = lagrange_interpolate(&field, &pts)?;
                if p.degree().is_some_and(|deg| deg >= n - code.k()) {
                    return Err(Error::NotADualCodeword {
                        star: code.point(s).to_string(),
                        index: i,
                    });
                }
                set.push(p);
            }
            polys[s] = set;
        }
        RepairScheme::new(code, polys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rs::vanishing_poly;

    fn code(m: u32, d: u32, pts: &[u16], k: usize) -> RsCode {
        let t = FieldTower::new(m, d, None).unwrap();
        RsCode::new(t, pts.iter().map(|&v| FieldElem(v)).collect(), k).unwrap()
    }

    // {1, X + a* + g}: values 1 and g at a*, a B-basis when t = 2
    fn shifted_pairs(c: &RsCode) -> Vec<Vec<PolyF>> {
        let g = c.field().generator();
        c.points()
            .iter()
            .map(|&a| vec![PolyF::one(), PolyF::from_coeffs(vec![a + g, FieldElem::ONE])])
            .collect()
    }

    #[test]
    fn constant_code_trivial_scheme() {
        // n = 2, k = 1, t = 1: P(a*) = {1}
        let c = code(2, 2, &[1, 2], 1);
        let scheme = RepairScheme::new(c, vec![vec![PolyF::one()]; 2]).unwrap();
        let m = scheme.multipliers(0).unwrap();
        assert_eq!(m.zeta, vec![FieldElem::ONE]);
        assert_eq!(m.mu[1], vec![FieldElem::ONE]);
        let r = scheme.validate().unwrap();
        assert_eq!(r.bandwidth_subsymbols, 1);
        let t = scheme.repair(&[FieldElem(3), FieldElem(3)], 1).unwrap();
        assert_eq!(t.reconstructed, FieldElem(3));
    }

    #[test]
    fn rejects_bad_schemes() {
        let c = code(4, 2, &[1, 2, 3, 4, 5], 3);
        let x = PolyF::monomial(FieldElem::ONE, 1);
        let sq = PolyF::monomial(FieldElem::ONE, 2);
        let good = shifted_pairs(&c);
        let mut polys = good.clone();
        polys[2] = vec![PolyF::one(), sq];
        assert!(matches!(
            RepairScheme::new(c.clone(), polys),
            Err(Error::DegreeTooHigh { index: 1, degree: 2, bound: 2, .. })
        ));
        let mut polys = good.clone();
        polys[1] = vec![PolyF::one(), PolyF::one()];
        assert!(matches!(
            RepairScheme::new(c.clone(), polys),
            Err(Error::RankDeficientAtStar { rank: 1, t: 2, .. })
        ));
        let mut polys = good;
        polys[0] = vec![x];
        assert!(matches!(
            RepairScheme::new(c, polys),
            Err(Error::InvalidScheme(_))
        ));
    }

    #[test]
    fn zero_value_gives_unqueried_node() {
        // p = X - 4 vanishes at the point 4
        let c = code(4, 4, &[1, 2, 4, 8], 2);
        let field = c.field().clone();
        let polys = (0..4)
            .map(|s| {
                let other = if s == 2 { 1 } else { 2 };
                vec![vanishing_poly(&field, &[c.point(other)]).unwrap()]
            })
            .collect();
        let scheme = RepairScheme::new(c, polys).unwrap();
        let m = scheme.multipliers(0).unwrap();
        assert_eq!(m.mu[2], vec![FieldElem::ZERO]);
        let plan = scheme.plan(0).unwrap();
        assert!(plan.queries().all(|(a, _)| a != 2));
        assert_eq!(scheme.validate().unwrap().per_star[0].dims, vec![0, 1, 0, 1]);
    }

    #[test]
    fn zero_codeword_repairs_to_zero() {
        let c = code(4, 2, &[1, 2, 3, 4, 5], 3);
        let scheme = RepairScheme::new(c.clone(), shifted_pairs(&c)).unwrap();
        let zero = vec![FieldElem::ZERO; 5];
        for s in 0..5 {
            let tr = scheme.repair(&zero, s).unwrap();
            assert!(tr.reconstructed.is_zero());
            assert!(tr.exchanges.iter().flat_map(|e| &e.responses).all(|r| r.is_zero()));
        }
    }

    #[test]
    fn from_mu_rejects_non_dual_multipliers() {
        let c = code(4, 2, &[1, 2, 3, 4, 5], 3);
        let scheme = RepairScheme::new(c.clone(), shifted_pairs(&c)).unwrap();
        let mut all: Vec<Multipliers> = (0..5).map(|s| scheme.multipliers(s).unwrap()).collect();
        assert_eq!(RepairScheme::from_mu(c.clone(), &all).unwrap(), scheme);
        all[3].mu[0][1] += FieldElem::ONE;
        assert!(matches!(
            RepairScheme::from_mu(c, &all),
            Err(Error::NotADualCodeword { index: 1, .. })
        ));
    }
}
