//! Lower bounds on repair bandwidth, in sub-symbols of B.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::repair::SchemeReport;
use crate::rs::RsCode;

/// Slack subtracted before taking ceilings of real-valued bounds.
pub const CEIL_SLACK: f64 = 1e-9;

/// `ceil(x - 1e-9)`, clamped at zero.
pub fn ceil_bound(x: f64) -> u64 {
    (x - CEIL_SLACK).ceil().max(0.0) as u64
}

/// `(n - 1) log_q((n - 1)/(n - k))`, the bound for every linear scheme.
pub fn linear_lower_bound(n: usize, k: usize, q: u64) -> Result<f64> {
    if k == 0 || k >= n || q < 2 {
        return Err(Error::InvalidDimensions { n, k });
    }
    let n1 = (n - 1) as f64;
    Ok(n1 * (n1 / (n - k) as f64).ln() / (q as f64).ln())
}

/// The cut-set bound `t d / (d + 1 - k)` for locality `d`.
pub fn cutset_bound(t: usize, locality: usize, k: usize) -> Result<f64> {
    if locality < k {
        return Err(Error::LocalityTooSmall { locality, k });
    }
    Ok((t * locality) as f64 / (locality + 1 - k) as f64)
}

/// `k + t - 1`.
pub fn trivial_bound(k: usize, t: usize) -> usize {
    k + t - 1
}

/// Which classical bound is the stronger one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `t >= n - k`: the cut-set bound.
    Cutset,
    /// `t < n - k`: the trivial bound.
    Trivial,
}

pub fn regime(n: usize, k: usize, t: usize) -> Regime {
    if t >= n - k {
        Regime::Cutset
    } else {
        Regime::Trivial
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub k: usize,
    pub m: u32,
    pub d: u32,
    pub t: usize,
    pub locality: usize,
    pub subfield_size: u64,
    pub linear_lb_subsymbols: f64,
    pub linear_lb_bits: f64,
    pub linear_lb_ceiling: u64,
    pub cutset_lb_subsymbols: f64,
    pub cutset_lb_bits: f64,
    pub cutset_lb_ceiling: u64,
    pub trivial_lb_subsymbols: usize,
    pub trivial_lb_bits: usize,
    pub binding: Regime,
    pub naive_subsymbols: usize,
    pub scheme_subsymbols: Option<usize>,
    pub scheme_bits: Option<usize>,
    /// Achieved bandwidth meets the largest bound ceiling.
    pub optimal: Option<bool>,
}

impl BoundsReport {
    /// `locality` defaults to `n - 1`.
    pub fn compute(
        n: usize,
        k: usize,
        m: u32,
        d: u32,
        locality: Option<usize>,
        achieved_subsymbols: Option<usize>,
    ) -> Result<BoundsReport> {
        if d == 0 || m % d != 0 {
            return Err(Error::DegreeNotDividing { m, d });
        }
        let t = (m / d) as usize;
        let q = 1u64 << d;
        let locality = locality.unwrap_or(n.saturating_sub(1));
        let linear = linear_lower_bound(n, k, q)?;
        let cutset = cutset_bound(t, locality, k)?;
        let trivial = trivial_bound(k, t);
        let best = ceil_bound(linear).max(ceil_bound(cutset)).max(trivial as u64);
        let bits = d as f64;
        Ok(BoundsReport {
            n,
            k,
            m,
            d,
            t,
            locality,
            subfield_size: q,
            linear_lb_subsymbols: linear,
            linear_lb_bits: linear * bits,
            linear_lb_ceiling: ceil_bound(linear),
            cutset_lb_subsymbols: cutset,
            cutset_lb_bits: cutset * bits,
            cutset_lb_ceiling: ceil_bound(cutset),
            trivial_lb_subsymbols: trivial,
            trivial_lb_bits: trivial * d as usize,
            binding: regime(n, k, t),
            naive_subsymbols: k * t,
            scheme_subsymbols: achieved_subsymbols,
            scheme_bits: achieved_subsymbols.map(|b| b * d as usize),
            optimal: achieved_subsymbols.map(|b| b as u64 == best),
        })
    }
}

/// Bounds for `code`, compared with a validated scheme if one is given.
pub fn bounds_report(
    code: &RsCode,
    locality: Option<usize>,
    report: Option<&SchemeReport>,
) -> Result<BoundsReport> {
    let tower = code.tower();
    BoundsReport::compute(
        code.n(),
        code.k(),
        tower.m(),
        tower.d(),
        locality,
        report.map(|r| r.bandwidth_subsymbols),
    )
}
