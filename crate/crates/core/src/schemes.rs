//! Named repair-scheme constructions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldTower};
use crate::repair::RepairScheme;
use crate::rs::{grs_dual_multipliers, vanishing_poly, PolyF, RsCode};

/// The constructions reachable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionId {
    Trace,
    TwoCoset,
    Naive,
    Hdfs14_10,
}

impl ConstructionId {
    pub const ALL: [ConstructionId; 4] = [
        ConstructionId::Trace,
        ConstructionId::TwoCoset,
        ConstructionId::Naive,
        ConstructionId::Hdfs14_10,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionId::Trace => "trace",
            ConstructionId::TwoCoset => "two_coset",
            ConstructionId::Naive => "naive",
            ConstructionId::Hdfs14_10 => "hdfs14_10",
        }
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConstructionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstructionId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownConstruction(s.to_string()))
    }
}

/// Parameters for [`build`]; the HDFS construction ignores all of them.
#[derive(Clone, Debug, Default)]
pub struct BuildParams {
    pub m: Option<u32>,
    pub d: Option<u32>,
    pub modulus: Option<u32>,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

fn require<T>(value: Option<T>, name: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidScheme(format!("construction needs --{name}")))
}

/// Builds a construction by id.
///
/// `trace` uses A = F; `naive` uses the first `n` field elements in value
/// order (default n = 2^m); `two_coset` takes d = m/2 when d is absent.
pub fn build(id: ConstructionId, p: &BuildParams) -> Result<RepairScheme> {
    if id == ConstructionId::Hdfs14_10 {
        return Ok(hdfs_scheme());
    }
    let m = require(p.m, "m")?;
    let d = match (id, p.d) {
        (_, Some(d)) => d,
        (ConstructionId::TwoCoset, None) => m / 2,
        _ => return Err(Error::InvalidScheme("construction needs --d".into())),
    };
    let tower = FieldTower::new(m, d, p.modulus)?;
    let k = require(p.k, "k")?;
    match id {
        ConstructionId::Trace => {
            let code = RsCode::whole_field(tower, k)?;
            if p.n.is_some_and(|n| n != code.n()) {
                return Err(Error::AMustBeWholeField);
            }
            trace_scheme_for(code)
        }
        ConstructionId::TwoCoset => two_coset_scheme(&tower, require(p.n, "n")?, k),
        ConstructionId::Naive => {
            let n = p.n.unwrap_or(tower.field().size());
            if n > tower.field().size() {
                return Err(Error::InvalidDimensions { n, k });
            }
            let points = tower.field().elements().take(n).collect();
            naive_scheme(RsCode::new(tower, points, k)?)
        }
        ConstructionId::Hdfs14_10 => unreachable!(),
    }
}

/// `(X - a)^e` for `e = 2^j - 1`: every binomial coefficient is odd.
fn shifted_all_ones_power(tower: &FieldTower, a: FieldElem, e: usize, out: &mut [FieldElem], scale: FieldElem) {
    let f = tower.field();
    for (j, c) in out.iter_mut().enumerate().take(e + 1) {
        *c += f.mul(scale, f.pow(a, (e - j) as u64));
    }
}

/// Trace polynomials for RS(F, k): with `Y = X - a*` and `q = |B|`,
/// `p_z = sum_i z^(q^i) Y^(q^i - 1)`, one per basis element `z`.
pub fn trace_scheme(tower: &FieldTower, k: usize) -> Result<RepairScheme> {
    trace_scheme_for(RsCode::whole_field(tower.clone(), k)?)
}

/// The trace scheme on an existing code, which must use every field element.
pub fn trace_scheme_for(code: RsCode) -> Result<RepairScheme> {
    if !code.is_whole_field() {
        return Err(Error::AMustBeWholeField);
    }
    let tower = code.tower().clone();
    let n = code.n();
    let q = tower.subfield_size() as usize;
    let limit = n - n / q;
    if code.k() > limit {
        return Err(Error::KTooLarge { k: code.k(), limit });
    }
    let f = tower.field();
    let t = tower.t();
    let len = q.pow(t as u32 - 1);
    let polys = code
        .points()
        .iter()
        .map(|&star| {
            tower
                .basis()
                .iter()
                .map(|&z| {
                    let mut coeffs = vec![FieldElem::ZERO; len];
                    for i in 0..t {
                        let qi = q.pow(i as u32);
                        let zi = f.frobenius(z, tower.d() * i as u32);
                        shifted_all_ones_power(&tower, star, qi - 1, &mut coeffs, zi);
                    }
                    PolyF::from_coeffs(coeffs)
                })
                .collect()
        })
        .collect();
    RepairScheme::new(code, polys)
}

/// The two-coset construction for `t = 2`.
///
/// A is `beta^0 .. beta^(n/2 - 1)` followed by the same powers times
/// `gamma = g`, where `beta = g^((2^m - 1)/(2^d - 1))` generates B*.
/// `P(a*) = {1, X}` on the coset `gamma B*` and `{1, X/gamma}` on B*.
pub fn two_coset_scheme(tower: &FieldTower, n: usize, k: usize) -> Result<RepairScheme> {
    let (m, d) = (tower.m(), tower.d());
    if m % 2 != 0 || 2 * d != m {
        return Err(Error::OddExtension { m, d });
    }
    let limit = 2 * ((1usize << d) - 1);
    if n % 2 != 0 || n < 4 || n > limit {
        return Err(Error::NTooLarge { n, limit });
    }
    if k > n - 2 {
        return Err(Error::KTooLarge { k, limit: n - 2 });
    }
    let f = tower.field();
    let gamma = f.generator();
    let beta = tower.subfield_generator();
    let half = n / 2;
    let first: Vec<FieldElem> = (0..half).map(|j| f.pow(beta, j as u64)).collect();
    let points: Vec<FieldElem> = first
        .iter()
        .copied()
        .chain(first.iter().map(|&b| f.mul(gamma, b)))
        .collect();
    let code = RsCode::new(tower.clone(), points, k)?;
    let x = PolyF::monomial(FieldElem::ONE, 1);
    let x_over_gamma = PolyF::monomial(f.inv(gamma), 1);
    let polys = (0..n)
        .map(|s| {
            let second = if s < half { &x_over_gamma } else { &x };
            vec![PolyF::one(), second.clone()]
        })
        .collect();
    RepairScheme::new(code, polys)
}

/// Downloads whole symbols from `k` helpers: `p_i = z_i v(X) / v(a*)`
/// with `v` vanishing on every point outside the helpers and `a*`.
/// The helpers are the first `k` points of A other than `a*`.
pub fn naive_scheme(code: RsCode) -> Result<RepairScheme> {
    let (n, k) = (code.n(), code.k());
    if k >= n {
        return Err(Error::KEqualsN);
    }
    let tower = code.tower().clone();
    let f = tower.field();
    let mut polys = Vec::with_capacity(n);
    for s in 0..n {
        let outside: Vec<FieldElem> = (0..n)
            .filter(|&a| a != s)
            .skip(k)
            .map(|a| code.point(a))
            .collect();
        let v = vanishing_poly(f, &outside)?;
        let at_star = f.inv(v.eval(f, code.point(s)));
        polys.push(
            tower
                .basis()
                .iter()
                .map(|&z| v.scale(f, f.mul(z, at_star)))
                .collect(),
        );
    }
    RepairScheme::new(code, polys)
}

/// Modulus of GF(256) for the HDFS-RAID code: `1 + x^2 + x^3 + x^4 + x^8`.
pub const HDFS_MODULUS: u32 = 0x11d;

/// Root exponents for the HDFS (14,10) scheme. Row `s` belongs to
/// `a* = z^s`; each triple `(e1, e2, e3)` stands for the monic cubic with
/// roots `z^e1, z^e2, z^e3`.
pub const HDFS_ROOTS: [[[u32; 3]; 2]; 14] = [
    [[1, 2, 5], [3, 8, 6]],
    [[2, 3, 6], [4, 9, 7]],
    [[3, 9, 6], [3, 13, 12]],
    [[2, 9, 6], [2, 13, 12]],
    [[2, 9, 6], [2, 13, 12]],
    [[1, 3, 9], [3, 4, 11]],
    [[1, 2, 10], [1, 5, 12]],
    [[1, 2, 8], [1, 6, 12]],
    [[2, 9, 6], [2, 13, 12]],
    [[1, 2, 5], [3, 8, 6]],
    [[1, 2, 5], [1, 6, 13]],
    [[2, 9, 6], [2, 13, 12]],
    [[1, 2, 5], [1, 6, 13]],
    [[1, 2, 5], [3, 8, 6]],
];

/// Per-position bit bandwidths of the HDFS scheme.
pub const HDFS_BITS: [usize; 14] = [64, 64, 60, 60, 60, 64, 64, 64, 60, 64, 64, 60, 64, 64];

/// GF(256) over GF(16) with the HDFS modulus.
pub fn hdfs_tower() -> FieldTower {
    FieldTower::new(8, 4, Some(HDFS_MODULUS)).expect("HDFS modulus is primitive")
}

/// The (14,10) code: GRS on `z^0 .. z^13` whose dual is `RS(A, 4)`.
pub fn hdfs_code() -> RsCode {
    let tower = hdfs_tower();
    let f = tower.field().clone();
    let points: Vec<FieldElem> = (0..14).map(|e| f.exp(e)).collect();
    let lambda = grs_dual_multipliers(&f, &points).expect("distinct powers");
    RsCode::grs(tower, points, 10, lambda).expect("valid HDFS code")
}

/// The built-in HDFS (14,10) repair scheme.
pub fn hdfs_scheme() -> RepairScheme {
    let code = hdfs_code();
    let f = code.field().clone();
    let polys = HDFS_ROOTS
        .iter()
        .map(|row| {
            row.iter()
                .map(|triple| {
                    let roots: Vec<FieldElem> = triple.iter().map(|&e| f.exp(e as u64)).collect();
                    PolyF::from_roots(&f, &roots)
                })
                .collect()
        })
        .collect();
    RepairScheme::new(code, polys).expect("HDFS table is a valid scheme")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_ids_round_trip() {
        for c in ConstructionId::ALL {
            assert_eq!(c.as_str().parse::<ConstructionId>().unwrap(), c);
        }
        assert!(matches!(
            "cosets".parse::<ConstructionId>(),
            Err(Error::UnknownConstruction(_))
        ));
    }

    #[test]
    fn trace_scheme_small_towers() {
        let t = FieldTower::new(4, 2, None).unwrap();
        let r = trace_scheme(&t, 12).unwrap().validate().unwrap();
        assert_eq!(r.bandwidth_subsymbols, 15);
        assert_eq!(r.bandwidth_bits, 30);
        assert!(r.per_star.iter().all(|s| s.locality == 15));
        let t = FieldTower::new(4, 1, None).unwrap();
        let r = trace_scheme(&t, 8).unwrap().validate().unwrap();
        assert_eq!(r.bandwidth_bits, 15);
    }

    #[test]
    fn trace_scheme_preconditions() {
        let t = FieldTower::new(4, 2, None).unwrap();
        assert!(matches!(
            trace_scheme(&t, 13),
            Err(Error::KTooLarge { k: 13, limit: 12 })
        ));
        let pts = (0..8).map(FieldElem).collect();
        let code = RsCode::new(t, pts, 4).unwrap();
        assert!(matches!(trace_scheme_for(code), Err(Error::AMustBeWholeField)));
    }

    #[test]
    fn two_coset_preconditions() {
        let t = FieldTower::new(8, 4, None).unwrap();
        assert!(matches!(two_coset_scheme(&t, 31, 4), Err(Error::NTooLarge { .. })));
        assert!(matches!(two_coset_scheme(&t, 32, 4), Err(Error::NTooLarge { .. })));
        assert!(matches!(two_coset_scheme(&t, 2, 1), Err(Error::NTooLarge { .. })));
        assert!(matches!(two_coset_scheme(&t, 30, 29), Err(Error::KTooLarge { .. })));
        let odd = FieldTower::new(6, 2, None).unwrap();
        assert!(matches!(two_coset_scheme(&odd, 6, 2), Err(Error::OddExtension { .. })));
        let five = FieldTower::new(5, 1, None).unwrap();
        assert!(matches!(two_coset_scheme(&five, 6, 2), Err(Error::OddExtension { .. })));
    }

    #[test]
    fn naive_scheme_bandwidth() {
        let t = FieldTower::new(4, 2, None).unwrap();
        let code = RsCode::whole_field(t.clone(), 5).unwrap();
        let r = naive_scheme(code).unwrap().validate().unwrap();
        assert_eq!(r.bandwidth_subsymbols, 10);
        assert!(r.per_star.iter().all(|s| s.locality == 5));
        let code = RsCode::whole_field(t.clone(), 16).unwrap();
        assert!(matches!(naive_scheme(code), Err(Error::KEqualsN)));
        // k = n - 1: v = 1 and P(a*) = Z
        let code = RsCode::whole_field(t.clone(), 15).unwrap();
        let s = naive_scheme(code).unwrap();
        assert!(s.polys().iter().all(|set| set
            .iter()
            .zip(t.basis())
            .all(|(p, &z)| *p == PolyF::constant(z))));
    }

    #[test]
    fn hdfs_first_row_and_bits() {
        let s = hdfs_scheme();
        let f = s.code().field().clone();
        let p1 = &s.polys_at(0)[0];
        for e in [1, 2, 5] {
            assert!(p1.eval(&f, f.exp(e)).is_zero());
        }
        let r = s.validate().unwrap();
        assert_eq!(r.per_star_bits(), HDFS_BITS.to_vec());
        assert_eq!(r.bandwidth_bits, 64);
    }

    #[test]
    fn build_dispatch() {
        let p = BuildParams {
            m: Some(4),
            d: Some(2),
            k: Some(12),
            ..Default::default()
        };
        let s = build(ConstructionId::Trace, &p).unwrap();
        assert_eq!(s.code().n(), 16);
        let p = BuildParams {
            m: Some(8),
            n: Some(30),
            k: Some(28),
            ..Default::default()
        };
        assert_eq!(build(ConstructionId::TwoCoset, &p).unwrap().tower().d(), 4);
        assert_eq!(build(ConstructionId::Hdfs14_10, &BuildParams::default()).unwrap().code().n(), 14);
        assert!(build(ConstructionId::Naive, &BuildParams::default()).is_err());
    }
}
