//! Binary extension fields GF(2^m) for m <= 16.
//!
//! Elements are bit-packed: bit `i` of the value is the coefficient of `x^i`
//! in the residue modulo the field's irreducible polynomial. Multiplication
//! goes through exp/log tables built at construction; the table-free
//! carry-less product is kept as [`Field::mul_clmul`] and is what the tables
//! are generated from.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Primitive polynomials used when no modulus is supplied, indexed by `m - 1`.
///
/// GF(2^8) uses `1 + x^2 + x^3 + x^4 + x^8`, the polynomial that defines the
/// HDFS-RAID (14,10) code.
pub const DEFAULT_MODULI: [u32; 16] = [
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xb,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x89,    // x^7 + x^3 + 1
    0x11d,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201b,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100b, // x^16 + x^12 + x^3 + x + 1
];

/// An element of GF(2^m), bit-packed. Serializes as lowercase hex.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem(pub u16);

impl Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        u16::from_str_radix(&s, 16)
            .map(FieldElem)
            .map_err(serde::de::Error::custom)
    }
}

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }
}

// Characteristic 2: addition and subtraction are both XOR.
impl Add for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn sub(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElem {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElem) {
        self.0 ^= rhs.0;
    }
}

impl std::iter::Sum for FieldElem {
    fn sum<I: Iterator<Item = FieldElem>>(iter: I) -> FieldElem {
        iter.fold(FieldElem::ZERO, |a, b| a + b)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

/// Description of GF(2^m): degree, modulus and the generator the log tables use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub m: u32,
    /// Irreducible polynomial including the `x^m` bit.
    pub modulus: u32,
    /// Primitive element. Equal to `x` (value 2, or 1 when m = 1) whenever the
    /// modulus is primitive.
    pub generator: FieldElem,
    /// Whether `x` itself generates the multiplicative group.
    pub primitive: bool,
}

struct Tables {
    // exp has 2 * order entries so products of logs never need a reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// The field GF(2^m). Cheap to clone.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    order: u32,
    tables: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("spec", &self.spec).finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

/// Degree of a GF(2) polynomial stored as bits, `None` for zero.
fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

fn poly_mod(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree at most `deg / 2`.
pub fn is_irreducible(p: u32) -> bool {
    let Some(deg) = poly_degree(p as u64) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_mod(p as u64, q) == 0 {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Carry-less product of two elements reduced modulo `modulus`.
fn clmul_reduce(a: u16, b: u16, m: u32, modulus: u32) -> u16 {
    let mut acc: u32 = 0;
    let mut a = a as u32;
    let mut b = b as u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    acc as u16
}

fn clmul_pow(mut base: u16, mut e: u64, m: u32, modulus: u32) -> u16 {
    let mut acc: u16 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = clmul_reduce(acc, base, m, modulus);
        }
        base = clmul_reduce(base, base, m, modulus);
        e >>= 1;
    }
    acc
}

impl Field {
    /// Builds GF(2^m). With `modulus = None` the built-in primitive polynomial is used.
    pub fn new(m: u32, modulus: Option<u32>) -> Result<Field> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::NoDefaultModulus { m });
        }
        let modulus = match modulus {
            Some(p) => p,
            None => DEFAULT_MODULI[(m - 1) as usize],
        };
        if poly_degree(modulus as u64) != Some(m) || !is_irreducible(modulus) {
            return Err(Error::NonIrreducibleModulus { m, modulus });
        }
        let order = (1u32 << m) - 1;
        let factors = prime_factors(order);
        let is_generator = |g: u16| {
            g != 0
                && factors
                    .iter()
                    .all(|&p| clmul_pow(g, (order / p) as u64, m, modulus) != 1)
        };
        let x = if m == 1 { 1 } else { 2 };
        let primitive = is_generator(x);
        let generator = if primitive {
            x
        } else {
            (1..=order as u16)
                .find(|&g| is_generator(g))
                .expect("the multiplicative group of a finite field is cyclic")
        };

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u16; 1usize << m];
        let mut cur: u16 = 1;
        for i in 0..order as usize {
            exp[i] = cur;
            log[cur as usize] = i as u16;
            cur = clmul_reduce(cur, generator, m, modulus);
        }
        debug_assert_eq!(cur, 1);
        for i in order as usize..exp.len() {
            exp[i] = exp[i - order as usize];
        }

        Ok(Field {
            spec: FieldSpec {
                m,
                modulus,
                generator: FieldElem(generator),
                primitive,
            },
            order,
            tables: Arc::new(Tables { exp, log }),
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn degree(&self) -> u32 {
        self.spec.m
    }

    pub fn modulus(&self) -> u32 {
        self.spec.modulus
    }

    /// Number of elements, 2^m.
    pub fn size(&self) -> usize {
        1usize << self.spec.m
    }

    /// Order of the multiplicative group, 2^m - 1.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn generator(&self) -> FieldElem {
        self.spec.generator
    }

    /// All elements in increasing bit-packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.size()).map(|v| FieldElem(v as u16))
    }

    /// Parses an element, rejecting values with bits at or above `x^m`.
    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if value >> self.spec.m != 0 {
            return Err(Error::ElementOutOfRange {
                value,
                m: self.spec.m,
            });
        }
        Ok(FieldElem(value as u16))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let t = &self.tables;
        FieldElem(t.exp[t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize])
    }

    /// Table-free multiplication: shift-and-add followed by reduction.
    pub fn mul_clmul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(clmul_reduce(a.0, b.0, self.spec.m, self.spec.modulus))
    }

    #[inline]
    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn checked_inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        let t = &self.tables;
        let l = t.log[a.0 as usize] as u32;
        Some(FieldElem(t.exp[((self.order - l) % self.order) as usize]))
    }

    /// Multiplicative inverse.
    ///
    /// Panics on zero; callers establish non-zeroness first.
    #[inline]
    pub fn inv(&self, a: FieldElem) -> FieldElem {
        self.checked_inv(a).expect("inverse of zero")
    }

    #[inline]
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b))
    }

    /// `a^e`, with `0^0 = 1`.
    #[inline]
    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let t = &self.tables;
        let l = t.log[a.0 as usize] as u64;
        FieldElem(t.exp[((l * (e % self.order as u64)) % self.order as u64) as usize])
    }

    /// `a^(2^j)`.
    #[inline]
    pub fn frobenius(&self, a: FieldElem, j: u32) -> FieldElem {
        // 2^j mod (2^m - 1) = 2^(j mod m)
        self.pow(a, 1u64 << (j % self.spec.m))
    }

    /// Discrete logarithm to base [`Field::generator`]; `None` for zero.
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        (!a.is_zero()).then(|| self.tables.log[a.0 as usize] as u32)
    }

    /// `generator^e`.
    pub fn exp(&self, e: u64) -> FieldElem {
        FieldElem(self.tables.exp[(e % self.order as u64) as usize])
    }

    /// Multiplicative order of a non-zero element.
    pub fn element_order(&self, a: FieldElem) -> Option<u32> {
        let l = self.log(a)?;
        Some(self.order / gcd(self.order, l))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
