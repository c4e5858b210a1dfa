//! Arithmetic in GF(2^m), its subfields GF(2^d), the trace map and
//! subfield linear algebra.

mod field;
pub(crate) mod span;
mod tower;

pub use field::{is_irreducible, Field, FieldElem, FieldSpec, DEFAULT_MODULI, MAX_DEGREE};
pub use tower::{FieldTower, TowerInfo};

use crate::error::Result;

/// Builds GF(2^m) over GF(2^d); `modulus = None` picks the built-in table entry.
pub fn make_tower(m: u32, d: u32, modulus: Option<u32>) -> Result<FieldTower> {
    FieldTower::new(m, d, modulus)
}
