//! Linear algebra over the subfield B, reduced to GF(2).
//!
//! An element `u` of F generates the B-line `{b u : b in B}`. Choosing a
//! GF(2)-basis `b_0..b_{d-1}` of B, that line is the GF(2)-span of
//! `b_0 u, .., b_{d-1} u`. B-spans therefore become GF(2)-spans of the
//! blown-up vectors, and every B-dimension is a GF(2)-dimension divided by d.

use super::field::{Field, FieldElem};

/// XOR basis over GF(2) for vectors of at most 16 bits, keyed by leading bit.
///
/// Each stored row remembers which inserted generators it is a combination
/// of (`mask`, bit `i` = generator `i`), which yields coordinates for free.
#[derive(Clone, Debug)]
pub(crate) struct Gf2Basis {
    rows: [u32; 16],
    masks: [u64; 16],
    rank: usize,
    inserted: usize,
}

impl Gf2Basis {
    pub(crate) fn new() -> Self {
        Gf2Basis {
            rows: [0; 16],
            masks: [0; 16],
            rank: 0,
            inserted: 0,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the basis, returning the residue and the
    /// generator combination that was subtracted.
    #[inline]
    fn reduce(&self, mut v: u32) -> (u32, u64) {
        let mut mask = 0u64;
        while v != 0 {
            let lead = 31 - v.leading_zeros();
            let row = self.rows[lead as usize];
            if row == 0 {
                break;
            }
            v ^= row;
            mask ^= self.masks[lead as usize];
        }
        (v, mask)
    }

    /// Inserts the next generator. Returns `Ok(())` if it raised the rank,
    /// otherwise `Err(mask)` with the combination of earlier generators equal to it.
    #[inline]
    pub(crate) fn insert(&mut self, v: u32) -> std::result::Result<(), u64> {
        let id = self.inserted;
        assert!(id < 64, "at most 64 generators per basis");
        self.inserted += 1;
        let (r, mask) = self.reduce(v);
        if r == 0 {
            return Err(mask);
        }
        // reduce() stops at a free pivot
        let lead = 31 - r.leading_zeros();
        self.rows[lead as usize] = r;
        self.masks[lead as usize] = mask ^ (1u64 << id);
        self.rank += 1;
        Ok(())
    }

    /// Rank check without inserting.
    #[inline]
    pub(crate) fn contains(&self, v: u32) -> bool {
        self.reduce(v).0 == 0
    }

    /// Combination of generators equal to `v`, if `v` lies in the span.
    pub(crate) fn solve(&self, v: u32) -> Option<u64> {
        let (r, mask) = self.reduce(v);
        (r == 0).then_some(mask)
    }
}

/// Incrementally builds a B-basis out of a stream of F-elements, tracking
/// B-coordinates of every element that turns out to be dependent.
pub(crate) struct SpanBuilder<'a> {
    field: &'a Field,
    sub_basis: &'a [FieldElem],
    gf2: Gf2Basis,
    basis: Vec<FieldElem>,
}

/// Outcome of offering an element to a [`SpanBuilder`].
pub(crate) enum Offer {
    /// The element was B-independent and became basis vector `index`.
    Added(usize),
    /// The element lies in the current span with these B-coordinates.
    Member(Vec<FieldElem>),
}

impl<'a> SpanBuilder<'a> {
    pub(crate) fn new(field: &'a Field, sub_basis: &'a [FieldElem]) -> Self {
        SpanBuilder {
            field,
            sub_basis,
            gf2: Gf2Basis::new(),
            basis: Vec::new(),
        }
    }

    pub(crate) fn into_basis(self) -> Vec<FieldElem> {
        self.basis
    }

    /// Coordinates over the current basis, or `None` if `v` is outside the span.
    pub(crate) fn coords(&self, v: FieldElem) -> Option<Vec<FieldElem>> {
        let mask = self.gf2.solve(v.0 as u32)?;
        Some(self.mask_to_coords(mask))
    }

    fn mask_to_coords(&self, mask: u64) -> Vec<FieldElem> {
        let d = self.sub_basis.len();
        (0..self.basis.len())
            .map(|j| {
                (0..d)
                    .filter(|l| mask >> (j * d + l) & 1 == 1)
                    .map(|l| self.sub_basis[l])
                    .sum()
            })
            .collect()
    }

    pub(crate) fn offer(&mut self, v: FieldElem) -> Offer {
        if let Some(c) = self.coords(v) {
            return Offer::Member(c);
        }
        // v is B-independent of the current basis, so all d blow-ups are
        // GF(2)-independent as well; generator ids stay aligned as j * d + l.
        for &b in self.sub_basis {
            let ok = self.gf2.insert(self.field.mul(b, v).0 as u32);
            debug_assert!(ok.is_ok());
        }
        self.basis.push(v);
        Offer::Added(self.basis.len() - 1)
    }
}

/// GF(2)-rank of the blow-up of `elems`, i.e. `d` times their B-rank.
pub(crate) fn blown_up_rank(field: &Field, sub_basis: &[FieldElem], elems: &[FieldElem]) -> usize {
    let mut gf2 = Gf2Basis::new();
    for &u in elems {
        if u.is_zero() || gf2.contains(u.0 as u32) {
            continue;
        }
        for &b in sub_basis {
            if gf2.rank() == field.degree() as usize {
                return gf2.rank();
            }
            let _ = gf2.insert(field.mul(b, u).0 as u32);
        }
    }
    gf2.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_basis_rank_and_solve() {
        let mut b = Gf2Basis::new();
        assert!(b.insert(0b011).is_ok());
        assert!(b.insert(0b110).is_ok());
        // 0b101 = g0 + g1
        assert_eq!(b.insert(0b101), Err(0b11));
        assert_eq!(b.rank(), 2);
        assert_eq!(b.solve(0b110), Some(0b10));
        assert_eq!(b.solve(0b001), None);
        assert_eq!(b.insert(0), Err(0));
    }
}
