//! The extension F = GF(2^m) over its subfield B = GF(2^d).

use serde::Serialize;

use super::field::{Field, FieldElem};
use super::span::{blown_up_rank, Offer, SpanBuilder};
use crate::error::{Error, Result};

/// F over B with a fixed basis Z and its trace-dual basis V.
#[derive(Clone, Debug)]
pub struct FieldTower {
    field: Field,
    d: u32,
    t: usize,
    basis: Vec<FieldElem>,
    dual: Vec<FieldElem>,
    // GF(2)-basis of B: powers 1, s, .., s^(d-1) of a primitive element s of B
    sub_basis: Vec<FieldElem>,
    sub_generator: FieldElem,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.d == other.d && self.basis == other.basis
    }
}

impl Eq for FieldTower {}

/// Serializable summary of a tower.
#[derive(Clone, Debug, Serialize)]
pub struct TowerInfo {
    pub m: u32,
    pub d: u32,
    pub t: usize,
    pub modulus: String,
    pub generator: String,
    pub primitive_modulus: bool,
    pub subfield_generator: String,
    pub basis: Vec<String>,
    pub dual_basis: Vec<String>,
}

impl FieldTower {
    /// GF(2^m) over GF(2^d) with the default basis `(1, g, .., g^(t-1))`.
    pub fn new(m: u32, d: u32, modulus: Option<u32>) -> Result<FieldTower> {
        let field = Field::new(m, modulus)?;
        Self::over(field, d)
    }

    /// Builds the tower over an existing field.
    pub fn over(field: Field, d: u32) -> Result<FieldTower> {
        let m = field.degree();
        if d == 0 || m % d != 0 {
            return Err(Error::DegreeNotDividing { m, d });
        }
        let t = (m / d) as usize;
        // g^((2^m - 1) / (2^d - 1)) generates B*
        let sub_generator = field.exp(((field.order()) / ((1u32 << d) - 1)) as u64);
        let sub_basis: Vec<FieldElem> = (0..d).map(|i| field.pow(sub_generator, i as u64)).collect();
        let g = field.generator();
        let basis: Vec<FieldElem> = (0..t).map(|i| field.pow(g, i as u64)).collect();
        let mut tower = FieldTower {
            field,
            d,
            t,
            basis: Vec::new(),
            dual: Vec::new(),
            sub_basis,
            sub_generator,
        };
        let dual = tower.dual_basis(&basis)?;
        tower.basis = basis;
        tower.dual = dual;
        Ok(tower)
    }

    /// Replaces the basis Z (and recomputes V).
    pub fn with_basis(mut self, basis: Vec<FieldElem>) -> Result<FieldTower> {
        let dual = self.dual_basis(&basis)?;
        self.basis = basis;
        self.dual = dual;
        Ok(self)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.field.degree()
    }

    /// Subfield degree over GF(2); sub-symbols carry `d` bits.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// Degree of F over B.
    pub fn t(&self) -> usize {
        self.t
    }

    /// |B| = 2^d.
    pub fn subfield_size(&self) -> u64 {
        1u64 << self.d
    }

    pub fn basis(&self) -> &[FieldElem] {
        &self.basis
    }

    pub fn dual(&self) -> &[FieldElem] {
        &self.dual
    }

    /// Primitive element of B.
    pub fn subfield_generator(&self) -> FieldElem {
        self.sub_generator
    }

    pub(crate) fn sub_basis(&self) -> &[FieldElem] {
        &self.sub_basis
    }

    /// `beta in B  <=>  beta^(2^d) = beta`.
    #[inline]
    pub fn in_subfield(&self, beta: FieldElem) -> bool {
        self.field.frobenius(beta, self.d) == beta
    }

    /// All elements of B, in increasing bit-packed order.
    pub fn subfield_elements(&self) -> Vec<FieldElem> {
        self.field.elements().filter(|&x| self.in_subfield(x)).collect()
    }

    /// `tr_{F/B}(beta) = beta + beta^q + .. + beta^(q^(t-1))` with `q = 2^d`.
    #[inline]
    pub fn trace(&self, beta: FieldElem) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        let mut cur = beta;
        for _ in 0..self.t {
            acc += cur;
            cur = self.field.frobenius(cur, self.d);
        }
        acc
    }

    /// Dual basis `V` with `tr(v_i z_j) = [i == j]`, from the inverse of the
    /// Gram matrix `T_ij = tr(z_i z_j)`.
    pub fn dual_basis(&self, z: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let t = self.t;
        if z.len() != t {
            return Err(Error::SingularGram);
        }
        let f = &self.field;
        // [T | I] -> [I | T^-1]; all entries stay in B.
        let mut a: Vec<Vec<FieldElem>> = (0..t)
            .map(|i| {
                let mut row: Vec<FieldElem> = (0..t).map(|j| self.trace(f.mul(z[i], z[j]))).collect();
                row.extend((0..t).map(|j| if i == j { FieldElem::ONE } else { FieldElem::ZERO }));
                row
            })
            .collect();
        for col in 0..t {
            let pivot = (col..t).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularGram)?;
            a.swap(col, pivot);
            let inv = f.inv(a[col][col]);
            for x in a[col].iter_mut() {
                *x = f.mul(*x, inv);
            }
            for r in 0..t {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col];
                    for c in 0..2 * t {
                        let v = f.mul(factor, a[col][c]);
                        a[r][c] += v;
                    }
                }
            }
        }
        Ok((0..t)
            .map(|i| (0..t).map(|k| f.mul(a[i][t + k], z[k])).sum())
            .collect())
    }

    /// `dim_B span_B(elems)`.
    pub fn rank_over_subfield(&self, elems: &[FieldElem]) -> usize {
        let r = blown_up_rank(&self.field, &self.sub_basis, elems);
        debug_assert_eq!(r % self.d as usize, 0);
        r / self.d as usize
    }

    /// B-coefficients `c` with `v = sum_j c_j basis_j`.
    pub fn coords_over_span(&self, basis: &[FieldElem], v: FieldElem) -> Result<Vec<FieldElem>> {
        if basis.len() > self.t {
            return Err(Error::DependentBasis);
        }
        let mut span = SpanBuilder::new(&self.field, &self.sub_basis);
        for &b in basis {
            if let Offer::Member(_) = span.offer(b) {
                return Err(Error::DependentBasis);
            }
        }
        span.coords(v).ok_or(Error::NotInSpan)
    }

    /// Greedy B-basis of `span_B(elems)`, scanning in order.
    pub fn subfield_span_basis(&self, elems: &[FieldElem]) -> Vec<FieldElem> {
        let mut span = SpanBuilder::new(&self.field, &self.sub_basis);
        for &e in elems {
            span.offer(e);
        }
        span.into_basis()
    }

    /// Writes `f = sum_i tr(z_i f) v_i` using this tower's Z and V.
    pub fn reconstruct(&self, traces: &[FieldElem]) -> FieldElem {
        traces
            .iter()
            .zip(&self.dual)
            .map(|(&c, &v)| self.field.mul(c, v))
            .sum()
    }

    pub fn info(&self) -> TowerInfo {
        let spec = self.field.spec();
        TowerInfo {
            m: spec.m,
            d: self.d,
            t: self.t,
            modulus: format!("{:x}", spec.modulus),
            generator: spec.generator.to_string(),
            primitive_modulus: spec.primitive,
            subfield_generator: self.sub_generator.to_string(),
            basis: self.basis.iter().map(|x| x.to_string()).collect(),
            dual_basis: self.dual.iter().map(|x| x.to_string()).collect(),
        }
    }
}
