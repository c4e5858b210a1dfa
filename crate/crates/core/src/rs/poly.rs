//! Dense polynomials over F.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem};

/// Polynomial with coefficients in F, lowest degree first, no trailing zeros.
/// The zero polynomial has no coefficients and [`PolyF::degree`] `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyF {
    coeffs: Vec<FieldElem>,
}

impl PolyF {
    pub fn zero() -> PolyF {
        PolyF { coeffs: Vec::new() }
    }

    pub fn one() -> PolyF {
        PolyF::constant(FieldElem::ONE)
    }

    pub fn constant(c: FieldElem) -> PolyF {
        PolyF::from_coeffs(vec![c])
    }

    /// `c X^deg`.
    pub fn monomial(c: FieldElem, deg: usize) -> PolyF {
        let mut coeffs = vec![FieldElem::ZERO; deg + 1];
        coeffs[deg] = c;
        PolyF::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> PolyF {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyF { coeffs }
    }

    /// `prod (X - r)` over `roots`, duplicates allowed.
    pub fn from_roots(field: &Field, roots: &[FieldElem]) -> PolyF {
        let mut coeffs = Vec::with_capacity(roots.len() + 1);
        coeffs.push(FieldElem::ONE);
        for &r in roots {
            // times (X - r): new[i] = old[i-1] + r * old[i]
            coeffs.push(FieldElem::ZERO);
            for i in (0..coeffs.len()).rev() {
                let lower = if i > 0 { coeffs[i - 1] } else { FieldElem::ZERO };
                coeffs[i] = lower + field.mul(coeffs[i], r);
            }
        }
        PolyF::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `X^i` (zero past the end).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    /// Horner evaluation.
    #[inline]
    pub fn eval(&self, field: &Field, x: FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| field.mul(acc, x) + c)
    }

    pub fn add(&self, other: &PolyF) -> PolyF {
        let len = self.coeffs.len().max(other.coeffs.len());
        PolyF::from_coeffs((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn scale(&self, field: &Field, c: FieldElem) -> PolyF {
        PolyF::from_coeffs(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn mul(&self, field: &Field, other: &PolyF) -> PolyF {
        if self.is_zero() || other.is_zero() {
            return PolyF::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += field.mul(a, b);
            }
        }
        PolyF::from_coeffs(out)
    }

    /// Formal derivative. In characteristic 2 the coefficient of `X^i` is
    /// `(i + 1 mod 2) * a_{i+1}`: only odd-degree terms survive.
    pub fn derivative(&self) -> PolyF {
        PolyF::from_coeffs(
            (1..self.coeffs.len())
                .map(|i| if i % 2 == 1 { self.coeffs[i] } else { FieldElem::ZERO })
                .collect(),
        )
    }

    /// Coefficients of `p(Y + c)` in powers of Y, so that `p(X) = q(X - c)`.
    ///
    /// Uses `(Y + c)^h = Y^h + c^h` for powers of two h, splitting the
    /// coefficient list at the largest power of two below its length.
    pub fn taylor_shift(&self, field: &Field, c: FieldElem) -> PolyF {
        let mut buf = self.coeffs.clone();
        shift_in_place(field, &mut buf, c);
        PolyF::from_coeffs(buf)
    }

    /// Picks the cheaper way to evaluate this polynomial at many points near `center`.
    pub fn evaluator(&self, field: &Field, center: FieldElem) -> PointEvaluator {
        const DENSE_BELOW: usize = 16;
        if self.coeffs.len() < DENSE_BELOW {
            return PointEvaluator::Dense(self.clone());
        }
        let shifted = self.taylor_shift(field, center);
        let terms: Vec<(u64, FieldElem)> = shifted
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, &c)| (j as u64, c))
            .collect();
        if terms.len() * 4 <= self.coeffs.len() {
            PointEvaluator::Sparse { center, terms }
        } else {
            PointEvaluator::Dense(self.clone())
        }
    }
}

fn shift_in_place(field: &Field, buf: &mut [FieldElem], c: FieldElem) {
    let n = buf.len();
    if n <= 1 || c.is_zero() {
        return;
    }
    let h = n.next_power_of_two() / 2;
    let (lo, hi) = buf.split_at_mut(h);
    shift_in_place(field, lo, c);
    shift_in_place(field, hi, c);
    let ch = field.pow(c, h as u64);
    for (l, &x) in lo.iter_mut().zip(hi.iter()) {
        *l += field.mul(ch, x);
    }
}

/// Evaluation strategy chosen by [`PolyF::evaluator`].
#[derive(Clone, Debug)]
pub enum PointEvaluator {
    Dense(PolyF),
    /// `sum c_j (x - center)^j` over few non-zero terms.
    Sparse {
        center: FieldElem,
        terms: Vec<(u64, FieldElem)>,
    },
}

impl PointEvaluator {
    #[inline]
    pub fn eval(&self, field: &Field, x: FieldElem) -> FieldElem {
        match self {
            PointEvaluator::Dense(p) => p.eval(field, x),
            PointEvaluator::Sparse { center, terms } => {
                let y = x - *center;
                terms
                    .iter()
                    .map(|&(j, c)| field.mul(c, field.pow(y, j)))
                    .sum()
            }
        }
    }
}

/// Horner evaluation of `p` at `x`.
pub fn poly_eval(field: &Field, p: &PolyF, x: FieldElem) -> FieldElem {
    p.eval(field, x)
}

pub fn formal_derivative(p: &PolyF) -> PolyF {
    p.derivative()
}

fn check_distinct(points: impl IntoIterator<Item = FieldElem>) -> Result<()> {
    let mut seen = HashSet::new();
    for p in points {
        if !seen.insert(p) {
            return Err(Error::DuplicatePoint {
                point: p.to_string(),
            });
        }
    }
    Ok(())
}

/// Monic polynomial whose roots are exactly `roots`.
pub fn vanishing_poly(field: &Field, roots: &[FieldElem]) -> Result<PolyF> {
    check_distinct(roots.iter().copied())?;
    Ok(PolyF::from_roots(field, roots))
}

/// The unique polynomial of degree below `points.len()` through `points`.
pub fn lagrange_interpolate(field: &Field, points: &[(FieldElem, FieldElem)]) -> Result<PolyF> {
    check_distinct(points.iter().map(|&(a, _)| a))?;
    let xs: Vec<FieldElem> = points.iter().map(|&(a, _)| a).collect();
    // Newton form with divided differences, then expand.
    let n = points.len();
    let mut dd: Vec<FieldElem> = points.iter().map(|&(_, y)| y).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = dd[i] - dd[i - 1];
            let den = xs[i] - xs[i - level];
            dd[i] = field.div(num, den);
        }
    }
    // p = dd[0] + (X - x0)(dd[1] + (X - x1)(dd[2] + ...))
    let mut acc: Vec<FieldElem> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        // acc = acc * (X - x_i) + dd[i]
        let mut next = vec![FieldElem::ZERO; acc.len() + 1];
        for (j, &c) in acc.iter().enumerate() {
            next[j + 1] += c;
            next[j] += field.mul(c, xs[i]);
        }
        next[0] += dd[i];
        acc = next;
    }
    Ok(PolyF::from_coeffs(acc))
}

/// Lagrange coefficient `mu_{S,alpha}(alpha*) = prod_{beta in S \ alpha} (alpha* - beta) / (alpha - beta)`.
pub fn lagrange_coeff(
    field: &Field,
    s: &[FieldElem],
    alpha: FieldElem,
    alpha_star: FieldElem,
) -> Result<FieldElem> {
    if !s.contains(&alpha) {
        return Err(Error::AlphaNotInS);
    }
    if s.contains(&alpha_star) {
        return Err(Error::AlphaStarInS);
    }
    check_distinct(s.iter().copied())?;
    let mut num = FieldElem::ONE;
    let mut den = FieldElem::ONE;
    for &beta in s.iter().filter(|&&b| b != alpha) {
        num = field.mul(num, alpha_star - beta);
        den = field.mul(den, alpha - beta);
    }
    Ok(field.div(num, den))
}
