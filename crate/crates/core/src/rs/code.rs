//! Reed-Solomon and generalized Reed-Solomon codes.

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem, FieldTower};

use super::poly::{lagrange_interpolate, PolyF};

/// Default cap on |F|^k for [`RsCode::mds_distance`].
pub const MDS_ENUMERATION_BUDGET: u128 = 1 << 20;

/// `lambda_i = prod_{j != i} (alpha_i - alpha_j)^-1`, the multipliers of the
/// GRS code dual to `RS(points, k)`.
pub fn grs_dual_multipliers(field: &Field, points: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let mut out = Vec::with_capacity(points.len());
    for (i, &a) in points.iter().enumerate() {
        let mut prod = FieldElem::ONE;
        for (j, &b) in points.iter().enumerate() {
            if i != j {
                let diff = a - b;
                if diff.is_zero() {
                    return Err(Error::DuplicatePoint {
                        point: a.to_string(),
                    });
                }
                prod = field.mul(prod, diff);
            }
        }
        out.push(field.inv(prod));
    }
    Ok(out)
}

/// `RS(A, k)` or, with multipliers, `GRS(A, k, lambda)`.
#[derive(Clone, Debug)]
pub struct RsCode {
    tower: FieldTower,
    points: Vec<FieldElem>,
    k: usize,
    multipliers: Option<Vec<FieldElem>>,
    dual: Vec<FieldElem>,
    // point value -> index into `points`, u32::MAX if absent
    position: Vec<u32>,
}

impl PartialEq for RsCode {
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower
            && self.points == other.points
            && self.k == other.k
            && self.multipliers == other.multipliers
    }
}

impl RsCode {
    pub fn new(tower: FieldTower, points: Vec<FieldElem>, k: usize) -> Result<RsCode> {
        Self::build(tower, points, k, None)
    }

    pub fn grs(
        tower: FieldTower,
        points: Vec<FieldElem>,
        k: usize,
        multipliers: Vec<FieldElem>,
    ) -> Result<RsCode> {
        Self::build(tower, points, k, Some(multipliers))
    }

    /// `RS(F, k)`: every field element, in increasing order.
    pub fn whole_field(tower: FieldTower, k: usize) -> Result<RsCode> {
        let points = tower.field().elements().collect();
        Self::new(tower, points, k)
    }

    fn build(
        tower: FieldTower,
        points: Vec<FieldElem>,
        k: usize,
        multipliers: Option<Vec<FieldElem>>,
    ) -> Result<RsCode> {
        let n = points.len();
        if k == 0 || k > n {
            return Err(Error::InvalidDimensions { n, k });
        }
        let field = tower.field();
        let mut position = vec![u32::MAX; field.size()];
        for (i, &p) in points.iter().enumerate() {
            let v = field.elem(p.0 as u32)?;
            if position[v.0 as usize] != u32::MAX {
                return Err(Error::DuplicatePoint {
                    point: p.to_string(),
                });
            }
            position[v.0 as usize] = i as u32;
        }
        if let Some(l) = &multipliers {
            if l.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: l.len(),
                });
            }
            if let Some(index) = l.iter().position(|x| x.is_zero()) {
                return Err(Error::ZeroMultiplier { index });
            }
        }
        let dual = grs_dual_multipliers(field, &points)?;
        Ok(RsCode {
            tower,
            points,
            k,
            multipliers,
            dual,
            position,
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn field(&self) -> &Field {
        self.tower.field()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.points
    }

    pub fn point(&self, index: usize) -> FieldElem {
        self.points[index]
    }

    pub fn multipliers(&self) -> Option<&[FieldElem]> {
        self.multipliers.as_deref()
    }

    /// `lambda_i`, or 1 for a plain RS code.
    #[inline]
    pub fn multiplier(&self, index: usize) -> FieldElem {
        self.multipliers
            .as_ref()
            .map_or(FieldElem::ONE, |l| l[index])
    }

    /// Multipliers of the dual GRS code of `RS(A, k)`.
    pub fn dual_multipliers(&self) -> &[FieldElem] {
        &self.dual
    }

    pub fn position(&self, point: FieldElem) -> Option<usize> {
        self.position
            .get(point.0 as usize)
            .filter(|&&i| i != u32::MAX)
            .map(|&i| i as usize)
    }

    /// Index of `point`, or `PointNotInCode`.
    pub fn require_position(&self, point: FieldElem) -> Result<usize> {
        self.position(point).ok_or_else(|| Error::PointNotInCode {
            point: point.to_string(),
        })
    }

    pub fn is_whole_field(&self) -> bool {
        self.n() == self.field().size()
    }

    /// Same points and dimension with the multipliers dropped.
    pub fn without_multipliers(&self) -> RsCode {
        RsCode {
            multipliers: None,
            ..self.clone()
        }
    }

    /// `c_i = lambda_i f(alpha_i)`.
    pub fn encode(&self, message: &PolyF) -> Result<Vec<FieldElem>> {
        if let Some(deg) = message.degree() {
            if deg >= self.k {
                return Err(Error::MessageDegreeTooHigh {
                    degree: deg,
                    k: self.k,
                });
            }
        }
        let field = self.field();
        Ok(self
            .points
            .iter()
            .enumerate()
            .map(|(i, &a)| field.mul(self.multiplier(i), message.eval(field, a)))
            .collect())
    }

    /// The message behind a codeword, from the symbols at `indices`
    /// (at least k distinct positions).
    pub fn decode_from(&self, codeword: &[FieldElem], indices: &[usize]) -> Result<PolyF> {
        if codeword.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: codeword.len(),
            });
        }
        let field = self.field();
        let pts: Vec<(FieldElem, FieldElem)> = indices
            .iter()
            .take(self.k)
            .map(|&i| {
                let y = field.div(codeword[i], self.multiplier(i));
                (self.points[i], y)
            })
            .collect();
        if pts.len() < self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: pts.len(),
            });
        }
        lagrange_interpolate(field, &pts)
    }

    /// Minimum Hamming weight over all non-zero codewords, by enumeration.
    pub fn mds_distance(&self) -> Result<usize> {
        self.mds_distance_with_budget(MDS_ENUMERATION_BUDGET)
    }

    pub fn mds_distance_with_budget(&self, budget: u128) -> Result<usize> {
        let q = self.field().size() as u128;
        let size = q.checked_pow(self.k as u32).unwrap_or(u128::MAX);
        if size > budget {
            return Err(Error::TooLargeToEnumerate { size, budget });
        }
        let field = self.field();
        // Evaluation matrix, column j = alpha_i^j * lambda_i
        let rows: Vec<Vec<FieldElem>> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                (0..self.k)
                    .map(|j| field.mul(self.multiplier(i), field.pow(a, j as u64)))
                    .collect()
            })
            .collect();
        let mut msg = vec![0usize; self.k];
        let mut best = usize::MAX;
        loop {
            // next message in mixed-radix order, skipping zero
            let mut pos = 0;
            loop {
                if pos == self.k {
                    return Ok(best);
                }
                msg[pos] += 1;
                if msg[pos] == q as usize {
                    msg[pos] = 0;
                    pos += 1;
                } else {
                    break;
                }
            }
            let weight = rows
                .iter()
                .filter(|row| {
                    row.iter()
                        .zip(&msg)
                        .map(|(&r, &c)| field.mul(r, FieldElem(c as u16)))
                        .sum::<FieldElem>()
                        != FieldElem::ZERO
                })
                .count();
            best = best.min(weight);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(m: u32, d: u32) -> FieldTower {
        FieldTower::new(m, d, None).unwrap()
    }

    #[test]
    fn rejects_bad_dimensions_and_points() {
        let t = tower(4, 2);
        let pts: Vec<FieldElem> = (0..5).map(FieldElem).collect();
        assert!(matches!(
            RsCode::new(t.clone(), pts.clone(), 0),
            Err(Error::InvalidDimensions { .. })
        ));
        assert!(matches!(
            RsCode::new(t.clone(), pts.clone(), 6),
            Err(Error::InvalidDimensions { .. })
        ));
        let dup = vec![FieldElem(1), FieldElem(2), FieldElem(1)];
        assert!(matches!(
            RsCode::new(t.clone(), dup, 2),
            Err(Error::DuplicatePoint { .. })
        ));
        let mut l = vec![FieldElem::ONE; 5];
        l[3] = FieldElem::ZERO;
        assert!(matches!(
            RsCode::grs(t, pts, 2, l),
            Err(Error::ZeroMultiplier { index: 3 })
        ));
    }

    #[test]
    fn dual_multiplier_small_cases() {
        let f = Field::new(4, None).unwrap();
        assert_eq!(grs_dual_multipliers(&f, &[FieldElem(9)]).unwrap(), vec![FieldElem::ONE]);
        let (a, b) = (FieldElem(3), FieldElem(10));
        assert_eq!(
            grs_dual_multipliers(&f, &[a, b]).unwrap(),
            vec![f.inv(a - b), f.inv(b - a)]
        );
    }

    #[test]
    fn encode_edge_cases() {
        let code = RsCode::whole_field(tower(4, 2), 5).unwrap();
        assert!(code
            .encode(&PolyF::zero())
            .unwrap()
            .iter()
            .all(|c| c.is_zero()));
        let c = FieldElem(13);
        assert!(code.encode(&PolyF::constant(c)).unwrap().iter().all(|&x| x == c));
        let big = PolyF::monomial(FieldElem::ONE, 5);
        assert!(matches!(
            code.encode(&big),
            Err(Error::MessageDegreeTooHigh { degree: 5, k: 5 })
        ));
    }

    #[test]
    fn mds_distance_small_codes() {
        let c = RsCode::whole_field(tower(2, 1), 2).unwrap();
        assert_eq!(c.mds_distance().unwrap(), 3);
        let c = RsCode::whole_field(tower(3, 1), 4).unwrap();
        assert_eq!(c.mds_distance().unwrap(), 5);
        let c = RsCode::new(tower(3, 1), (1..4).map(FieldElem).collect(), 3).unwrap();
        assert_eq!(c.mds_distance().unwrap(), 1);
        let c = RsCode::whole_field(tower(8, 4), 3).unwrap();
        assert!(matches!(
            c.mds_distance(),
            Err(Error::TooLargeToEnumerate { .. })
        ));
    }

    #[test]
    fn point_lookup() {
        let t = tower(4, 2);
        let code = RsCode::new(t, vec![FieldElem(7), FieldElem(2)], 1).unwrap();
        assert_eq!(code.position(FieldElem(2)), Some(1));
        assert_eq!(code.position(FieldElem(3)), None);
        assert!(matches!(
            code.require_position(FieldElem(3)),
            Err(Error::PointNotInCode { .. })
        ));
    }
}
