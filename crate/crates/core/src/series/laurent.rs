//! Truncated Laurent series with absolute-precision tracking.
//!
//! A value is `t^val * (c[0] + c[1] t + ...) + O(t^prec)` with `c[0] != 0`, or
//! the unknown-beyond-`prec` zero `O(t^prec)` when `c` is empty. Products and
//! inverses propagate precision exactly, so elimination on matrices whose
//! constant part is singular still reports how many terms are trustworthy.

use num_traits::Zero;

use super::{Rational, TruncatedSeries};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Laurent {
    val: i64,
    c: Vec<Rational>,
    prec: i64,
}

impl Laurent {
    fn new(val: i64, mut c: Vec<Rational>, prec: i64) -> Self {
        c.truncate((prec - val).max(0) as usize);
        let lead = c.iter().position(|x| !x.is_zero()).unwrap_or(c.len());
        if lead == c.len() {
            return Self { val: prec, c: Vec::new(), prec };
        }
        c.drain(..lead);
        Self { val: val + lead as i64, c, prec }
    }

    pub(crate) fn from_series(s: &TruncatedSeries) -> Self {
        Self::new(0, s.coeffs().to_vec(), s.trunc_len() as i64)
    }

    pub(crate) fn prec(&self) -> i64 {
        self.prec
    }

    pub(crate) fn val(&self) -> i64 {
        self.val
    }

    pub(crate) fn is_unknown_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Coefficient of `t^k`; `None` when `k` is beyond the known precision.
    pub(crate) fn coeff(&self, k: i64) -> Option<Rational> {
        if k >= self.prec {
            None
        } else if k < self.val {
            Some(Rational::zero())
        } else {
            Some(self.c[(k - self.val) as usize].clone())
        }
    }

    pub(crate) fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let v = self.val.min(o.val).min(prec);
        let mut c = vec![Rational::zero(); (prec - v) as usize];
        for src in [self, o] {
            for (i, x) in src.c.iter().enumerate() {
                let k = (src.val + i as i64 - v) as usize;
                if k < c.len() {
                    c[k] += x;
                }
            }
        }
        Self::new(v, c, prec)
    }

    pub(crate) fn neg(&self) -> Self {
        Self { val: self.val, c: self.c.iter().map(|x| -x).collect(), prec: self.prec }
    }

    pub(crate) fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub(crate) fn mul(&self, o: &Self) -> Self {
        let v = self.val + o.val;
        let prec = (self.prec + o.val).min(o.prec + self.val);
        let n = (prec - v).max(0) as usize;
        let mut c = vec![Rational::zero(); n];
        for (i, x) in self.c.iter().enumerate().take(n) {
            for (j, y) in o.c.iter().enumerate().take(n - i) {
                c[i + j] += x * y;
            }
        }
        Self::new(v, c, prec)
    }

    pub(crate) fn inv(&self) -> Result<Self> {
        if self.c.is_empty() {
            return Err(Error::NotInvertible);
        }
        let rel = (self.prec - self.val) as usize;
        let inv0 = self.c[0].recip();
        let mut r: Vec<Rational> = Vec::with_capacity(rel);
        r.push(inv0.clone());
        for n in 1..rel {
            let mut acc = Rational::zero();
            for k in 1..=n.min(self.c.len() - 1) {
                acc += &self.c[k] * &r[n - k];
            }
            r.push(-acc * &inv0);
        }
        Ok(Self::new(-self.val, r, -self.val + rel as i64))
    }

    /// Truncated power series of length `n`, or `None` if a negative power
    /// is present or fewer than `n` terms are known.
    pub(crate) fn to_series(&self, n: usize) -> Option<TruncatedSeries> {
        if self.val < 0 || self.prec < n as i64 {
            return None;
        }
        let c = (0..n as i64).map(|k| self.coeff(k).unwrap_or_else(Rational::zero)).collect();
        Some(TruncatedSeries::from_coeffs(c))
    }

    #[cfg(test)]
    fn one(prec: i64) -> Self {
        Self::new(0, vec![<Rational as num_traits::One>::one()], prec)
    }
}

/// Gaussian elimination with full pivoting on the entry of least valuation.
///
/// Entries that are zero up to their precision are never chosen as pivots.
/// Every update is carried out (including multiples of unknown zeros) so the
/// returned precisions are honest bounds.
pub(crate) fn solve_laurent(a: &[Vec<Laurent>], b: &[Laurent]) -> Result<Vec<Laurent>> {
    let n = b.len();
    let mut m: Vec<Vec<Laurent>> = a.to_vec();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (j, e) in row.iter().enumerate().skip(k) {
                if !e.is_unknown_zero() && best.is_none_or(|(v, _, _)| e.val < v) {
                    best = Some((e.val, i, j));
                }
            }
        }
        let (_, pi, pj) = best.ok_or(Error::PrecisionExhausted { got: 0, wanted: 1 })?;
        m.swap(k, pi);
        rhs.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        perm.swap(k, pj);
        let inv = m[k][k].inv()?;
        for i in k + 1..n {
            let f = m[i][k].mul(&inv);
            for j in k..n {
                let d = f.mul(&m[k][j]);
                m[i][j] = m[i][j].sub(&d);
            }
            let d = f.mul(&rhs[k]);
            rhs[i] = rhs[i].sub(&d);
        }
    }
    let mut x: Vec<Laurent> = vec![Laurent::new(0, Vec::new(), 0); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in k + 1..n {
            acc = acc.sub(&m[k][j].mul(&x[j]));
        }
        x[k] = acc.mul(&m[k][k].inv()?);
    }
    let mut out = x.clone();
    for k in 0..n {
        out[perm[k]] = x[k].clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational;

    fn l(val: i64, c: &[i64], prec: i64) -> Laurent {
        Laurent::new(val, c.iter().map(|&x| rational(x, 1)).collect(), prec)
    }

    #[test]
    fn precision_rules() {
        let a = l(1, &[1, 1], 3);
        let b = l(0, &[2], 5);
        let p = a.mul(&b);
        assert_eq!((p.val(), p.prec()), (1, 3));
        let q = l(2, &[1], 4).mul(&l(0, &[1, 1, 1], 3));
        assert_eq!(q.prec(), 4);
        let inv = l(1, &[1, -1], 4).inv().unwrap();
        assert_eq!((inv.val(), inv.prec()), (-1, 2));
        assert_eq!(inv.coeff(0), Some(rational(1, 1)));
        assert_eq!(inv.coeff(2), None);
        let z = l(0, &[1, 2], 4).sub(&l(0, &[1, 2], 6));
        assert!(z.is_unknown_zero());
        assert_eq!(z.prec(), 4);
    }

    #[test]
    fn singular_constant_part_is_resolved() {
        // [[1, 1], [1, 1 + t]] x = [2, 2 + t]  ->  x = [1, 1]
        let p = 8;
        let a = vec![vec![Laurent::one(p), Laurent::one(p)], vec![Laurent::one(p), l(0, &[1, 1], p)]];
        let b = vec![l(0, &[2], p), l(0, &[2, 1], p)];
        let x = solve_laurent(&a, &b).unwrap();
        for xi in &x {
            assert_eq!(xi.to_series(5).unwrap(), TruncatedSeries::one(5));
            assert!(xi.prec() < p);
        }
    }
}
