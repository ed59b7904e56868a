//! Truncated power series in `t = (eps*h)^2` with exact rational coefficients.
//!
//! A [`TruncatedSeries`] of length `N` holds the coefficients of `t^0 .. t^(N-1)`;
//! everything at `t^N` and beyond is discarded. Binary operations require equal
//! lengths. The operator impls panic on a mismatch, [`series_arith`] reports it.

mod laurent;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) use laurent::{solve_laurent, Laurent};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `p/q` with the sign on the numerator; integers still carry `/1`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "truncation length must be positive");
        Self { coeffs }
    }

    /// Coefficients given as integer pairs `(num, den)`, zero-padded to `n`.
    pub fn from_pairs(pairs: &[(i64, i64)], n: usize) -> Self {
        let mut s = Self::zero(n);
        for (c, &(p, q)) in s.coeffs.iter_mut().zip(pairs) {
            *c = rational(p, q);
        }
        s
    }

    pub fn zero(n: usize) -> Self {
        Self::from_coeffs(vec![Rational::zero(); n])
    }

    pub fn constant(c: Rational, n: usize) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = c;
        s
    }

    pub fn one(n: usize) -> Self {
        Self::constant(Rational::one(), n)
    }

    pub fn trunc_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Same series re-truncated (or zero-extended) to length `n`.
    pub fn with_len(&self, n: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(n, Rational::zero());
        Self::from_coeffs(c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiply by `t^k`, dropping what falls past the truncation.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.trunc_len();
        let mut c = vec![Rational::zero(); n];
        if k < n {
            c[k..].clone_from_slice(&self.coeffs[..n - k]);
        }
        Self::from_coeffs(c)
    }

    pub fn invert(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.trunc_len();
        let inv0 = a0.recip();
        let mut r: Vec<Rational> = Vec::with_capacity(n);
        r.push(inv0.clone());
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &r[k - j];
                }
            }
            r.push(-acc * &inv0);
        }
        Ok(Self::from_coeffs(r))
    }

    /// Horner evaluation in floating point.
    pub fn eval(&self, t: f64) -> f64 {
        horner(&self.to_f64(), t)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// Space-separated `p/q` tokens.
    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(format_rational).collect::<Vec<_>>().join(" ")
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let coeffs = s.split_whitespace().map(parse_rational).collect::<Result<Vec<_>>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("empty series".into()));
        }
        Ok(Self::from_coeffs(coeffs))
    }

    /// Human-readable polynomial in `t` using the first `terms` coefficients.
    pub fn display_terms(&self, terms: usize) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().take(terms).enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let mag_s = if mag.is_integer() { mag.numer().to_string() } else { format!("{}/{}", mag.numer(), mag.denom()) };
            let body = match i {
                0 => mag_s,
                1 => format!("{mag_s} t"),
                _ => format!("{mag_s} t^{i}"),
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_terms(self.trunc_len()))
    }
}

pub(crate) fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * t + a)
}

fn check_len(a: &TruncatedSeries, b: &TruncatedSeries) {
    assert_eq!(a.trunc_len(), b.trunc_len(), "truncation lengths differ");
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        check_len(self, rhs);
        TruncatedSeries::from_coeffs(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        check_len(self, rhs);
        TruncatedSeries::from_coeffs(self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect())
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        check_len(self, rhs);
        let n = self.trunc_len();
        let mut c = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        TruncatedSeries::from_coeffs(c)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Clone, Debug, PartialEq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    /// Inverts `a`; `b` is ignored apart from the length check.
    InvertA,
    ScaleBy(Rational),
}

pub fn series_arith(a: &TruncatedSeries, b: &TruncatedSeries, op: SeriesOp) -> Result<TruncatedSeries> {
    if a.trunc_len() != b.trunc_len() {
        return Err(Error::LengthMismatch(a.trunc_len(), b.trunc_len()));
    }
    Ok(match op {
        SeriesOp::Add => a + b,
        SeriesOp::Sub => a - b,
        SeriesOp::Mul => a * b,
        SeriesOp::InvertA => a.invert()?,
        SeriesOp::ScaleBy(k) => a.scale(&k),
    })
}

/// `exp(-k t)`: coefficient of `t^n` is `(-k)^n / n!`.
pub fn series_exp_neg(k: u64, n: usize) -> TruncatedSeries {
    let mk = Rational::from_integer(-BigInt::from(k));
    let mut c = Vec::with_capacity(n);
    let mut term = Rational::one();
    for i in 0..n {
        if i > 0 {
            term = term * &mk / Rational::from_integer(BigInt::from(i));
        }
        c.push(term.clone());
    }
    TruncatedSeries::from_coeffs(c)
}

/// `(1 + k t)^a` by the binomial series.
pub fn series_binomial(a: &Rational, k: u64, n: usize) -> TruncatedSeries {
    let kk = Rational::from_integer(BigInt::from(k));
    let mut c = Vec::with_capacity(n);
    let mut term = Rational::one();
    for i in 0..n {
        if i > 0 {
            let ii = Rational::from_integer(BigInt::from(i));
            term = term * (a - &ii + Rational::one()) / &ii * &kk;
        }
        c.push(term.clone());
    }
    TruncatedSeries::from_coeffs(c)
}

/// `sqrt(1 + k t)`.
pub fn series_sqrt_one_plus(k: u64, n: usize) -> TruncatedSeries {
    series_binomial(&rational(1, 2), k, n)
}

pub fn series_eval(a: &TruncatedSeries, t: f64) -> f64 {
    a.eval(t)
}

/// Solves `A x = b` over the truncated series ring.
///
/// Pivots on the first remaining row whose constant term is nonzero, so the
/// solve succeeds exactly when the constant-term matrix `A(0)` is nonsingular.
pub fn series_solve(a: &[Vec<TruncatedSeries>], b: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n), "system must be square");
    let len = b.first().map_or(1, TruncatedSeries::trunc_len);
    for s in a.iter().flatten().chain(b) {
        if s.trunc_len() != len {
            return Err(Error::LengthMismatch(len, s.trunc_len()));
        }
    }
    let mut m: Vec<Vec<TruncatedSeries>> = a.to_vec();
    let mut rhs: Vec<TruncatedSeries> = b.to_vec();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].coeffs[0].is_zero()).ok_or(Error::FlatLimitSingular)?;
        m.swap(k, p);
        rhs.swap(k, p);
        let inv = m[k][k].invert()?;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] * &inv;
            for j in k..n {
                let d = &f * &m[k][j];
                m[i][j] = &m[i][j] - &d;
            }
            let d = &f * &rhs[k];
            rhs[i] = &rhs[i] - &d;
        }
    }
    let mut x = vec![TruncatedSeries::zero(len); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in k + 1..n {
            acc = &acc - &(&m[k][j] * &x[j]);
        }
        x[k] = &acc * &m[k][k].invert()?;
    }
    Ok(x)
}
