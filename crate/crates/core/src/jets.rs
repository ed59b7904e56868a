//! Truncated Taylor jets in one and two variables and the catalogued test
//! functions.
//!
//! A jet of order `K` holds `c_a = u^(a)(x0) / a!` for every multi-index of
//! total degree at most `K`. Nonlinear functions are composed with the
//! recurrence `|c| f_c = sum_{b != 0} |b| g_b F'(g)_{c-b}` (the Euler operator
//! `x d/dx + y d/dy` scales a degree-`d` term by `d`), so one implementation
//! serves both dimensions. Coefficients are `f64`; each composed coefficient
//! carries roughly `K` ulps of rounding.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
struct Taylor {
    dim: usize,
    order: usize,
    c: Vec<f64>,
}

fn count(dim: usize, order: usize) -> usize {
    if dim == 1 {
        order + 1
    } else {
        (order + 1) * (order + 2) / 2
    }
}

impl Taylor {
    fn zero(dim: usize, order: usize) -> Self {
        Taylor { dim, order, c: vec![0.0; count(dim, order)] }
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        if self.dim == 1 {
            i
        } else {
            let d = i + j;
            d * (d + 1) / 2 + j
        }
    }

    /// Multi-indices in storage order, which is nondecreasing total degree.
    fn exps(&self) -> Vec<(usize, usize)> {
        if self.dim == 1 {
            (0..=self.order).map(|i| (i, 0)).collect()
        } else {
            (0..=self.order).flat_map(|d| (0..=d).map(move |j| (d - j, j))).collect()
        }
    }

    fn same_shape(&self, o: &Self) {
        assert!(self.dim == o.dim && self.order == o.order, "jets differ in dimension or order");
    }

    fn zip(&self, o: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        self.same_shape(o);
        Taylor { dim: self.dim, order: self.order, c: self.c.iter().zip(&o.c).map(|(&a, &b)| f(a, b)).collect() }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Taylor { dim: self.dim, order: self.order, c: self.c.iter().map(|&a| f(a)).collect() }
    }

    fn mul(&self, o: &Self) -> Self {
        self.same_shape(o);
        let ex = self.exps();
        let mut out = Taylor::zero(self.dim, self.order);
        for (a, &(i1, j1)) in ex.iter().enumerate() {
            if self.c[a] == 0.0 {
                continue;
            }
            for (b, &(i2, j2)) in ex.iter().enumerate() {
                if i1 + i2 + j1 + j2 > self.order {
                    break;
                }
                let k = out.idx(i1 + i2, j1 + j2);
                out.c[k] += self.c[a] * o.c[b];
            }
        }
        out
    }

    /// `sum_{b <= c, b != 0} w(b) * x_b * y_{c-b}` over the already-known
    /// lower-degree part of `y`.
    fn conv_tail(&self, ex: &[(usize, usize)], ci: usize, x: &[f64], y: &[f64], weighted: bool) -> f64 {
        let (i, j) = ex[ci];
        let mut acc = 0.0;
        for k in 0..=i {
            for l in 0..=j {
                if k + l == 0 {
                    continue;
                }
                let w = if weighted { (k + l) as f64 } else { 1.0 };
                acc += w * x[self.idx(k, l)] * y[self.idx(i - k, j - l)];
            }
        }
        acc
    }

    fn recip(&self) -> Result<Self> {
        let g0 = self.c[0];
        if g0 == 0.0 {
            return Err(Error::NotInvertible);
        }
        let ex = self.exps();
        let mut r = Taylor::zero(self.dim, self.order);
        r.c[0] = 1.0 / g0;
        for ci in 1..ex.len() {
            r.c[ci] = -self.conv_tail(&ex, ci, &self.c, &r.c, false) / g0;
        }
        Ok(r)
    }

    fn exp(&self) -> Self {
        let ex = self.exps();
        let mut f = Taylor::zero(self.dim, self.order);
        f.c[0] = self.c[0].exp();
        for ci in 1..ex.len() {
            let d = (ex[ci].0 + ex[ci].1) as f64;
            f.c[ci] = self.conv_tail(&ex, ci, &self.c, &f.c, true) / d;
        }
        f
    }

    fn sin_cos(&self) -> (Self, Self) {
        let ex = self.exps();
        let mut s = Taylor::zero(self.dim, self.order);
        let mut c = Taylor::zero(self.dim, self.order);
        s.c[0] = self.c[0].sin();
        c.c[0] = self.c[0].cos();
        for ci in 1..ex.len() {
            let d = (ex[ci].0 + ex[ci].1) as f64;
            s.c[ci] = self.conv_tail(&ex, ci, &self.c, &c.c, true) / d;
            c.c[ci] = -self.conv_tail(&ex, ci, &self.c, &s.c, true) / d;
        }
        (s, c)
    }

    fn tanh(&self) -> Self {
        let ex = self.exps();
        let mut t = Taylor::zero(self.dim, self.order);
        // w = 1 - tanh^2, filled one coefficient behind t.
        let mut w = Taylor::zero(self.dim, self.order);
        t.c[0] = self.c[0].tanh();
        w.c[0] = 1.0 - t.c[0] * t.c[0];
        for ci in 1..ex.len() {
            let d = (ex[ci].0 + ex[ci].1) as f64;
            t.c[ci] = self.conv_tail(&ex, ci, &self.c, &w.c, true) / d;
            let sq = 2.0 * t.c[0] * t.c[ci] + self.conv_tail_inner(&ex, ci, &t.c);
            w.c[ci] = -sq;
        }
        t
    }

    /// `sum_{b <= c, b != 0, b != c} t_b t_{c-b}`.
    fn conv_tail_inner(&self, ex: &[(usize, usize)], ci: usize, t: &[f64]) -> f64 {
        let (i, j) = ex[ci];
        let mut acc = 0.0;
        for k in 0..=i {
            for l in 0..=j {
                if k + l == 0 || (k == i && l == j) {
                    continue;
                }
                acc += t[self.idx(k, l)] * t[self.idx(i - k, j - l)];
            }
        }
        acc
    }

    fn powi(&self, n: u32) -> Self {
        let mut r = Taylor::zero(self.dim, self.order);
        r.c[0] = 1.0;
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

macro_rules! jet_common {
    ($name:ident) => {
        impl $name {
            pub fn order(&self) -> usize {
                self.t.order
            }

            pub fn coeffs(&self) -> &[f64] {
                &self.t.c
            }

            pub fn recip(&self) -> Result<Self> {
                Ok(self.wrap(self.t.recip()?))
            }

            pub fn exp(&self) -> Self {
                self.wrap(self.t.exp())
            }

            pub fn sin(&self) -> Self {
                self.wrap(self.t.sin_cos().0)
            }

            pub fn cos(&self) -> Self {
                self.wrap(self.t.sin_cos().1)
            }

            pub fn tanh(&self) -> Self {
                self.wrap(self.t.tanh())
            }

            pub fn powi(&self, n: u32) -> Self {
                self.wrap(self.t.powi(n))
            }

            pub fn scale(&self, k: f64) -> Self {
                self.wrap(self.t.map(|a| a * k))
            }

            pub fn add_const(&self, k: f64) -> Self {
                let mut t = self.t.clone();
                t.c[0] += k;
                self.wrap(t)
            }

            fn check(&self, o: &Self) {
                assert_eq!(self.center, o.center, "jets have different centres");
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, o: &$name) -> $name {
                self.check(o);
                self.wrap(self.t.zip(&o.t, |a, b| a + b))
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, o: &$name) -> $name {
                self.check(o);
                self.wrap(self.t.zip(&o.t, |a, b| a - b))
            }
        }

        impl Mul for &$name {
            type Output = $name;
            fn mul(self, o: &$name) -> $name {
                self.check(o);
                self.wrap(self.t.mul(&o.t))
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                self.wrap(self.t.map(|a| -a))
            }
        }

        impl JetValue for $name {
            fn centre_key(&self) -> [f64; 2] {
                let c: [f64; 2] = self.center_pair();
                c
            }
            fn order(&self) -> usize {
                self.t.order
            }
        }
    };
}

/// Univariate jet.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet1 {
    pub center: f64,
    t: Taylor,
}

impl Jet1 {
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut t = Taylor::zero(1, order);
        t.c[0] = x0;
        if order > 0 {
            t.c[1] = 1.0;
        }
        Jet1 { center: x0, t }
    }

    pub fn constant(c: f64, x0: f64, order: usize) -> Self {
        let mut t = Taylor::zero(1, order);
        t.c[0] = c;
        Jet1 { center: x0, t }
    }

    pub fn from_coeffs(x0: f64, coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty());
        Jet1 { center: x0, t: Taylor { dim: 1, order: coeffs.len() - 1, c: coeffs } }
    }

    fn wrap(&self, t: Taylor) -> Self {
        Jet1 { center: self.center, t }
    }

    fn center_pair(&self) -> [f64; 2] {
        [self.center, 0.0]
    }

    /// `u^(k)(x0)`.
    pub fn derivative(&self, k: usize) -> Result<f64> {
        if k > self.t.order {
            return Err(Error::OutOfOrder(vec![k], self.t.order));
        }
        Ok(self.t.c[k] * factorial(k))
    }
}

jet_common!(Jet1);

/// Bivariate jet, coefficients stored by total degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet2 {
    pub center: (f64, f64),
    t: Taylor,
}

impl Jet2 {
    pub fn variable_x(x0: f64, y0: f64, order: usize) -> Self {
        Self::linear(x0, y0, order, x0, 1)
    }

    pub fn variable_y(x0: f64, y0: f64, order: usize) -> Self {
        Self::linear(x0, y0, order, y0, 2)
    }

    fn linear(x0: f64, y0: f64, order: usize, value: f64, slot: usize) -> Self {
        let mut t = Taylor::zero(2, order);
        t.c[0] = value;
        if order > 0 {
            t.c[slot] = 1.0;
        }
        Jet2 { center: (x0, y0), t }
    }

    pub fn constant(c: f64, x0: f64, y0: f64, order: usize) -> Self {
        let mut t = Taylor::zero(2, order);
        t.c[0] = c;
        Jet2 { center: (x0, y0), t }
    }

    fn wrap(&self, t: Taylor) -> Self {
        Jet2 { center: self.center, t }
    }

    fn center_pair(&self) -> [f64; 2] {
        [self.center.0, self.center.1]
    }

    /// Taylor coefficient of `dx^i dy^j`.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.t.order {
            0.0
        } else {
            self.t.c[self.t.idx(i, j)]
        }
    }

    /// `d^(i+j) u / dx^i dy^j` at the centre.
    pub fn derivative(&self, i: usize, j: usize) -> Result<f64> {
        if i + j > self.t.order {
            return Err(Error::OutOfOrder(vec![i, j], self.t.order));
        }
        Ok(self.coeff(i, j) * factorial(i) * factorial(j))
    }
}

jet_common!(Jet2);

/// Shared surface of [`Jet1`] and [`Jet2`].
pub trait JetValue: Clone {
    fn centre_key(&self) -> [f64; 2];
    fn order(&self) -> usize;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JetOp {
    Add,
    Mul,
    Scale(f64),
    Reciprocal,
    Sin,
    Cos,
    Exp,
    Tanh,
    Power(u32),
}

macro_rules! jet_ops_impl {
    ($fn_name:ident, $ty:ident) => {
        /// Applies `op`; unary operations ignore `b` apart from the shape check.
        pub fn $fn_name(a: &$ty, b: &$ty, op: JetOp) -> Result<$ty> {
            if a.centre_key() != b.centre_key() || a.order() != b.order() {
                return Err(Error::InvalidArgument("jets differ in centre or order".into()));
            }
            Ok(match op {
                JetOp::Add => a + b,
                JetOp::Mul => a * b,
                JetOp::Scale(k) => a.scale(k),
                JetOp::Reciprocal => a.recip()?,
                JetOp::Sin => a.sin(),
                JetOp::Cos => a.cos(),
                JetOp::Exp => a.exp(),
                JetOp::Tanh => a.tanh(),
                JetOp::Power(n) => a.powi(n),
            })
        }
    };
}

jet_ops_impl!(jet_ops1, Jet1);
jet_ops_impl!(jet_ops2, Jet2);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestFunctionId {
    U1,
    U2,
    U4,
    U5,
    U6,
    U7,
    U8,
    U9,
}

impl TestFunctionId {
    pub const ALL: [TestFunctionId; 8] = [
        TestFunctionId::U1,
        TestFunctionId::U2,
        TestFunctionId::U4,
        TestFunctionId::U5,
        TestFunctionId::U6,
        TestFunctionId::U7,
        TestFunctionId::U8,
        TestFunctionId::U9,
    ];

    pub fn dim(self) -> usize {
        match self {
            TestFunctionId::U1 | TestFunctionId::U2 => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        use TestFunctionId::*;
        match self {
            U1 => "u1",
            U2 => "u2",
            U4 => "u4",
            U5 => "u5",
            U6 => "u6",
            U7 => "u7",
            U8 => "u8",
            U9 => "u9",
        }
    }

    /// Evaluation point used for each function's tables (`y = 0` in 1D).
    pub fn default_point(self) -> [f64; 2] {
        use TestFunctionId::*;
        match self {
            U1 => [0.4, 0.0],
            U2 => [0.25, 0.0],
            U4 => [0.25, 0.25],
            U5 => [0.0, 0.0],
            U6 | U7 | U8 | U9 => [0.1, 0.2],
        }
    }

    /// Closed-form value.
    pub fn eval(self, x: f64, y: f64) -> f64 {
        use TestFunctionId::*;
        let e = std::f64::consts::E;
        match self {
            U1 => (x * x).sin(),
            U2 => (PI * x).sin() + (x.exp() - 1.0) / (e - 1.0),
            U4 => (-(x - 0.25).powi(2) - (y - 0.5).powi(2)).exp() * (PI * x).sin() * (2.0 * PI * y).cos(),
            U5 => 25.0 / (25.0 + (x - 0.2).powi(2) + 2.0 * y * y),
            U6 => x.exp() * (y / 2f64.sqrt()).tanh(),
            U7 => {
                let (a, b) = (9.0 * x, 9.0 * y);
                0.75 * (-((a - 2.0).powi(2) + (b - 2.0).powi(2)) / 4.0).exp()
                    + 0.75 * (-(a + 1.0).powi(2) / 49.0 - (b + 1.0) / 10.0).exp()
                    + 0.5 * (-((a - 7.0).powi(2) + (b - 3.0).powi(2)) / 4.0).exp()
                    - 0.2 * (-(a - 4.0).powi(2) - (b - 7.0).powi(2)).exp()
            }
            U8 => {
                let p = |s: f64| (1.0 - s / 2.0).powi(6);
                p(x) * p(y) + 1000.0 * ((1.0 - x) * x * (1.0 - y) * y).powi(3) + y.powi(6) * p(x) + x.powi(6) * p(y)
            }
            U9 => (PI * x).sin() * (PI * y).sin(),
        }
    }
}

impl fmt::Display for TestFunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunctionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        TestFunctionId::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown test function {s:?}")))
    }
}

pub fn testfn_jet1(id: TestFunctionId, x0: f64, order: usize) -> Result<Jet1> {
    let x = Jet1::variable(x0, order);
    match id {
        TestFunctionId::U1 => Ok((&x * &x).sin()),
        TestFunctionId::U2 => {
            let e = std::f64::consts::E;
            Ok(&x.scale(PI).sin() + &x.exp().add_const(-1.0).scale(1.0 / (e - 1.0)))
        }
        _ => Err(Error::ArityMismatch(id.name().into(), 1)),
    }
}

pub fn testfn_jet2(id: TestFunctionId, x0: f64, y0: f64, order: usize) -> Result<Jet2> {
    use TestFunctionId::*;
    let x = Jet2::variable_x(x0, y0, order);
    let y = Jet2::variable_y(x0, y0, order);
    let sq = |j: &Jet2| j * j;
    Ok(match id {
        U1 | U2 => return Err(Error::ArityMismatch(id.name().into(), 2)),
        U4 => {
            let g = (&sq(&x.add_const(-0.25)) + &sq(&y.add_const(-0.5))).scale(-1.0).exp();
            &(&g * &x.scale(PI).sin()) * &y.scale(2.0 * PI).cos()
        }
        U5 => (&sq(&x.add_const(-0.2)) + &sq(&y).scale(2.0)).add_const(25.0).recip()?.scale(25.0),
        U6 => &x.exp() * &y.scale(1.0 / 2f64.sqrt()).tanh(),
        U7 => {
            let a = x.scale(9.0);
            let b = y.scale(9.0);
            let t1 = (&sq(&a.add_const(-2.0)) + &sq(&b.add_const(-2.0))).scale(-0.25).exp().scale(0.75);
            let t2 = (&sq(&a.add_const(1.0)).scale(-1.0 / 49.0) - &b.add_const(1.0).scale(0.1)).exp().scale(0.75);
            let t3 = (&sq(&a.add_const(-7.0)) + &sq(&b.add_const(-3.0))).scale(-0.25).exp().scale(0.5);
            let t4 = (&sq(&a.add_const(-4.0)) + &sq(&b.add_const(-7.0))).scale(-1.0).exp().scale(-0.2);
            &(&(&t1 + &t2) + &t3) + &t4
        }
        U8 => {
            let px = x.scale(-0.5).add_const(1.0).powi(6);
            let py = y.scale(-0.5).add_const(1.0).powi(6);
            let cubic = &(&(&x.scale(-1.0).add_const(1.0) * &x) * &y.scale(-1.0).add_const(1.0)) * &y;
            let s = &(&px * &py) + &cubic.powi(3).scale(1000.0);
            &(&s + &(&y.powi(6) * &px)) + &(&x.powi(6) * &py)
        }
        U9 => &x.scale(PI).sin() * &y.scale(PI).sin(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn elementary_examples() {
        let x = Jet1::variable(0.0, 3);
        assert_eq!((&x * &x).coeffs(), &[0.0, 0.0, 1.0, 0.0]);
        let x = Jet1::variable(0.0, 7);
        let s = (&x * &x).sin();
        let want = [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0 / 6.0, 0.0];
        for (a, b) in s.coeffs().iter().zip(want) {
            assert!((a - b).abs() < 1e-16);
        }
        assert_eq!(Jet1::constant(0.0, 0.0, 4).exp().coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(Jet1::constant(0.0, 0.0, 2).recip(), Err(Error::NotInvertible));
        let j = Jet1::from_coeffs(0.0, vec![0.0, 0.0, 1.0]);
        assert_eq!(j.derivative(2).unwrap(), 2.0);
        assert_eq!(j.derivative(3), Err(Error::OutOfOrder(vec![3], 2)));
    }

    #[test]
    fn univariate_test_functions() {
        let u = testfn_jet1(TestFunctionId::U1, 0.4, 12).unwrap();
        assert!(rel(u.derivative(0).unwrap(), 0.16f64.sin()) < 1e-15);
        assert!(rel(u.derivative(1).unwrap(), 0.8 * 0.16f64.cos()) < 1e-15);
        let u = testfn_jet1(TestFunctionId::U1, 0.0, 12).unwrap();
        assert!((u.coeffs()[2] - 1.0).abs() < 1e-16 && (u.coeffs()[6] + 1.0 / 6.0).abs() < 1e-16);
        assert!(u.coeffs().iter().skip(1).step_by(2).all(|&c| c == 0.0));
        assert_eq!(testfn_jet1(TestFunctionId::U2, 0.0, 3).unwrap().derivative(0).unwrap(), 0.0);
        assert!(matches!(testfn_jet1(TestFunctionId::U9, 0.0, 3), Err(Error::ArityMismatch(..))));
        assert!(matches!(testfn_jet2(TestFunctionId::U1, 0.0, 0.0, 3), Err(Error::ArityMismatch(..))));
    }

    #[test]
    fn laplacian_of_u9() {
        for [x, y] in [[0.1, 0.2], [0.25, 0.25], [0.0, 0.0]] {
            let u = testfn_jet2(TestFunctionId::U9, x, y, 4).unwrap();
            let lap = u.derivative(2, 0).unwrap() + u.derivative(0, 2).unwrap();
            let want = -2.0 * PI * PI * TestFunctionId::U9.eval(x, y);
            assert!((lap - want).abs() <= 1e-12 * want.abs().max(1e-12), "{lap} vs {want}");
        }
        let u = testfn_jet2(TestFunctionId::U9, 0.25, 0.25, 4).unwrap();
        assert!(rel(u.derivative(2, 0).unwrap(), -PI * PI * 0.5) < 1e-14);
    }

    #[test]
    fn polynomial_and_stationary_cases() {
        let u = testfn_jet2(TestFunctionId::U8, 0.1, 0.2, 16).unwrap();
        for d in 13..=16 {
            for j in 0..=d {
                assert!(u.coeff(d - j, j).abs() < 1e-9, "degree {d}");
            }
        }
        let u = testfn_jet2(TestFunctionId::U5, 0.2, 0.0, 4).unwrap();
        assert_eq!(u.derivative(1, 0).unwrap(), 0.0);
    }

    #[test]
    fn jets_agree_with_finite_differences() {
        let h = 1e-5;
        for id in TestFunctionId::ALL {
            let [x, y] = id.default_point();
            let f = |dx: f64, dy: f64| id.eval(x + dx, y + dy);
            let fd1 = (f(h, 0.0) - f(-h, 0.0)) / (2.0 * h);
            let fd2 = (f(h, 0.0) - 2.0 * f(0.0, 0.0) + f(-h, 0.0)) / (h * h);
            let (v, d1, d2) = if id.dim() == 1 {
                let u = testfn_jet1(id, x, 4).unwrap();
                (u.derivative(0).unwrap(), u.derivative(1).unwrap(), u.derivative(2).unwrap())
            } else {
                let u = testfn_jet2(id, x, y, 4).unwrap();
                let fy = (f(0.0, h) - f(0.0, -h)) / (2.0 * h);
                assert!((u.derivative(0, 1).unwrap() - fy).abs() <= 1e-6 * fy.abs().max(1.0), "{id} y");
                (u.derivative(0, 0).unwrap(), u.derivative(1, 0).unwrap(), u.derivative(2, 0).unwrap())
            };
            assert!(rel(v, f(0.0, 0.0)) < 1e-14, "{id}");
            assert!((d1 - fd1).abs() <= 1e-6 * fd1.abs().max(1.0), "{id}: {d1} vs {fd1}");
            assert!((d2 - fd2).abs() <= 1e-4 * fd2.abs().max(1.0), "{id}: {d2} vs {fd2}");
        }
    }

    #[test]
    fn tanh_derivative_identity() {
        let g = testfn_jet1(TestFunctionId::U2, 0.3, 10).unwrap();
        let t = g.tanh();
        // d/dx tanh(g) = (1 - tanh(g)^2) g'
        let one_minus = (&t * &t).scale(-1.0).add_const(1.0);
        let rhs = &one_minus * &derivative_jet(&g);
        let lhs = derivative_jet(&t);
        for k in 0..9 {
            assert!((lhs.coeffs()[k] - rhs.coeffs()[k]).abs() < 1e-12 * rhs.coeffs()[k].abs().max(1.0), "k = {k}");
        }
    }

    fn derivative_jet(j: &Jet1) -> Jet1 {
        let c = j.coeffs();
        let mut d: Vec<f64> = (1..c.len()).map(|k| k as f64 * c[k]).collect();
        d.push(0.0);
        Jet1::from_coeffs(j.center, d)
    }

    #[test]
    fn jet_ops_dispatch() {
        let a = Jet2::variable_x(0.5, 0.5, 3);
        let b = Jet2::variable_y(0.5, 0.5, 3);
        let p = jet_ops2(&a, &b, JetOp::Mul).unwrap();
        assert_eq!(p.derivative(1, 1).unwrap(), 1.0);
        let e = jet_ops2(&a, &b, JetOp::Exp).unwrap();
        assert!(rel(e.derivative(3, 0).unwrap(), 0.5f64.exp()) < 1e-15);
        let other = Jet2::variable_x(0.0, 0.5, 3);
        assert!(jet_ops2(&a, &other, JetOp::Add).is_err());
    }

    fn binom(n: usize, k: usize) -> f64 {
        factorial(n) / (factorial(k) * factorial(n - k))
    }

    proptest! {
        #[test]
        fn leibniz_rule(a in prop::collection::vec(-5i32..6, 7), b in prop::collection::vec(-5i32..6, 7)) {
            let ja = Jet1::from_coeffs(0.0, a.iter().map(|&v| v as f64).collect());
            let jb = Jet1::from_coeffs(0.0, b.iter().map(|&v| v as f64).collect());
            let p = &ja * &jb;
            for k in 0..7 {
                let want: f64 = (0..=k).map(|i| binom(k, i) * ja.derivative(i).unwrap() * jb.derivative(k - i).unwrap()).sum();
                prop_assert_eq!(p.derivative(k).unwrap(), want);
            }
        }

        #[test]
        fn bivariate_product_matches_univariate_restriction(c in prop::collection::vec(-3i32..4, 10)) {
            // A jet in x alone behaves like the univariate jet.
            let x = Jet2::variable_x(0.2, 0.7, 6);
            let x1 = Jet1::variable(0.2, 6);
            let k = c[0] as f64 / 4.0;
            let g2 = (&x.scale(k) * &x).sin();
            let g1 = (&x1.scale(k) * &x1).sin();
            for i in 0..=6 {
                prop_assert!((g2.coeff(i, 0) - g1.coeffs()[i]).abs() < 1e-15);
                prop_assert_eq!(g2.coeff(0, i.min(6)), if i == 0 { g1.coeffs()[0] } else { 0.0 });
            }
        }
    }
}
