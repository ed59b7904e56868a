//! Gaussian and multiquadric kernels and the operator blocks of the
//! collocation system, in closed form and as series in `t = (eps*h)^2`.
//!
//! Offsets are integer multiples of `h` and always mean
//! `evaluation point - kernel centre`. Role letters name the functional on
//! the evaluation argument first and on the centre argument second, so `LI`
//! is `L` applied at the evaluation point and `IL` is `L` applied at the
//! centre. Every entry is `h^-q * S(t)` where `S` only depends on `t` and the
//! integer offset; [`block_entry_series`] returns `(q, S)`.

use serde::{Deserialize, Serialize};

use crate::dd::Real;
use crate::series::{rational, series_binomial, series_exp_neg, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KernelKind {
    Gaussian,
    Multiquadric,
}

impl KernelKind {
    pub fn tag(self) -> &'static str {
        match self {
            KernelKind::Gaussian => "ga",
            KernelKind::Multiquadric => "mq",
        }
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    Identity,
    FirstDerivative1D,
    SecondDerivative1D,
    Laplacian2D,
}

impl OperatorKind {
    /// Power of `1/h` carried by the operator.
    pub fn order(self) -> u32 {
        match self {
            OperatorKind::Identity => 0,
            OperatorKind::FirstDerivative1D => 1,
            OperatorKind::SecondDerivative1D | OperatorKind::Laplacian2D => 2,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            OperatorKind::Laplacian2D => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockRole {
    II,
    IL,
    LI,
    LL,
}

impl BlockRole {
    /// Role for (functional at the evaluation point, functional at the centre).
    pub fn from_sides(eval_is_op: bool, centre_is_op: bool) -> Self {
        match (eval_is_op, centre_is_op) {
            (false, false) => BlockRole::II,
            (true, false) => BlockRole::LI,
            (false, true) => BlockRole::IL,
            (true, true) => BlockRole::LL,
        }
    }

    fn op_count(self) -> u32 {
        match self {
            BlockRole::II => 0,
            BlockRole::IL | BlockRole::LI => 1,
            BlockRole::LL => 2,
        }
    }
}

/// Integer node offset `(x, y)` in units of `h`; 1D stencils use `y = 0`.
pub type Offset = [i32; 2];

pub fn phi_numeric(kind: KernelKind, r2: f64, eps: f64) -> f64 {
    let w = eps * eps * r2;
    match kind {
        KernelKind::Gaussian => (-w).exp(),
        KernelKind::Multiquadric => (1.0 + w).sqrt(),
    }
}

/// Entry as `sum_m coef_m * g_m(s)` with `g_m(s) = t^m f^(m)(t s)`, `s = |d|^2`
/// and `phi = f(eps^2 r^2)`.
fn block_terms(op: OperatorKind, role: BlockRole, d: Offset) -> Vec<(usize, i64)> {
    let (x, y) = (d[0] as i64, d[1] as i64);
    let s = x * x + y * y;
    let phi = |k: usize| -> Vec<(usize, i64)> {
        match k {
            0 => vec![(0, 1)],
            1 => vec![(1, 2 * x)],
            2 => vec![(1, 2), (2, 4 * x * x)],
            4 => vec![(2, 12), (3, 48 * x * x), (4, 16 * x * x * x * x)],
            _ => unreachable!(),
        }
    };
    let neg = |v: Vec<(usize, i64)>| v.into_iter().map(|(m, c)| (m, -c)).collect();
    let lap = vec![(1, 4), (2, 4 * s)];
    let bilap = vec![(2, 32), (3, 64 * s), (4, 16 * s * s)];
    match (op, role) {
        (_, BlockRole::II) | (OperatorKind::Identity, _) => phi(0),
        (OperatorKind::FirstDerivative1D, BlockRole::LI) => phi(1),
        (OperatorKind::FirstDerivative1D, BlockRole::IL) => neg(phi(1)),
        (OperatorKind::FirstDerivative1D, BlockRole::LL) => neg(phi(2)),
        (OperatorKind::SecondDerivative1D, BlockRole::LI | BlockRole::IL) => phi(2),
        (OperatorKind::SecondDerivative1D, BlockRole::LL) => phi(4),
        (OperatorKind::Laplacian2D, BlockRole::LI | BlockRole::IL) => lap,
        (OperatorKind::Laplacian2D, BlockRole::LL) => bilap,
    }
}

fn h_power(op: OperatorKind, role: BlockRole) -> u32 {
    if op == OperatorKind::Identity {
        0
    } else {
        op.order() * role.op_count()
    }
}

/// `prod_{i<m} (1/2 - i)`, the multiquadric derivative constants.
fn mq_constant(m: usize) -> f64 {
    (0..m).map(|i| 0.5 - i as f64).product()
}

fn g_numeric<R: Real>(kind: KernelKind, m: usize, s: i64, t: R) -> R {
    let ts = t * R::from(s as f64);
    let mut tm = R::from(1.0);
    for _ in 0..m {
        tm = tm * t;
    }
    match kind {
        KernelKind::Gaussian => {
            let v = tm * (-ts).exp();
            if m % 2 == 1 {
                -v
            } else {
                v
            }
        }
        KernelKind::Multiquadric => {
            let base = R::from(1.0) + ts;
            let mut den = R::from(1.0);
            for _ in 0..m {
                den = den * base;
            }
            R::from(mq_constant(m)) * tm * base.sqrt() / den
        }
    }
}

fn g_series(kind: KernelKind, m: usize, s: i64, n: usize) -> TruncatedSeries {
    let s = s as u64;
    let base = match kind {
        KernelKind::Gaussian => {
            let e = series_exp_neg(s, n);
            if m % 2 == 1 {
                -&e
            } else {
                e
            }
        }
        KernelKind::Multiquadric => {
            let mut c = rational(1, 1);
            for i in 0..m as i64 {
                c *= rational(1, 2) - rational(i, 1);
            }
            series_binomial(&(rational(1, 2) - rational(m as i64, 1)), s, n).scale(&c)
        }
    };
    base.shift(m)
}

/// Nondimensional entry `S(t)` evaluated in the scalar type `R`.
pub(crate) fn block_entry_nondim<R: Real>(kind: KernelKind, role: BlockRole, op: OperatorKind, d: Offset, t: R) -> R {
    let s = (d[0] as i64).pow(2) + (d[1] as i64).pow(2);
    block_terms(op, role, d)
        .into_iter()
        .fold(R::from(0.0), |acc, (m, c)| acc + R::from(c as f64) * g_numeric(kind, m, s, t))
}

pub fn block_entry_numeric(kind: KernelKind, role: BlockRole, op: OperatorKind, offset: Offset, eps: f64, h: f64) -> f64 {
    let t = (eps * h) * (eps * h);
    block_entry_nondim(kind, role, op, offset, t) * h.powi(-(h_power(op, role) as i32))
}

pub fn block_entry_series(kind: KernelKind, role: BlockRole, op: OperatorKind, offset: Offset, n: usize) -> (u32, TruncatedSeries) {
    let s = (offset[0] as i64).pow(2) + (offset[1] as i64).pow(2);
    let mut acc = TruncatedSeries::zero(n);
    for (m, c) in block_terms(op, role, offset) {
        if c != 0 {
            acc = &acc + &g_series(kind, m, s, n).scale(&rational(c, 1));
        }
    }
    (h_power(op, role), acc)
}
