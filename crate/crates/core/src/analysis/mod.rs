//! Local truncation errors, their leading polynomials in `z = eps^2`, optimal
//! shape parameters and the sweep/convergence/comparison studies built on them.
//!
//! On the series path `tau0` is computed from moments: expanding every node
//! value around the reference point gives
//! `tau0 = sum_a M_a(t) h^(|a| - p) c_a`, where `c_a` are the Taylor
//! coefficients of the test function and `M_a(t)` exact series combining the
//! weights with integer powers of the offsets. The low-order moments vanish
//! identically, so this avoids the cancellation of summing `O(h^-p)` terms.

mod csv;
mod roots;
mod study;
mod templates;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{ToPrimitive, Zero};

pub use csv::{fmt_g17, write_compare_csv, write_convergence_csv, write_sweep_csv};
pub use roots::real_roots;
pub use study::{
    compare_kernels, convergence, flat_limit_report, sweep, sweep_argmin, CompareRow, ConvergenceRow, FlatCheck, Sweep,
    SweepRow,
};

use crate::error::{Error, Result};
use crate::formulas::{weights_numeric, AutoConfig, FormulaId, Route, SeriesWeightSet, WeightSet};
use crate::jets::{testfn_jet1, testfn_jet2, TestFunctionId};
use crate::kernels::{KernelKind, Offset};
use crate::series::{horner, rational, Rational, TruncatedSeries};

pub type Point = [f64; 2];

fn check_arity(id: FormulaId, f: TestFunctionId) -> Result<()> {
    if id.dim() != f.dim() {
        return Err(Error::ArityMismatch(f.name().into(), id.dim()));
    }
    Ok(())
}

/// `(u, Lu)` at a point for the operator of `id`.
fn value_and_operator(id: FormulaId, f: TestFunctionId, x: Point) -> Result<(f64, f64)> {
    let p = id.operator().order() as usize;
    if id.dim() == 1 {
        let j = testfn_jet1(f, x[0], p)?;
        Ok((j.derivative(0)?, j.derivative(p)?))
    } else {
        let j = testfn_jet2(f, x[0], x[1], 2)?;
        Ok((j.derivative(0, 0)?, j.derivative(2, 0)? + j.derivative(0, 2)?))
    }
}

/// Exact operator value at `point` (first or second derivative, or Laplacian).
pub fn exact_operator(id: FormulaId, f: TestFunctionId, point: Point) -> Result<f64> {
    check_arity(id, f)?;
    Ok(value_and_operator(id, f, point)?.1)
}

/// `sum alpha u(node) + sum beta (Lu)(node)` with `u` and `Lu` supplied by
/// `field`; weights are taken as nondimensional and scaled by `h`.
pub fn apply_formula_with(w: &WeightSet, point: Point, h: f64, field: impl Fn(Point) -> (f64, f64)) -> f64 {
    let p = w.formula.operator().order() as i32;
    let at = |o: Offset| [point[0] + o[0] as f64 * h, point[1] + o[1] as f64 * h];
    let a: f64 = w.alpha.iter().map(|&(o, v)| v * field(at(o)).0).sum();
    let b: f64 = w.beta.iter().map(|&(o, v)| v * field(at(o)).1).sum();
    a / h.powi(p) + b
}

pub fn apply_formula(w: &WeightSet, f: TestFunctionId, point: Point, h: f64) -> Result<f64> {
    check_arity(w.formula, f)?;
    let id = w.formula;
    let nodes: Vec<Offset> = w.alpha.iter().chain(&w.beta).map(|(o, _)| *o).collect();
    let mut vals = HashMap::new();
    for o in nodes {
        let x = [point[0] + o[0] as f64 * h, point[1] + o[1] as f64 * h];
        vals.insert(o, value_and_operator(id, f, x)?);
    }
    let p = id.operator().order() as i32;
    let a: f64 = w.alpha.iter().map(|(o, v)| v * vals[o].0).sum();
    let b: f64 = w.beta.iter().map(|(o, v)| v * vals[o].1).sum();
    Ok(a / h.powi(p) + b)
}

/// Taylor order of the moment expansion.
fn taylor_order(id: FormulaId) -> usize {
    let m = id.order() as usize;
    let p = id.operator().order() as usize;
    if id.dim() == 1 {
        m + p + 20
    } else {
        m + p + 16
    }
}

/// Exact moment series `M_a(t)` keyed by the multi-index `a`, for `|a| <= K`.
struct Moments {
    entries: Vec<((usize, usize), TruncatedSeries)>,
    as_f64: Vec<((usize, usize), Vec<f64>)>,
}

fn ipow(x: i32, k: usize) -> Rational {
    rational((x as i64).pow(k as u32), 1)
}

fn build_moments(w: &SeriesWeightSet, order: usize) -> Moments {
    let id = w.formula;
    let p = id.operator().order() as usize;
    let n = w.trunc_len;
    let mut entries = vec![];
    let idx: Vec<(usize, usize)> = if id.dim() == 1 {
        (0..=order).map(|a| (a, 0)).collect()
    } else {
        (0..=order).flat_map(|d| (0..=d).map(move |b| (d - b, b))).collect()
    };
    for (a, b) in idx {
        let mut acc = TruncatedSeries::zero(n);
        for (o, s) in &w.alpha {
            let k = ipow(o[0], a) * ipow(o[1], b);
            if !k.is_zero() {
                acc = &acc + &s.scale(&k);
            }
        }
        for (o, s) in &w.beta {
            let mut k = Rational::zero();
            if id.dim() == 1 {
                if a >= p {
                    let fall: i64 = (a - p + 1..=a).map(|v| v as i64).product();
                    k += ipow(o[0], a - p) * rational(fall, 1);
                }
            } else {
                if a >= 2 {
                    k += ipow(o[0], a - 2) * ipow(o[1], b) * rational((a * (a - 1)) as i64, 1);
                }
                if b >= 2 {
                    k += ipow(o[0], a) * ipow(o[1], b - 2) * rational((b * (b - 1)) as i64, 1);
                }
            }
            if !k.is_zero() {
                acc = &acc + &s.scale(&k);
            }
        }
        let exact_term = if id.dim() == 1 {
            if a == p {
                (1..=p).map(|v| v as i64).product::<i64>()
            } else {
                0
            }
        } else if (a, b) == (2, 0) || (a, b) == (0, 2) {
            2
        } else {
            0
        };
        if exact_term != 0 {
            acc = &acc - &TruncatedSeries::constant(rational(exact_term, 1), n);
        }
        if !acc.is_zero() {
            entries.push(((a, b), acc));
        }
    }
    let as_f64 = entries.iter().map(|(k, s)| (*k, s.to_f64())).collect();
    Moments { entries, as_f64 }
}

type MomentKey = (FormulaId, KernelKind, usize);

fn moments(id: FormulaId, kernel: KernelKind, n: usize) -> Result<Arc<Moments>> {
    static CACHE: OnceLock<Mutex<HashMap<MomentKey, Arc<Moments>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().unwrap().get(&(id, kernel, n)) {
        return Ok(m.clone());
    }
    let w = crate::formulas::weights_series_shared(id, kernel, n)?;
    let m = Arc::new(build_moments(&w, taylor_order(id)));
    cache.lock().unwrap().insert((id, kernel, n), m.clone());
    Ok(m)
}

/// Taylor coefficients `c_a` of the test function at the reference point.
fn taylor_coeffs(id: FormulaId, f: TestFunctionId, point: Point, order: usize) -> Result<HashMap<(usize, usize), f64>> {
    let mut out = HashMap::new();
    if id.dim() == 1 {
        let j = testfn_jet1(f, point[0], order)?;
        for (a, &c) in j.coeffs().iter().enumerate() {
            out.insert((a, 0), c);
        }
    } else {
        let j = testfn_jet2(f, point[0], point[1], order)?;
        for d in 0..=order {
            for b in 0..=d {
                out.insert((d - b, b), j.coeff(d - b, b));
            }
        }
    }
    Ok(out)
}

/// Truncation error evaluator for one formula, kernel, test function and
/// reference point, reusable across `(eps, h)`.
pub struct LteEvaluator {
    id: FormulaId,
    kernel: KernelKind,
    f: TestFunctionId,
    point: Point,
    cfg: AutoConfig,
    /// `(|a| - p, M_a coefficients times c_a)`.
    terms: Vec<(i32, Vec<f64>)>,
}

impl LteEvaluator {
    pub fn new(id: FormulaId, kernel: KernelKind, f: TestFunctionId, point: Point, cfg: &AutoConfig) -> Result<Self> {
        check_arity(id, f)?;
        let mom = moments(id, kernel, cfg.trunc_len)?;
        let c = taylor_coeffs(id, f, point, taylor_order(id))?;
        let p = id.operator().order() as i32;
        let terms = mom
            .as_f64
            .iter()
            .map(|((a, b), m)| ((a + b) as i32 - p, m.iter().map(|x| x * c[&(*a, *b)]).collect()))
            .collect();
        Ok(LteEvaluator { id, kernel, f, point, cfg: cfg.clone(), terms })
    }

    /// Signed `tau0` and the route used to obtain it.
    pub fn tau0(&self, eps: f64, h: f64) -> Result<(f64, Route)> {
        if !(h > 0.0 && h.is_finite()) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!("need finite eps and h > 0 (eps = {eps}, h = {h})")));
        }
        let t = (eps * h) * (eps * h);
        if t <= self.cfg.t_switch(self.id, self.kernel) {
            let tau = self.terms.iter().map(|(e, m)| h.powi(*e) * horner(m, t)).sum();
            Ok((tau, Route::Series))
        } else {
            let w = weights_numeric(self.id, self.kernel, eps, h)?;
            let approx = apply_formula(&w, self.f, self.point, h)?;
            Ok((approx - exact_operator(self.id, self.f, self.point)?, Route::Numeric))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LteResult {
    pub tau0: f64,
    pub formula: FormulaId,
    pub testfn: TestFunctionId,
    pub point: Point,
    pub eps: f64,
    pub h: f64,
    pub kernel: KernelKind,
    pub route: Route,
}

pub fn lte_numeric(id: FormulaId, kernel: KernelKind, f: TestFunctionId, point: Point, eps: f64, h: f64) -> Result<LteResult> {
    lte_numeric_with(id, kernel, f, point, eps, h, &AutoConfig::default())
}

pub fn lte_numeric_with(
    id: FormulaId,
    kernel: KernelKind,
    f: TestFunctionId,
    point: Point,
    eps: f64,
    h: f64,
    cfg: &AutoConfig,
) -> Result<LteResult> {
    let (tau0, route) = LteEvaluator::new(id, kernel, f, point, cfg)?.tau0(eps, h)?;
    Ok(LteResult { tau0, formula: id, testfn: f, point, eps, h, kernel, route })
}

/// Leading error polynomial: `tau0 = h^m P(z) + O(h^(m+2))`, `z = eps^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct LtePoly {
    pub formula: FormulaId,
    pub h_order: u32,
    /// `a_0 .. a_n`, ascending powers of `z`.
    pub coeffs: Vec<f64>,
}

impl LtePoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: f64) -> f64 {
        horner(&self.coeffs, z)
    }
}

/// Polynomial from the closed-form error rows, derivatives from jets.
pub fn lte_poly_template(id: FormulaId, f: TestFunctionId, point: Point) -> Result<LtePoly> {
    check_arity(id, f)?;
    let t = templates::template(id);
    let m = id.order();
    let need = (m + id.operator().order()) as usize;
    let deriv: Box<dyn Fn(usize, usize) -> Result<f64>> = if id.dim() == 1 {
        let j = testfn_jet1(f, point[0], need)?;
        Box::new(move |a, _| j.derivative(a))
    } else {
        let j = testfn_jet2(f, point[0], point[1], need)?;
        Box::new(move |a, b| j.derivative(a, b))
    };
    let scale = t.prefactor.0 as f64 / t.prefactor.1 as f64;
    let degree = t.terms.iter().map(|term| term.0).max().unwrap_or(0);
    let mut coeffs = vec![0.0; degree + 1];
    for &(k, c, idx) in t.terms {
        let mut d = 0.0;
        for &(a, b) in idx {
            d += deriv(a, b)?;
        }
        coeffs[k] += scale * c as f64 * d;
    }
    Ok(LtePoly { formula: id, h_order: m, coeffs })
}

/// Polynomial collected from the exact moment series: `a_k` gathers every
/// `t^k` coefficient of `M_a` with `|a| - p + 2k = m`.
pub fn lte_poly_derived(id: FormulaId, kernel: KernelKind, f: TestFunctionId, point: Point, n: usize) -> Result<LtePoly> {
    check_arity(id, f)?;
    let m = id.order() as i64;
    let p = id.operator().order() as i64;
    let wanted = ((m + p) / 2 + 1) as usize;
    if n < wanted {
        return Err(Error::PrecisionExhausted { got: n, wanted });
    }
    let mom = moments(id, kernel, n)?;
    let c = taylor_coeffs(id, f, point, taylor_order(id))?;
    let mut coeffs = vec![0.0; (m / 2 + 1) as usize];
    for ((a, b), s) in &mom.entries {
        for (k, ck) in s.coeffs().iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let power = (a + b) as i64 - p + 2 * k as i64;
            debug_assert!(power >= m, "{id}: moment {a},{b} contributes below h^{m}");
            if power == m {
                if k >= coeffs.len() {
                    coeffs.resize(k + 1, 0.0);
                }
                coeffs[k] += ck.to_f64().unwrap_or(f64::NAN) * c[&(*a, *b)];
            }
        }
    }
    Ok(LtePoly { formula: id, h_order: m as u32, coeffs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mechanism {
    PolynomialRoot,
    DerivativeMinimum,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimalEpsResult {
    pub eps_star: f64,
    pub z_c: f64,
    pub mechanism: Mechanism,
    /// Every real root of the polynomial, ascending.
    pub candidates: Vec<f64>,
}

/// Smallest positive root of `P`; failing that, the positive critical point
/// of `P` with the smallest `|P|`.
pub fn optimal_eps(p: &LtePoly) -> Result<OptimalEpsResult> {
    if p.coeffs.iter().all(|&a| a == 0.0) {
        return Err(Error::InvalidArgument("truncation-error polynomial is identically zero".into()));
    }
    let candidates = real_roots(&p.coeffs);
    if let Some(&z) = candidates.iter().find(|&&z| z > 0.0) {
        return Ok(OptimalEpsResult { eps_star: z.sqrt(), z_c: z, mechanism: Mechanism::PolynomialRoot, candidates });
    }
    let crit = real_roots(&roots::derivative(&p.coeffs));
    let best = crit
        .into_iter()
        .filter(|&z| z > 0.0)
        .min_by(|a, b| p.eval(*a).abs().partial_cmp(&p.eval(*b).abs()).unwrap())
        .ok_or(Error::NoOptimalEps)?;
    Ok(OptimalEpsResult { eps_star: best.sqrt(), z_c: best, mechanism: Mechanism::DerivativeMinimum, candidates })
}
