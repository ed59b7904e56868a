//! Compact RBF-FD formulas: stencil catalog, collocation systems and their
//! weights in exact series, double-double numeric and flat-limit form.
//!
//! The unknowns are one weight per symmetry class of `S`, one per class of
//! `mu`, then the constant multiplier. Row `i` asks the formula to be exact on
//! the kernel centred at node functional `i`. Weights are stored
//! nondimensionally: `alpha * h^p`, `beta`, `gamma * h^p` where `p` is the
//! operator order.

mod catalog;
mod dense;
mod reference;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

pub use catalog::{catalog, FormulaId, StencilSpec, SymClass};
pub use reference::reference_flat;

use crate::dd::{Dd, Real};
use crate::error::{Error, Result};
use crate::kernels::{block_entry_nondim, block_entry_series, BlockRole, KernelKind, Offset, OperatorKind};
use crate::series::{format_rational, parse_rational, rational, solve_laurent, Laurent, Rational, TruncatedSeries};

pub const DEFAULT_TRUNC: usize = 14;

/// Condition numbers above this leave fewer than about eight correct digits
/// in double-double.
pub const COND_LIMIT: f64 = 1e24;

enum Cell {
    Block(BlockRole, Vec<(Offset, i32)>),
    Const(i64),
}

struct Layout {
    a: Vec<Vec<Cell>>,
    b: Vec<Cell>,
}

fn diff(a: Offset, b: Offset) -> Offset {
    [a[0] - b[0], a[1] - b[1]]
}

fn layout(spec: &StencilSpec) -> Layout {
    let cols: Vec<(&SymClass, bool)> =
        spec.s_classes.iter().map(|c| (c, false)).chain(spec.mu_classes.iter().map(|c| (c, true))).collect();
    let mut a = vec![];
    let mut b = vec![];
    for &(row_class, row_op) in &cols {
        let c = row_class.representative();
        let mut row: Vec<Cell> = cols
            .iter()
            .map(|&(cls, col_op)| {
                let terms = cls.members.iter().map(|&(x, sign)| (diff(x, c), sign)).collect();
                Cell::Block(BlockRole::from_sides(col_op, row_op), terms)
            })
            .collect();
        row.push(Cell::Const(if row_op { 0 } else { 1 }));
        a.push(row);
        b.push(Cell::Block(BlockRole::from_sides(true, row_op), vec![(diff([0, 0], c), 1)]));
    }
    let mut poly: Vec<Cell> = spec.s_classes.iter().map(|c| Cell::Const(c.sign_sum())).collect();
    poly.extend(spec.mu_classes.iter().map(|_| Cell::Const(0)));
    poly.push(Cell::Const(0));
    a.push(poly);
    b.push(Cell::Const(0));
    Layout { a, b }
}

fn cell_value<R: Real>(cell: &Cell, kind: KernelKind, op: OperatorKind, t: R) -> R {
    match cell {
        Cell::Const(k) => R::from(*k as f64),
        Cell::Block(role, terms) => terms.iter().fold(R::from(0.0), |acc, &(d, sign)| {
            let e = block_entry_nondim(kind, *role, op, d, t);
            if sign < 0 {
                acc - e
            } else {
                acc + e
            }
        }),
    }
}

fn cell_h_power(cell: &Cell, op: OperatorKind) -> i32 {
    match cell {
        Cell::Const(_) => 0,
        Cell::Block(role, terms) => {
            block_entry_series(KernelKind::Gaussian, *role, op, terms[0].0, 1).0 as i32
        }
    }
}

fn cell_series(cell: &Cell, kind: KernelKind, op: OperatorKind, n: usize) -> TruncatedSeries {
    match cell {
        Cell::Const(k) => TruncatedSeries::constant(rational(*k, 1), n),
        Cell::Block(role, terms) => terms.iter().fold(TruncatedSeries::zero(n), |acc, &(d, sign)| {
            let (_, s) = block_entry_series(kind, *role, op, d, n);
            if sign < 0 {
                &acc - &s
            } else {
                &acc + &s
            }
        }),
    }
}

/// Dimensional symmetry-reduced system `(A, b)`.
pub fn assemble_numeric(id: FormulaId, kernel: KernelKind, eps: f64, h: f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let spec = catalog(id);
    let op = spec.operator;
    let lay = layout(&spec);
    let t = (eps * h) * (eps * h);
    let dim = |c: &Cell| cell_value(c, kernel, op, t) * h.powi(-cell_h_power(c, op));
    (lay.a.iter().map(|r| r.iter().map(dim).collect()).collect(), lay.b.iter().map(dim).collect())
}

/// Nondimensional system over truncated series of length `n`.
pub fn assemble_series(id: FormulaId, kernel: KernelKind, n: usize) -> (Vec<Vec<TruncatedSeries>>, Vec<TruncatedSeries>) {
    let spec = catalog(id);
    let op = spec.operator;
    let lay = layout(&spec);
    let ser = |c: &Cell| cell_series(c, kernel, op, n);
    (lay.a.iter().map(|r| r.iter().map(ser).collect()).collect(), lay.b.iter().map(ser).collect())
}

fn expand<T: Clone>(classes: &[SymClass], vals: &[T], neg: impl Fn(&T) -> T) -> Vec<(Offset, T)> {
    let mut out = vec![];
    for (cls, v) in classes.iter().zip(vals) {
        for &(x, sign) in &cls.members {
            out.push((x, if sign < 0 { neg(v) } else { v.clone() }));
        }
    }
    out.sort_by_key(|a| a.0);
    out
}

fn lookup<T>(v: &[(Offset, T)], o: Offset) -> Option<&T> {
    v.iter().find(|(k, _)| *k == o).map(|(_, x)| x)
}

fn offset_json(o: Offset, dim: usize) -> Value {
    if dim == 1 {
        json!([o[0]])
    } else {
        json!([o[0], o[1]])
    }
}

fn offset_from_json(v: &Value) -> Result<Offset> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("offset must be an array".into()))?;
    let get = |i: usize| arr.get(i).and_then(Value::as_i64).map(|x| x as i32);
    match arr.len() {
        1 => Ok([get(0).unwrap_or_default(), 0]),
        2 => Ok([get(0).unwrap_or_default(), get(1).unwrap_or_default()]),
        _ => Err(Error::Parse("offset must have one or two entries".into())),
    }
}

/// `alpha[-2]` in 1D, `alpha[1,0]` in 2D.
pub fn node_label(name: &str, o: Offset, dim: usize) -> String {
    if dim == 1 {
        format!("{name}[{}]", o[0])
    } else {
        format!("{name}[{},{}]", o[0], o[1])
    }
}

fn h_prefix(p: u32) -> &'static str {
    match p {
        0 => "",
        1 => "h*",
        _ => "h^2*",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Series,
    Numeric,
    Flat,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Warning {
    IllConditioned { cond: f64 },
}

/// Floating-point weights at one `(eps, h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSet {
    pub formula: FormulaId,
    pub kernel: KernelKind,
    pub eps: f64,
    pub h: f64,
    pub alpha: Vec<(Offset, f64)>,
    pub beta: Vec<(Offset, f64)>,
    pub gamma: f64,
    pub route: Route,
    pub cond: Option<f64>,
    pub warning: Option<Warning>,
}

impl WeightSet {
    pub fn alpha_at(&self, o: Offset) -> Option<f64> {
        lookup(&self.alpha, o).copied()
    }

    pub fn beta_at(&self, o: Offset) -> Option<f64> {
        lookup(&self.beta, o).copied()
    }

    /// Dimensional weight `alpha / h^p`.
    pub fn true_alpha(&self, o: Offset) -> Option<f64> {
        self.alpha_at(o).map(|a| a / self.h.powi(self.formula.operator().order() as i32))
    }

    pub fn to_json(&self) -> Value {
        let dim = self.formula.dim();
        let nodes = |v: &[(Offset, f64)]| -> Vec<Value> {
            v.iter().map(|&(o, x)| json!({"offset": offset_json(o, dim), "value": x})).collect()
        };
        json!({
            "formula": self.formula.name(),
            "kernel": self.kernel.tag(),
            "eps": self.eps,
            "h": self.h,
            "route": format!("{:?}", self.route).to_lowercase(),
            "alpha": nodes(&self.alpha),
            "beta": nodes(&self.beta),
            "gamma": self.gamma,
            "cond": self.cond,
            "warning": self.warning.map(|Warning::IllConditioned { cond }| format!("ill-conditioned (cond ~ {cond:.3e})")),
        })
    }
}

/// Exact series weights in `t = (eps*h)^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesWeightSet {
    pub formula: FormulaId,
    pub kernel: KernelKind,
    pub trunc_len: usize,
    pub alpha: Vec<(Offset, TruncatedSeries)>,
    pub beta: Vec<(Offset, TruncatedSeries)>,
    pub gamma: TruncatedSeries,
}

impl SeriesWeightSet {
    pub fn alpha_at(&self, o: Offset) -> Option<&TruncatedSeries> {
        lookup(&self.alpha, o)
    }

    pub fn beta_at(&self, o: Offset) -> Option<&TruncatedSeries> {
        lookup(&self.beta, o)
    }

    pub fn eval(&self, eps: f64, h: f64) -> WeightSet {
        let t = (eps * h) * (eps * h);
        let ev = |v: &[(Offset, TruncatedSeries)]| v.iter().map(|(o, s)| (*o, s.eval(t))).collect();
        WeightSet {
            formula: self.formula,
            kernel: self.kernel,
            eps,
            h,
            alpha: ev(&self.alpha),
            beta: ev(&self.beta),
            gamma: self.gamma.eval(t),
            route: Route::Series,
            cond: None,
            warning: None,
        }
    }

    /// Flat-limit (constant-term) weights.
    pub fn flat(&self) -> FlatWeights {
        let c = |v: &[(Offset, TruncatedSeries)]| v.iter().map(|(o, s)| (*o, s.coeff(0).clone())).collect();
        FlatWeights { formula: self.formula, alpha: c(&self.alpha), beta: c(&self.beta), gamma: self.gamma.coeff(0).clone() }
    }

    /// One line per weight, e.g. `h*alpha[-2] = -1/36 - 1/9 t`.
    pub fn describe(&self, terms: usize) -> Vec<String> {
        let dim = self.formula.dim();
        let pre = h_prefix(self.formula.operator().order());
        let mut lines = vec![];
        for (o, s) in &self.alpha {
            lines.push(format!("{pre}{} = {}", node_label("alpha", *o, dim), s.display_terms(terms)));
        }
        for (o, s) in &self.beta {
            lines.push(format!("{} = {}", node_label("beta", *o, dim), s.display_terms(terms)));
        }
        lines.push(format!("{pre}gamma = {}", self.gamma.display_terms(terms)));
        lines
    }

    pub fn to_json(&self) -> Value {
        let dim = self.formula.dim();
        let coeffs = |s: &TruncatedSeries| -> Vec<String> { s.coeffs().iter().map(format_rational).collect() };
        let nodes = |v: &[(Offset, TruncatedSeries)]| -> Vec<Value> {
            v.iter().map(|(o, s)| json!({"offset": offset_json(*o, dim), "coeffs": coeffs(s)})).collect()
        };
        json!({
            "formula": self.formula.name(),
            "kernel": self.kernel.tag(),
            "trunc_len": self.trunc_len,
            "alpha": nodes(&self.alpha),
            "beta": nodes(&self.beta),
            "gamma": coeffs(&self.gamma),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("series weight set: missing or invalid {what}"));
        let series = |v: &Value| -> Result<TruncatedSeries> {
            let arr = v.as_array().ok_or_else(|| bad("coeffs"))?;
            let c = arr
                .iter()
                .map(|x| x.as_str().ok_or_else(|| bad("coefficient")).and_then(parse_rational))
                .collect::<Result<Vec<_>>>()?;
            if c.is_empty() {
                return Err(bad("coeffs"));
            }
            Ok(TruncatedSeries::from_coeffs(c))
        };
        let nodes = |key: &str| -> Result<Vec<(Offset, TruncatedSeries)>> {
            v[key]
                .as_array()
                .ok_or_else(|| bad(key))?
                .iter()
                .map(|n| Ok((offset_from_json(&n["offset"])?, series(&n["coeffs"])?)))
                .collect()
        };
        let formula: FormulaId = v["formula"].as_str().ok_or_else(|| bad("formula"))?.parse()?;
        let kernel = match v["kernel"].as_str() {
            Some("ga") => KernelKind::Gaussian,
            Some("mq") => KernelKind::Multiquadric,
            _ => return Err(bad("kernel")),
        };
        let trunc_len = v["trunc_len"].as_u64().ok_or_else(|| bad("trunc_len"))? as usize;
        Ok(SeriesWeightSet { formula, kernel, trunc_len, alpha: nodes("alpha")?, beta: nodes("beta")?, gamma: series(&v["gamma"])? })
    }
}

/// Exact flat-limit weights (nondimensional).
#[derive(Clone, Debug, PartialEq)]
pub struct FlatWeights {
    pub formula: FormulaId,
    pub alpha: Vec<(Offset, Rational)>,
    pub beta: Vec<(Offset, Rational)>,
    pub gamma: Rational,
}

impl FlatWeights {
    pub fn to_weight_set(&self, h: f64) -> WeightSet {
        let f = |v: &[(Offset, Rational)]| v.iter().map(|(o, r)| (*o, r.to_f64().unwrap_or(f64::NAN))).collect();
        WeightSet {
            formula: self.formula,
            kernel: KernelKind::Gaussian,
            eps: 0.0,
            h,
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            gamma: self.gamma.to_f64().unwrap_or(f64::NAN),
            route: Route::Flat,
            cond: None,
            warning: None,
        }
    }

    /// Exact comparison with the classical compact-FD table.
    pub fn check_reference(&self) -> Result<()> {
        let (ra, rb) = reference_flat(self.formula);
        let dim = self.formula.dim();
        let pre = h_prefix(self.formula.operator().order());
        for (name, got, want) in [("alpha", &self.alpha, &ra), ("beta", &self.beta, &rb)] {
            let mut keys: Vec<Offset> = got.iter().chain(want.iter()).map(|(o, _)| *o).collect();
            keys.sort();
            keys.dedup();
            for o in keys {
                let g = lookup(got, o);
                let w = lookup(want, o);
                let zero = Rational::zero();
                // Absent nodes carry zero weight (the D1 centre, for instance).
                if g.unwrap_or(&zero) != w.unwrap_or(&zero) {
                    let show = |x: Option<&Rational>| x.map_or("absent".to_string(), format_rational);
                    return Err(Error::FlatLimitMismatch {
                        formula: self.formula,
                        entry: format!("{}{}", if name == "alpha" { pre } else { "" }, node_label(name, o, dim)),
                        got: show(g),
                        expected: show(w),
                    });
                }
            }
        }
        Ok(())
    }
}

type SeriesKey = (FormulaId, KernelKind, usize);

fn series_cache() -> &'static Mutex<HashMap<SeriesKey, Arc<SeriesWeightSet>>> {
    static CACHE: OnceLock<Mutex<HashMap<SeriesKey, Arc<SeriesWeightSet>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Exact series weights with `n` retained powers of `t`.
///
/// The symmetry-reduced system is solved over Laurent series with tracked
/// precision; the working length grows until every weight is known to `n`
/// terms. Results are cached per `(formula, kernel, n)`.
pub fn weights_series(id: FormulaId, kernel: KernelKind, n: usize) -> Result<SeriesWeightSet> {
    weights_series_shared(id, kernel, n).map(|s| (*s).clone())
}

pub(crate) fn weights_series_shared(id: FormulaId, kernel: KernelKind, n: usize) -> Result<Arc<SeriesWeightSet>> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation length must be positive".into()));
    }
    let key = (id, kernel, n);
    if let Some(hit) = series_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let set = Arc::new(solve_series(id, kernel, n)?);
    series_cache().lock().unwrap().insert(key, set.clone());
    Ok(set)
}

fn solve_series(id: FormulaId, kernel: KernelKind, n: usize) -> Result<SeriesWeightSet> {
    let spec = catalog(id);
    let op = spec.operator;
    let lay = layout(&spec);
    let mut work = n + 12;
    let mut best = 0;
    for _ in 0..8 {
        let lift = |c: &Cell| Laurent::from_series(&cell_series(c, kernel, op, work));
        let a: Vec<Vec<Laurent>> = lay.a.iter().map(|r| r.iter().map(lift).collect()).collect();
        let b: Vec<Laurent> = lay.b.iter().map(lift).collect();
        let x = match solve_laurent(&a, &b) {
            Ok(x) => x,
            Err(Error::PrecisionExhausted { .. }) => {
                work *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        if x.iter().any(|v| v.val() < 0 && !v.is_unknown_zero()) {
            return Err(Error::FlatLimitSingular);
        }
        let got = x.iter().map(Laurent::prec).min().unwrap_or(0).max(0) as usize;
        best = best.max(got.min(n));
        if got < n {
            work += n - got + 4;
            continue;
        }
        let vals: Vec<TruncatedSeries> = x.iter().map(|v| v.to_series(n).expect("precision checked")).collect();
        let ns = spec.s_classes.len();
        let nm = spec.mu_classes.len();
        let neg = |s: &TruncatedSeries| -s;
        return Ok(SeriesWeightSet {
            formula: id,
            kernel,
            trunc_len: n,
            alpha: expand(&spec.s_classes, &vals[..ns], neg),
            beta: expand(&spec.mu_classes, &vals[ns..ns + nm], neg),
            gamma: vals[ns + nm].clone(),
        });
    }
    Err(Error::PrecisionExhausted { got: best, wanted: n })
}

/// Weights from a double-double solve of the collocation system.
pub fn weights_numeric(id: FormulaId, kernel: KernelKind, eps: f64, h: f64) -> Result<WeightSet> {
    if !(h > 0.0 && h.is_finite()) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite eps and h > 0 (eps = {eps}, h = {h})")));
    }
    if eps == 0.0 {
        return Err(Error::SingularAtFlatLimit);
    }
    let spec = catalog(id);
    let op = spec.operator;
    let lay = layout(&spec);
    let e = Dd::new(eps) * Dd::new(h);
    let t = e * e;
    let a: Vec<Vec<Dd>> = lay.a.iter().map(|r| r.iter().map(|c| cell_value(c, kernel, op, t)).collect()).collect();
    let b: Vec<Dd> = lay.b.iter().map(|c| cell_value(c, kernel, op, t)).collect();
    let (x, cond) = dense::solve_refined(&a, &b)?;
    let x: Vec<f64> = x.into_iter().map(Dd::to_f64).collect();
    let ns = spec.s_classes.len();
    let nm = spec.mu_classes.len();
    let neg = |v: &f64| -v;
    Ok(WeightSet {
        formula: id,
        kernel,
        eps,
        h,
        alpha: expand(&spec.s_classes, &x[..ns], neg),
        beta: expand(&spec.mu_classes, &x[ns..ns + nm], neg),
        gamma: x[ns + nm],
        route: Route::Numeric,
        cond: Some(cond),
        warning: (cond > COND_LIMIT).then_some(Warning::IllConditioned { cond }),
    })
}

/// Flat-limit weights, checked against the compact finite-difference table.
pub fn weights_flat(id: FormulaId) -> Result<FlatWeights> {
    let flat = weights_series_shared(id, KernelKind::Gaussian, 2)?.flat();
    flat.check_reference()?;
    Ok(flat)
}

/// Series/numeric routing for [`weights_auto_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct AutoConfig {
    pub trunc_len: usize,
    /// Largest `t` evaluated from the Gaussian series.
    pub gaussian_t_switch: f64,
    /// Multiquadric series converge for `t < 1/k` with `k` the largest squared
    /// node distance; the switch sits at this fraction of that radius.
    pub mq_radius_fraction: f64,
}

impl Default for AutoConfig {
    fn default() -> Self {
        AutoConfig { trunc_len: DEFAULT_TRUNC, gaussian_t_switch: 0.1, mq_radius_fraction: 0.1 }
    }
}

impl AutoConfig {
    pub fn t_switch(&self, id: FormulaId, kernel: KernelKind) -> f64 {
        match kernel {
            KernelKind::Gaussian => self.gaussian_t_switch,
            KernelKind::Multiquadric => self.mq_radius_fraction / catalog(id).max_sq_distance() as f64,
        }
    }
}

pub fn weights_auto(id: FormulaId, kernel: KernelKind, eps: f64, h: f64) -> Result<WeightSet> {
    weights_auto_with(id, kernel, eps, h, &AutoConfig::default())
}

pub fn weights_auto_with(id: FormulaId, kernel: KernelKind, eps: f64, h: f64, cfg: &AutoConfig) -> Result<WeightSet> {
    if !(h > 0.0 && h.is_finite()) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite eps and h > 0 (eps = {eps}, h = {h})")));
    }
    let t = (eps * h) * (eps * h);
    if t <= cfg.t_switch(id, kernel) {
        Ok(weights_series_shared(id, kernel, cfg.trunc_len)?.eval(eps, h))
    } else {
        weights_numeric(id, kernel, eps, h)
    }
}
