use rayon::prelude::*;

use super::{LteEvaluator, Point};
use crate::error::{Error, Result};
use crate::formulas::{weights_flat, AutoConfig, FormulaId};
use crate::jets::TestFunctionId;
use crate::kernels::KernelKind;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub eps: f64,
    pub h: f64,
    /// Signed truncation error.
    pub tau0: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub formula: FormulaId,
    pub kernel: KernelKind,
    pub testfn: TestFunctionId,
    pub point: Point,
    pub rows: Vec<SweepRow>,
    /// Grid points whose evaluation failed, with the reason.
    pub missing: Vec<(f64, f64, String)>,
}

/// `tau0` over `h_set x eps_grid`, rows ordered by `h` then `eps`.
pub fn sweep(
    id: FormulaId,
    kernel: KernelKind,
    f: TestFunctionId,
    point: Point,
    eps_grid: &[f64],
    h_set: &[f64],
    cfg: &AutoConfig,
) -> Result<Sweep> {
    if eps_grid.is_empty() || h_set.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".into()));
    }
    let ev = LteEvaluator::new(id, kernel, f, point, cfg)?;
    let grid: Vec<(f64, f64)> = h_set.iter().flat_map(|&h| eps_grid.iter().map(move |&e| (e, h))).collect();
    let results: Vec<Result<f64>> = grid.par_iter().map(|&(eps, h)| ev.tau0(eps, h).map(|r| r.0)).collect();
    let mut rows = vec![];
    let mut missing = vec![];
    for ((eps, h), r) in grid.into_iter().zip(results) {
        match r {
            Ok(tau0) => rows.push(SweepRow { eps, h, tau0 }),
            Err(e) => missing.push((eps, h, e.to_string())),
        }
    }
    Ok(Sweep { formula: id, kernel, testfn: f, point, rows, missing })
}

/// Location of the error minimum along `eps` at one `h`: inside the first
/// bracket where `tau0` changes sign, the endpoint with smaller `|tau0|`;
/// without a sign change, the global minimiser of `|tau0|`.
pub fn sweep_argmin(rows: &[SweepRow], h: f64) -> Option<f64> {
    let mut line: Vec<&SweepRow> = rows.iter().filter(|r| r.h == h && r.tau0.is_finite()).collect();
    line.sort_by(|a, b| a.eps.partial_cmp(&b.eps).unwrap());
    for w in line.windows(2) {
        if w[0].tau0 == 0.0 {
            return Some(w[0].eps);
        }
        if w[0].tau0.signum() != w[1].tau0.signum() {
            return Some(if w[0].tau0.abs() <= w[1].tau0.abs() { w[0].eps } else { w[1].eps });
        }
    }
    line.into_iter().min_by(|a, b| a.tau0.abs().partial_cmp(&b.tau0.abs()).unwrap()).map(|r| r.eps)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub tau0: f64,
    /// Order observed between the previous retained level and this one.
    pub observed_order: Option<f64>,
}

/// Observed orders under refinement of `h` at fixed `eps`. Levels with
/// `|tau0|` under `100 * f64::EPSILON` are dropped.
pub fn convergence(
    id: FormulaId,
    kernel: KernelKind,
    f: TestFunctionId,
    point: Point,
    eps: f64,
    hs: &[f64],
    cfg: &AutoConfig,
) -> Result<Vec<ConvergenceRow>> {
    if hs.len() < 4 {
        return Err(Error::InvalidArgument("convergence study needs at least four levels".into()));
    }
    let ev = LteEvaluator::new(id, kernel, f, point, cfg)?;
    let mut out: Vec<ConvergenceRow> = vec![];
    for &h in hs {
        let tau0 = ev.tau0(eps, h)?.0;
        if tau0.abs() < 100.0 * f64::EPSILON {
            continue;
        }
        let observed_order = out.last().map(|prev| (prev.tau0.abs() / tau0.abs()).ln() / (prev.h / h).ln());
        out.push(ConvergenceRow { h, tau0, observed_order });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareRow {
    pub eps: f64,
    pub h: f64,
    pub abs_ga: f64,
    pub abs_mq: f64,
    pub abs_fd: f64,
}

/// `|tau0|` for both kernels against the compact-FD baseline (the flat limit).
pub fn compare_kernels(
    id: FormulaId,
    f: TestFunctionId,
    point: Point,
    eps_grid: &[f64],
    h: f64,
    cfg: &AutoConfig,
) -> Result<Vec<CompareRow>> {
    if eps_grid.is_empty() {
        return Err(Error::InvalidArgument("empty sweep grid".into()));
    }
    let ga = LteEvaluator::new(id, KernelKind::Gaussian, f, point, cfg)?;
    let mq = LteEvaluator::new(id, KernelKind::Multiquadric, f, point, cfg)?;
    let fd = ga.tau0(0.0, h)?.0.abs();
    let rows: Vec<Option<CompareRow>> = eps_grid
        .par_iter()
        .map(|&eps| {
            let g = ga.tau0(eps, h).ok()?.0.abs();
            let m = mq.tau0(eps, h).ok()?.0.abs();
            Some(CompareRow { eps, h, abs_ga: g, abs_mq: m, abs_fd: fd })
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatCheck {
    pub formula: FormulaId,
    pub result: std::result::Result<(), Error>,
}

impl FlatCheck {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

pub fn flat_limit_report() -> Vec<FlatCheck> {
    FormulaId::ALL.iter().map(|&formula| FlatCheck { formula, result: weights_flat(formula).map(|_| ()) }).collect()
}
