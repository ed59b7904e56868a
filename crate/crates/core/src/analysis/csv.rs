use std::io::{self, Write};

use super::{CompareRow, ConvergenceRow, Sweep};
use crate::formulas::FormulaId;
use crate::jets::TestFunctionId;
use crate::kernels::KernelKind;

/// Shortest form of `%.17g`: 17 significant digits, trailing zeros removed,
/// positional for exponents in `-5..17`.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..17).contains(&exp) {
        trim(format!("{:.*}", (16 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant.to_string()), exp.abs())
    }
}

pub fn write_sweep_csv(w: &mut impl Write, s: &Sweep) -> io::Result<()> {
    writeln!(w, "formula,kernel,testfn,x0,y0,eps,h,abs_tau0")?;
    for r in &s.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            s.formula,
            s.kernel,
            s.testfn,
            fmt_g17(s.point[0]),
            fmt_g17(s.point[1]),
            fmt_g17(r.eps),
            fmt_g17(r.h),
            fmt_g17(r.tau0.abs())
        )?;
    }
    Ok(())
}

pub fn write_convergence_csv(
    w: &mut impl Write,
    id: FormulaId,
    kernel: KernelKind,
    f: TestFunctionId,
    eps: f64,
    rows: &[ConvergenceRow],
) -> io::Result<()> {
    writeln!(w, "formula,kernel,testfn,eps,h,abs_tau0,observed_order")?;
    for r in rows {
        let order = r.observed_order.map(fmt_g17).unwrap_or_default();
        writeln!(w, "{id},{kernel},{f},{},{},{},{order}", fmt_g17(eps), fmt_g17(r.h), fmt_g17(r.tau0.abs()))?;
    }
    Ok(())
}

pub fn write_compare_csv(w: &mut impl Write, id: FormulaId, f: TestFunctionId, rows: &[CompareRow]) -> io::Result<()> {
    writeln!(w, "formula,testfn,eps,h,abs_tau0_ga,abs_tau0_mq,abs_tau0_fd")?;
    for r in rows {
        writeln!(
            w,
            "{id},{f},{},{},{},{},{}",
            fmt_g17(r.eps),
            fmt_g17(r.h),
            fmt_g17(r.abs_ga),
            fmt_g17(r.abs_mq),
            fmt_g17(r.abs_fd)
        )?;
    }
    Ok(())
}
