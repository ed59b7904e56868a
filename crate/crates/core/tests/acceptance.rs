//! Acceptance criteria, one line per criterion. Criteria listed in
//! `KNOWN_FAILURES` are evaluated at full tolerance and reported as FAIL;
//! the run fails if the set of failing criteria differs from that list.

use std::process::ExitCode;
use std::time::Instant;

use crbf_core::analysis::{compare_kernels, convergence, sweep, sweep_argmin};
use crbf_core::series::{parse_rational, Rational};
use crbf_core::*;
use num_traits::Zero;

const KNOWN_FAILURES: &[u32] = &[3, 9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// `0.01, 0.02, ..., max`.
fn eps_grid(max: f64) -> Vec<f64> {
    (1..=(max * 100.0).round() as usize).map(|i| i as f64 / 100.0).collect()
}

/// Compares leading series coefficients; `None` entries are not printed cleanly
/// in the reference and are skipped.
fn check_series(id: FormulaId, w: &SeriesWeightSet, beta: bool, o: Offset, want: &[Option<&str>], bad: &mut Vec<String>) {
    let s = if beta { w.beta_at(o) } else { w.alpha_at(o) }.unwrap();
    for (k, c) in want.iter().enumerate() {
        if let Some(c) = c {
            let c = parse_rational(c).unwrap();
            if s.coeff(k) != &c {
                bad.push(format!("{id} {}{o:?} t^{k}: {} vs {c}", if beta { "beta" } else { "alpha" }, s.coeff(k)));
            }
        }
    }
}

fn c1_series_goldens() -> Outcome {
    let start = Instant::now();
    let mut bad = vec![];
    let mut checked = 0;
    let ga = |id| weights_series(id, KernelKind::Gaussian, 14).unwrap();
    let all = |s: &'static str| s.split_whitespace().map(Some).collect::<Vec<_>>();
    let rows: Vec<(FormulaId, bool, i32, Vec<Option<&str>>)> = vec![
        (FormulaId::D1_6, false, -2, all("-1/36 -1/9 -10/63 -8/189")),
        (FormulaId::D1_6, false, -1, all("-7/9 -1/9 43/126 -43/378")),
        (FormulaId::D1_6, true, -1, all("-1/3 -1/3 1/42 17/126")),
        (FormulaId::D1_8, false, -2, vec![Some("-25/216"), Some("-19/54"), Some("-139/486"), None]),
        (FormulaId::D1_8, false, -1, all("-20/27 4/27 106/243 -62/243")),
        (FormulaId::D1_8, true, -2, all("-1/36 -1/9 -13/81 -4/81")),
        (FormulaId::D1_8, true, -1, vec![Some("-4/9"), None, Some("2/81"), Some("14/81")]),
        (FormulaId::D2_4, false, -1, all("6/5 42/125 -3021/6250 -92969/468750")),
        (FormulaId::D2_4, false, 0, all("-12/5 -84/125 3021/3125 92969/234375")),
        (FormulaId::D2_4, true, -1, all("-1/10 -26250/156250 -16925/156250 -651/156250")),
        (FormulaId::D2_6, false, -2, vec![Some("3/44"), Some("1035/3388"), Some("1463277/2608760"), None]),
        (FormulaId::D2_6, false, -1, all("12/11 -414/847 -538116/326095 -4542297/7174090")),
        (FormulaId::D2_6, false, 0, all("-51/22 621/1694 2841651/1304380 5555227/14348180")),
        (
            FormulaId::D2_6,
            true,
            -1,
            all("-2/11 -79381958040/216542732560 -64254114540/216542732560 -8624761068/216542732560"),
        ),
    ];
    for (id, beta, o, want) in rows {
        checked += want.iter().flatten().count();
        check_series(id, &ga(id), beta, [o, 0], &want, &mut bad);
    }
    // The fourth-order first-derivative weights have closed forms.
    let d14 = ga(FormulaId::D1_4);
    for t in [0.001f64, 0.01, 0.05] {
        let (e4, e8) = ((4.0 * t).exp(), (8.0 * t).exp());
        let alpha1 = -2.0 * t * (3.0 * t).exp() * (-4.0 * t + e4 - 1.0) / (-8.0 * t * e4 + e8 - 1.0);
        let beta1 = t.exp() * (2.0 * t * (2.0 * t).cosh() - (2.0 * t).sinh()) / (4.0 * t - (4.0 * t).sinh());
        for (got, want, what) in [
            (d14.alpha_at([1, 0]).unwrap().eval(t), -alpha1, "alpha[1]"),
            (d14.beta_at([1, 0]).unwrap().eval(t), beta1, "beta[1]"),
        ] {
            checked += 1;
            // Closed forms cancel like t^3 near zero, so compare at their own precision.
            if (got - want).abs() > 1e-9 * want.abs() {
                bad.push(format!("d1-4 {what} at t={t}: {got} vs {want}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = bad.is_empty() && secs < 10.0;
    outcome(pass, format!("{checked} coefficients, {} mismatches, {secs:.2} s {}", bad.len(), bad.join("; ")))
}

fn c2_flat_limits() -> Outcome {
    let report = analysis::flat_limit_report();
    let failed: Vec<String> =
        report.iter().filter(|c| !c.passed()).map(|c| format!("{}: {:?}", c.formula, c.result)).collect();
    let d18 = weights_flat(FormulaId::D1_8).unwrap();
    let lap6 = weights_flat(FormulaId::LAP_6).unwrap();
    let entry = |v: &[(Offset, Rational)], o: Offset| v.iter().find(|(p, _)| *p == o).map(|(_, r)| r.clone()).unwrap_or_else(Rational::zero);
    let named = [
        (entry(&d18.alpha, [-2, 0]), "-25/216"),
        (entry(&d18.alpha, [1, 0]), "20/27"),
        (entry(&d18.beta, [-2, 0]), "-1/36"),
        (entry(&d18.beta, [1, 0]), "-4/9"),
        (entry(&lap6.alpha, [0, 0]), "-105/23"),
        (entry(&lap6.alpha, [1, 0]), "12/23"),
        (entry(&lap6.alpha, [1, 1]), "12/23"),
        (entry(&lap6.alpha, [2, 0]), "9/92"),
        (entry(&lap6.beta, [1, 0]), "-5/23"),
        (entry(&lap6.beta, [1, 1]), "-1/46"),
    ];
    let wrong: Vec<String> =
        named.iter().filter(|(g, w)| g != &parse_rational(w).unwrap()).map(|(g, w)| format!("{g} vs {w}")).collect();
    outcome(
        failed.is_empty() && wrong.is_empty(),
        format!("{}/11 formulas match the reference stencils {}{}", 11 - failed.len(), failed.join("; "), wrong.join("; ")),
    )
}

fn c3_optimal_eps() -> Outcome {
    let cases = [
        (FormulaId::D1_6, TestFunctionId::U1, [0.4, 0.0], 0.4004391108, Mechanism::PolynomialRoot),
        (FormulaId::D2_6, TestFunctionId::U1, [0.4, 0.0], 0.5905474585, Mechanism::PolynomialRoot),
        (FormulaId::LAP_4, TestFunctionId::U4, [0.25, 0.25], 1.827305861, Mechanism::PolynomialRoot),
        (FormulaId::LAP_4, TestFunctionId::U5, [0.0, 0.0], 0.3097756739, Mechanism::DerivativeMinimum),
    ];
    let mut pass = true;
    let mut parts = vec![];
    for (id, f, pt, want, mech) in cases {
        let p = lte_poly_derived(id, KernelKind::Gaussian, f, pt, 14).unwrap();
        let r = optimal_eps(&p).unwrap();
        let ok = (r.eps_star - want).abs() <= 1e-6 && r.mechanism == mech;
        pass &= ok;
        parts.push(format!("{id}/{f} {:.10} vs {want} {}", r.eps_star, if ok { "ok" } else { "MISMATCH" }));
    }
    outcome(pass, parts.join(", "))
}

fn table_entries() -> Vec<(FormulaId, TestFunctionId)> {
    let mut v = vec![];
    for id in [
        FormulaId::D1_4,
        FormulaId::D1_6,
        FormulaId::D1_8,
        FormulaId::D1_10,
        FormulaId::D2_4,
        FormulaId::D2_6,
        FormulaId::D2_8,
        FormulaId::D2_10,
    ] {
        v.push((id, TestFunctionId::U1));
        v.push((id, TestFunctionId::U2));
    }
    for id in [FormulaId::LAP_4, FormulaId::LAP_6] {
        for f in [TestFunctionId::U4, TestFunctionId::U5, TestFunctionId::U6, TestFunctionId::U7, TestFunctionId::U8, TestFunctionId::U9] {
            v.push((id, f));
        }
    }
    v
}

fn c4_sweep_vs_prediction() -> Outcome {
    let start = Instant::now();
    let cfg = AutoConfig::default();
    let grid = eps_grid(3.0);
    let mut worst = (0.0f64, String::new());
    let mut bad = vec![];
    let entries = table_entries();
    for &(id, f) in &entries {
        let pt = f.default_point();
        let predicted = optimal_eps(&lte_poly_derived(id, KernelKind::Gaussian, f, pt, 14).unwrap()).unwrap().eps_star;
        let s = sweep(id, KernelKind::Gaussian, f, pt, &grid, &[0.01], &cfg).unwrap();
        let found = sweep_argmin(&s.rows, 0.01).unwrap();
        let gap = (found - predicted).abs();
        if gap > worst.0 {
            worst = (gap, format!("{id}/{f}"));
        }
        if gap > 0.05 || !s.missing.is_empty() {
            bad.push(format!("{id}/{f}: sweep {found} vs {predicted:.4}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < 120.0,
        format!("{} entries, worst gap {:.4} ({}), {secs:.1} s {}", entries.len(), worst.0, worst.1, bad.join("; ")),
    )
}

fn c5_convergence() -> Outcome {
    let cfg = AutoConfig::default();
    let hs = [0.1, 0.05, 0.025, 0.0125];
    let cases = [
        (FormulaId::D1_6, TestFunctionId::U2),
        (FormulaId::D2_4, TestFunctionId::U1),
        (FormulaId::D2_8, TestFunctionId::U2),
        (FormulaId::LAP_4, TestFunctionId::U9),
        (FormulaId::LAP_6, TestFunctionId::U9),
    ];
    let mut pass = true;
    let mut parts = vec![];
    for (id, f) in cases {
        let rows = convergence(id, KernelKind::Gaussian, f, f.default_point(), 0.5, &hs, &cfg).unwrap();
        let orders: Vec<f64> = rows.iter().filter_map(|r| r.observed_order).collect();
        let ok = !orders.is_empty() && orders.iter().all(|p| (p - id.order() as f64).abs() <= 0.3);
        pass &= ok;
        let shown: Vec<String> = orders.iter().map(|p| format!("{p:.2}")).collect();
        parts.push(format!("{id}/{f} [{}]", shown.join(" ")));
    }
    outcome(pass, parts.join(", "))
}

fn c6_step_independence() -> Outcome {
    let cfg = AutoConfig::default();
    let grid = eps_grid(3.0);
    let mut pass = true;
    let mut parts = vec![];
    for (id, f) in [(FormulaId::D1_10, TestFunctionId::U1), (FormulaId::D2_10, TestFunctionId::U2)] {
        let s = sweep(id, KernelKind::Gaussian, f, f.default_point(), &grid, &[0.1, 0.05], &cfg).unwrap();
        let a = sweep_argmin(&s.rows, 0.1).unwrap();
        let b = sweep_argmin(&s.rows, 0.05).unwrap();
        let ok = (a - b).abs() <= 0.01 + 1e-9;
        pass &= ok;
        parts.push(format!("{id}/{f} argmin {a:.2} (h=0.1) vs {b:.2} (h=0.05)"));
    }
    outcome(pass, parts.join(", "))
}

fn c7_kernel_comparison() -> Outcome {
    let rows = compare_kernels(FormulaId::D1_6, TestFunctionId::U1, [0.4, 0.0], &eps_grid(3.0), 0.01, &AutoConfig::default()).unwrap();
    let best = rows.iter().min_by(|a, b| a.abs_ga.partial_cmp(&b.abs_ga).unwrap()).unwrap();
    let pass = best.abs_ga <= best.abs_fd && best.abs_ga <= best.abs_mq;
    outcome(
        pass,
        format!("GA min {:.3e} at eps {:.2}, FD {:.3e}, MQ there {:.3e}", best.abs_ga, best.eps, best.abs_fd, best.abs_mq),
    )
}

fn c8_oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for id in [FormulaId::D1_4, FormulaId::D1_6, FormulaId::D2_4, FormulaId::D2_6, FormulaId::LAP_4] {
        for f in TestFunctionId::ALL.into_iter().filter(|f| f.dim() == id.dim()) {
            let pt = f.default_point();
            let t = lte_poly_template(id, f, pt).unwrap();
            let d = lte_poly_derived(id, KernelKind::Gaussian, f, pt, 14).unwrap();
            let scale = d.coeffs.iter().fold(0.0f64, |m, a| m.max(a.abs()));
            let diff = if t.coeffs.len() != d.coeffs.len() {
                f64::INFINITY
            } else {
                t.coeffs.iter().zip(&d.coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
            };
            worst = worst.max(diff);
            count += 1;
        }
    }
    outcome(worst <= 1e-10, format!("{count} polynomials, worst relative difference {worst:.2e}"))
}

fn c9_cross_path() -> Outcome {
    let h = 0.1;
    let ts: Vec<f64> = (1..=10).map(|i| i as f64 / 100.0).collect();
    let mut parts = vec![];
    let mut pass = true;
    for kernel in [KernelKind::Gaussian, KernelKind::Multiquadric] {
        let mut worst = (0.0f64, String::new());
        for id in FormulaId::ALL {
            let series = weights_series(id, kernel, 14).unwrap();
            for &t in &ts {
                let eps = t.sqrt() / h;
                let s = series.eval(eps, h);
                let n = weights_numeric(id, kernel, eps, h).unwrap();
                let pairs = s.alpha.iter().zip(&n.alpha).chain(s.beta.iter().zip(&n.beta));
                for ((_, x), (_, y)) in pairs {
                    if *y == 0.0 && *x == 0.0 {
                        continue;
                    }
                    let rel = (x - y).abs() / y.abs();
                    if rel > worst.0 {
                        worst = (rel, format!("{id} t={t}"));
                    }
                }
            }
        }
        pass &= worst.0 <= 1e-7;
        parts.push(format!("{kernel} worst {:.2e} ({})", worst.0, worst.1));
    }
    outcome(pass, parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, c1_series_goldens),
        (2, c2_flat_limits),
        (3, c3_optimal_eps),
        (4, c4_sweep_vs_prediction),
        (5, c5_convergence),
        (6, c6_step_independence),
        (7, c7_kernel_comparison),
        (8, c8_oracle_equivalence),
        (9, c9_cross_path),
    ];
    let mut failed = vec![];
    for (n, run) in criteria {
        let o = run();
        println!("criterion {n}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail.trim_end());
        if !o.pass {
            failed.push(n);
        }
    }
    println!("acceptance: {}/9 pass; failing {:?}; documented as unattainable {:?}", 9 - failed.len(), failed, KNOWN_FAILURES);
    if failed == KNOWN_FAILURES {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
