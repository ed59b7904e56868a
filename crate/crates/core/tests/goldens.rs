use crbf_core::series::{rational, Rational};
use crbf_core::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use serde_json::Value;

fn golden(name: &str) -> Value {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn series_json_matches_golden_files() {
    for (file, id, kernel, n) in [
        ("d1-6_ga_n6.json", FormulaId::D1_6, KernelKind::Gaussian, 6),
        ("lap-4_mq_n4.json", FormulaId::LAP_4, KernelKind::Multiquadric, 4),
    ] {
        let expected = golden(file);
        let w = weights_series(id, kernel, n).unwrap();
        assert_eq!(w.to_json(), expected, "{file}");
        assert_eq!(SeriesWeightSet::from_json(&expected).unwrap(), w);
    }
}

#[test]
fn alpha_sums_vanish_in_every_power() {
    for id in FormulaId::ALL {
        for kernel in [KernelKind::Gaussian, KernelKind::Multiquadric] {
            let w = weights_series(id, kernel, 8).unwrap();
            for k in 0..8 {
                let s: Rational = w.alpha.iter().map(|(_, a)| a.coeff(k).clone()).sum();
                assert!(s.is_zero(), "{id} {kernel} t^{k}");
            }
        }
    }
}

#[test]
fn weights_respect_stencil_symmetry() {
    for id in FormulaId::ALL {
        let w = weights_series(id, KernelKind::Gaussian, 8).unwrap();
        let odd = id.operator() == OperatorKind::FirstDerivative1D;
        for (o, a) in &w.alpha {
            let mirror = w.alpha_at([-o[0], o[1]]).unwrap();
            let expected = if odd { a.scale(&-Rational::one()) } else { a.clone() };
            assert_eq!(mirror, &expected, "{id} alpha {o:?}");
            if id.dim() == 2 {
                assert_eq!(w.alpha_at([o[1], o[0]]).unwrap(), a, "{id} alpha {o:?}");
            }
        }
        for (o, b) in &w.beta {
            assert_eq!(w.beta_at([-o[0], o[1]]).unwrap(), b, "{id} beta {o:?}");
        }
    }
}

#[test]
fn first_derivative_formulas_have_no_centre_value() {
    for id in [FormulaId::D1_4, FormulaId::D1_6, FormulaId::D1_8, FormulaId::D1_10] {
        let w = weights_series(id, KernelKind::Gaussian, 8).unwrap();
        assert!(w.alpha_at([0, 0]).is_none_or(TruncatedSeries::is_zero), "{id}");
    }
}

// u = x is reproduced exactly only up to the order of the formula: every
// power t^k with 2k < m is exact, the next one carries the truncation error.
#[test]
fn linear_fields_exact_below_leading_error() {
    for id in [FormulaId::D1_4, FormulaId::D1_6, FormulaId::D1_8, FormulaId::D1_10] {
        let w = weights_series(id, KernelKind::Gaussian, 10).unwrap();
        let half = id.order() as usize / 2;
        for k in 0..=half {
            let mut s: Rational = w.alpha.iter().map(|(o, a)| a.coeff(k) * rational(o[0] as i64, 1)).sum();
            s += w.beta.iter().map(|(_, b)| b.coeff(k).clone()).sum::<Rational>();
            let expected = if k == 0 { Rational::one() } else { Rational::zero() };
            if k < half {
                assert_eq!(s, expected, "{id} t^{k}");
            } else {
                assert_ne!(s, expected, "{id} t^{k}");
            }
        }
    }
}

#[test]
fn laplacian_formulas_reproduce_linear_fields() {
    for id in [FormulaId::LAP_2, FormulaId::LAP_4, FormulaId::LAP_6] {
        let w = weights_numeric(id, KernelKind::Gaussian, 2.0, 0.1).unwrap();
        let v = analysis::apply_formula_with(&w, [0.3, -0.2], 0.1, |x| (3.0 * x[0] - 2.0 * x[1] + 1.0, 0.0));
        assert!(v.abs() < 1e-9, "{id}: {v}");
    }
}

#[test]
fn flat_limits_reproduce_named_entries() {
    let d110 = weights_flat(FormulaId::D1_10).unwrap();
    assert_eq!(d110.beta.iter().find(|(o, _)| *o == [2, 0]).unwrap().1, rational(-1, 20));
    let lap4 = weights_flat(FormulaId::LAP_4).unwrap();
    assert_eq!(lap4.beta.iter().find(|(o, _)| *o == [1, 0]).unwrap().1, rational(-1, 8));
    let lap2 = weights_flat(FormulaId::LAP_2).unwrap();
    assert_eq!(lap2.alpha.iter().find(|(o, _)| *o == [0, 0]).unwrap().1, rational(-4, 1));
}

#[test]
fn auto_routes_agree_around_switch() {
    let cfg = AutoConfig::default();
    for id in [FormulaId::D1_6, FormulaId::D2_6, FormulaId::LAP_4] {
        let ts = cfg.t_switch(id, KernelKind::Gaussian);
        let h = 0.1;
        for t in [0.9 * ts, 1.1 * ts] {
            let eps = t.sqrt() / h;
            let a = weights_auto(id, KernelKind::Gaussian, eps, h).unwrap();
            let s = weights_series(id, KernelKind::Gaussian, 14).unwrap().eval(eps, h);
            let n = weights_numeric(id, KernelKind::Gaussian, eps, h).unwrap();
            for ((o, x), (_, y)) in s.alpha.iter().zip(&n.alpha) {
                assert!((x - y).abs() <= 1e-7 * y.abs().max(1e-3), "{id} t={t} {o:?}: {x} vs {y}");
            }
            assert_eq!(a.route, if t <= ts { Route::Series } else { Route::Numeric });
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constants_are_annihilated(idx in 0usize..11, eps in 0.05f64..4.0, h in 0.01f64..0.3, c in -5.0f64..5.0) {
        let id = FormulaId::ALL[idx];
        let w = weights_auto(id, KernelKind::Gaussian, eps, h).unwrap();
        let v = analysis::apply_formula_with(&w, [0.1, 0.2], h, |_| (c, 0.0));
        prop_assert!(v.abs() <= 1e-9 * c.abs().max(1.0) / h.powi(id.operator().order() as i32));
    }
}
