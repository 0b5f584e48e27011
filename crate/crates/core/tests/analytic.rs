mod common;

use biquat::analytic::{extract, parse, ComponentFn, Expr, LaurentSeries1D};
use biquat::Complex;
use common::{c, CORPUS};
use proptest::prelude::*;

#[test]
fn corpus_round_trips() {
    for text in CORPUS {
        let e = parse(text).unwrap_or_else(|err| panic!("{text}: {err}"));
        let printed = e.to_string();
        let again = parse(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert_eq!(e, again, "{text} -> {printed}");
    }
}

#[test]
fn malformed_inputs_report_offsets() {
    let cases = [("z +", 3), ("(z", 2), ("z ** 2", 3), ("exp z", 4), ("2z", 1), ("sin()", 4), ("z^1.5", 2), ("", 0), ("z)", 1), ("log(z)", 0)];
    for (text, offset) in cases {
        let err = parse(text).expect_err(text);
        assert_eq!(err.offset, offset, "{text}: {err}");
        assert!(err.to_string().contains(&offset.to_string()), "{err}");
    }
}

/// Central difference error bound: truncation `h²|f'''|/6` plus cancellation `u|f|/h`.
fn bound(e: &Expr, z: Complex, h: f64) -> f64 {
    let f3 = e.derivative().derivative().derivative().eval(z).unwrap().norm();
    let f0 = e.eval(z).unwrap().norm().max(1.0);
    10.0 * (h * h * f3 / 6.0 + 1e-16 * f0 / h) + 1e-300
}

#[test]
fn derivative_matches_central_differences() {
    let z = c(0.7, 0.3);
    for text in CORPUS {
        let e = parse(text).unwrap();
        let d = e.derivative().eval(z).unwrap();
        for h in [1e-5, 1e-6] {
            let fd = (e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h);
            let err = (d - fd).norm();
            assert!(err <= bound(&e, z, h), "{text} at h={h}: {err} > {}", bound(&e, z, h));
        }
    }
}

#[test]
fn central_difference_error_is_second_order() {
    let z = c(0.7, 0.3);
    for text in CORPUS {
        let e = parse(text).unwrap();
        let d = e.derivative().eval(z).unwrap();
        let err = |h: f64| ((e.eval(z + h).unwrap() - e.eval(z - h).unwrap()) / (2.0 * h) - d).norm();
        let (e1, e2) = (err(1e-2), err(1e-3));
        if e1 < 1e-9 {
            continue; // cubic term vanishes
        }
        let ratio = e1 / e2;
        assert!((70.0..140.0).contains(&ratio), "{text}: ratio {ratio}");
    }
}

#[test]
fn taylor_of_exp_is_factorial() {
    let f = ComponentFn::parse("exp(z)").unwrap();
    let ex = extract(&f, c(0.0, 0.0), 1.0, 0, 15, 256).unwrap();
    let mut fact = 1.0;
    for n in 0..=15 {
        if n > 0 {
            fact *= n as f64;
        }
        assert!((ex.series.coeff(n) - 1.0 / fact).norm() < 1e-14, "n={n}");
    }
}

#[test]
fn spectral_accuracy_improves_with_nodes() {
    let f = ComponentFn::parse("1/(z - 2)").unwrap();
    let err = |nodes| {
        let ex = extract(&f, c(0.0, 0.0), 1.0, 0, 8, nodes).unwrap();
        (0..=8).map(|n| (ex.series.coeff(n) + 0.5f64.powi(n + 1)).norm()).fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(16), err(64));
    assert!(coarse > 1e-6 && fine < 1e-14, "{coarse} {fine}");
}

#[test]
fn laurent_coefficients_of_exp_inverse() {
    let f = ComponentFn::parse("exp(1/z)").unwrap();
    let ex = extract(&f, c(0.0, 0.0), 1.0, -10, 0, 256).unwrap();
    let mut fact = 1.0;
    for k in 0..=10 {
        if k > 0 {
            fact *= k as f64;
        }
        assert!((ex.series.coeff(-k) - 1.0 / fact).norm() < 1e-14, "k={k}");
    }
}

#[test]
fn series_component_round_trips_through_json() {
    let s = LaurentSeries1D::new(c(1.0, 0.0), -1, vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, -1.0)]).unwrap();
    let f = ComponentFn::Series(s);
    let text = serde_json::to_string(&f).unwrap();
    let back: ComponentFn = serde_json::from_str(&text).unwrap();
    let z = c(1.5, 0.2);
    assert_eq!(back.eval(z).unwrap(), f.eval(z).unwrap());
}

proptest! {
    #[test]
    fn series_eval_matches_expression(re in -0.3..0.3f64, im in -0.3..0.3f64) {
        let f = ComponentFn::parse("1/z + exp(z)").unwrap();
        let ex = extract(&f, c(0.0, 0.0), 1.0, -5, 20, 256).unwrap();
        let z = c(re, im) + c(0.5, 0.0);
        let direct = f.eval(z).unwrap();
        prop_assert!((ex.series.eval(z).unwrap() - direct).norm() < 1e-10 * direct.norm().max(1.0));
    }

    #[test]
    fn printing_round_trips_random_sums(a in -5i32..5, b in 1i32..4, k in -3i32..4) {
        let text = format!("{a}*z^{k} - exp(z/{b})");
        let e = parse(&text).unwrap();
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }
}
