mod common;

use biquat::series::{expand_detailed, QuatLaurentSeries};
use biquat::{embed, expand, power, singular_lines, Biquat, E3Point, Side};
use common::{catalog_map, map, params, point_in_ball, rand_point, rng};
use rand::Rng;

const CENTER: E3Point = E3Point::new(0.2, -0.1, 0.3);

fn inverse_chain(u: &Biquat, n: i32) -> Biquat {
    let step = if n < 0 { u.inverse().unwrap() } else { *u };
    (0..n.abs()).fold(Biquat::ONE, |acc, _| acc * step)
}

#[test]
fn power_identities_match_repeated_products() {
    let p = params();
    let mut r = rng(7);
    for _ in 0..200 {
        let u = embed(rand_point(&mut r, 2.0), &p).unwrap();
        if u.c[0].norm() < 0.2 || u.c[1].norm() < 0.2 {
            continue;
        }
        for n in -5..=5 {
            let closed = power(&u, n).unwrap();
            let oracle = inverse_chain(&u, n);
            let scale = closed.norm_e().max(1.0);
            assert!((closed - oracle).norm_e() < 1e-11 * scale, "n={n}");
            let xi = [u.c[0].powi(n), u.c[1].powi(n), u.c[0].powi(n), u.c[1].powi(n)];
            for (k, x) in xi.into_iter().enumerate() {
                let e = Biquat::basis(k + 1);
                assert!((closed * e - e.scale(x)).norm_e() < 1e-11 * scale, "right k={k}");
            }
            let xl = [u.c[0].powi(n), u.c[1].powi(n), u.c[1].powi(n), u.c[0].powi(n)];
            for (k, x) in xl.into_iter().enumerate() {
                let e = Biquat::basis(k + 1);
                assert!((e * closed - e.scale(x)).norm_e() < 1e-11 * scale, "left k={k}");
            }
        }
    }
}

#[test]
fn negative_power_of_line_element_fails() {
    let (l1, _) = singular_lines(&params()).unwrap();
    let u = embed(l1.at(1.0), &params()).unwrap();
    assert!(power(&u, -1).is_err());
    assert!(power(&u, 2).is_ok());
}

#[test]
fn taylor_round_trip_both_sides() {
    let p = params();
    for side in [Side::Right, Side::Left] {
        let m = catalog_map(side);
        let s = expand(&m, CENTER, 1.0, 1.0, 0, 20, 256).unwrap();
        let mut r = rng(11);
        for _ in 0..100 {
            let q = point_in_ball(&mut r, CENTER, 0.4, &p);
            let direct = m.eval(q).unwrap();
            let err = (s.eval(q).unwrap() - direct).norm_e();
            assert!(err < 1e-10, "{side:?} at {q}: {err}");
        }
    }
}

#[test]
fn wrong_side_assembly_differs() {
    let m = catalog_map(Side::Right);
    let s = expand(&m, CENTER, 1.0, 1.0, 0, 20, 256).unwrap();
    let wrong = QuatLaurentSeries { side: Side::Left, ..s.clone() };
    let q = CENTER + E3Point::new(0.1, 0.15, -0.05);
    assert!((wrong.eval(q).unwrap() - m.eval(q).unwrap()).norm_e() > 1e-3);
}

#[test]
fn laurent_round_trip_in_annulus() {
    let p = params();
    let center = E3Point::ORIGIN;
    for side in [Side::Right, Side::Left] {
        let m = map(side, ["1/z + z", "exp(z)", "z^-2", "0"]);
        let s = expand(&m, center, 1.0, 1.0, -20, 20, 256).unwrap();
        assert!((s.coeff(-1).c[0] - 1.0).norm() < 1e-12);
        let mut r = rng(13);
        let mut count = 0;
        while count < 100 {
            let q = point_in_ball(&mut r, center, 0.9, &p);
            let (x1, x2) = biquat::espace::xi_pair(q, &p);
            if !(0.5..0.9).contains(&x1.norm()) || !(0.5..0.9).contains(&x2.norm()) {
                continue;
            }
            count += 1;
            let direct = m.eval(q).unwrap();
            let err = (s.eval(q).unwrap() - direct).norm_e();
            assert!(err < 1e-9, "{side:?} at {q}: {err}");
        }
    }
}

#[test]
fn split_then_merge_is_identity() {
    let m = map(Side::Right, ["1/z + z", "exp(z)", "0", "z^-3"]);
    let s = expand(&m, E3Point::ORIGIN, 1.0, 1.0, -6, 6, 128).unwrap();
    let (principal, regular) = s.split_parts();
    assert!(principal.hi() < 0 && regular.lo == 0);
    let merged = QuatLaurentSeries::merge(&principal, &regular).unwrap();
    assert_eq!(merged, s);
    let q = E3Point::new(0.3, 0.2, 0.1);
    let sum = principal.eval(q).unwrap() + regular.eval(q).unwrap();
    assert!((sum - s.eval(q).unwrap()).norm_e() < 1e-13);
}

#[test]
fn exp_coefficients_are_reciprocal_factorials() {
    let m = map(Side::Right, ["exp(z)", "0", "0", "0"]);
    let s = expand(&m, E3Point::ORIGIN, 1.0, 1.0, 0, 15, 256).unwrap();
    let mut fact = 1.0;
    for n in 0..=15 {
        if n > 0 {
            fact *= n as f64;
        }
        let pn = s.coeff(n);
        assert!((pn.c[0] - 1.0 / fact).norm() < 1e-12, "n={n}");
        assert!(pn.c[1].norm() < 1e-15 && pn.c[2].norm() < 1e-15 && pn.c[3].norm() < 1e-15);
    }
}

#[test]
fn equal_coefficients_imply_equal_maps() {
    let p = params();
    let a = map(Side::Right, ["exp(z)", "sin(z)", "z^2", "1/(z-5)"]);
    let b = map(Side::Right, ["exp(z/2)^2", "2*sin(z/2)*cos(z/2)", "(z+1)^2 - 2*z - 1", "-1/(5-z)"]);
    let sa = expand(&a, CENTER, 1.0, 1.0, 0, 20, 256).unwrap();
    let sb = expand(&b, CENTER, 1.0, 1.0, 0, 20, 256).unwrap();
    for n in 0..=20 {
        assert!((sa.coeff(n) - sb.coeff(n)).norm_e() < 1e-12, "n={n}");
    }
    let mut r = rng(17);
    for _ in 0..50 {
        let q = point_in_ball(&mut r, CENTER, 0.4, &p);
        assert!((a.eval(q).unwrap() - b.eval(q).unwrap()).norm_e() < 1e-9);
    }
}

#[test]
fn agreement_on_a_line_does_not_force_identity() {
    let p = params();
    let m = map(Side::Right, ["0", "0", "z", "0"]);
    let (l1, _) = singular_lines(&p).unwrap();
    let mut r = rng(19);
    for _ in 0..50 {
        let q = l1.at(r.gen_range(-5.0..5.0));
        assert!(m.eval(q).unwrap().norm_e() <= 1e-14, "{q}");
    }
    let generic = E3Point::new(0.3, 0.4, -0.2);
    assert!(m.eval(generic).unwrap().norm_e() >= 0.1);
    let s = expand(&m, E3Point::ORIGIN, 1.0, 1.0, 0, 4, 64).unwrap();
    assert!((s.coeff(1) - Biquat::E3).norm_e() < 1e-14);
    // ζ e3 itself
    let z = embed(generic, &p).unwrap();
    assert!((m.eval(generic).unwrap() - z * Biquat::E3).norm_e() < 1e-15);
}

#[test]
fn component_extractions_share_the_window() {
    let m = catalog_map(Side::Left);
    let ex = expand_detailed(&m, CENTER, 1.0, 0.8, -2, 8, 64).unwrap();
    for (k, comp) in ex.components.iter().enumerate() {
        assert_eq!(comp.series.lo, -2);
        let expected_rho = if m.side.xi_index(k) == 0 { 1.0 } else { 0.8 };
        assert_eq!(comp.rho, expected_rho, "k={k}");
    }
    assert!(expand(&m, CENTER, 1.0, 1.0, 1, 8, 64).is_err());
}

#[test]
fn series_json_round_trip() {
    let m = catalog_map(Side::Left);
    let s = expand(&m, CENTER, 1.0, 1.0, -2, 6, 64).unwrap();
    let back: QuatLaurentSeries = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
}
