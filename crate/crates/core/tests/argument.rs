//! S, S₁ and C against frozen mpmath oracle values and against each other.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use s1lab::argument::{
    compute_constant_c, constant_c, count_zeros_upto, integral_of_s, s1_strip, s1_via_integral,
    s_via_counting, s_via_path, S1Window, SMethod,
};
use s1lab::zeta::{hardy_z, rs_theta, zero_ordinates};

const C_ORACLE: f64 = 0.8173527685770405634422;

#[test]
fn s_matches_oracle() {
    let cases = [
        (10.0, -0.02371989799974494379598),
        (100.0, -0.002409902271816779826115),
        (1000.0, 0.3837580555763006853656),
        (2500.5, -0.2849612981887212502872),
    ];
    for (t, want) in cases {
        let p = s_via_path(t).unwrap();
        assert_eq!(p.method, SMethod::PathTracking);
        assert!((p.s_value - want).abs() < 1e-9, "path S({t}) = {}", p.s_value);
        let c = s_via_counting(t).unwrap();
        assert_eq!(c.method, SMethod::ZeroCounting);
        assert!((c.s_value - want).abs() < 1e-9, "counting S({t}) = {}", c.s_value);
    }
}

#[test]
fn counting_examples() {
    assert_eq!(count_zeros_upto(100.0).unwrap(), 29.0);
    let s = s_via_counting(100.0).unwrap().s_value;
    assert!((s - (29.0 - rs_theta(100.0).unwrap() / PI - 1.0)).abs() < 1e-15);
    let s = s_via_counting(14.0).unwrap().s_value;
    assert!((s - (-rs_theta(14.0).unwrap() / PI - 1.0)).abs() < 1e-15);
}

#[test]
fn s_jumps_by_one_at_first_zero() {
    let g = 14.13472514173469379046;
    let below = s_via_path(g - 1e-4).unwrap().s_value;
    let above = s_via_path(g + 1e-4).unwrap().s_value;
    assert!((above - below - 1.0).abs() < 1e-3);
}

#[test]
fn half_sum_on_an_ordinate() {
    let z = zero_ordinates(20.9, 21.1).unwrap()[0];
    let g = z.ordinate();
    let at = s_via_path(g).unwrap().s_value;
    let below = s_via_path(g - 1e-6).unwrap().s_value;
    let above = s_via_path(g + 1e-6).unwrap().s_value;
    assert!((at - 0.5 * (above + below)).abs() < 1e-9);
    let counted = s_via_counting(g).unwrap().s_value;
    assert!((counted - at).abs() < 1e-6);
}

#[test]
fn path_and_counting_agree_on_random_heights() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 50 {
        let t: f64 = rng.gen_range(50.0..5000.0);
        if hardy_z(t - 1e-3).unwrap() * hardy_z(t + 1e-3).unwrap() <= 0.0 {
            continue;
        }
        let a = s_via_path(t).unwrap().s_value;
        let b = s_via_counting(t).unwrap().s_value;
        assert!((a - b).abs() < 1e-6, "T = {t}: {a} vs {b}");
        assert!(a.abs() < 8.0 * t.ln());
        done += 1;
    }
}

#[test]
fn constant_c_matches_oracle_and_is_reproducible() {
    let c = constant_c();
    assert!((c.c - C_ORACLE).abs() < 1e-9, "{}", c.c);
    assert!(c.est_error <= 1e-8);
    let again = compute_constant_c(40.0).unwrap();
    assert_eq!(c.c.to_bits(), again.c.to_bits());
    let c30 = compute_constant_c(30.0).unwrap();
    let diff = c.c - c30.c;
    assert!(diff >= 0.0 && diff <= 2f64.powi(-29) / (PI * 2f64.ln()), "{diff:e}");
}

#[test]
fn strip_matches_oracle() {
    let cases = [
        (10.0, 0.2290749334000194095729),
        (100.0, 0.2933333804114321651482),
        (300.0, 0.1035534715023637681973),
        (500.0, 0.09806948148498878236737),
        (1000.0, -0.05978288736110060734957),
    ];
    for (t, want) in cases {
        let v = s1_strip(t, 40.0).unwrap();
        assert!((v.s1_value - want).abs() < 1e-8, "S1({t}) = {}", v.s1_value);
        assert!(v.est_error >= 2f64.powi(-39) / (PI * 2f64.ln()));
        assert!(v.s1_value.abs() <= 2.0 * t.ln());
    }
}

#[test]
fn strip_tail_is_bounded() {
    let a = s1_strip(500.0, 40.0).unwrap().s1_value;
    let b = s1_strip(500.0, 20.0).unwrap().s1_value;
    assert!((a - b).abs() <= 2f64.powi(-19));
}

#[test]
fn strip_at_an_ordinate_is_finite() {
    let g = zero_ordinates(10.0, 15.0).unwrap()[0].ordinate();
    let v = s1_strip(g, 40.0).unwrap();
    let w = s1_strip(g + 1e-6, 40.0).unwrap();
    assert!(v.s1_value.is_finite());
    // S₁ is Lipschitz with constant |S| < 1 here.
    assert!((v.s1_value - w.s1_value).abs() < 1e-6);
}

#[test]
fn two_routes_to_s1_agree() {
    for t in [100.0, 300.0, 500.0, 1000.0] {
        let a = s1_strip(t, 40.0).unwrap().s1_value;
        let b = s1_via_integral(t).unwrap().s1_value;
        assert!((a - b).abs() < 5e-3, "T = {t}: {a} vs {b}");
        // Both routes are exact; they agree far below the stated tolerance.
        assert!((a - b).abs() < 1e-6, "T = {t}: {a} vs {b}");
    }
}

#[test]
fn integral_route_is_additive() {
    let d = s1_via_integral(200.0).unwrap().s1_value - s1_via_integral(100.0).unwrap().s1_value;
    let direct = integral_of_s(100.0, 200.0).unwrap();
    assert!((d - direct).abs() < 1e-6);
    // And the increment equals the strip-integral difference, an independent route.
    let strip = s1_strip(200.0, 40.0).unwrap().s1_value - s1_strip(100.0, 40.0).unwrap().s1_value;
    assert!((direct - strip).abs() < 1e-6, "{direct} vs {strip}");
}

#[test]
fn window_model_matches_strip_integrals() {
    let w = S1Window::new(0.0, 700.0).unwrap();
    let check = *w.check().unwrap();
    assert!(check.s1_mismatch() < 1e-7, "{check:?}");
    assert!(check.s_mismatch() < 1e-7, "{check:?}");
    for t in [3.5, 10.0, 57.3, 100.0, 300.0, 500.0] {
        let strip = if t >= 10.0 {
            s1_strip(t, 40.0).unwrap().s1_value
        } else {
            w.s1(t).unwrap()
        };
        assert!((w.s1(t).unwrap() - strip).abs() < 1e-7, "t = {t}");
        assert_eq!(w.s1(-t).unwrap(), w.s1(t).unwrap());
    }
    let s = w.s(1000.0 - 300.0).unwrap();
    assert!((s - s_via_path(700.0).unwrap().s_value).abs() < 1e-7);
    assert!(w.s1(800.0).is_err());
}

#[test]
fn window_extremes_dominate_dense_samples() {
    let w = S1Window::new(990.0, 1100.0).unwrap();
    let a = w.anchor().unwrap().max(990.0);
    let e = w.extremes(a, 1100.0).unwrap();
    let n = 20_000;
    for i in 0..=n {
        let x = a + (1100.0 - a) * i as f64 / n as f64;
        let v = w.s1(x).unwrap();
        assert!(v <= e.max + 1e-12 && v >= e.min - 1e-12, "x = {x}");
    }
    assert!(e.max > 0.0 && e.min < 0.0);
}
