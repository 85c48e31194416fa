//! Moment integrals, closed-form bounds and the moment criterion.

use std::f64::consts::PI;

use proptest::prelude::*;
use s1lab::dirichlet::{build_table, w_grid, GridFunction};
use s1lab::moments::{
    abs_odd_moment, diagonal_prediction, diagonal_sum, even_moment, lemma3_rhs, lemma3_rhs_log,
    lemma4_lower_bound, lemma4_odd_bound, lemma5_certify, moment_report, odd_moment,
};
use s1lab::LabError;

fn w_on(t: f64, h: f64, tau: f64, dt: f64) -> (GridFunction, s1lab::dirichlet::PrimePowerTable) {
    let table = build_table(tau).unwrap();
    let n = (h / dt).round() as usize + 1;
    (w_grid(t, dt, n, &table).unwrap(), table)
}

#[test]
fn constant_moments_are_exact() {
    let g = GridFunction::new(0.0, 0.5, vec![1.5; 101]).unwrap();
    for k in 1..=12 {
        let e = even_moment(&g, k, 0.0, 50.0, None).unwrap().value;
        let want = 1.5f64.powi(2 * k as i32) * 50.0;
        assert!((e - want).abs() <= 1e-13 * want, "k = {k}");
        let o = odd_moment(&g, k, 0.0, 50.0, None).unwrap().value;
        let want = 1.5f64.powi(2 * k as i32 + 1) * 50.0;
        assert!((o - want).abs() <= 1e-13 * want);
    }
}

#[test]
fn cosine_moment() {
    let n = 1000;
    let dt = 2.0 * PI / n as f64;
    let g = GridFunction::sample(0.0, dt, n + 1, f64::cos).unwrap();
    let e = even_moment(&g, 1, 0.0, 2.0 * PI, None).unwrap();
    assert!((e.value - PI).abs() < 1e-6);
    assert!(e.error < 1e-6);
}

#[test]
fn odd_symmetric_integrand_vanishes() {
    let dt = 0.01;
    let g = GridFunction::sample(-5.0, dt, 1001, |t| t.sin() + 0.3 * t).unwrap();
    let o = odd_moment(&g, 2, -5.0, 10.0, None).unwrap();
    assert!(o.value.abs() < 1e-9, "{o:?}");
}

#[test]
fn moment_domain_checks() {
    let g = GridFunction::new(0.0, 0.5, vec![1.0; 11]).unwrap();
    assert!(matches!(even_moment(&g, 1, 0.25, 2.0, None), Err(LabError::Domain(_))));
    assert!(matches!(even_moment(&g, 1, 0.0, 10.0, None), Err(LabError::Domain(_))));
    assert!(matches!(even_moment(&g, 13, 0.0, 2.0, None), Err(LabError::Domain(_))));
    assert!(matches!(even_moment(&g, 1, 0.0, 2.0, Some(4.0)), Err(LabError::Domain(_))));
    assert!(even_moment(&g, 1, 0.0, 2.0, Some(1.0)).is_ok());
}

#[test]
fn scaling() {
    let g = GridFunction::sample(0.0, 0.01, 2001, |t| (3.0 * t).cos() + 0.5 * t.sin()).unwrap();
    for k in [1, 3, 6] {
        let base = even_moment(&g, k, 0.0, 20.0, None).unwrap().value;
        let scaled = even_moment(&g.scaled(1.7), k, 0.0, 20.0, None).unwrap().value;
        let want = 1.7f64.powi(2 * k as i32) * base;
        assert!((scaled - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn w_moments_match_the_diagonal_terms() {
    let (tau, t, h) = (4.0, 1e3, 1e4);
    let (g, table) = w_on(t, h, tau, 0.01);
    let sum_sq = table.sum_sq();
    let e1 = even_moment(&g, 1, t, h, Some(tau)).unwrap().value;
    assert!((e1 / (0.5 * h * sum_sq) - 1.0).abs() < 0.05);
    for k in [1, 2] {
        let e = even_moment(&g, k, t, h, Some(tau)).unwrap().value;
        let pred = diagonal_prediction(&table, k, h).unwrap();
        assert!((e / pred - 1.0).abs() < 0.10, "k = {k}: {e} vs {pred}");
    }
    // For k = 2 the diagonal sum is 2(Σf²)² − Σf⁴.
    let f4: f64 = table.coefficients().map(|f| f.powi(4)).sum();
    let d2 = diagonal_sum(&table, 2).unwrap();
    assert!((d2 - (2.0 * sum_sq * sum_sq - f4)).abs() < 1e-12);
    assert!((diagonal_sum(&table, 1).unwrap() - sum_sq).abs() < 1e-14);

    // Moment bounds at these parameters: the lower bound is vacuous (negative).
    let lower = lemma4_lower_bound(2, tau, h).unwrap();
    let e2 = even_moment(&g, 2, t, h, Some(tau)).unwrap().value;
    assert!(lower.value.to_f64() < e2);
    let o = odd_moment(&g, 2, t, h, Some(tau)).unwrap().value;
    assert!(o.abs() < lemma4_odd_bound(2, tau).unwrap().to_f64());
    let o1 = odd_moment(&g, 1, t, h, Some(tau)).unwrap().value;
    assert!(o1.abs() < 18f64.exp());
    assert!(o1.abs() <= 0.05 * e1.powf(1.5) * h.powf(-0.5));
}

#[test]
fn moment_report_collects_bounds() {
    let (tau, t, h) = (4.0, 1e3, 1e3);
    let (g, table) = w_on(t, h, tau, 0.01);
    let r = moment_report(&g, &table, 2, t, h, Some(0.5)).unwrap();
    assert_eq!(r.m, 5);
    assert!(r.even_moment >= 0.0);
    assert!(r.even_lower_bound.is_some());
    assert!(r.odd_within_bound);
    assert!(r.criterion.is_some());
    assert_eq!(r.r_regime, Some("rh-verified: r_moment = 0"));
    let r1 = moment_report(&g, &table, 1, t, h, None).unwrap();
    assert!(r1.even_lower_bound.is_none() && r1.criterion.is_none());
}

/// (k, τ, H, ln first term, ln e^{3kτ}, ln odd bound, ln(−value), hypothesis), from mpmath.
/// Every value in the table is negative.
const LOWER_BOUND_TABLE: [(u32, f64, f64, f64, f64, f64, f64, bool); 10] = [
    (2, 4.0, 1e4, -0.9802354203017622034828, 24.0, 30.0, 23.99999999998583483622, true),
    (2, 1.0, 1e4, -0.98023542030176220, 6.0, 7.5, 5.999069482986573772644, false),
    (3, 5.0, 1e6, -3.017322295318330218411, 45.0, 52.5, 45.0, true),
    (4, 6.5, 1e8, -4.733059562843305644635, 78.0, 87.75, 78.0, true),
    (5, 8.0, 1e12, -1.687943864483288295103, 120.0, 132.0, 120.0, true),
    (2, 2.5, 20.0, -7.19484351872395394612, 15.0, 18.75, 14.99999999977043697803, false),
    (7, 10.0, 1e30, 27.72848006007696891647, 210.0, 225.0, 210.0, true),
    (10, 12.0, 1e50, 56.25984749606116078912, 360.0, 378.0, 360.0, true),
    (12, 20.0, 1e100, 159.9742158417457921214, 720.0, 750.0, 720.0, true),
    (3, 3.3, 1e3, -9.925077574300467270465, 29.7, 34.65, 29.6999999999999983951, false),
];

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn lower_and_odd_bound_closed_forms() {
    for (k, tau, h, ln_first, ln_sub, ln_odd, ln_neg_value, hyp) in LOWER_BOUND_TABLE {
        let l = lemma4_lower_bound(k, tau, h).unwrap();
        assert!(rel(l.ln_first, ln_first) < 1e-12, "k={k} tau={tau}");
        assert!(rel(l.ln_subtracted, ln_sub) < 1e-12);
        assert_eq!(l.value.sign, -1);
        assert!(rel(l.value.ln_abs, ln_neg_value) < 1e-12);
        assert_eq!(l.hypothesis, hyp);
        let direct = (2.0 * k as f64 * (k as f64).ln()).powi(2) < (0.8 * tau).exp();
        assert_eq!(l.hypothesis, direct);
        let o = lemma4_odd_bound(k, tau).unwrap();
        assert!(rel(o.ln_abs, ln_odd) < 1e-12);
    }
}

#[test]
fn lower_and_odd_bound_shape() {
    let a = lemma4_lower_bound(2, 4.0, 1e4).unwrap();
    let b = lemma4_lower_bound(2, 4.0, 2e4).unwrap();
    assert!((b.ln_first - a.ln_first - 2f64.ln()).abs() < 1e-14);
    assert!(lemma4_lower_bound(1, 4.0, 1e4).is_err());
    assert!((lemma4_odd_bound(1, 2.0).unwrap().to_f64() - 9f64.exp()).abs() < 1e-9);
    assert_eq!(lemma4_odd_bound(2, 4.0).unwrap().ln_abs, 30.0);
    let mut prev = 0.0;
    for k in 1..6 {
        for tau in [1.0, 2.0, 3.5] {
            let v = lemma4_odd_bound(k, tau).unwrap().ln_abs;
            assert!(v > lemma4_odd_bound(k, tau * 0.9).unwrap().ln_abs);
            if tau == 1.0 {
                assert!(v > prev);
                prev = v;
            }
        }
    }
    // A positive lower bound once H dominates e^{3kτ}.
    let p = lemma4_lower_bound(2, 1.0, 1e10).unwrap();
    assert_eq!(p.value.sign, 1);
}

#[test]
fn remainder_bound_closed_form() {
    let (m, tau, eps, t, h) = (5, 3.0, 5e-4, 1e8, 1e3);
    let r = lemma3_rhs(m, tau, eps, t, h).unwrap();
    let lt: f64 = t.ln();
    let x = 50.0 * tau * 25.0 / (eps.powi(3) * lt);
    let want = h * 25f64.powi(5) * (1.0 + lt.powi(3) * x.powi(5) / 25f64.powi(5));
    assert!(rel(r.ln_value, want.ln()) < 1e-12);
    assert!(!r.m_tau_small);
    assert!(r.m_odd_at_least_3 && r.eps_in_range);
    assert!(!r.hypotheses_hold());

    let ln_t = 1e6;
    let ln_h = (27.0 / 82.0 + eps) * ln_t;
    let r = lemma3_rhs_log(5, 3.0, eps, ln_t, ln_h).unwrap();
    assert!(rel(r.ln_value, 329895.822754298854238) < 1e-12);
    assert!(r.m_tau_small);
    assert!(!lemma3_rhs(4, 3.0, eps, t, h).unwrap().m_odd_at_least_3);
    assert!(!lemma3_rhs(5, 3.0, 1e-3, t, h).unwrap().eps_in_range);
}

#[test]
fn criterion_on_a_pure_cosine() {
    let h = 2.0 * PI * 100.0;
    let n = 100 * 64;
    let dt = h / n as f64;
    let m = 1.0;
    // ∫cos⁶ = (20/64)·H, so amplitude M alone misses the even-moment condition.
    let g = GridFunction::sample(0.0, dt, n + 1, |t| m * t.cos()).unwrap();
    let v = lemma5_certify(&g, 3, m, 0.0, h, 0.0).unwrap();
    assert!(!v.even_lower && v.odd_upper && v.r_upper && !v.conclusion_available);
    assert!((v.even_moment / h - 20.0 / 64.0).abs() < 1e-9);

    let a = 1.25 * m;
    let g = GridFunction::sample(0.0, dt, n + 1, |t| a * t.cos()).unwrap();
    let v = lemma5_certify(&g, 3, m, 0.0, h, 0.0).unwrap();
    assert!(v.conclusion_available, "{v:?}");
    let max = g.values.iter().cloned().fold(f64::MIN, f64::max);
    assert!(max >= m / 8.0);

    let zero = GridFunction::new(0.0, dt, vec![0.0; n + 1]).unwrap();
    let v = lemma5_certify(&zero, 3, m, 0.0, h, 0.0).unwrap();
    assert!(!v.even_lower && !v.conclusion_available);

    let v = lemma5_certify(&g, 3, m, 0.0, h, h).unwrap();
    assert!(!v.r_upper && !v.conclusion_available);
}

#[derive(Debug, Clone)]
struct Trig {
    terms: Vec<(f64, f64, f64)>,
}

impl Trig {
    fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(a, w, p)| a * (w * t + p).cos()).sum()
    }

    fn slope_bound(&self) -> f64 {
        self.terms.iter().map(|&(a, w, _)| (a * w).abs()).sum()
    }
}

fn trig(max_terms: usize, amp: f64) -> impl Strategy<Value = Trig> {
    prop::collection::vec((-amp..amp, 0.1f64..5.0, 0.0f64..6.3), 1..=max_terms)
        .prop_map(|terms| Trig { terms })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn criterion_never_certifies_falsely(
        w in trig(6, 1.0),
        r in trig(3, 0.05),
        k in 1u32..=4,
        c in 0.3f64..1.3,
    ) {
        let (h, dt) = (100.0, 0.01);
        let n = (h / dt) as usize + 1;
        let wg = GridFunction::sample(0.0, dt, n, |t| w.eval(t)).unwrap();
        let rg = GridFunction::sample(0.0, dt, n, |t| r.eval(t)).unwrap();
        let rms = (even_moment(&wg, k, 0.0, h, None).unwrap().value / h)
            .powf(0.5 / k as f64);
        prop_assume!(rms > 1e-6);
        let m = c * rms;
        let r_moment = abs_odd_moment(&rg, k, 0.0, h, None).unwrap();
        let v = lemma5_certify(&wg, k, m, 0.0, h, r_moment.value + r_moment.error).unwrap();
        if v.conclusion_available {
            let slack = 0.5 * dt * (w.slope_bound() + r.slope_bound());
            let sum: Vec<f64> = wg.values.iter().zip(&rg.values).map(|(a, b)| a + b).collect();
            let max = sum.iter().cloned().fold(f64::MIN, f64::max) + slack;
            let min = sum.iter().cloned().fold(f64::MAX, f64::min) - slack;
            prop_assert!(max >= m / 8.0 * (1.0 - 1e-6));
            prop_assert!(-min >= m / 8.0 * (1.0 - 1e-6));
        }
    }
}
