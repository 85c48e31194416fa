//! Prime tables, W(t) and the full prime-power sum.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use s1lab::dirichlet::{
    build_table, build_table_cached, cache_path, full_lambda_sum, w_grid, w_point, CHUNK,
};
use s1lab::numeric::quad::simpson;
use s1lab::LabError;

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// W(t) by trial division over all n ≤ e^τ, plain summation.
fn naive_w(t: f64, tau: f64) -> f64 {
    let mut s = 0.0;
    let mut n = 2u64;
    while (n as f64).ln() <= tau {
        if is_prime(n) {
            let l = (n as f64).ln();
            s += (t * l).cos() / ((n as f64).sqrt() * l) * (1.0 - l / tau);
        }
        n += 1;
    }
    s
}

#[test]
fn small_tables() {
    let t = build_table(1.0).unwrap();
    assert_eq!(t.primes(), &[2]);
    assert_eq!(t.prime_powers().len(), 1);
    assert_eq!(t.prime_powers()[0].n, 2);
    assert_eq!(t.prime_powers()[0].lambda, 2f64.ln());

    let t = build_table(3.0).unwrap();
    assert_eq!(t.primes(), &[2, 3, 5, 7, 11, 13, 17, 19]);
    let ns: Vec<u64> = t.prime_powers().iter().map(|p| p.n).collect();
    assert_eq!(ns, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
    for pp in t.prime_powers() {
        assert_eq!(pp.lambda, (pp.p as f64).ln());
    }

    let t = build_table(2f64.ln() - 0.01).unwrap();
    assert!(t.primes().is_empty() && t.prime_powers().is_empty());
    assert_eq!(w_point(3.0, &t), 0.0);
    assert_eq!(full_lambda_sum(3.0, &t), 0.0);
}

#[test]
fn table_domain() {
    assert!(matches!(build_table(0.0), Err(LabError::Domain(_))));
    assert!(matches!(build_table(31.0), Err(LabError::Domain(_))));
    assert!(matches!(build_table(25.0), Err(LabError::Resource(_))));
}

#[test]
fn table_is_complete_against_trial_division() {
    let t = build_table(9.0).unwrap();
    let limit = t.limit();
    let expected: Vec<u64> = (2..=limit).filter(|&n| is_prime(n)).collect();
    assert_eq!(t.primes(), expected.as_slice());
    for pp in t.prime_powers() {
        assert!((pp.n as f64).ln() <= 9.0);
        let mut m = pp.n;
        while m % pp.p == 0 {
            m /= pp.p;
        }
        assert_eq!(m, 1);
    }
    let mut ns: Vec<u64> = t.prime_powers().iter().map(|p| p.n).collect();
    ns.dedup();
    assert_eq!(ns.len(), t.prime_powers().len());
}

#[test]
fn w_point_values() {
    let t1 = build_table(1.0).unwrap();
    let l2 = 2f64.ln();
    let want = 1.0 / (2f64.sqrt() * l2) * (1.0 - l2);
    assert!((w_point(0.0, &t1) - want).abs() < 1e-15);
    assert!((w_point(0.0, &t1) - 0.3130).abs() < 1e-4);
    let t8 = build_table(8.0).unwrap();
    assert!((w_point(1000.0, &t8) - naive_w(1000.0, 8.0)).abs() < 1e-12);
}

#[test]
fn full_lambda_sum_values() {
    let t1 = build_table(1.0).unwrap();
    let l2 = 2f64.ln();
    let want = 2.0 * l2 / (2f64.sqrt() * l2 * l2) * (1.0 - l2);
    assert!((full_lambda_sum(0.0, &t1) - want).abs() < 1e-15);
    // Twice the single W term 0.31303…, i.e. 0.62607….
    assert!((want - 2.0 * w_point(0.0, &t1)).abs() < 1e-15);
    assert!((want - 0.62607).abs() < 1e-5);
    for tau in [3.0, 4.0, 8.0, 12.0, 16.0] {
        let table = build_table(tau).unwrap();
        for t in [0.0, 100.0, 1234.5] {
            let rem = full_lambda_sum(t, &table) - 2.0 / tau * w_point(t, &table);
            assert!(rem.abs() < 1.3 / tau, "tau = {tau}, t = {t}: {rem}");
        }
    }
}

#[test]
fn grid_matches_points() {
    let table = build_table(8.0).unwrap();
    let n = 100_000;
    let (t0, dt) = (1000.0, 0.01);
    let g = w_grid(t0, dt, n, &table).unwrap();
    assert_eq!(g.len(), n);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let i = rng.gen_range(0..n);
        worst = worst.max((g.values[i] - w_point(t0 + i as f64 * dt, &table)).abs());
    }
    // The last point of each chunk has the most accumulated rotation drift.
    for c in 0..(n / CHUNK) {
        let i = c * CHUNK + CHUNK - 1;
        worst = worst.max((g.values[i] - w_point(t0 + i as f64 * dt, &table)).abs());
    }
    // At t ≈ 2000 the phase t·log p is itself only known to about 2·10⁻¹², so the
    // grid and the pointwise sum agree to that floor.
    assert!(worst < 2e-12, "{worst:e}");

    let one = w_grid(12.5, 0.1, 1, &table).unwrap();
    assert_eq!(one.values[0], w_point(12.5, &table));
}

#[test]
fn grid_rotation_drift_over_a_chunk_with_large_steps() {
    let table = build_table(6.0).unwrap();
    // |dt·log p| up to 20 per step.
    let dt = 20.0 / 6.0;
    let g = w_grid(50.0, dt, CHUNK, &table).unwrap();
    let i = CHUNK - 1;
    let drift = (g.values[i] - w_point(50.0 + i as f64 * dt, &table)).abs();
    assert!(drift < 1e-10, "{drift:e}");
}

#[test]
fn grid_budget_is_enforced() {
    let table = build_table(16.0).unwrap();
    let n = (1e11 / table.primes().len() as f64) as usize + 10;
    assert!(matches!(
        w_grid(0.0, 1.0, n, &table),
        Err(LabError::Resource(_))
    ));
}

#[test]
fn mean_value_is_small() {
    let table = build_table(8.0).unwrap();
    let (t, h, dt): (f64, f64, f64) = (1e3, 1e4, 0.01);
    let n = (h / dt).round() as usize + 1;
    let g = w_grid(t, dt, n, &table).unwrap();
    let mean = simpson(&g.values, dt) / h;
    let envelope = 3.0 * table.sum_sq().sqrt() / h.sqrt();
    assert!(mean.abs() <= envelope, "{mean} vs {envelope}");
}

#[test]
fn cache_round_trip_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let built = build_table(10.0).unwrap();
    let first = build_table_cached(10.0, Some(dir.path())).unwrap();
    assert!(cache_path(dir.path(), 10.0).exists());
    let second = build_table_cached(10.0, Some(dir.path())).unwrap();
    assert_eq!(built, first);
    assert_eq!(built, second);
    let text = std::fs::read_to_string(cache_path(dir.path(), 10.0)).unwrap();
    assert!(text.starts_with("# s1lab prime-power table"));
    // A corrupted cache is rebuilt.
    std::fs::write(cache_path(dir.path(), 10.0), "garbage\n").unwrap();
    assert_eq!(build_table_cached(10.0, Some(dir.path())).unwrap(), built);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn w_is_bounded_by_coefficient_sum(t in -1e6f64..1e6, tau in 2.0f64..9.0) {
        let table = build_table(tau).unwrap();
        prop_assert!(w_point(t, &table).abs() <= table.abs_bound() + 1e-12);
    }
}
