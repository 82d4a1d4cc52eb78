use proptest::prelude::*;
use struxform::numkernel::{dense_solve, dft, idft, norm2_estimate, truncated_factor, DenseMatrix, LuFactors};
use struxform::random::InstanceRng;
use struxform::Complex64 as C64;

fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Direct `Σ_j ω^{ij} v_j`.
fn naive_dft(v: &[C64]) -> Vec<C64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| v[j] * C64::from_polar(1.0, std::f64::consts::TAU * ((i * j) % n) as f64 / n as f64))
                .sum()
        })
        .collect()
}

#[test]
fn dft_inverts_for_powers_of_two() {
    let mut rng = InstanceRng::new(1);
    for log_n in 1..=10 {
        let n = 1usize << log_n;
        for _ in 0..100 {
            let v = rng.vector(n);
            let back = dft(&idft(&v));
            assert!(max_abs_diff(&back, &v) <= 1e-12 * v.norm2(), "n={n}");
        }
    }
}

#[test]
fn dft_matches_direct_summation_for_any_length() {
    let mut rng = InstanceRng::new(2);
    for n in [1, 3, 5, 6, 12, 16, 30] {
        let v = rng.vector(n);
        let fast = dft(&v);
        let slow = naive_dft(&v);
        assert!(max_abs_diff(&fast, &slow) <= 1e-11 * v.norm2().max(1.0), "n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dft_is_quasi_unitary(seed in any::<u64>(), log_n in 0u32..10) {
        let n = 1usize << log_n;
        let v = InstanceRng::new(seed).vector(n);
        let ratio = dft(&v).norm2() / ((n as f64).sqrt() * v.norm2());
        prop_assert!((ratio - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn truncated_rank_is_stable_under_refactoring(seed in any::<u64>(), rank in 1usize..6, n in 8usize..24) {
        let mut rng = InstanceRng::new(seed);
        let m = rng.matrix(n, rank).mul_transpose(&rng.matrix(n, rank)).unwrap();
        let tol = 1e-10;
        let first = truncated_factor(&m, tol);
        prop_assert_eq!(first.rank(), rank);
        let rebuilt = first.left.mul_transpose(&first.right).unwrap();
        prop_assert!(rebuilt.sub(&m).unwrap().frobenius_norm() <= 10.0 * tol * norm2_estimate(&m) * (n as f64));
        prop_assert_eq!(truncated_factor(&rebuilt, tol).rank(), first.rank());
    }

    #[test]
    fn dense_solve_round_trips(seed in any::<u64>(), n in 1usize..64) {
        let mut rng = InstanceRng::new(seed);
        let m = rng.matrix(n, n).add(&DenseMatrix::identity(n).scale(C64::new(2.0 * (n as f64).sqrt(), 0.0))).unwrap();
        let inv = LuFactors::new(&m).unwrap().inverse().unwrap();
        let kappa = norm2_estimate(&m) * norm2_estimate(&inv);
        prop_assume!(kappa <= 1e6);
        let b = rng.vector(n);
        let x = dense_solve(&m, &b).unwrap();
        let r = m.matvec(&x).unwrap().sub(&b);
        prop_assert!(r.norm2() <= 1e-10 * b.norm2());
    }
}

#[test]
fn dense_solve_round_trips_at_size_256() {
    let n = 256;
    let mut rng = InstanceRng::new(3);
    let m = rng.matrix(n, n).add(&DenseMatrix::identity(n).scale(C64::new(40.0, 0.0))).unwrap();
    let b = rng.vector(n);
    let x = dense_solve(&m, &b).unwrap();
    assert!(m.matvec(&x).unwrap().sub(&b).norm2() <= 1e-10 * b.norm2());
}
