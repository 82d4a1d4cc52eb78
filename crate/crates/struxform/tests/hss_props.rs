use proptest::prelude::*;
use struxform::hss::{build_cv_hss, build_two_level, cv_solve, separated_factors};
use struxform::numkernel::{norm2_estimate, rel_err, ComplexVector, LuFactors};
use struxform::random::InstanceRng;
use struxform::structured::CauchySpec;
use struxform::Complex64 as C64;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn row_order_does_not_change_the_error(seed in any::<u64>(), log_n in 4u32..=7, b in 8u32..=24) {
        let n = 1usize << log_n;
        let mut rng = InstanceRng::new(seed);
        let s = rng.perturbed_circle(n, 0.05, 0.3);
        let f = rng.unit();
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.index(i + 1));
        }
        let shuffled: ComplexVector = order.iter().map(|&i| s[i]).collect();
        let plain = build_cv_hss(&CauchySpec::cv(s, f).unwrap(), b, None).unwrap();
        let mixed = build_cv_hss(&CauchySpec::cv(shuffled, f).unwrap(), b, None).unwrap();
        let (e1, e2) = (plain.error_matrix().unwrap().frobenius_norm(), mixed.error_matrix().unwrap().frobenius_norm());
        prop_assert!((e1 - e2).abs() <= 1e-12 * e1.max(1.0), "{e1:.6e} vs {e2:.6e}");
    }

    #[test]
    fn solve_error_follows_conditioning(seed in any::<u64>(), log_n in 3u32..=7, b in 24u32..=40) {
        let n = 1usize << log_n;
        let mut rng = InstanceRng::new(seed);
        let s = rng.perturbed_circle(n, 0.05, 0.3);
        let spec = CauchySpec::cv(s, rng.unit()).unwrap();
        let c = spec.to_dense();
        let x = rng.vector(n);
        let rhs = c.matvec(&x).unwrap();
        let a = build_two_level(&spec, b).unwrap();
        let solved = cv_solve(&a, &rhs).unwrap();
        let kappa = norm2_estimate(&c) * norm2_estimate(&LuFactors::new(&c).unwrap().inverse().unwrap());
        let err = rel_err(&solved, &x);
        prop_assert!(err <= 10.0 * 2f64.powi(-(b as i32)) * kappa, "error {err:.3e} kappa {kappa:.3e}");
    }

    #[test]
    fn expansion_entries_meet_the_bound(seed in any::<u64>(), rows in 1usize..12, cols in 1usize..12, k in 1usize..30, ratio in 0.05f64..0.9) {
        let mut rng = InstanceRng::new(seed);
        let c = rng.complex();
        let t: ComplexVector = (0..cols).map(|_| c + rng.unit() * rng.uniform(0.0, ratio)).collect();
        let s: ComplexVector = (0..rows).map(|_| c + rng.unit() * rng.uniform(1.0, 3.0)).collect();
        let blk = separated_factors(&s, &t, c, k).unwrap();
        let approx = blk.left.mul_transpose(&blk.right).unwrap();
        let bound = blk.entry_bound();
        for i in 0..rows {
            for j in 0..cols {
                let exact = C64::new(1.0, 0.0) / (s[i] - t[j]);
                let err = (approx.get(i, j) - exact).norm();
                prop_assert!(err <= bound * (1.0 + 1e-9) + 1e-14 * exact.norm(), "entry ({i},{j}) {err:.3e} > {bound:.3e}");
            }
        }
    }
}

#[test]
fn overlapping_sets_are_rejected() {
    let s = ComplexVector::new(vec![C64::new(0.5, 0.0)]).unwrap();
    let t = ComplexVector::new(vec![C64::new(1.0, 0.0)]).unwrap();
    assert!(separated_factors(&s, &t, C64::new(0.0, 0.0), 4).is_err());
}
