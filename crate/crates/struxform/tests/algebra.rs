use proptest::prelude::*;
use struxform::displacement::{
    displacement_rank, gen_inverse, gen_product, gen_scale_add, gen_transpose, recompress, DisplacementGenerator,
    OperatorSpec,
};
use struxform::numkernel::{DenseMatrix, LuFactors};
use struxform::random::InstanceRng;
use struxform::structured::generator_action;
use struxform::Complex64 as C64;

const ONE: C64 = C64::new(1.0, 0.0);

/// `‖A·M − M·B − F·Gᵀ‖` relative to `‖M‖ + ‖F·Gᵀ‖`, all dense.
fn residual(g: &DisplacementGenerator, m: &DenseMatrix) -> f64 {
    let n = m.rows();
    let fg = g.f_factor.mul_transpose(&g.g_factor).unwrap();
    let lhs = g.a.to_dense(n).matmul(m).unwrap().sub(&m.matmul(&g.b.to_dense(n)).unwrap()).unwrap();
    lhs.sub(&fg).unwrap().frobenius_norm() / (m.frobenius_norm() + fg.frobenius_norm())
}

fn dense_of(g: &DisplacementGenerator) -> DenseMatrix {
    generator_action(g).unwrap().to_dense().unwrap()
}

fn toeplitz(rng: &mut InstanceRng, n: usize) -> DenseMatrix {
    let col = rng.vector(n);
    let row = rng.vector(n);
    DenseMatrix::from_fn(n, n, |i, j| if i >= j { col[i - j] } else if j > i { row[j - i] } else { col[0] })
}

fn ops(kind: u8, rng: &mut InstanceRng, n: usize) -> (OperatorSpec, OperatorSpec) {
    match kind % 4 {
        0 => (OperatorSpec::shift(ONE), OperatorSpec::shift(-ONE)),
        1 => (OperatorSpec::shift(C64::new(0.3, 0.9)), OperatorSpec::shift_t(C64::new(-1.2, 0.1))),
        2 => (OperatorSpec::diag(rng.annulus(n, 0.3, 0.8)), OperatorSpec::shift(C64::new(0.0, 1.0))),
        _ => (OperatorSpec::diag(rng.annulus(n, 0.3, 0.8)), OperatorSpec::diag(rng.annulus(n, 1.2, 1.6))),
    }
}

fn random_generator(kind: u8, rng: &mut InstanceRng, n: usize, d: usize) -> DisplacementGenerator {
    let (a, b) = ops(kind, rng, n);
    DisplacementGenerator::new(a, b, rng.matrix(n, d), rng.matrix(n, d)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sums_keep_the_displacement_equation(seed in any::<u64>(), kind in 0u8..4, n in 2usize..40, d1 in 1usize..4, d2 in 1usize..4) {
        let mut rng = InstanceRng::new(seed);
        let g1 = random_generator(kind, &mut rng, n, d1);
        let g2 = DisplacementGenerator::new(g1.a.clone(), g1.b.clone(), rng.matrix(n, d2), rng.matrix(n, d2)).unwrap();
        let (alpha, beta) = (rng.complex(), rng.complex());
        let sum = gen_scale_add(alpha, &g1, beta, &g2).unwrap();
        prop_assert!(sum.len() <= d1 + d2);
        let m = dense_of(&sum);
        prop_assert!(residual(&sum, &m) <= 1e-10);
        let oracle = dense_of(&g1).scale(alpha).add(&dense_of(&g2).scale(beta)).unwrap();
        prop_assert!(m.sub(&oracle).unwrap().frobenius_norm() <= 1e-9 * oracle.frobenius_norm());
    }

    #[test]
    fn transposes_keep_length_and_equation(seed in any::<u64>(), kind in 0u8..4, n in 2usize..40, d in 1usize..4) {
        let mut rng = InstanceRng::new(seed);
        let g = random_generator(kind, &mut rng, n, d);
        let t = gen_transpose(&g);
        prop_assert_eq!(t.len(), g.len());
        let mt = dense_of(&g).transpose();
        prop_assert!(residual(&t, &mt) <= 1e-10);
    }

    #[test]
    fn products_respect_the_length_bound(seed in any::<u64>(), n in 2usize..32, d1 in 1usize..4, d2 in 1usize..4) {
        let mut rng = InstanceRng::new(seed);
        let s = rng.annulus(n, 0.2, 0.5);
        let t = rng.annulus(n, 0.8, 1.1);
        let u = rng.annulus(n, 1.4, 1.8);
        let gm = DisplacementGenerator::new(OperatorSpec::diag(s), OperatorSpec::diag(t.clone()), rng.matrix(n, d1), rng.matrix(n, d1)).unwrap();
        let gn = DisplacementGenerator::new(OperatorSpec::diag(t), OperatorSpec::diag(u), rng.matrix(n, d2), rng.matrix(n, d2)).unwrap();
        let (m, nn) = (dense_of(&gm), dense_of(&gn));
        let p = gen_product(&gm, &m, &gn, &nn).unwrap();
        prop_assert!(p.len() <= d1 + d2);
        let oracle = m.matmul(&nn).unwrap();
        prop_assert!(residual(&p, &oracle) <= 1e-10);
    }

    #[test]
    fn inverses_keep_length(seed in any::<u64>(), n in 2usize..32) {
        let mut rng = InstanceRng::new(seed);
        let m = toeplitz(&mut rng, n).add(&DenseMatrix::identity(n).scale(C64::new(3.0 * n as f64, 0.0))).unwrap();
        let g = DisplacementGenerator::from_dense(&m, OperatorSpec::shift(ONE), OperatorSpec::shift(-ONE), 1e-12).unwrap();
        let lu = LuFactors::new(&m).unwrap();
        let inv = gen_inverse(&g, &lu).unwrap();
        prop_assert_eq!(inv.len(), g.len());
        let oracle = lu.inverse().unwrap();
        prop_assert!(residual(&inv, &oracle) <= 1e-10);
    }

    #[test]
    fn recompression_never_lengthens(seed in any::<u64>(), kind in 0u8..4, n in 2usize..32, d in 1usize..4, extra in 0usize..4) {
        let mut rng = InstanceRng::new(seed);
        let g = random_generator(kind, &mut rng, n, d);
        // Append columns that are combinations of existing ones.
        let mix = rng.matrix(d, extra.max(1));
        let f_extra = g.f_factor.matmul(&mix).unwrap().take_columns(extra);
        let g_zero = DenseMatrix::zeros(n, extra);
        let padded = DisplacementGenerator::new(
            g.a.clone(),
            g.b.clone(),
            g.f_factor.hcat(&f_extra).unwrap(),
            g.g_factor.hcat(&g_zero).unwrap(),
        )
        .unwrap();
        let tol = 1e-12;
        let short = recompress(&padded, tol);
        prop_assert!(short.len() <= padded.len());
        prop_assert!(short.len() <= d);
        let before = padded.displacement();
        let drift = short.displacement().sub(&before).unwrap().frobenius_norm();
        prop_assert!(drift <= 10.0 * tol * before.frobenius_norm() * (n as f64).sqrt());
    }
}

/// Changing the shift scalars moves a displacement rank by at most one.
#[test]
fn shift_scalars_change_rank_by_at_most_one() {
    let n = 24;
    let mut rng = InstanceRng::new(17);
    for _ in 0..50 {
        let m = toeplitz(&mut rng, n);
        let (e, f, e2, f2) = (rng.unit(), rng.unit() * 1.5, rng.complex(), rng.complex());
        let base = displacement_rank(&m, &OperatorSpec::shift(e), &OperatorSpec::shift(f), 1e-10).unwrap();
        let moved = displacement_rank(&m, &OperatorSpec::shift(e2), &OperatorSpec::shift(f2), 1e-10).unwrap();
        assert!(base.abs_diff(moved) <= 1, "{base} vs {moved}");
    }
}
