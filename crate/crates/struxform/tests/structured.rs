use proptest::prelude::*;
use struxform::numkernel::{dense_solve, rel_err, root_of_unity, ComplexVector, DenseMatrix};
use struxform::random::InstanceRng;
use struxform::structured::poly::{horner, multipoint_eval_tree};
use struxform::structured::{
    dft_vandermonde_matvec, f_circulant_matvec, hankel_matvec, toeplitz_matvec, vandermonde_matvec_fast,
    CauchySpec, FCirculantSpec, HankelSpec, ToeplitzSpec, VandermondeSpec,
};
use struxform::Complex64 as C64;

const ONE: C64 = C64::new(1.0, 0.0);

fn naive(entry: impl Fn(usize, usize) -> C64, x: &[C64]) -> Vec<C64> {
    let n = x.len();
    (0..n).map(|i| (0..n).map(|j| entry(i, j) * x[j]).sum()).collect()
}

/// `Z_f` as a dense matrix: ones on the subdiagonal, `f` in the corner.
fn shift_matrix(n: usize, f: C64) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            ONE
        } else if i == 0 && j + 1 == n {
            f
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn monic_value(roots: &[C64], z: C64) -> C64 {
    roots.iter().map(|&t| z - t).product()
}

fn monic_derivative(roots: &[C64], k: usize) -> C64 {
    roots
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, &t)| roots[k] - t)
        .product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn toeplitz_and_hankel_products_match_dense(seed in any::<u64>(), n in 1usize..=256) {
        let mut rng = InstanceRng::new(seed);
        let (col, mut row) = (rng.vector(n), rng.vector(n));
        row[0] = col[0];
        let x = rng.vector(n);
        let t = ToeplitzSpec::new(col.clone(), row.clone()).unwrap();
        let oracle = naive(|i, j| if i >= j { col[i - j] } else { row[j - i] }, &x);
        prop_assert!(rel_err(&toeplitz_matvec(&t, &x).unwrap(), &oracle) <= 1e-11);

        let values = rng.vector(2 * n - 1);
        let h = HankelSpec::new(values.clone()).unwrap();
        let oracle = naive(|i, j| values[i + j], &x);
        prop_assert!(rel_err(&hankel_matvec(&h, &x).unwrap(), &oracle) <= 1e-11);
    }

    #[test]
    fn circulant_products_match_shift_powers(seed in any::<u64>(), n in 1usize..=48) {
        let mut rng = InstanceRng::new(seed);
        let f = rng.complex();
        let v = rng.vector(n);
        let x = rng.vector(n);
        let z = shift_matrix(n, f);
        let mut power = DenseMatrix::identity(n);
        let mut sum = DenseMatrix::zeros(n, n);
        for &vi in v.iter() {
            sum = sum.add(&power.scale(vi)).unwrap();
            power = z.matmul(&power).unwrap();
        }
        let oracle = sum.matvec(&x).unwrap();
        let fast = f_circulant_matvec(&FCirculantSpec::new(f, v), &x).unwrap();
        prop_assert!(rel_err(&fast, &oracle) <= 1e-11);
    }

    #[test]
    fn dft_vandermonde_matches_knot_powers(seed in any::<u64>(), log_n in 0u32..=8) {
        let n = 1usize << log_n;
        let mut rng = InstanceRng::new(seed);
        let f = rng.unit();
        let x = rng.vector(n);
        let knots: Vec<C64> = (0..n).map(|i| f * root_of_unity(n, i as i64)).collect();
        let oracle: Vec<C64> = knots.iter().map(|&z| horner(&x, z)).collect();
        prop_assert!(rel_err(&dft_vandermonde_matvec(f, &x, false).unwrap(), &oracle) <= 1e-11);
        let back = dft_vandermonde_matvec(f, &oracle, true).unwrap();
        prop_assert!(rel_err(&back, &x) <= 1e-11);
    }

    #[test]
    fn product_tree_matches_horner(seed in any::<u64>(), n in 1usize..=32) {
        let mut rng = InstanceRng::new(seed);
        let p = rng.vector(n);
        let knots = rng.disk(n);
        let oracle: Vec<C64> = knots.iter().map(|&z| horner(&p, z)).collect();
        let tree = multipoint_eval_tree(&p, &knots);
        prop_assert!(rel_err(&tree, &oracle) <= 1e-8);
        let spec = VandermondeSpec::new(knots, false);
        prop_assert!(rel_err(&vandermonde_matvec_fast(&spec, &p).unwrap(), &oracle) <= 1e-8);
    }

    #[test]
    fn cauchy_factors_through_vandermonde(seed in any::<u64>(), n in 1usize..=32) {
        let mut rng = InstanceRng::new(seed);
        let s = rng.perturbed_circle(n, 0.2, 0.3);
        let t = rng.perturbed_circle(n, 0.05, 0.3).scaled(C64::new(0.6, 0.0));
        let spec = CauchySpec::new(s.clone(), t.clone()).unwrap();
        let x = rng.vector(n);
        let oracle = naive(|i, j| ONE / (s[i] - t[j]), &x);
        // diag(1/τ(s))·V_s·V_t⁻¹·diag(τ′(t))·x with τ the monic polynomial on t.
        let vt = DenseMatrix::from_fn(n, n, |i, j| t[i].powu(j as u32));
        let vs = DenseMatrix::from_fn(n, n, |i, j| s[i].powu(j as u32));
        let scaled: Vec<C64> = (0..n).map(|k| monic_derivative(&t, k) * x[k]).collect();
        let coeffs = dense_solve(&vt, &scaled).unwrap();
        let through = vs.matvec(&coeffs).unwrap();
        let factored: ComplexVector = (0..n).map(|i| through[i] / monic_value(&t, s[i])).collect();
        prop_assert!(rel_err(&factored, &oracle) <= 1e-8);
        prop_assert!(rel_err(&spec.to_dense().matvec(&x).unwrap(), &oracle) <= 1e-13);
    }
}

#[test]
fn carriers_reject_malformed_input() {
    let v = ComplexVector::ones(3);
    assert!(ToeplitzSpec::new(v.clone(), ComplexVector::ones(4)).is_err());
    assert!(ToeplitzSpec::new(v.clone(), ComplexVector::zeros(3)).is_err());
    assert!(HankelSpec::new(ComplexVector::ones(4)).is_err());
    assert!(CauchySpec::new(v.clone(), v.clone()).is_err());
    let repeated = ComplexVector::new(vec![ONE, ONE.scale(2.0), ONE]).unwrap();
    assert!(CauchySpec::new(repeated, ComplexVector::zeros(3)).is_err());
}
