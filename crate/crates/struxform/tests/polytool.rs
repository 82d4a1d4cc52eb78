use struxform::displacement::{DisplacementGenerator, OperatorSpec};
use struxform::numkernel::{dft, rel_err, ComplexVector, LuFactors};
use struxform::polytool::{
    cauchy_like_solve, cv_matvec, interpolate, monic_from_roots, multipoint_eval, rational_eval,
    vandermonde_matvec_stable,
};
use struxform::random::InstanceRng;
use struxform::structured::poly::{horner, SubproductTree};
use struxform::structured::{dft_grid, generator_action, vandermonde_dense, CauchySpec};
use struxform::Complex64 as C64;

fn vnorm(s: &ComplexVector) -> f64 {
    vandermonde_dense(s).frobenius_norm()
}

#[test]
fn stable_vandermonde_product_matches_horner() {
    for (n, b, lo, hi) in [(64, 30, 0.5, 2.0), (64, 40, 0.95, 1.05), (33, 20, 0.7, 1.3)] {
        let mut rng = InstanceRng::new(n as u64);
        let s = rng.annulus(n, lo, hi);
        let x = rng.vector(n);
        let y = vandermonde_matvec_stable(&s, &x, b).unwrap();
        let exact: Vec<C64> = s.iter().map(|&z| horner(&x, z)).collect();
        let err = y.sub(&exact).norm2();
        let bound = 4.0 * 2f64.powi(-(b as i32)) * vnorm(&s) * x.norm2();
        println!("n={n} b={b} err={err:.2e} bound={bound:.2e}");
        assert!(err <= bound);
    }
}

#[test]
fn roots_of_unity_reduce_to_the_dft() {
    let n = 16;
    let x = InstanceRng::new(2).vector(n);
    let s = dft_grid(n, C64::new(1.0, 0.0));
    let y = vandermonde_matvec_stable(&s, &x, 40).unwrap();
    assert!(rel_err(&y, &dft(&x)) < 1e-11);
}

#[test]
fn interpolation_round_trip() {
    for (n, seed) in [(64, 1u64), (512, 2)] {
        let mut rng = InstanceRng::new(seed);
        let s = rng.perturbed_circle(n, 0.05, 0.3);
        let p = rng.vector(n);
        let v = multipoint_eval(&p, &s, 40).unwrap();
        let back = interpolate(&v, &s, 40).unwrap();
        let err = rel_err(&back.coefficients, &p);
        println!("n={n} err={err:.2e} kappa={:.2e} path={:?}", back.condition_estimate, back.path);
        assert!(err <= 1e-6);
    }
}

#[test]
fn two_point_interpolation() {
    let s = ComplexVector::from_real(&[1.0, -1.0]);
    let v = ComplexVector::from_real(&[3.0, 1.0]);
    let p = interpolate(&v, &s, 30).unwrap().coefficients;
    assert!(rel_err(&p, &[C64::new(2.0, 0.0), C64::new(1.0, 0.0)]) < 1e-10);
}

#[test]
fn monic_coefficients_match_product_tree() {
    let t = InstanceRng::new(5).annulus(16, 0.8, 1.2);
    let got = monic_from_roots(&t, 40).unwrap();
    let tree = SubproductTree::new(&t);
    let full = tree.root_poly();
    assert!(rel_err(&got, &full[..16]) < 1e-7);
    let pair = monic_from_roots(&ComplexVector::from_real(&[1.0, -1.0]), 30).unwrap();
    assert!(rel_err(&pair, &[C64::new(-1.0, 0.0), C64::new(0.0, 0.0)]) < 1e-10);
}

#[test]
fn rational_evaluation_on_both_paths() {
    let one = ComplexVector::from_real(&[1.0]);
    let v = rational_eval(&one, &ComplexVector::from_real(&[0.0]), &ComplexVector::from_real(&[2.0]), 30).unwrap();
    assert!((v[0] - C64::new(0.5, 0.0)).norm() < 1e-12);
    let mut rng = InstanceRng::new(8);
    for t in [dft_grid(32, rng.unit()), rng.annulus(16, 0.8, 1.2)] {
        let n = t.len();
        let s = rng.annulus(n, 1.4, 1.8);
        let u = rng.vector(n);
        let got = rational_eval(&u, &t, &s, 30).unwrap();
        let exact = CauchySpec::new(s.clone(), t.clone()).unwrap().to_dense().matvec(&u).unwrap();
        println!("n={n} err={:.2e}", rel_err(&got, &exact));
        assert!(rel_err(&got, &exact) < 1e-6);
    }
}

#[test]
fn cv_matvec_columns() {
    let n = 64;
    let mut rng = InstanceRng::new(9);
    let spec = CauchySpec::cv(rng.perturbed_circle(n, 0.05, 0.3), rng.unit()).unwrap();
    let c = spec.to_dense();
    let x = rng.vector(n);
    assert!(rel_err(&cv_matvec(&spec, &x, 16).unwrap(), &c.matvec(&x).unwrap()) <= 2.0 * 2f64.powi(-16));
    let e3 = ComplexVector::basis(n, 3);
    assert!(rel_err(&cv_matvec(&spec, &e3, 30).unwrap(), &c.column(3)) < 1e-8);
}

fn angle(i: usize, offset: f64, n: usize) -> f64 {
    std::f64::consts::TAU * (i as f64 + offset) / n as f64
}

#[test]
fn cauchy_like_solve_residuals() {
    let n = 32;
    let mut rng = InstanceRng::new(12);
    for d in [1, 2] {
        let s: ComplexVector = (0..n).map(|i| C64::from_polar(1.0 + rng.uniform(-0.03, 0.03), angle(i, 0.25 + rng.uniform(-0.1, 0.1), n))).collect();
        let t: ComplexVector = (0..n).map(|j| C64::from_polar(1.0 + rng.uniform(-0.03, 0.03), angle(j, 0.75 + rng.uniform(-0.1, 0.1), n))).collect();
        let g = DisplacementGenerator::new(OperatorSpec::diag(s), OperatorSpec::diag(t), rng.matrix(n, d), rng.matrix(n, d)).unwrap();
        let m = generator_action(&g).unwrap().to_dense().unwrap();
        let x = ComplexVector::ones(n);
        let rhs = m.matvec(&x).unwrap();
        let got = cauchy_like_solve(&g, &rhs, 30).unwrap();
        let res = rel_err(&m.matvec(&got).unwrap(), &rhs);
        let dense = LuFactors::new(&m).unwrap().solve(&rhs).unwrap();
        println!("d={d} residual={res:.2e} vs dense {:.2e}", rel_err(&got, &dense));
        assert!(res <= 1e-5);
    }
}
