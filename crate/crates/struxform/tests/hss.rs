use struxform::hss::{
    build_cv_hss, build_two_level, cv_solve, cv_solve_detailed, from_bytes, sector_partition, separated_factors,
    series_order, to_bytes, SolvePath,
};
use struxform::numkernel::{norm2_estimate, rel_err, ComplexVector, LuFactors};
use struxform::random::InstanceRng;
use struxform::structured::CauchySpec;
use struxform::Complex64 as C64;

fn cv_instance(n: usize, seed: u64) -> CauchySpec {
    let mut rng = InstanceRng::new(seed);
    let s = rng.perturbed_circle(n, 0.05, 0.3);
    CauchySpec::cv(s, rng.unit()).unwrap()
}

#[test]
fn series_example_meets_its_bound() {
    let s = ComplexVector::new(vec![C64::new(2.0, 0.0)]).unwrap();
    let t = ComplexVector::new(vec![C64::new(0.5, 0.0)]).unwrap();
    let blk = separated_factors(&s, &t, C64::new(0.0, 0.0), 4).unwrap();
    let approx = blk.left.mul_transpose(&blk.right).unwrap().get(0, 0);
    assert!((approx.re - 0.6640625).abs() < 1e-15);
    assert!((blk.theta - 0.25).abs() < 1e-15 && (blk.delta - 2.0).abs() < 1e-15);
    let err = (approx - 1.0 / 1.5).norm();
    assert!(err <= blk.entry_bound() * (1.0 + 1e-12));
}

#[test]
fn nonneighbor_sectors_are_half_separated() {
    let n = 16;
    let s: ComplexVector = (0..n)
        .map(|i| C64::from_polar(1.0, std::f64::consts::PI * (2 * i + 1) as f64 / n as f64))
        .collect();
    let part = sector_partition(&s, C64::new(1.0, 0.0), 4);
    assert_eq!(part.g, 4);
    for k in 0..part.g {
        let c = part.centers[k];
        let rho = part.col_range(k).map(|l| (part.col_knot(l) - c).norm()).fold(0.0, f64::max);
        for j in (0..part.g).filter(|&j| !part.are_neighbors(j, k)) {
            for p in part.row_positions(j) {
                assert!(rho / (part.row_knot(p) - c).norm() <= 0.5, "sectors {j},{k}");
            }
        }
    }
}

#[test]
fn matvec_error_and_bounds() {
    for (n, b) in [(32, 8), (64, 16), (128, 24), (256, 12)] {
        let spec = cv_instance(n, n as u64);
        let a = build_cv_hss(&spec, b, None).unwrap();
        assert_eq!(a.k, series_order(n, b));
        let e = a.error_matrix().unwrap();
        let c = spec.to_dense();
        let rel = e.frobenius_norm() / c.frobenius_norm();
        assert!(e.frobenius_norm() <= a.truncation_bound + 1e-13 * c.frobenius_norm(), "n={n}");
        let x = InstanceRng::new(1).vector(n);
        let y = a.matvec(&x).unwrap();
        let yd = c.matvec(&x).unwrap();
        let err = rel_err(&y, &yd);
        println!("n={n} b={b} |E|/|C|={rel:.2e} matvec={err:.2e} rank={} sigma={}", a.offdiag_rank(), a.sigma_entries());
        assert!(err <= 3.0 * 2f64.powi(-(b as i32)));
        assert!(a.sigma_entries() <= 3 * a.partition.h * n);
        let yt = a.matvec_transpose(&x).unwrap();
        assert!(rel_err(&yt, &c.matvec_transpose(&x).unwrap()) <= 3.0 * 2f64.powi(-(b as i32)));
    }
}

#[test]
fn solve_round_trip() {
    for n in [16, 64, 256] {
        let spec = cv_instance(n, 7 + n as u64);
        let c = spec.to_dense();
        let a = build_two_level(&spec, 30).unwrap();
        let x = InstanceRng::new(2).vector(n);
        let rhs = c.matvec(&x).unwrap();
        let out = cv_solve_detailed(&a, &rhs).unwrap();
        let res = rel_err(&c.matvec(&out.x).unwrap(), &rhs);
        let lu = LuFactors::new(&c).unwrap();
        let kappa = norm2_estimate(&c) * norm2_estimate(&lu.inverse().unwrap());
        println!("n={n} residual={res:.2e} kappa={kappa:.1e} path={:?}", out.path);
        assert!(matches!(out.path, SolvePath::Woodbury { .. }));
        assert!(res <= 1e-6);
        let _ = cv_solve(&a, &rhs).unwrap();
    }
}

#[test]
fn serialization_is_bit_exact() {
    let a = build_cv_hss(&cv_instance(64, 3), 12, None).unwrap();
    let bytes = to_bytes(&a);
    assert_eq!(&bytes[..6], b"CVHSS1");
    let back = from_bytes(&bytes).unwrap();
    assert_eq!(back, a);
    assert_eq!(to_bytes(&back), bytes);
    assert!(from_bytes(&bytes[..bytes.len() - 3]).is_err());
}
