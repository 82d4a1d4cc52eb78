use struxform::hss::fmm::{direct_sum, CvFmm};
use struxform::numkernel::{rel_err, root_of_unity, tally};
use struxform::random::InstanceRng;
use struxform::Complex64 as C64;

#[test]
fn nested_expansions_match_direct_summation() {
    let mut prev = 0u64;
    for (n, b) in [(64, 16), (256, 16), (512, 24), (1024, 16), (2048, 30), (4096, 16), (8192, 40), (8192, 8)] {
        let mut rng = InstanceRng::new(n as u64);
        let f = rng.unit();
        let s = rng.perturbed_circle(n, 0.05, 0.4);
        let x = rng.vector(n);
        let fmm = CvFmm::new(&s, f, b).unwrap();
        let (y, ops) = tally::measure(|| fmm.apply(&x).unwrap());
        let t: Vec<C64> = (0..n).map(|j| f * root_of_unity(n, j as i64)).collect();
        let yd = direct_sum(&s, &t, &x).unwrap();
        let err = rel_err(&y, &yd);
        println!(
            "n={n} b={b} err={err:.2e} ops={ops} ratio={:.2} p={} depth={} sep={:.3}",
            ops as f64 / prev.max(1) as f64,
            fmm.order(),
            fmm.depth(),
            fmm.separation
        );
        prev = ops;
        assert!(err <= 2f64.powi(-(b as i32)), "n={n}");
    }
}

#[test]
fn far_and_interior_targets_are_handled() {
    let n = 512;
    let mut rng = InstanceRng::new(11);
    let mut s = rng.annulus(n / 2, 0.2, 0.6).into_vec();
    s.extend(rng.annulus(n / 2, 1.5, 3.0).iter().copied());
    let x = rng.vector(n);
    let f = C64::new(1.0, 0.0);
    let y = CvFmm::new(&s, f, 20).unwrap().apply(&x).unwrap();
    let t: Vec<C64> = (0..n).map(|j| f * root_of_unity(n, j as i64)).collect();
    assert!(rel_err(&y, &direct_sum(&s, &t, &x).unwrap()) <= 2f64.powi(-20));
}

#[test]
fn op_count_grows_near_linearly() {
    for b in [16u32, 24] {
        let mut prev = 0u64;
        let mut line = format!("b={b}:");
        for n in [256usize, 512, 1024, 2048, 4096, 8192] {
            let mut rng = InstanceRng::new(n as u64 + b as u64);
            let s = rng.perturbed_circle(n, 0.05, 0.4);
            let x = rng.vector(n);
            let fmm = CvFmm::new(&s, rng.unit(), b).unwrap();
            let (_, ops) = tally::measure(|| fmm.apply(&x).unwrap());
            if prev > 0 {
                let r = ops as f64 / prev as f64;
                line += &format!(" {r:.2}");
                assert!(r <= 2.4, "b={b} n={n} ratio {r:.2}");
            }
            prev = ops;
        }
        println!("{line}");
    }
}
