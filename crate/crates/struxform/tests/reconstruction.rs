use struxform::displacement::{DisplacementGenerator, OperatorSpec};
use struxform::numkernel::rel_err;
use struxform::random::InstanceRng;
use struxform::structured::generator_action;
use struxform::Complex64 as C64;

fn ops(rng: &mut InstanceRng, n: usize) -> Vec<OperatorSpec> {
    let e = C64::new(1.3, 0.4);
    let f = C64::new(-0.7, 0.9);
    let s = rng.annulus(n, 0.3, 0.9);
    let t = rng.annulus(n, 1.2, 1.6);
    vec![
        OperatorSpec::shift(e),
        OperatorSpec::shift_t(f),
        OperatorSpec::diag(s),
        OperatorSpec::shift(C64::new(0.2, -1.1)),
        OperatorSpec::shift_t(C64::new(0.5, -0.8)),
        OperatorSpec::diag(t),
    ]
}

#[test]
fn every_operator_pattern_reconstructs_a_generic_matrix() {
    let n = 9;
    let mut rng = InstanceRng::new(7);
    let list = ops(&mut rng, n);
    let m = rng.matrix(n, n);
    for a in &list[..3] {
        for b in &list[3..] {
            let g = DisplacementGenerator::from_dense(&m, a.clone(), b.clone(), 0.0).unwrap();
            let back = generator_action(&g).unwrap().to_dense().unwrap();
            let err = rel_err(back.data(), m.data());
            assert!(err < 1e-9, "pattern ({}, {}) error {err:.3e}", a.label(), b.label());
        }
    }
}
