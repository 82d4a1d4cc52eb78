use struxform::displacement::{DisplacementGenerator, OperatorSpec};
use struxform::numkernel::{rel_err, DenseMatrix};
use struxform::random::InstanceRng;
use struxform::structured::generator_action;
use struxform::transform::{
    execute_plan, grid_scale, growth_bound, plan_with_order, toeplitz_to_cauchy_dft, PlanParams,
    StructureClass,
};
use struxform::Complex64 as C64;

fn source_ops(class: StructureClass, rng: &mut InstanceRng, n: usize) -> (OperatorSpec, OperatorSpec) {
    let e = C64::new(1.3, 0.4);
    let f = C64::new(-0.7, 0.9);
    match class {
        StructureClass::T => (OperatorSpec::shift(e), OperatorSpec::shift(f)),
        StructureClass::H => (OperatorSpec::shift_t(e), OperatorSpec::shift(f)),
        StructureClass::V => (OperatorSpec::diag(rng.annulus(n, 0.4, 0.9)), OperatorSpec::shift(f)),
        StructureClass::VT => (OperatorSpec::shift_t(e), OperatorSpec::diag(rng.annulus(n, 0.4, 0.9))),
        StructureClass::C => (
            OperatorSpec::diag(rng.annulus(n, 0.3, 0.8)),
            OperatorSpec::diag(rng.annulus(n, 1.2, 1.7)),
        ),
    }
}

fn random_generator(a: OperatorSpec, b: OperatorSpec, rng: &mut InstanceRng, n: usize, d: usize) -> DisplacementGenerator {
    DisplacementGenerator::new(a, b, rng.matrix(n, d), rng.matrix(n, d)).unwrap()
}

fn dense_displacement(a: &OperatorSpec, b: &OperatorSpec, m: &DenseMatrix) -> DenseMatrix {
    let n = m.rows();
    a.to_dense(n)
        .matmul(m)
        .unwrap()
        .sub(&m.matmul(&b.to_dense(n)).unwrap())
        .unwrap()
}

fn check_pair(source: StructureClass, target: StructureClass, params: &PlanParams, seed: u64) -> usize {
    let (n, d) = (16, 2);
    let mut rng = InstanceRng::new(seed);
    let (a, b) = source_ops(source, &mut rng, n);
    let g = random_generator(a, b, &mut rng, n, d);
    let m = generator_action(&g).unwrap();
    let plan = plan_with_order(source, target, &g.a, &g.b, params, n).unwrap();
    let out = execute_plan(&plan, &g, &m).unwrap();
    assert_eq!(StructureClass::of(&out.generator.a, &out.generator.b), Some(target));

    let product = out.action.to_dense().unwrap();
    let lhs = dense_displacement(&out.generator.a, &out.generator.b, &product);
    let rhs = out.generator.displacement();
    let scale = product.frobenius_norm().max(1.0);
    let err = lhs.sub(&rhs).unwrap().frobenius_norm() / scale;
    assert!(err < 1e-9, "{source:?}->{target:?} displacement error {err:.3e}");

    let back = generator_action(&out.generator).unwrap().to_dense().unwrap();
    let err = rel_err(back.data(), product.data());
    assert!(err < 1e-9, "{source:?}->{target:?} reconstruction error {err:.3e}");

    let len = out.generator.len();
    assert!(len <= d + growth_bound(source, target), "{source:?}->{target:?} length {len}");
    len
}

#[test]
fn all_class_pairs_preserve_the_represented_product() {
    let mut seed = 100;
    for source in StructureClass::ALL {
        for target in StructureClass::ALL {
            if source == target {
                continue;
            }
            seed += 1;
            check_pair(source, target, &PlanParams::default(), seed);
        }
    }
}

#[test]
fn generic_knots_reach_the_worst_case_length() {
    let params = PlanParams {
        prefer_dft: false,
        ..PlanParams::default()
    };
    for (source, target) in [(StructureClass::T, StructureClass::V), (StructureClass::V, StructureClass::C)] {
        let len = check_pair(source, target, &params, 5);
        assert_eq!(len, 2 + growth_bound(source, target));
    }
}

#[test]
fn root_of_unity_knots_keep_the_length() {
    for target in [StructureClass::V, StructureClass::VT, StructureClass::C] {
        let len = check_pair(StructureClass::T, target, &PlanParams::default(), 9);
        assert_eq!(len, 2, "T->{target:?}");
    }
}

#[test]
fn hankel_in_either_orientation_is_accepted() {
    let n = 8;
    let mut rng = InstanceRng::new(3);
    let g = random_generator(
        OperatorSpec::shift(C64::new(0.5, 0.5)),
        OperatorSpec::shift_t(C64::new(-1.0, 0.2)),
        &mut rng,
        n,
        2,
    );
    let m = generator_action(&g).unwrap();
    let plan = plan_with_order(StructureClass::H, StructureClass::T, &g.a, &g.b, &PlanParams::default(), n).unwrap();
    let out = execute_plan(&plan, &g, &m).unwrap();
    let product = out.action.to_dense().unwrap();
    let back = generator_action(&out.generator).unwrap().to_dense().unwrap();
    assert!(rel_err(back.data(), product.data()) < 1e-9);
}

#[test]
fn dft_toeplitz_to_cauchy_is_norm_preserving() {
    let n = 16;
    let mut rng = InstanceRng::new(21);
    let g = random_generator(OperatorSpec::shift(C64::new(1.0, 0.0)), OperatorSpec::shift(C64::new(-1.0, 0.0)), &mut rng, n, 2);
    let m = generator_action(&g).unwrap();
    let out = toeplitz_to_cauchy_dft(&g, &m).unwrap();
    assert_eq!(out.generator.len(), 2);
    let c = out.action.to_dense().unwrap();
    let lhs = dense_displacement(&out.generator.a, &out.generator.b, &c);
    let err = lhs.sub(&out.generator.displacement()).unwrap().frobenius_norm() / c.frobenius_norm();
    assert!(err < 1e-10, "displacement error {err:.3e}");
    let ratio = c.frobenius_norm() / m.to_dense().unwrap().frobenius_norm();
    assert!((ratio - 1.0).abs() < 1e-10, "norm ratio {ratio}");
    assert!(grid_scale(out.generator.a.knots().unwrap()).is_some());
}

#[test]
fn plan_rejects_mismatched_operators() {
    let a = OperatorSpec::shift(C64::new(1.0, 0.0));
    let b = OperatorSpec::shift(C64::new(-1.0, 0.0));
    assert!(plan_with_order(StructureClass::V, StructureClass::T, &a, &b, &PlanParams::default(), 4).is_err());
}
