use proptest::prelude::*;
use struxform::displacement::{DisplacementGenerator, OperatorSpec};
use struxform::numkernel::{dense_solve, rel_err, DenseMatrix};
use struxform::random::InstanceRng;
use struxform::structured::{dft_grid, generator_action};
use struxform::transform::{execute_plan, growth_bound, plan_with_order, Multiplier, PlanParams, PlanStep, StructureClass};

fn dense_term(m: &Multiplier, n: usize) -> DenseMatrix {
    match &m.term {
        Some((x, y)) => DenseMatrix::from_fn(n, n, |i, j| x[i] * y[j]),
        None => DenseMatrix::zeros(n, n),
    }
}

fn left_gap(m: &Multiplier, n: usize) -> f64 {
    let p = m.op.to_dense().unwrap();
    let lhs = m.to.to_dense(n).matmul(&p).unwrap().sub(&p.matmul(&m.from.to_dense(n)).unwrap()).unwrap();
    let term = dense_term(m, n);
    lhs.sub(&term).unwrap().frobenius_norm() / (p.frobenius_norm() + term.frobenius_norm())
}

fn right_gap(m: &Multiplier, n: usize) -> f64 {
    let q = m.op.to_dense().unwrap();
    let lhs = m.from.to_dense(n).matmul(&q).unwrap().sub(&q.matmul(&m.to.to_dense(n)).unwrap()).unwrap();
    let term = dense_term(m, n);
    lhs.sub(&term).unwrap().frobenius_norm() / (q.frobenius_norm() + term.frobenius_norm())
}

fn class_ops(class: StructureClass, rng: &mut InstanceRng, n: usize) -> (OperatorSpec, OperatorSpec) {
    let (e, f) = (rng.complex(), rng.complex());
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

fn class_strategy() -> impl Strategy<Value = StructureClass> {
    prop::sample::select(StructureClass::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multipliers_satisfy_their_identities(seed in any::<u64>(), n in 2usize..24, on_grid in any::<bool>()) {
        let mut rng = InstanceRng::new(seed);
        let (e, f) = (rng.complex(), rng.complex());
        let grid = on_grid.then(|| rng.unit());
        let s = match grid {
            Some(g) => dft_grid(n, g),
            None => rng.annulus(n, 0.4, 0.9),
        };
        let t = rng.annulus(n, 1.2, 1.6);
        let left = [
            Multiplier::reflect(&OperatorSpec::shift(e), n),
            Multiplier::left_vandermonde(e, &s, grid),
            Multiplier::left_vandermonde_reflected(e, &s, grid),
            Multiplier::left_vandermonde_t(&s, e, grid),
            Multiplier::left_reflected_vandermonde_t(&s, e, grid),
            Multiplier::left_cauchy(&s, &t).unwrap(),
        ];
        for m in &left {
            let gap = left_gap(m, n);
            prop_assert!(gap <= 1e-10, "left {} gap {:.3e}", m.label, gap);
        }
        let right = [
            Multiplier::reflect(&OperatorSpec::shift_t(f), n),
            Multiplier::right_reflected_vandermonde_t(f, &s, grid),
            Multiplier::right_vandermonde_t(f, &s, grid),
            Multiplier::right_vandermonde(&s, e, grid),
            Multiplier::right_vandermonde_reflected(&s, e, grid),
            Multiplier::right_cauchy(&s, &t).unwrap(),
        ];
        for m in &right {
            let gap = right_gap(m, n);
            prop_assert!(gap <= 1e-10, "right {} gap {:.3e}", m.label, gap);
        }
    }

    #[test]
    fn transformed_length_stays_within_growth(seed in any::<u64>(), source in class_strategy(), target in class_strategy(), d in 1usize..4, prefer_dft in any::<bool>()) {
        prop_assume!(source != target);
        let n = 12;
        let mut rng = InstanceRng::new(seed);
        let (a, b) = class_ops(source, &mut rng, n);
        let g = DisplacementGenerator::new(a, b, rng.matrix(n, d), rng.matrix(n, d)).unwrap();
        let m = generator_action(&g).unwrap();
        let params = PlanParams { prefer_dft, ..PlanParams::default() };
        let plan = plan_with_order(source, target, &g.a, &g.b, &params, n).unwrap();
        let out = execute_plan(&plan, &g, &m).unwrap();
        prop_assert!(out.generator.len() <= d + growth_bound(source, target));
        let back = generator_action(&out.generator).unwrap().to_dense().unwrap();
        prop_assert!(rel_err(back.data(), out.action.to_dense().unwrap().data()) <= 1e-8);
    }

    #[test]
    fn solving_the_transformed_system_recovers_the_original(seed in any::<u64>(), source in class_strategy(), target in class_strategy()) {
        prop_assume!(source != target);
        let (n, d) = (10, 2);
        let mut rng = InstanceRng::new(seed);
        let (a, b) = class_ops(source, &mut rng, n);
        let g = DisplacementGenerator::new(a, b, rng.matrix(n, d), rng.matrix(n, d)).unwrap();
        let m = generator_action(&g).unwrap();
        let dense_m = m.to_dense().unwrap();
        let rhs = rng.vector(n);
        let plan = plan_with_order(source, target, &g.a, &g.b, &PlanParams::default(), n).unwrap();
        prop_assume!(plan.steps.iter().all(|s| !matches!(s, PlanStep::DftToeplitzToCauchy)));
        let out = execute_plan(&plan, &g, &m).unwrap();

        let mut p = DenseMatrix::identity(n);
        let mut q = DenseMatrix::identity(n);
        for step in &plan.steps {
            match step {
                PlanStep::Left(mult) => p = mult.op.to_dense().unwrap().matmul(&p).unwrap(),
                PlanStep::Right(mult) => q = q.matmul(&mult.op.to_dense().unwrap()).unwrap(),
                PlanStep::DftToeplitzToCauchy => unreachable!(),
            }
        }
        let pmq = p.matmul(&dense_m).unwrap().matmul(&q).unwrap();
        prop_assert!(rel_err(pmq.data(), out.action.to_dense().unwrap().data()) <= 1e-8);
        let Ok(y) = dense_solve(&pmq, &p.matvec(&rhs).unwrap()) else {
            return Ok(());
        };
        let Ok(expected) = dense_solve(&dense_m, &rhs) else {
            return Ok(());
        };
        let recovered = q.matvec(&y).unwrap();
        let kappa = condition(&pmq) * condition(&dense_m);
        prop_assume!(kappa < 1e8);
        prop_assert!(rel_err(&recovered, &expected) <= 1e-8, "error {:.3e}", rel_err(&recovered, &expected));
    }
}

fn condition(m: &DenseMatrix) -> f64 {
    use struxform::numkernel::{norm2_estimate, LuFactors};
    match LuFactors::new(m).and_then(|lu| lu.inverse()) {
        Ok(inv) => norm2_estimate(m) * norm2_estimate(&inv),
        Err(_) => f64::INFINITY,
    }
}
