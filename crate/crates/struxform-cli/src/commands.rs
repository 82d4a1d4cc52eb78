use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use struxform::hss::{build_cv_hss, build_two_level, cv_solve_detailed, from_bytes, to_bytes, CvHssApprox, SolvePath};
use struxform::json::{GeneratorJson, Structured, StructuredJson, TransformReportJson};
use struxform::numkernel::{dense_solve, DenseMatrix};
use struxform::polytool::{
    cauchy_like_solve, cv_matvec, interpolate, multipoint_eval, run_bench, BenchMethod, BenchTask,
};
use struxform::random::InstanceRng;
use struxform::structured::poly::multipoint_eval_tree;
use struxform::structured::{
    f_circulant_matvec, generator_action, hankel_matvec, toeplitz_matvec, vandermonde_dense,
    vandermonde_matvec_fast,
};
use struxform::transform::{execute_plan, plan_transform, PlanParams};
use struxform::{CauchySpec, ComplexVector, DisplacementGenerator, OperatorSpec, StructureClass, StruxError};

use crate::io::{read_json, read_vector, write_json, write_text, write_vector};
use crate::{Command, Common, Method};

const DEFAULT_N: usize = 64;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Eval { coeffs, knots, common } => eval(coeffs.as_deref(), knots.as_deref(), &common),
        Command::Interp { values, knots, common } => interp(values.as_deref(), knots.as_deref(), &common),
        Command::Matvec { cauchy, approx, x, h, common } => {
            matvec(cauchy.as_deref(), approx.as_deref(), x.as_deref(), h, &common)
        }
        Command::Solve { cauchy, generator, rhs, common } => {
            solve(cauchy.as_deref(), generator.as_deref(), rhs.as_deref(), &common)
        }
        Command::Transform { generator, to, report, common } => transform(&generator, &to, report.as_deref(), &common),
        Command::Approx { cauchy, h, common } => approx(cauchy.as_deref(), h, &common),
        Command::Bench { task, sizes, b, method, seed, out } => bench(&task, &sizes, b, method, seed, out.as_deref()),
    }
}

/// Draws the random pieces used when an input file is omitted.
struct Instance {
    rng: InstanceRng,
    n: Option<usize>,
}

impl Instance {
    fn new(common: &Common) -> Self {
        Self { rng: InstanceRng::new(common.seed), n: common.n }
    }

    fn size(&self, known: Option<usize>) -> usize {
        known.or(self.n).unwrap_or(DEFAULT_N)
    }

    fn knots(&mut self, path: Option<&Path>, known: Option<usize>) -> Result<ComplexVector> {
        match path {
            Some(p) => read_vector(p),
            None => {
                let n = self.size(known);
                Ok(self.rng.perturbed_circle(n, 0.05, 0.3))
            }
        }
    }

    fn vector(&mut self, path: Option<&Path>, known: Option<usize>) -> Result<ComplexVector> {
        match path {
            Some(p) => read_vector(p),
            None => {
                let n = self.size(known);
                Ok(self.rng.vector(n))
            }
        }
    }

    fn structured(&mut self, path: Option<&Path>) -> Result<Structured> {
        match path {
            Some(p) => {
                let s: StructuredJson = read_json(p)?;
                Ok(Structured::try_from(&s)?)
            }
            None => {
                let n = self.size(None);
                let s = self.rng.perturbed_circle(n, 0.05, 0.3);
                let f = self.rng.unit();
                Ok(Structured::Cauchy(CauchySpec::cv(s, f)?))
            }
        }
    }
}

fn columns(m: &Structured) -> usize {
    match m {
        Structured::Toeplitz(t) => t.dim(),
        Structured::Hankel(h) => h.dim(),
        Structured::Vandermonde(v) => v.dim(),
        Structured::Cauchy(c) => c.cols(),
        Structured::FCirculant(c) => c.dim(),
    }
}

fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        bail!(StruxError::DimensionMismatch { context, expected, found });
    }
    Ok(())
}

fn eval(coeffs: Option<&Path>, knots: Option<&Path>, common: &Common) -> Result<()> {
    let mut inst = Instance::new(common);
    let s = inst.knots(knots, None)?;
    let p = inst.vector(coeffs, Some(s.len()))?;
    let values = match common.method {
        Method::Fast => multipoint_eval(&p, &s, common.b)?,
        Method::Dense => {
            check_len("coefficients", s.len(), p.len())?;
            vandermonde_dense(&s).matvec(&p)?
        }
        Method::ProductTree => ComplexVector::new(multipoint_eval_tree(&p, &s))?,
        Method::TwoLevel => bail!(StruxError::InvalidInput("two_level does not apply to eval".into())),
    };
    write_vector(common.out.as_deref(), &values)
}

fn interp(values: Option<&Path>, knots: Option<&Path>, common: &Common) -> Result<()> {
    let mut inst = Instance::new(common);
    let s = inst.knots(knots, None)?;
    let v = inst.vector(values, Some(s.len()))?;
    let coeffs = match common.method {
        Method::Fast => {
            let result = interpolate(&v, &s, common.b)?;
            if let Some(w) = &result.warning {
                eprintln!("warning: {w}");
            }
            result.coefficients
        }
        Method::Dense => {
            check_len("values", s.len(), v.len())?;
            dense_solve(&vandermonde_dense(&s), &v)?
        }
        other => bail!(StruxError::InvalidInput(format!("{other:?} does not apply to interp"))),
    };
    write_vector(common.out.as_deref(), &coeffs)
}

fn cv_approx(spec: &CauchySpec, b: u32, h: Option<usize>, method: Method) -> Result<CvHssApprox> {
    Ok(match method {
        Method::TwoLevel if h.is_none() => build_two_level(spec, b)?.0,
        _ => build_cv_hss(spec, b, h)?,
    })
}

fn matvec(
    matrix: Option<&Path>,
    approx: Option<&Path>,
    x: Option<&Path>,
    h: Option<usize>,
    common: &Common,
) -> Result<()> {
    let mut inst = Instance::new(common);
    if let Some(path) = approx {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let a = from_bytes(&bytes)?;
        let x = inst.vector(x, Some(a.dim()))?;
        return write_vector(common.out.as_deref(), &a.matvec(&x)?);
    }
    let m = inst.structured(matrix)?;
    let n = columns(&m);
    let x = inst.vector(x, Some(n))?;
    let dense = || -> Result<ComplexVector> { Ok(m.to_dense().matvec(&x)?) };
    let y = match (&m, common.method) {
        (_, Method::Dense) => dense()?,
        (Structured::Cauchy(spec), Method::Fast) if spec.cv_scale().is_ok() => cv_matvec(spec, &x, common.b)?,
        (Structured::Cauchy(spec), Method::TwoLevel) => {
            cv_approx(spec, common.b, h, Method::TwoLevel)?.matvec(&x)?
        }
        (Structured::Cauchy(_), Method::Fast) => dense()?,
        (Structured::Toeplitz(t), Method::Fast) => toeplitz_matvec(t, &x)?,
        (Structured::Hankel(hk), Method::Fast) => hankel_matvec(hk, &x)?,
        (Structured::FCirculant(c), Method::Fast) => f_circulant_matvec(c, &x)?,
        (Structured::Vandermonde(v), Method::Fast) => vandermonde_matvec_fast(v, &x)?,
        (_, other) => bail!(StruxError::InvalidInput(format!("{other:?} does not apply to this matrix"))),
    };
    write_vector(common.out.as_deref(), &y)
}

fn solve(cauchy: Option<&Path>, generator: Option<&Path>, rhs: Option<&Path>, common: &Common) -> Result<()> {
    let mut inst = Instance::new(common);
    let x = if let Some(path) = generator {
        let gj: GeneratorJson = read_json(path)?;
        let g = DisplacementGenerator::try_from(&gj)?;
        let rhs = inst.vector(rhs, Some(g.dim()))?;
        match common.method {
            Method::Dense => dense_solve(&generator_action(&g)?.to_dense()?, &rhs)?,
            _ => cauchy_like_solve(&g, &rhs, common.b)?,
        }
    } else {
        let Structured::Cauchy(spec) = inst.structured(cauchy)? else {
            bail!(StruxError::InvalidInput("solve expects a Cauchy matrix".into()));
        };
        let rhs = inst.vector(rhs, Some(spec.rows()))?;
        if common.method == Method::Dense {
            dense_solve(&spec.to_dense(), &rhs)?
        } else if spec.cv_scale().is_ok() {
            let a = cv_approx(&spec, common.b, None, common.method)?;
            let outcome = cv_solve_detailed(&a, &rhs)?;
            if let SolvePath::DenseFallback { reason } = &outcome.path {
                eprintln!("note: dense fallback ({reason})");
            }
            outcome.x
        } else {
            let n = spec.rows();
            let ones = DenseMatrix::from_columns(n, &[&vec![struxform::Complex64::new(1.0, 0.0); n]]);
            let g = DisplacementGenerator::new(
                OperatorSpec::diag(spec.row_knots.clone()),
                OperatorSpec::diag(spec.col_knots.clone()),
                ones.clone(),
                ones,
            )?;
            cauchy_like_solve(&g, &rhs, common.b)?
        }
    };
    write_vector(common.out.as_deref(), &x)
}

fn transform(path: &Path, to: &str, report: Option<&Path>, common: &Common) -> Result<()> {
    let gj: GeneratorJson = read_json(path)?;
    let g = DisplacementGenerator::try_from(&gj)?;
    let target: StructureClass = to.parse()?;
    let Some(source) = StructureClass::of(&g.a, &g.b) else {
        bail!(StruxError::OperatorMismatch(format!(
            "operators ({}, {}) form no supported class",
            g.a.label(),
            g.b.label()
        )));
    };
    let plan = plan_transform(source, target, &g.a, &g.b, &PlanParams::default())
        .or_else(|_| struxform::transform::plan_with_order(source, target, &g.a, &g.b, &PlanParams::default(), g.dim()))?;
    let m = generator_action(&g)?;
    let out = execute_plan(&plan, &g, &m)?;

    let mut rng = InstanceRng::new(common.seed);
    let probe = rng.vector(g.dim());
    let h = &out.generator;
    let bx = h.b.apply(&probe)?;
    let a_px = h.a.apply(&out.action.apply(&probe)?)?;
    let p_bx = out.action.apply(&bx)?;
    let gtx = h.g_factor.matvec_transpose(&probe)?;
    let fgx = h.f_factor.matvec(&gtx)?;
    let diff = a_px.sub(&p_bx).sub(&fgx);
    let residual = diff.norm2() / (a_px.norm2() + p_bx.norm2()).max(f64::MIN_POSITIVE);

    let summary = TransformReportJson {
        input_length: g.len(),
        output_length: h.len(),
        residual,
    };
    match report {
        Some(p) => write_json(Some(p), &summary)?,
        None => eprintln!("{}", struxform::json::render(&summary)),
    }
    write_json(common.out.as_deref(), &GeneratorJson::from(h))
}

fn approx(cauchy: Option<&Path>, h: Option<usize>, common: &Common) -> Result<()> {
    let mut inst = Instance::new(common);
    let Structured::Cauchy(spec) = inst.structured(cauchy)? else {
        bail!(StruxError::InvalidInput("approx expects a Cauchy matrix on a grid".into()));
    };
    let a = cv_approx(&spec, common.b, h, common.method)?;
    let Some(out) = common.out.as_deref() else {
        bail!(StruxError::InvalidInput("approx needs --out".into()));
    };
    fs::write(out, to_bytes(&a)).with_context(|| format!("writing {}", out.display()))?;
    eprintln!(
        "n={} sectors={} h={} k={} offdiag_rank={} bound={:.3e}",
        a.dim(),
        a.partition.g,
        a.partition.h,
        a.k,
        a.offdiag_rank(),
        a.truncation_bound
    );
    Ok(())
}

fn bench(task: &str, sizes: &[usize], b: u32, method: Method, seed: u64, out: Option<&Path>) -> Result<()> {
    let task: BenchTask = task.parse()?;
    let method = match method {
        Method::Fast => BenchMethod::Fast,
        Method::TwoLevel => BenchMethod::TwoLevel,
        Method::Dense => BenchMethod::Dense,
        Method::ProductTree => BenchMethod::ProductTree,
    };
    let rows = run_bench(task, sizes, b, method, seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row)?;
    }
    let text = String::from_utf8(w.into_inner()?)?;
    write_text(out, text.trim_end())
}
