use std::time::Instant;

use serde::Serialize;

use super::{choose_f, interpolate, vandermonde_matvec_stable};
use crate::error::{Result, StruxError};
use crate::hss::fmm::{direct_sum, CvFmm};
use crate::hss::{build_two_level, cv_solve};
use crate::numkernel::{norm2_estimate, rel_err, tally, ComplexVector, DenseMatrix, LuFactors, C64};
use crate::random::InstanceRng;
use crate::structured::poly::horner;
use crate::structured::{vandermonde_dense, vandermonde_matvec_fast, CauchySpec, VandermondeSpec};

/// Largest `n` for which the quadratic oracles run.
const ORACLE_LIMIT: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchTask {
    Eval,
    Interp,
    Matvec,
    Solve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchMethod {
    Fast,
    TwoLevel,
    Dense,
    ProductTree,
}

impl std::str::FromStr for BenchTask {
    type Err = StruxError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eval" => Ok(Self::Eval),
            "interp" => Ok(Self::Interp),
            "matvec" => Ok(Self::Matvec),
            "solve" => Ok(Self::Solve),
            other => Err(StruxError::InvalidInput(format!("unknown bench task {other}"))),
        }
    }
}

impl std::str::FromStr for BenchMethod {
    type Err = StruxError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Self::Fast),
            "two_level" => Ok(Self::TwoLevel),
            "dense" => Ok(Self::Dense),
            "product_tree" => Ok(Self::ProductTree),
            other => Err(StruxError::InvalidInput(format!("unknown method {other}"))),
        }
    }
}

/// One benchmark row; `rel_err` and `bound` are NaN when no oracle ran.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub n: usize,
    pub b: u32,
    pub method: BenchMethod,
    pub wall_ms: f64,
    pub op_tally: u64,
    pub rel_err: f64,
    pub bound: f64,
}

struct Timed<T> {
    value: T,
    wall_ms: f64,
    ops: u64,
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<Timed<T>> {
    let start = Instant::now();
    let (value, ops) = tally::measure(f);
    Ok(Timed {
        value: value?,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        ops,
    })
}

fn unsupported(task: BenchTask, method: BenchMethod) -> StruxError {
    StruxError::InvalidInput(format!("method {method:?} does not apply to task {task:?}"))
}

/// `‖V_s‖_F` without forming `V_s`.
fn vandermonde_frobenius(s: &[C64]) -> f64 {
    let n = s.len();
    s.iter()
        .map(|z| {
            let r2 = z.norm_sqr();
            let mut acc = 0.0;
            let mut t = 1.0;
            for _ in 0..n {
                acc += t;
                t *= r2;
            }
            acc
        })
        .sum::<f64>()
        .sqrt()
}

fn cauchy_frobenius(spec: &CauchySpec) -> f64 {
    let mut acc = 0.0;
    for &s in spec.row_knots.iter() {
        for &t in spec.col_knots.iter() {
            acc += (1.0 / (s - t)).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Runs `task` with `method` at each size, with instances drawn from `seed`.
pub fn run_bench(task: BenchTask, sizes: &[usize], b: u32, method: BenchMethod, seed: u64) -> Result<Vec<BenchReport>> {
    sizes.iter().map(|&n| bench_one(task, n, b, method, seed)).collect()
}

fn bench_one(task: BenchTask, n: usize, b: u32, method: BenchMethod, seed: u64) -> Result<BenchReport> {
    if n == 0 {
        return Err(StruxError::InvalidInput("bench sizes must be positive".into()));
    }
    let mut rng = InstanceRng::new(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    // Solves keep |s_i|ⁿ bounded so the sweep stays well conditioned at large n.
    let radial = match task {
        BenchTask::Interp | BenchTask::Solve => (2.0 / n as f64).min(0.05),
        BenchTask::Eval | BenchTask::Matvec => 0.05,
    };
    let knots = rng.perturbed_circle(n, radial, 0.3);
    let scale = 2f64.powi(-(b as i32));
    let oracle = n <= ORACLE_LIMIT;
    let (timing, rel, bound) = match task {
        BenchTask::Matvec => {
            let spec = CauchySpec::cv(knots, rng.unit())?;
            let x = rng.vector(n);
            let run = match method {
                BenchMethod::Fast => {
                    let f = spec.cv_scale()?;
                    timed(|| CvFmm::new(&spec.row_knots, f, b)?.apply(&x))?
                }
                BenchMethod::TwoLevel => {
                    let a = build_two_level(&spec, b)?;
                    timed(|| a.matvec(&x))?
                }
                BenchMethod::Dense => {
                    let c = spec.to_dense();
                    timed(|| c.matvec(&x))?
                }
                BenchMethod::ProductTree => return Err(unsupported(task, method)),
            };
            if oracle {
                let exact = direct_sum(&spec.row_knots, &spec.col_knots, &x)?;
                let bound = scale * cauchy_frobenius(&spec) * x.norm2() / exact.norm2();
                let rel = rel_err(&run.value, &exact);
                (strip(run), rel, bound)
            } else {
                (strip(run), f64::NAN, f64::NAN)
            }
        }
        BenchTask::Eval => {
            let p = rng.vector(n);
            let run = match method {
                BenchMethod::Fast => timed(|| vandermonde_matvec_stable(&knots, &p, b))?,
                BenchMethod::ProductTree => {
                    let v = VandermondeSpec::new(knots.clone(), false);
                    timed(|| vandermonde_matvec_fast(&v, &p))?
                }
                BenchMethod::Dense => {
                    let v = vandermonde_dense(&knots);
                    timed(|| v.matvec(&p))?
                }
                BenchMethod::TwoLevel => return Err(unsupported(task, method)),
            };
            if oracle {
                let exact: ComplexVector = knots.iter().map(|&z| horner(&p, z)).collect();
                let bound = 4.0 * scale * vandermonde_frobenius(&knots) * p.norm2() / exact.norm2();
                let rel = rel_err(&run.value, &exact);
                (strip(run), rel, bound)
            } else {
                (strip(run), f64::NAN, f64::NAN)
            }
        }
        BenchTask::Interp => {
            let p = rng.vector(n);
            let values: ComplexVector = knots.iter().map(|&z| horner(&p, z)).collect();
            let (run, kappa) = match method {
                BenchMethod::Fast | BenchMethod::TwoLevel => {
                    let run = timed(|| interpolate(&values, &knots, b))?;
                    let kappa = run.value.condition_estimate;
                    (
                        Timed {
                            value: run.value.coefficients,
                            wall_ms: run.wall_ms,
                            ops: run.ops,
                        },
                        kappa,
                    )
                }
                BenchMethod::Dense => {
                    let v = vandermonde_dense(&knots);
                    let run = timed(|| LuFactors::new(&v)?.solve(&values))?;
                    let kappa = condition(&v).unwrap_or(f64::NAN);
                    (run, kappa)
                }
                BenchMethod::ProductTree => return Err(unsupported(task, method)),
            };
            let rel = rel_err(&run.value, &p);
            (strip(run), rel, 4.0 * n as f64 * scale * kappa)
        }
        BenchTask::Solve => {
            let (f, _) = choose_f(&knots);
            let spec = CauchySpec::cv(knots, f)?;
            let x = rng.vector(n);
            let c = (n <= crate::dense_limit()).then(|| spec.to_dense());
            let rhs = direct_sum(&spec.row_knots, &spec.col_knots, &x)?;
            let run = match method {
                BenchMethod::Fast | BenchMethod::TwoLevel => {
                    let a = build_two_level(&spec, b)?;
                    timed(|| cv_solve(&a, &rhs))?
                }
                BenchMethod::Dense => {
                    let dense = c.clone().unwrap_or_else(|| spec.to_dense());
                    timed(|| LuFactors::new(&dense)?.solve(&rhs))?
                }
                BenchMethod::ProductTree => return Err(unsupported(task, method)),
            };
            let residual = rel_err(&direct_sum(&spec.row_knots, &spec.col_knots, &run.value)?, &rhs);
            let kappa = c.as_ref().and_then(|m| condition(m).ok()).unwrap_or(f64::NAN);
            (strip(run), residual, 10.0 * scale * kappa)
        }
    };
    Ok(BenchReport {
        n,
        b,
        method,
        wall_ms: timing.0,
        op_tally: timing.1,
        rel_err: rel,
        bound,
    })
}

fn strip<T>(t: Timed<T>) -> (f64, u64) {
    (t.wall_ms, t.ops)
}

fn condition(m: &DenseMatrix) -> Result<f64> {
    let inv = LuFactors::new(m)?.inverse()?;
    Ok(norm2_estimate(m) * norm2_estimate(&inv))
}
