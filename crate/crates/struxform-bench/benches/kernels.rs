use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use struxform::hss::fmm::CvFmm;
use struxform::hss::{build_cv_hss, build_two_level};
use struxform::polytool::multipoint_eval;
use struxform_bench::{cv_instance, poly_instance, SIZES};

const BITS: u32 = 24;

fn cv_matvec(c: &mut Criterion) {
    let mut group = c.benchmark_group("cv_matvec");
    for n in SIZES {
        let (spec, x) = cv_instance(n, 1);
        let fmm = CvFmm::new(&spec.row_knots, spec.cv_scale().unwrap(), BITS).unwrap();
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("fmm", n), &x, |b, x| b.iter(|| fmm.apply(x).unwrap()));
        let two = build_two_level(&spec, BITS).unwrap();
        group.bench_with_input(BenchmarkId::new("two_level", n), &x, |b, x| b.iter(|| two.matvec(x).unwrap()));
        if n <= 1024 {
            let dense = spec.to_dense();
            group.bench_with_input(BenchmarkId::new("dense", n), &x, |b, x| b.iter(|| dense.matvec(x).unwrap()));
        }
    }
    group.finish();
}

fn approximation_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("approximation_build");
    group.sample_size(10);
    for n in SIZES {
        let (spec, _) = cv_instance(n, 2);
        group.bench_with_input(BenchmarkId::new("sectors", n), &spec, |b, s| b.iter(|| build_cv_hss(s, BITS, None).unwrap()));
        group.bench_with_input(BenchmarkId::new("fmm", n), &spec, |b, s| {
            b.iter(|| CvFmm::new(&s.row_knots, s.cv_scale().unwrap(), BITS).unwrap())
        });
    }
    group.finish();
}

fn evaluation(c: &mut Criterion) {
    let mut group = c.benchmark_group("multipoint_eval");
    group.sample_size(20);
    for n in SIZES {
        let (knots, p) = poly_instance(n, 3);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &(knots, p), |b, (k, p)| {
            b.iter(|| multipoint_eval(p, k, BITS).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cv_matvec, approximation_build, evaluation);
criterion_main!(benches);
