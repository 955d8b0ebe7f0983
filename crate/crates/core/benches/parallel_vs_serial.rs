//! Criterion comparison of the data-parallel batch operations against the
//! sequential fallback: characteristic-bundle tracing and pointwise envelope
//! sweeps, at several worker counts. Build with `--no-default-features` to
//! measure the compiled-out sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lageuler::bounds;
use lageuler::characteristics::{self, Family};
use lageuler::field::Field;
use lageuler::gas::GasModel;
use lageuler::par;
use lageuler::profile::{GaussianBump, InitialData};
use std::sync::Arc;

fn bench_field(n: usize) -> Field {
    let m = GasModel::with_gamma(1.4).unwrap();
    Field::from_fn(
        m,
        -10.0,
        10.0,
        n,
        2.0,
        n.min(512),
        |t, x| 1.0 + 0.05 * (x - 0.3 * t).sin(),
        |t, x| 0.05 * (x + 0.2 * t).cos(),
        |_| 1.0,
    )
    .unwrap()
}

fn trace_bundle(c: &mut Criterion) {
    let field = bench_field(1024);
    let starts: Vec<(f64, f64)> = (0..512).map(|i| (0.0, -8.0 + 16.0 * i as f64 / 511.0)).collect();
    let mut group = c.benchmark_group("trace_bundle_512");
    let jobs_list: &[Option<usize>] = if cfg!(feature = "parallel") {
        &[Some(1), Some(2), Some(4), None]
    } else {
        &[None]
    };
    for jobs in jobs_list {
        let label = match jobs {
            Some(n) => format!("jobs{n}"),
            None => {
                if cfg!(feature = "parallel") {
                    "jobs-default".into()
                } else {
                    "sequential".into()
                }
            }
        };
        group.bench_with_input(BenchmarkId::from_parameter(label), jobs, |b, jobs| {
            b.iter(|| {
                par::with_jobs(*jobs, || {
                    characteristics::trace_batch(&field, &starts, Family::Forward, Some(2e-3))
                })
            })
        });
    }
    group.finish();
}

fn envelope_sweep(c: &mut Criterion) {
    let m = GasModel::with_gamma(1.4).unwrap();
    let data = InitialData::new(
        Arc::new(GaussianBump {
            a_base: 1.0,
            a_amp: 0.05,
            u_amp: 0.0,
            center: 0.0,
            width: 1.0,
            s: 0.0,
            window: (-10.0, 10.0),
        }),
        m,
    );
    let f = bounds::initial_functionals(&data, 1024).unwrap();
    let field = bench_field(1024);
    let mut group = c.benchmark_group("envelope_sweep_1024x512");
    let jobs_list: &[Option<usize>] =
        if cfg!(feature = "parallel") { &[Some(1), Some(4)] } else { &[None] };
    for jobs in jobs_list {
        let label = match jobs {
            Some(n) => format!("jobs{n}"),
            None => "sequential".into(),
        };
        group.bench_with_input(BenchmarkId::from_parameter(label), jobs, |b, jobs| {
            b.iter(|| par::with_jobs(*jobs, || bounds::density_envelope_check(&field, &f, 1e-8)))
        });
    }
    group.finish();
}

criterion_group!(benches, trace_bundle, envelope_sweep);
criterion_main!(benches);
