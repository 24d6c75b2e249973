//! Parallel-vs-sequential throughput of the data-parallel cores: the
//! per-mode chain integration and a duration sweep of the two-level model.
//! With `--no-default-features` only the sequential path exists.

use criterion::{criterion_group, criterion_main, Criterion};
use qanneal::dynamics::{evolve_lz, excess_work_ti, IntegratorSpec};
use qanneal::models::{ModelParams, Protocol};

fn chain_modes(c: &mut Criterion) {
    let params = ModelParams::new(1.0, 1.0).unwrap();
    let spec = IntegratorSpec::default();
    let n = 64;
    let tau = params.tau_from_scaled_ti(1.0, n);
    let protocol = Protocol::linear_symmetric(tau).unwrap();

    let mut group = c.benchmark_group("ti_work_n64");
    group.sample_size(10);
    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        group.bench_function("sequential", |b| {
            b.iter(|| {
                single.install(|| excess_work_ti(&params, &protocol, n, &spec).unwrap().total)
            })
        });
        group.bench_function("parallel", |b| {
            b.iter(|| excess_work_ti(&params, &protocol, n, &spec).unwrap().total)
        });
    }
    #[cfg(not(feature = "parallel"))]
    group.bench_function("sequential", |b| {
        b.iter(|| excess_work_ti(&params, &protocol, n, &spec).unwrap().total)
    });
    group.finish();
}

fn crossing_sweep(c: &mut Criterion) {
    let params = ModelParams::new(1.0, 10.0).unwrap();
    let spec = IntegratorSpec::default();
    let taus: Vec<f64> = (0..24)
        .map(|i| params.tau_from_scaled_lz(0.05 * 10f64.powf(i as f64 / 23.0 * 2.0)))
        .collect();
    let point = |tau: f64| {
        evolve_lz(&params, &Protocol::linear_symmetric(tau).unwrap(), &spec)
            .unwrap()
            .p_excite
    };

    let mut group = c.benchmark_group("lz_sweep_24pts");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| taus.iter().map(|&t| point(t)).sum::<f64>())
    });
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        group.bench_function("parallel", |b| {
            b.iter(|| taus.par_iter().map(|&t| point(t)).sum::<f64>())
        });
    }
    group.finish();
}

criterion_group!(benches, chain_modes, crossing_sweep);
criterion_main!(benches);
