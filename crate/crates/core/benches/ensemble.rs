//! Throughput benches: force evaluation and ensemble stepping, sequential
//! rayon pool (1 thread) versus the full machine.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use chiraltrap::medium::{Enantiomer, Regime};
use chiraltrap::setup::{build_setup, ensemble_setup, SetupParams};
use chiraltrap::simulator::{run_ensemble, Initializer, SimulationPlan};

fn bench_force_eval(c: &mut Criterion) {
    let setup = build_setup(&SetupParams::default()).unwrap();
    let model = setup.left.clone();
    c.bench_function("force_total_cyl", |b| {
        let mut i = 0u64;
        b.iter(|| {
            i = i.wrapping_add(1);
            let q = (i % 64) as f64 * 5e-11;
            let z = ((i % 128) as f64 - 64.0) * 5e-10;
            std::hint::black_box(model.total_cyl(q, z))
        })
    });
}

fn bench_ensemble(c: &mut Criterion) {
    let setup = build_setup(&SetupParams {
        regime: Regime::Dissipative,
        ..Default::default()
    })
    .unwrap();
    let plan = SimulationPlan {
        time_step: 0.95e-9,
        n_steps: 4_000,
        n_trajectories: 64,
        master_seed: 99,
        record_stride: 64,
        initializer: Initializer::ModelPdf,
        regime: Regime::Dissipative,
        enantiomer: Enantiomer::Racemic,
        store_trajectories: false,
        allow_unstable_dt: true,
    };
    let ensemble = ensemble_setup(&setup, plan).unwrap();

    let mut group = c.benchmark_group("ensemble_64x4000");
    group.sample_size(10);
    group.bench_function("sequential_1_thread", |b| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        b.iter_batched(
            || (),
            |_| pool.install(|| std::hint::black_box(run_ensemble(&ensemble.spec()).unwrap())),
            BatchSize::PerIteration,
        )
    });
    group.bench_function("parallel_all_threads", |b| {
        b.iter_batched(
            || (),
            |_| std::hint::black_box(run_ensemble(&ensemble.spec()).unwrap()),
            BatchSize::PerIteration,
        )
    });
    group.finish();
}

criterion_group!(benches, bench_force_eval, bench_ensemble);
criterion_main!(benches);
