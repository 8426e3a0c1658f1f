use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cqie_core::dynamics::{run_protocol_with, BathParameters};
use cqie_core::par::Execution;
use cqie_core::schedule::{make_original_protocol, make_quench_protocol, EnergyScales};
use cqie_core::topology::build_square_lattice;

fn shots(c: &mut Criterion) {
    let topo = build_square_lattice(8, true).unwrap();
    let scales = EnergyScales::surrogate();
    let bath = BathParameters::new(33.0).with_sweeps_per_microsecond(10.0).with_trotter_slices(8);
    let cases = [
        ("classical", make_quench_protocol(0.6, 0.5, 0.12).unwrap()),
        ("pimc", make_original_protocol(0.4, 0.5, 0.12).unwrap()),
    ];

    let mut group = c.benchmark_group("run_protocol_64_shots");
    group.sample_size(10);
    for (name, sched) in &cases {
        for (mode, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(*name, mode), &exec, |b, &exec| {
                b.iter(|| run_protocol_with(&topo, sched, &scales, &bath, 64, 1, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, shots);
criterion_main!(benches);
