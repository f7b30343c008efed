// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use spikegate::gate_test::{gate_test, GateTestConfig};
use spikegate::{run, Backend, BlockKind, SimConfig};
use spikegate_bench::and_chain;

fn backends(c: &mut Criterion) {
    let horizon = 1000;
    let circuit = and_chain(32, 4, horizon);
    let mut g = c.benchmark_group("and_chain_32x4");
    g.throughput(Throughput::Elements(horizon));
    for backend in Backend::ALL {
        let cfg = SimConfig::new(backend, horizon);
        g.bench_with_input(BenchmarkId::from_parameter(backend), &cfg, |b, cfg| {
            b.iter(|| run(black_box(&circuit), cfg).unwrap())
        });
    }
    g.finish();
}

fn gate_tests(c: &mut Criterion) {
    let mut g = c.benchmark_group("gate_test");
    g.sample_size(10);
    for kind in [BlockKind::Xor, BlockKind::FlankDetector] {
        let cfg = GateTestConfig {
            trials: 20,
            ..GateTestConfig::new(kind, kind.has_arity().then_some(4))
        };
        g.bench_with_input(BenchmarkId::from_parameter(kind), &cfg, |b, cfg| {
            b.iter(|| gate_test(cfg).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, backends, gate_tests);
criterion_main!(benches);
