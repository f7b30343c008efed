// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use spikegate::netlist::{elaborate, format, parse};
use spikegate_bench::xor_netlist;

fn netlist(c: &mut Criterion) {
    let text = xor_netlist(200);
    let ast = parse(&text).unwrap();
    let mut g = c.benchmark_group("netlist_xor200");
    g.throughput(Throughput::Bytes(text.len() as u64));
    g.bench_function("parse", |b| b.iter(|| parse(black_box(&text)).unwrap()));
    g.bench_function("format", |b| b.iter(|| format(black_box(&ast))));
    g.bench_function("elaborate", |b| b.iter(|| elaborate(black_box(&ast)).unwrap()));
    g.finish();
}

criterion_group!(benches, netlist);
criterion_main!(benches);
