// SPDX-License-Identifier: Apache-2.0

//! Benchmark fixtures.

use spikegate::blocks::{self, OutputPort};
use spikegate::CircuitGraph;

/// A chain of `depth` classic ANDs of width `n`; each stage's output feeds
/// every input of the next, and stage 0 is driven by a source spiking on
/// every tick.
pub fn and_chain(depth: usize, n: usize, horizon: u64) -> CircuitGraph {
    let mut c = CircuitGraph::new();
    let src = c.add_source("clk", (0..horizon).collect()).unwrap();
    let mut prev = OutputPort::from_source(&c, src);
    for d in 0..depth {
        let h = blocks::build_and_classic(&mut c, &format!("and{d}"), n).unwrap();
        for term in &h.inputs {
            blocks::connect(&mut c, &prev, term, 0).unwrap();
        }
        prev = h.out().clone();
    }
    c
}

/// A netlist with `count` XOR blocks, each driven by its own sources.
pub fn xor_netlist(count: usize) -> String {
    let mut s = String::new();
    for i in 0..count {
        s.push_str(&format!("source a{i} spikes=[1,3,5,7,9,11]\n"));
        s.push_str(&format!("source b{i} spikes=[2,3,6,7,10,11]\n"));
        s.push_str(&format!("block xor x{i} inputs=2\n"));
        s.push_str(&format!("connect a{i} -> x{i}.in0\nconnect b{i} -> x{i}.in1 delay=+1\n"));
        s.push_str(&format!("probe x{i}.out\n"));
    }
    s.push_str("run 64\n");
    s
}
