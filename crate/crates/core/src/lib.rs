// SPDX-License-Identifier: Apache-2.0

//! Discrete-time spiking neural network simulator with a library of
//! spike-based logic building blocks.
//!
//! * [`sim`]: circuit model plus LIF and threshold-gate backends.
//! * [`blocks`]: OR, AND (classic and fast), SR latch, switch, XOR, constant
//!   spike source, NOT, synchronous oscillator and flank detector builders.
//! * [`oracle`]: reference semantics of every block over spike trains.
//! * [`netlist`]: the `.snl` circuit description language.
//! * [`trace_io`]: trace rendering, export and comparison.
//! * [`gate_test`] and [`repro`]: randomized block-vs-oracle checks and the
//!   bundled experiment netlists.

pub mod blocks;
pub mod netlist;
pub mod oracle;
pub mod repro;
pub mod sim;
pub mod trace;
pub mod trace_io;

pub use blocks::{BlockHandle, BlockKind, Latency, Resources, SharedCss};
pub use sim::{run, Backend, CircuitGraph, Endpoint, NeuronParams, SimConfig};
pub use trace::{SpikeTrain, Tick, Trace};
