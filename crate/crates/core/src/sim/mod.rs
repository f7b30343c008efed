// SPDX-License-Identifier: Apache-2.0

//! Circuit model and the two simulation backends.

mod circuit;
mod engine;
mod neuron;
mod params;

pub use circuit::{
    CircuitError, CircuitGraph, Endpoint, Neuron, NeuronId, ProjectionId, Source, SourceId,
    Synapse, SynapseId, Violation,
};
pub use engine::{run, Backend, SimConfig, SimError};
pub use neuron::{
    abstract_tick, calibrate_unit_current, lif_tick, minimal_firing_current, NeuronState,
    UNIT_HEADROOM,
};
pub use params::{NeuronParams, TICK_MS};
