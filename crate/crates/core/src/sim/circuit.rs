// SPDX-License-Identifier: Apache-2.0

//! Circuit data model: neurons, spike sources, synapses and probes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::params::NeuronParams;
use crate::trace::{SpikeTrain, Tick};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NeuronId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SynapseId(pub u32);

/// Groups the synapses created by one logical connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProjectionId(pub u32);

/// Anything that can emit spikes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Endpoint {
    Neuron(NeuronId),
    Source(SourceId),
}

impl From<NeuronId> for Endpoint {
    fn from(id: NeuronId) -> Self {
        Endpoint::Neuron(id)
    }
}

impl From<SourceId> for Endpoint {
    fn from(id: SourceId) -> Self {
        Endpoint::Source(id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neuron {
    pub name: String,
    pub params: NeuronParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Source {
    pub name: String,
    pub spikes: Vec<Tick>,
}

/// Static synapse. Weight is in integer units; negative is inhibitory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synapse {
    pub pre: Endpoint,
    pub post: NeuronId,
    pub weight: i32,
    pub delay: u32,
    pub projection: ProjectionId,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("name `{0}` is already used in this circuit")]
    DuplicateName(String),
    #[error("invalid neuron parameters for `{name}`: {problems}")]
    InvalidParams { name: String, problems: String },
    #[error("source `{name}`: {source}")]
    BadSpikeList {
        name: String,
        source: crate::trace::NotIncreasing,
    },
    #[error("synapse delay must be at least 1 tick")]
    ZeroDelay,
    #[error("synapse weight must be non-zero")]
    ZeroWeight,
    #[error("endpoint {0:?} does not exist")]
    Dangling(Endpoint),
    #[error("projection needs at least one presynaptic endpoint")]
    EmptyProjection,
}

/// One invariant violation found by [`CircuitGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateName(String),
    InvalidParams { neuron: String, problem: String },
    UnsortedSource { source: String, prev: Tick, next: Tick },
    DanglingPre { synapse: u32, pre: String },
    DanglingPost { synapse: u32, post: String, pre: String },
    ZeroDelay { synapse: u32, pre: String, post: String },
    ZeroWeight { synapse: u32, pre: String, post: String },
    DanglingProbe(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName(n) => write!(f, "name `{n}` is used more than once"),
            Violation::InvalidParams { neuron, problem } => {
                write!(f, "neuron `{neuron}`: {problem}")
            }
            Violation::UnsortedSource { source, prev, next } => write!(
                f,
                "source `{source}`: spike ticks not strictly increasing ({prev} then {next})"
            ),
            Violation::DanglingPre { synapse, pre } => {
                write!(f, "synapse #{synapse}: presynaptic endpoint {pre} does not exist")
            }
            Violation::DanglingPost { synapse, post, pre } => write!(
                f,
                "synapse #{synapse} from `{pre}`: target neuron {post} does not exist"
            ),
            Violation::ZeroDelay { synapse, pre, post } => write!(
                f,
                "synapse #{synapse} `{pre}` -> `{post}`: delay 0 violates the 1-tick minimum delay"
            ),
            Violation::ZeroWeight { synapse, pre, post } => {
                write!(f, "synapse #{synapse} `{pre}` -> `{post}`: weight must be non-zero")
            }
            Violation::DanglingProbe(p) => write!(f, "probe {p} does not exist"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
struct CircuitRepr {
    neurons: Vec<Neuron>,
    sources: Vec<Source>,
    synapses: Vec<Synapse>,
    projections: u32,
    probes: Vec<Endpoint>,
}

/// A spiking network under construction.
///
/// Neurons and sources share one name space. Builder methods reject invalid
/// input eagerly; [`CircuitGraph::validate`] re-checks everything, which
/// matters for graphs that were deserialized rather than built.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(from = "CircuitRepr", into = "CircuitRepr")]
pub struct CircuitGraph {
    repr: CircuitRepr,
    names: BTreeMap<String, Endpoint>,
}

impl PartialEq for CircuitGraph {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr
    }
}

impl From<CircuitRepr> for CircuitGraph {
    fn from(repr: CircuitRepr) -> Self {
        let mut names = BTreeMap::new();
        for (i, n) in repr.neurons.iter().enumerate() {
            names
                .entry(n.name.clone())
                .or_insert(Endpoint::Neuron(NeuronId(i as u32)));
        }
        for (i, s) in repr.sources.iter().enumerate() {
            names
                .entry(s.name.clone())
                .or_insert(Endpoint::Source(SourceId(i as u32)));
        }
        CircuitGraph { repr, names }
    }
}

impl From<CircuitGraph> for CircuitRepr {
    fn from(c: CircuitGraph) -> Self {
        c.repr
    }
}

impl CircuitGraph {
    pub fn new() -> Self {
        Self::default()
    }

    fn claim_name(&self, name: &str) -> Result<(), CircuitError> {
        if self.names.contains_key(name) {
            Err(CircuitError::DuplicateName(name.to_string()))
        } else {
            Ok(())
        }
    }

    pub fn add_neuron(&mut self, name: &str, params: NeuronParams) -> Result<NeuronId, CircuitError> {
        self.claim_name(name)?;
        let problems = params.problems();
        if !problems.is_empty() {
            return Err(CircuitError::InvalidParams {
                name: name.to_string(),
                problems: problems.join("; "),
            });
        }
        let id = NeuronId(self.repr.neurons.len() as u32);
        self.repr.neurons.push(Neuron {
            name: name.to_string(),
            params,
        });
        self.names.insert(name.to_string(), Endpoint::Neuron(id));
        Ok(id)
    }

    pub fn add_source(&mut self, name: &str, spike_ticks: Vec<Tick>) -> Result<SourceId, CircuitError> {
        self.claim_name(name)?;
        let train = SpikeTrain::new(spike_ticks).map_err(|e| CircuitError::BadSpikeList {
            name: name.to_string(),
            source: e,
        })?;
        let id = SourceId(self.repr.sources.len() as u32);
        self.repr.sources.push(Source {
            name: name.to_string(),
            spikes: train.into(),
        });
        self.names.insert(name.to_string(), Endpoint::Source(id));
        Ok(id)
    }

    /// Adds a single synapse as its own projection.
    pub fn add_synapse(
        &mut self,
        pre: impl Into<Endpoint>,
        post: NeuronId,
        weight: i32,
        delay: u32,
    ) -> Result<SynapseId, CircuitError> {
        Ok(self.add_projection(&[pre.into()], post, weight, delay)?[0])
    }

    /// Adds one logical connection from every endpoint in `pres` to `post`.
    pub fn add_projection(
        &mut self,
        pres: &[Endpoint],
        post: NeuronId,
        weight: i32,
        delay: u32,
    ) -> Result<Vec<SynapseId>, CircuitError> {
        if pres.is_empty() {
            return Err(CircuitError::EmptyProjection);
        }
        if delay == 0 {
            return Err(CircuitError::ZeroDelay);
        }
        if weight == 0 {
            return Err(CircuitError::ZeroWeight);
        }
        if !self.contains(Endpoint::Neuron(post)) {
            return Err(CircuitError::Dangling(Endpoint::Neuron(post)));
        }
        if let Some(&missing) = pres.iter().find(|&&p| !self.contains(p)) {
            return Err(CircuitError::Dangling(missing));
        }
        let projection = ProjectionId(self.repr.projections);
        self.repr.projections += 1;
        let ids = pres
            .iter()
            .map(|&pre| {
                let id = SynapseId(self.repr.synapses.len() as u32);
                self.repr.synapses.push(Synapse {
                    pre,
                    post,
                    weight,
                    delay,
                    projection,
                });
                id
            })
            .collect();
        Ok(ids)
    }

    pub fn add_probe(&mut self, endpoint: impl Into<Endpoint>) -> Result<(), CircuitError> {
        let endpoint = endpoint.into();
        if !self.contains(endpoint) {
            return Err(CircuitError::Dangling(endpoint));
        }
        if !self.repr.probes.contains(&endpoint) {
            self.repr.probes.push(endpoint);
        }
        Ok(())
    }

    pub fn contains(&self, e: Endpoint) -> bool {
        match e {
            Endpoint::Neuron(NeuronId(i)) => (i as usize) < self.repr.neurons.len(),
            Endpoint::Source(SourceId(i)) => (i as usize) < self.repr.sources.len(),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Endpoint> {
        self.names.get(name).copied()
    }

    pub fn name_of(&self, e: Endpoint) -> Option<&str> {
        match e {
            Endpoint::Neuron(NeuronId(i)) => self.repr.neurons.get(i as usize).map(|n| n.name.as_str()),
            Endpoint::Source(SourceId(i)) => self.repr.sources.get(i as usize).map(|s| s.name.as_str()),
        }
    }

    fn describe(&self, e: Endpoint) -> String {
        match self.name_of(e) {
            Some(n) => format!("`{n}`"),
            None => match e {
                Endpoint::Neuron(NeuronId(i)) => format!("neuron #{i}"),
                Endpoint::Source(SourceId(i)) => format!("source #{i}"),
            },
        }
    }

    pub fn neurons(&self) -> &[Neuron] {
        &self.repr.neurons
    }

    pub fn neuron(&self, id: NeuronId) -> &Neuron {
        &self.repr.neurons[id.0 as usize]
    }

    pub fn sources(&self) -> &[Source] {
        &self.repr.sources
    }

    pub fn synapses(&self) -> &[Synapse] {
        &self.repr.synapses
    }

    pub fn probes(&self) -> &[Endpoint] {
        &self.repr.probes
    }

    pub fn neuron_count(&self) -> usize {
        self.repr.neurons.len()
    }

    pub fn source_count(&self) -> usize {
        self.repr.sources.len()
    }

    pub fn synapse_count(&self) -> usize {
        self.repr.synapses.len()
    }

    pub fn projection_count(&self) -> usize {
        self.repr.projections as usize
    }

    /// Largest synaptic delay, at least 1.
    pub fn max_delay(&self) -> u32 {
        self.repr.synapses.iter().map(|s| s.delay).max().unwrap_or(1).max(1)
    }

    /// Deterministic JSON dump of the whole graph.
    pub fn dump(&self) -> String {
        serde_json::to_string(&self.repr).expect("circuit serialization cannot fail")
    }

    /// Checks every structural invariant and reports one entry per violation.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let all_names = self
            .repr
            .neurons
            .iter()
            .map(|n| &n.name)
            .chain(self.repr.sources.iter().map(|s| &s.name));
        for name in all_names {
            if !seen.insert(name) {
                out.push(Violation::DuplicateName(name.clone()));
            }
        }
        for n in &self.repr.neurons {
            for problem in n.params.problems() {
                out.push(Violation::InvalidParams {
                    neuron: n.name.clone(),
                    problem,
                });
            }
        }
        for s in &self.repr.sources {
            if let Some(w) = s.spikes.windows(2).find(|w| w[0] >= w[1]) {
                out.push(Violation::UnsortedSource {
                    source: s.name.clone(),
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        for (i, syn) in self.repr.synapses.iter().enumerate() {
            let i = i as u32;
            let pre = self.describe(syn.pre);
            let post = self.describe(Endpoint::Neuron(syn.post));
            if !self.contains(syn.pre) {
                out.push(Violation::DanglingPre { synapse: i, pre: pre.clone() });
            }
            if !self.contains(Endpoint::Neuron(syn.post)) {
                out.push(Violation::DanglingPost {
                    synapse: i,
                    post: post.clone(),
                    pre: pre.clone(),
                });
            }
            if syn.delay == 0 {
                out.push(Violation::ZeroDelay {
                    synapse: i,
                    pre: pre.clone(),
                    post: post.clone(),
                });
            }
            if syn.weight == 0 {
                out.push(Violation::ZeroWeight { synapse: i, pre, post });
            }
        }
        for &p in &self.repr.probes {
            if !self.contains(p) {
                out.push(Violation::DanglingProbe(self.describe(p)));
            }
        }
        out
    }
}
