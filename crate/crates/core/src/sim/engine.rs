// SPDX-License-Identifier: Apache-2.0

//! Tick-by-tick simulation loop.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::circuit::{CircuitGraph, Endpoint, Violation};
use super::neuron::{abstract_tick, calibrate_unit_current, lif_tick, NeuronState};
use super::params::NeuronParams;
use crate::trace::{SpikeTrain, Tick, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Current-based exponential LIF integration.
    Lif,
    /// Integer threshold gate: fire iff net input >= 1 unit.
    Abstract,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Lif, Backend::Abstract];
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Lif => "lif",
            Backend::Abstract => "abstract",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lif" => Ok(Backend::Lif),
            "abstract" => Ok(Backend::Abstract),
            other => Err(format!("unknown backend `{other}` (expected lif or abstract)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub backend: Backend,
    pub horizon: Tick,
    /// nA per unit weight. `None` calibrates each distinct parameter set.
    pub unit_current: Option<f64>,
    pub record_membrane: bool,
}

impl SimConfig {
    pub fn new(backend: Backend, horizon: Tick) -> Self {
        SimConfig {
            backend,
            horizon,
            unit_current: None,
            record_membrane: false,
        }
    }

    pub fn with_membrane(mut self) -> Self {
        self.record_membrane = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("horizon must be at least 1 tick")]
    ZeroHorizon,
    #[error("unit current must be positive and finite (got {0})")]
    BadUnitCurrent(f64),
    #[error("circuit failed validation: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

struct Fanout {
    post: usize,
    weight: i32,
    delay: u32,
}

/// Pending synaptic input per neuron, bucketed by delivery tick.
struct DeliveryRing {
    slots: Vec<Vec<[i64; 2]>>,
}

impl DeliveryRing {
    fn new(max_delay: u32, neurons: usize) -> Self {
        DeliveryRing {
            slots: vec![vec![[0; 2]; neurons]; max_delay as usize + 1],
        }
    }

    fn slot(&self, t: Tick) -> usize {
        (t % self.slots.len() as Tick) as usize
    }

    fn schedule(&mut self, now: Tick, fan: &[Fanout]) {
        for f in fan {
            let slot = self.slot(now + f.delay as Tick);
            let cell = &mut self.slots[slot][f.post];
            if f.weight > 0 {
                cell[0] += f.weight as i64;
            } else {
                cell[1] += -(f.weight as i64);
            }
        }
    }

    /// Takes the (excitation, inhibition) due at `t` and clears the bucket.
    fn take(&mut self, t: Tick) -> Vec<[i64; 2]> {
        let slot = self.slot(t);
        let n = self.slots[slot].len();
        std::mem::replace(&mut self.slots[slot], vec![[0; 2]; n])
    }
}

fn unit_currents(circuit: &CircuitGraph, config: &SimConfig) -> Result<Vec<f64>, SimError> {
    if let Some(u) = config.unit_current {
        if !(u > 0.0 && u.is_finite()) {
            return Err(SimError::BadUnitCurrent(u));
        }
        return Ok(vec![u; circuit.neuron_count()]);
    }
    let mut cache: Vec<(NeuronParams, f64)> = Vec::new();
    Ok(circuit
        .neurons()
        .iter()
        .map(|n| {
            if let Some((_, u)) = cache.iter().find(|(p, _)| *p == n.params) {
                *u
            } else {
                let u = calibrate_unit_current(&n.params);
                cache.push((n.params, u));
                u
            }
        })
        .collect())
}

/// Simulates `circuit` over `[0, config.horizon)`.
///
/// Per tick: sources emit, due events are delivered, every neuron is
/// updated, spikes are fanned out to `t + delay`, probes are recorded.
/// Every neuron and source appears in the returned trace under its name.
/// Membrane samples cover the probed neurons, or all neurons when the
/// circuit has no neuron probes.
pub fn run(circuit: &CircuitGraph, config: &SimConfig) -> Result<Trace, SimError> {
    if config.horizon < 1 {
        return Err(SimError::ZeroHorizon);
    }
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(SimError::Invalid(violations));
    }

    let n_neurons = circuit.neuron_count();
    let mut neuron_fan: Vec<Vec<Fanout>> = (0..n_neurons).map(|_| Vec::new()).collect();
    let mut source_fan: Vec<Vec<Fanout>> = (0..circuit.source_count()).map(|_| Vec::new()).collect();
    for s in circuit.synapses() {
        let f = Fanout {
            post: s.post.0 as usize,
            weight: s.weight,
            delay: s.delay,
        };
        match s.pre {
            Endpoint::Neuron(id) => neuron_fan[id.0 as usize].push(f),
            Endpoint::Source(id) => source_fan[id.0 as usize].push(f),
        }
    }

    let units = match config.backend {
        Backend::Lif => unit_currents(circuit, config)?,
        Backend::Abstract => Vec::new(),
    };
    let params: Vec<&NeuronParams> = circuit.neurons().iter().map(|n| &n.params).collect();
    let mut states: Vec<NeuronState> = params.iter().map(|p| NeuronState::at_rest(p)).collect();

    let recorded: Vec<usize> = if config.record_membrane {
        let probed: Vec<usize> = circuit
            .probes()
            .iter()
            .filter_map(|p| match p {
                Endpoint::Neuron(id) => Some(id.0 as usize),
                Endpoint::Source(_) => None,
            })
            .collect();
        if probed.is_empty() {
            (0..n_neurons).collect()
        } else {
            probed
        }
    } else {
        Vec::new()
    };
    let mut membrane: Vec<Vec<f64>> = recorded
        .iter()
        .map(|_| Vec::with_capacity(config.horizon as usize))
        .collect();

    let mut ring = DeliveryRing::new(circuit.max_delay(), n_neurons);
    let mut neuron_spikes: Vec<Vec<Tick>> = vec![Vec::new(); n_neurons];
    let mut source_cursor = vec![0usize; circuit.source_count()];
    let mut fired = Vec::with_capacity(n_neurons);

    for t in 0..config.horizon {
        for (i, src) in circuit.sources().iter().enumerate() {
            let cur = &mut source_cursor[i];
            if src.spikes.get(*cur) == Some(&t) {
                *cur += 1;
                ring.schedule(t, &source_fan[i]);
            }
        }

        let inputs = ring.take(t);
        fired.clear();
        for (i, state) in states.iter_mut().enumerate() {
            let [exc, inh] = inputs[i];
            let spiked = match config.backend {
                Backend::Abstract => abstract_tick(state, params[i], exc - inh, t),
                Backend::Lif => lif_tick(state, params[i], exc as f64, inh as f64, units[i], t),
            };
            if spiked {
                fired.push(i);
            }
        }
        for &i in &fired {
            neuron_spikes[i].push(t);
            ring.schedule(t, &neuron_fan[i]);
        }
        for (k, &i) in recorded.iter().enumerate() {
            membrane[k].push(states[i].v_peak);
        }
    }

    let mut trace = Trace::new(config.horizon);
    for (n, ticks) in circuit.neurons().iter().zip(neuron_spikes) {
        trace.spikes.insert(
            n.name.clone(),
            SpikeTrain::new(ticks).expect("one spike per tick at most"),
        );
    }
    for s in circuit.sources() {
        let ticks: Vec<Tick> = s.spikes.iter().copied().filter(|&t| t < config.horizon).collect();
        trace.spikes.insert(
            s.name.clone(),
            SpikeTrain::new(ticks).expect("validated source list"),
        );
    }
    if config.record_membrane {
        let map: BTreeMap<String, Vec<f64>> = recorded
            .iter()
            .zip(membrane)
            .map(|(&i, samples)| (circuit.neurons()[i].name.clone(), samples))
            .collect();
        trace.membrane = Some(map);
    }
    Ok(trace)
}
