// SPDX-License-Identifier: Apache-2.0

//! Spike-based logic building blocks.
//!
//! Every builder adds its neurons and connections to a [`CircuitGraph`] and
//! returns a [`BlockHandle`] describing its ports. Input terminals are not
//! neurons: a terminal is a list of taps (target neuron, weight, delay) that
//! [`connect`] instantiates for each driver. Resource counts are measured
//! while building: spike sources count as neurons, each projection and each
//! terminal tap counts as one connection, and blocks that rely on a constant
//! spike source include its resources.

use std::fmt;
use std::str::FromStr;

use crate::sim::{CircuitError, CircuitGraph, Endpoint, NeuronId, NeuronParams, SourceId, SynapseId};
use crate::trace::{SpikeTrain, Tick, Trace};

/// Default first spike of a constant spike source.
pub const DEFAULT_CSS_FIRST: Tick = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockKind {
    Or,
    AndClassic,
    SrLatch,
    Switch,
    Xor,
    ConstantSpikeSource,
    Not,
    SyncOscillator,
    AndFast,
    FlankDetector,
}

impl BlockKind {
    pub const ALL: [BlockKind; 10] = [
        BlockKind::Or,
        BlockKind::AndClassic,
        BlockKind::SrLatch,
        BlockKind::Switch,
        BlockKind::Xor,
        BlockKind::ConstantSpikeSource,
        BlockKind::Not,
        BlockKind::SyncOscillator,
        BlockKind::AndFast,
        BlockKind::FlankDetector,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BlockKind::Or => "or",
            BlockKind::AndClassic => "and_classic",
            BlockKind::SrLatch => "sr_latch",
            BlockKind::Switch => "switch",
            BlockKind::Xor => "xor",
            BlockKind::ConstantSpikeSource => "css",
            BlockKind::Not => "not",
            BlockKind::SyncOscillator => "oscillator",
            BlockKind::AndFast => "and_fast",
            BlockKind::FlankDetector => "flank",
        }
    }

    /// Whether the block takes a variable number of inputs.
    pub fn has_arity(self) -> bool {
        matches!(
            self,
            BlockKind::Or | BlockKind::AndClassic | BlockKind::AndFast | BlockKind::Xor
        )
    }

    /// Smallest accepted input count for variable-arity blocks.
    pub fn min_arity(self) -> usize {
        match self {
            BlockKind::Or => 1,
            BlockKind::AndClassic | BlockKind::AndFast | BlockKind::Xor => 2,
            _ => 0,
        }
    }

    pub fn needs_css(self) -> bool {
        matches!(
            self,
            BlockKind::Not | BlockKind::AndFast | BlockKind::FlankDetector
        )
    }

    pub fn latency(self) -> Latency {
        match self {
            BlockKind::AndClassic | BlockKind::Xor => Latency::Ticks(2),
            BlockKind::FlankDetector => Latency::Edges { rise: 2, fall: 3 },
            _ => Latency::Ticks(1),
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for BlockKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BlockKind::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or_else(|| format!("unknown block kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Latency {
    Ticks(u32),
    /// Flank detector: rising and falling edge latencies.
    Edges { rise: u32, fall: u32 },
}

impl fmt::Display for Latency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Latency::Ticks(t) => write!(f, "{t}"),
            Latency::Edges { rise, fall } => write!(f, "{rise}/{fall}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Resources {
    pub neurons: usize,
    pub connections: usize,
}

impl std::ops::Add for Resources {
    type Output = Resources;

    fn add(self, o: Resources) -> Resources {
        Resources {
            neurons: self.neurons + o.neurons,
            connections: self.connections + o.connections,
        }
    }
}

/// One designed connection behind an input terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tap {
    pub post: NeuronId,
    pub weight: i32,
    pub delay: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputTerminal {
    pub name: String,
    pub taps: Vec<Tap>,
}

impl InputTerminal {
    fn new(name: impl Into<String>) -> Self {
        InputTerminal {
            name: name.into(),
            taps: Vec::new(),
        }
    }

    fn tap(mut self, post: NeuronId, weight: i32, delay: u32) -> Self {
        self.taps.push(Tap { post, weight, delay });
        self
    }
}

/// Named group of endpoints whose union is one output signal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPort {
    pub name: String,
    pub endpoints: Vec<Endpoint>,
    /// Trace signal names of `endpoints`, in the same order.
    pub signals: Vec<String>,
}

impl OutputPort {
    fn new(circuit: &CircuitGraph, name: &str, endpoints: Vec<Endpoint>) -> Self {
        let signals = endpoints
            .iter()
            .map(|&e| circuit.name_of(e).expect("endpoint just built").to_string())
            .collect();
        OutputPort {
            name: name.to_string(),
            endpoints,
            signals,
        }
    }

    /// Wraps a bare spike source so it can drive input terminals.
    pub fn from_source(circuit: &CircuitGraph, id: SourceId) -> Self {
        OutputPort::new(circuit, "out", vec![Endpoint::Source(id)])
    }

    pub fn from_neuron(circuit: &CircuitGraph, id: NeuronId) -> Self {
        OutputPort::new(circuit, "out", vec![Endpoint::Neuron(id)])
    }

    /// Union of this port's spikes in `trace`.
    pub fn train(&self, trace: &Trace) -> SpikeTrain {
        trace.merged(&self.signals)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockHandle {
    pub name: String,
    pub kind: BlockKind,
    /// Input count for variable-arity blocks, otherwise the terminal count.
    pub arity: usize,
    pub inputs: Vec<InputTerminal>,
    pub outputs: Vec<OutputPort>,
    /// Named internal endpoints (e.g. `or`, `u`, `c`, `not`) for probing.
    pub internals: Vec<(String, Endpoint)>,
    pub latency: Latency,
    /// Total resources, including any constant spike source the block uses.
    pub resources: Resources,
    /// Resources excluding the constant spike source.
    pub own_resources: Resources,
    /// First tick at which input spikes are guaranteed to be handled.
    pub first_valid_input: Tick,
}

impl BlockHandle {
    pub fn input(&self, name: &str) -> Option<&InputTerminal> {
        self.inputs.iter().find(|t| t.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&OutputPort> {
        self.outputs.iter().find(|p| p.name == name)
    }

    pub fn internal(&self, role: &str) -> Option<Endpoint> {
        self.internals.iter().find(|(r, _)| r == role).map(|(_, e)| *e)
    }

    /// The `out` port; every block has one.
    pub fn out(&self) -> &OutputPort {
        self.output("out").expect("every block has an `out` port")
    }
}

/// A constant spike source shared by NOT, fast AND and flank detector blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharedCss {
    pub source: SourceId,
    pub latch: NeuronId,
    pub first_spike: Tick,
    pub handle: BlockHandle,
}

impl SharedCss {
    pub fn output(&self) -> &OutputPort {
        self.handle.out()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BlockError {
    #[error("{kind} needs at least {min} inputs (got {got})")]
    Arity { kind: BlockKind, min: usize, got: usize },
    #[error("SR latch needs a set or a reset port")]
    NoLatchPorts,
    #[error("oscillator half-period must be at least 1 tick")]
    ZeroHalfPeriod,
    #[error("constant spike source is not part of this circuit")]
    MissingCss,
    #[error("extra delay must be >= 0 (got {0})")]
    NegativeDelay(i64),
    #[error("extra delay {0} is too large")]
    DelayOverflow(i64),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Summary row in the resource table layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceReport {
    pub neurons: usize,
    pub connections: usize,
    pub latency: Latency,
}

pub fn resource_report(handle: &BlockHandle) -> ResourceReport {
    ResourceReport {
        neurons: handle.resources.neurons,
        connections: handle.resources.connections,
        latency: handle.latency,
    }
}

/// Counts what a builder adds to the circuit.
struct Meter {
    populations: usize,
    projections: usize,
}

impl Meter {
    fn start(c: &CircuitGraph) -> Self {
        Meter {
            populations: c.neuron_count() + c.source_count(),
            projections: c.projection_count(),
        }
    }

    fn finish(self, c: &CircuitGraph, inputs: &[InputTerminal]) -> Resources {
        Resources {
            neurons: c.neuron_count() + c.source_count() - self.populations,
            connections: c.projection_count() - self.projections
                + inputs.iter().map(|t| t.taps.len()).sum::<usize>(),
        }
    }
}

fn neuron(c: &mut CircuitGraph, block: &str, role: &str) -> Result<NeuronId, CircuitError> {
    c.add_neuron(&format!("{block}.{role}"), NeuronParams::default())
}

fn check_arity(kind: BlockKind, n: usize) -> Result<(), BlockError> {
    if n < kind.min_arity() {
        return Err(BlockError::Arity {
            kind,
            min: kind.min_arity(),
            got: n,
        });
    }
    Ok(())
}

fn check_css(c: &CircuitGraph, css: &SharedCss) -> Result<(), BlockError> {
    let port = css.output();
    let present = port
        .endpoints
        .iter()
        .zip(&port.signals)
        .all(|(&e, s)| c.name_of(e) == Some(s.as_str()));
    if present {
        Ok(())
    } else {
        Err(BlockError::MissingCss)
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    c: &CircuitGraph,
    meter: Meter,
    name: &str,
    kind: BlockKind,
    arity: usize,
    inputs: Vec<InputTerminal>,
    outputs: Vec<OutputPort>,
    internals: Vec<(String, Endpoint)>,
    css: Option<&SharedCss>,
) -> BlockHandle {
    let own = meter.finish(c, &inputs);
    let total = css.map_or(own, |css| own + css.handle.resources);
    BlockHandle {
        name: name.to_string(),
        kind,
        arity,
        inputs,
        outputs,
        internals,
        latency: kind.latency(),
        resources: total,
        own_resources: own,
        first_valid_input: 0,
    }
}

fn in_name(k: usize) -> String {
    format!("in{k}")
}

/// One neuron excited (+1, delay 1) by each of `n` inputs.
pub fn build_or(c: &mut CircuitGraph, name: &str, n: usize) -> Result<BlockHandle, BlockError> {
    check_arity(BlockKind::Or, n)?;
    let meter = Meter::start(c);
    let out = neuron(c, name, "out")?;
    let inputs = (0..n).map(|k| InputTerminal::new(in_name(k)).tap(out, 1, 1)).collect();
    let outputs = vec![OutputPort::from_neuron(c, out)];
    Ok(finish(
        c,
        meter,
        name,
        BlockKind::Or,
        n,
        inputs,
        outputs,
        vec![("out".into(), out.into())],
        None,
    ))
}

/// OR neuron inhibiting the output by n-1 one tick after the inputs reach
/// it; the inputs reach the output directly with delay 2 so both coincide.
pub fn build_and_classic(c: &mut CircuitGraph, name: &str, n: usize) -> Result<BlockHandle, BlockError> {
    check_arity(BlockKind::AndClassic, n)?;
    let meter = Meter::start(c);
    let or = neuron(c, name, "or")?;
    let out = neuron(c, name, "out")?;
    c.add_synapse(or, out, -(n as i32 - 1), 1)?;
    let inputs = (0..n)
        .map(|k| InputTerminal::new(in_name(k)).tap(or, 1, 1).tap(out, 1, 2))
        .collect();
    let outputs = vec![OutputPort::from_neuron(c, out)];
    Ok(finish(
        c,
        meter,
        name,
        BlockKind::AndClassic,
        n,
        inputs,
        outputs,
        vec![("or".into(), or.into()), ("out".into(), out.into())],
        None,
    ))
}

/// Output neuron held down by n-1 units of constant inhibition from `css`.
///
/// Inputs before `css.first_spike` are not gated and are outside the block's
/// contract.
pub fn build_and_fast(
    c: &mut CircuitGraph,
    name: &str,
    n: usize,
    css: &SharedCss,
) -> Result<BlockHandle, BlockError> {
    check_arity(BlockKind::AndFast, n)?;
    check_css(c, css)?;
    let meter = Meter::start(c);
    let out = neuron(c, name, "out")?;
    c.add_projection(&css.output().endpoints, out, -(n as i32 - 1), 1)?;
    let inputs = (0..n).map(|k| InputTerminal::new(in_name(k)).tap(out, 1, 1)).collect();
    let outputs = vec![OutputPort::from_neuron(c, out)];
    let mut h = finish(
        c,
        meter,
        name,
        BlockKind::AndFast,
        n,
        inputs,
        outputs,
        vec![("out".into(), out.into())],
        Some(css),
    );
    h.first_valid_input = css.first_spike;
    Ok(h)
}

/// Single self-exciting neuron; set excites it, reset inhibits it.
pub fn build_sr_latch(
    c: &mut CircuitGraph,
    name: &str,
    with_set: bool,
    with_reset: bool,
) -> Result<BlockHandle, BlockError> {
    if !with_set && !with_reset {
        return Err(BlockError::NoLatchPorts);
    }
    let meter = Meter::start(c);
    let out = neuron(c, name, "out")?;
    c.add_synapse(out, out, 1, 1)?;
    let mut inputs = Vec::new();
    if with_set {
        inputs.push(InputTerminal::new("set").tap(out, 1, 1));
    }
    if with_reset {
        inputs.push(InputTerminal::new("reset").tap(out, -1, 1));
    }
    let arity = inputs.len();
    let outputs = vec![OutputPort::from_neuron(c, out)];
    Ok(finish(
        c,
        meter,
        name,
        BlockKind::SrLatch,
        arity,
        inputs,
        outputs,
        vec![("out".into(), out.into())],
        None,
    ))
}

/// Toggle: input neuron U feeds a self-holding cycle neuron C; each input
/// spike releases C if it is holding, otherwise U fires and sets it.
pub fn build_switch(c: &mut CircuitGraph, name: &str) -> Result<BlockHandle, BlockError> {
    let meter = Meter::start(c);
    let u = neuron(c, name, "u")?;
    let cy = neuron(c, name, "c")?;
    c.add_synapse(u, cy, 1, 1)?;
    c.add_synapse(cy, cy, 1, 1)?;
    c.add_synapse(cy, u, -1, 1)?;
    c.add_synapse(u, u, -1, 1)?;
    let inputs = vec![InputTerminal::new("in0").tap(u, 1, 1).tap(cy, -1, 1)];
    let outputs = vec![OutputPort::new(c, "out", vec![u.into(), cy.into()])];
    Ok(finish(
        c,
        meter,
        name,
        BlockKind::Switch,
        1,
        inputs,
        outputs,
        vec![("u".into(), u.into()), ("c".into(), cy.into())],
        None,
    ))
}

/// n input neurons, each exciting its own output neuron and inhibiting all
/// the others.
pub fn build_xor(c: &mut CircuitGraph, name: &str, n: usize) -> Result<BlockHandle, BlockError> {
    check_arity(BlockKind::Xor, n)?;
    let meter = Meter::start(c);
    let ins = (0..n)
        .map(|k| neuron(c, name, &format!("i{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    let outs = (0..n)
        .map(|k| neuron(c, name, &format!("o{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    for (k, &i) in ins.iter().enumerate() {
        for (j, &o) in outs.iter().enumerate() {
            c.add_synapse(i, o, if j == k { 1 } else { -1 }, 1)?;
        }
    }
    let inputs = ins
        .iter()
        .enumerate()
        .map(|(k, &i)| InputTerminal::new(in_name(k)).tap(i, 1, 1))
        .collect();
    let outputs = vec![OutputPort::new(
        c,
        "out",
        outs.iter().map(|&o| o.into()).collect(),
    )];
    let internals = ins
        .iter()
        .enumerate()
        .map(|(k, &i)| (format!("i{k}"), i.into()))
        .chain(outs.iter().enumerate().map(|(k, &o)| (format!("o{k}"), o.into())))
        .collect();
    Ok(finish(c, meter, name, BlockKind::Xor, n, inputs, outputs, internals, None))
}

/// One-shot source that sets a self-exciting latch; together they spike on
/// every tick from `first_spike` on.
pub fn build_css(c: &mut CircuitGraph, name: &str, first_spike: Tick) -> Result<SharedCss, BlockError> {
    let meter = Meter::start(c);
    let source = c.add_source(&format!("{name}.src"), vec![first_spike])?;
    let latch = neuron(c, name, "latch")?;
    c.add_synapse(source, latch, 1, 1)?;
    c.add_synapse(latch, latch, 1, 1)?;
    let outputs = vec![OutputPort::new(c, "out", vec![source.into(), latch.into()])];
    let handle = finish(
        c,
        meter,
        name,
        BlockKind::ConstantSpikeSource,
        0,
        Vec::new(),
        outputs,
        vec![("src".into(), source.into()), ("latch".into(), latch.into())],
        None,
    );
    Ok(SharedCss {
        source,
        latch,
        first_spike,
        handle,
    })
}

/// Output excited by `css` every tick and inhibited by the input.
pub fn build_not(c: &mut CircuitGraph, name: &str, css: &SharedCss) -> Result<BlockHandle, BlockError> {
    check_css(c, css)?;
    let meter = Meter::start(c);
    let out = neuron(c, name, "out")?;
    c.add_projection(&css.output().endpoints, out, 1, 1)?;
    let inputs = vec![InputTerminal::new("in0").tap(out, -1, 1)];
    let outputs = vec![OutputPort::from_neuron(c, out)];
    Ok(finish(
        c,
        meter,
        name,
        BlockKind::Not,
        1,
        inputs,
        outputs,
        vec![("out".into(), out.into())],
        Some(css),
    ))
}

/// Clock: a burst of `half_period` source spikes starts a loop A -> B -> A
/// whose two delays are each `half_period`, so A is high for one
/// half-period and low for the next.
pub fn build_sync_oscillator(
    c: &mut CircuitGraph,
    name: &str,
    half_period: u32,
    first_spike: Tick,
) -> Result<BlockHandle, BlockError> {
    if half_period == 0 {
        return Err(BlockError::ZeroHalfPeriod);
    }
    let meter = Meter::start(c);
    let burst = (first_spike..first_spike + half_period as Tick).collect();
    let src = c.add_source(&format!("{name}.src"), burst)?;
    let a = neuron(c, name, "a")?;
    let b = neuron(c, name, "b")?;
    c.add_synapse(src, a, 1, 1)?;
    c.add_synapse(a, b, 1, half_period)?;
    c.add_synapse(b, a, 1, half_period)?;
    let outputs = vec![OutputPort::from_neuron(c, a)];
    Ok(finish(
        c,
        meter,
        name,
        BlockKind::SyncOscillator,
        0,
        Vec::new(),
        outputs,
        vec![("src".into(), src.into()), ("a".into(), a.into()), ("b".into(), b.into())],
        None,
    ))
}

/// NOT plus two 2-input classic ANDs. The rising AND sees the input and the
/// NOT output side by side; the falling AND sees the input 2 ticks late.
/// Rising edge at r fires `rise` at r+2, falling edge at f fires `fall` at f+3.
pub fn build_flank_detector(
    c: &mut CircuitGraph,
    name: &str,
    css: &SharedCss,
) -> Result<BlockHandle, BlockError> {
    check_css(c, css)?;
    let meter = Meter::start(c);
    let not = build_not(c, &format!("{name}.not"), css)?;
    let rise = build_and_classic(c, &format!("{name}.rise"), 2)?;
    let fall = build_and_classic(c, &format!("{name}.fall"), 2)?;
    connect(c, not.out(), &rise.inputs[1], 0)?;
    connect(c, not.out(), &fall.inputs[1], 0)?;

    let mut terminal = InputTerminal::new("in0");
    terminal.taps.extend(not.inputs[0].taps.iter().copied());
    terminal.taps.extend(rise.inputs[0].taps.iter().copied());
    terminal.taps.extend(fall.inputs[0].taps.iter().map(|t| Tap {
        delay: t.delay + 2,
        ..*t
    }));

    let rise_out = rise.out().clone();
    let fall_out = fall.out().clone();
    let both = OutputPort::new(
        c,
        "out",
        rise_out.endpoints.iter().chain(&fall_out.endpoints).copied().collect(),
    );
    let outputs = vec![
        OutputPort {
            name: "rise".into(),
            ..rise_out
        },
        OutputPort {
            name: "fall".into(),
            ..fall_out
        },
        both,
    ];
    let internals = vec![
        ("not".to_string(), not.out().endpoints[0]),
        ("rise_or".to_string(), rise.internal("or").unwrap()),
        ("rise".to_string(), rise.internal("out").unwrap()),
        ("fall_or".to_string(), fall.internal("or").unwrap()),
        ("fall".to_string(), fall.internal("out").unwrap()),
    ];
    let mut h = finish(
        c,
        meter,
        name,
        BlockKind::FlankDetector,
        1,
        vec![terminal],
        outputs,
        internals,
        Some(css),
    );
    h.first_valid_input = css.first_spike + 1;
    Ok(h)
}

/// Wires every endpoint of `from` to each tap of `to`, adding `extra_delay`
/// on top of the designed delay.
pub fn connect(
    c: &mut CircuitGraph,
    from: &OutputPort,
    to: &InputTerminal,
    extra_delay: i64,
) -> Result<Vec<SynapseId>, BlockError> {
    if extra_delay < 0 {
        return Err(BlockError::NegativeDelay(extra_delay));
    }
    let extra = u32::try_from(extra_delay).map_err(|_| BlockError::DelayOverflow(extra_delay))?;
    let mut ids = Vec::new();
    for tap in &to.taps {
        let delay = tap
            .delay
            .checked_add(extra)
            .ok_or(BlockError::DelayOverflow(extra_delay))?;
        ids.extend(c.add_projection(&from.endpoints, tap.post, tap.weight, delay)?);
    }
    Ok(ids)
}
