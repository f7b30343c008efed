// SPDX-License-Identifier: Apache-2.0

//! Turns a parsed netlist into a circuit by calling the block builders.

use std::collections::BTreeMap;

use super::ast::{BlockParams, EndpointRef, NetlistAst, Statement};
use super::Diagnostic;
use crate::blocks::{self, BlockHandle, BlockKind, InputTerminal, OutputPort, SharedCss, DEFAULT_CSS_FIRST};
use crate::sim::{CircuitGraph, Endpoint, SourceId};
use crate::trace::{Tick, Trace};

/// A named observation: the union of one or more circuit signals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub signal: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct Elaboration {
    pub circuit: CircuitGraph,
    /// Blocks by name, in declaration order.
    pub blocks: Vec<(String, BlockHandle)>,
    pub sources: BTreeMap<String, SourceId>,
    /// The css shared by not/and_fast/flank blocks, if any was needed.
    pub css: Option<SharedCss>,
    pub probes: Vec<Probe>,
    pub horizon: Option<Tick>,
}

impl Elaboration {
    pub fn block(&self, name: &str) -> Option<&BlockHandle> {
        self.blocks.iter().find(|(n, _)| n == name).map(|(_, h)| h)
    }

    /// Probed signals, or every source and block output when nothing is probed.
    pub fn observed(&self) -> Vec<Probe> {
        if !self.probes.is_empty() {
            return self.probes.clone();
        }
        let mut out: Vec<Probe> = self
            .sources
            .keys()
            .map(|s| Probe {
                signal: s.clone(),
                members: vec![s.clone()],
            })
            .collect();
        for (name, h) in &self.blocks {
            for port in &h.outputs {
                out.push(Probe {
                    signal: format!("{name}.{}", port.name),
                    members: port.signals.clone(),
                });
            }
        }
        out
    }

    /// Signal names of [`Elaboration::observed`], in order.
    pub fn signal_order(&self) -> Vec<String> {
        self.observed().into_iter().map(|p| p.signal).collect()
    }

    /// Projects a raw simulation trace onto the observed signals. Membrane
    /// samples are kept for probes that name a single neuron.
    pub fn observe(&self, raw: &Trace) -> Trace {
        let mut t = Trace::new(raw.horizon);
        let mut membrane = BTreeMap::new();
        for p in self.observed() {
            t.spikes.insert(p.signal.clone(), raw.merged(&p.members));
            if let (Some(m), [single]) = (&raw.membrane, p.members.as_slice()) {
                if let Some(samples) = m.get(single) {
                    membrane.insert(p.signal.clone(), samples.clone());
                }
            }
        }
        if raw.membrane.is_some() {
            t.membrane = Some(membrane);
        }
        t
    }
}

struct Elaborator<'a> {
    ast: &'a NetlistAst,
    circuit: CircuitGraph,
    blocks: Vec<(String, BlockHandle)>,
    sources: BTreeMap<String, SourceId>,
    css: Option<SharedCss>,
    /// Index of the first explicit `block css` statement.
    explicit_css: Option<usize>,
    probes: Vec<Probe>,
    diags: Vec<Diagnostic>,
}

fn at(line: usize, lexeme: &str, message: impl Into<String>) -> Diagnostic {
    Diagnostic::error(line, 1, message, lexeme)
}

impl<'a> Elaborator<'a> {
    fn block(&self, name: &str) -> Option<&BlockHandle> {
        self.blocks.iter().find(|(n, _)| n == name).map(|(_, h)| h)
    }

    fn implicit_css_name(&self) -> String {
        let taken = |n: &str| {
            self.ast.statements.iter().any(|s| s.declared_name() == Some(n))
                || self.circuit.lookup(&format!("{n}.src")).is_some()
        };
        let mut name = "_css".to_string();
        let mut k = 1;
        while taken(&name) {
            name = format!("_css{k}");
            k += 1;
        }
        name
    }

    fn shared_css(&mut self, line: usize) -> Result<SharedCss, Diagnostic> {
        if let Some(css) = &self.css {
            return Ok(css.clone());
        }
        let (name, first) = match self.explicit_css {
            Some(i) => match &self.ast.statements[i] {
                Statement::Block { name, params, .. } => {
                    (name.clone(), params.first.unwrap_or(DEFAULT_CSS_FIRST))
                }
                _ => unreachable!("explicit_css indexes a block statement"),
            },
            None => (self.implicit_css_name(), DEFAULT_CSS_FIRST),
        };
        let css = blocks::build_css(&mut self.circuit, &name, first)
            .map_err(|e| at(line, &name, e.to_string()))?;
        self.css = Some(css.clone());
        Ok(css)
    }

    fn check_params(&self, line: usize, name: &str, kind: BlockKind, p: &BlockParams) -> Result<(), Diagnostic> {
        let arity_ok = kind.has_arity() || p.inputs.is_none();
        if !arity_ok {
            return Err(at(line, name, format!("`inputs` is not a parameter of {kind}")));
        }
        if kind.has_arity() && p.inputs.is_none() {
            return Err(at(line, name, format!("{kind} requires `inputs=N`")));
        }
        if p.half_period.is_some() && kind != BlockKind::SyncOscillator {
            return Err(at(line, name, format!("`half_period` is not a parameter of {kind}")));
        }
        if kind == BlockKind::SyncOscillator && p.half_period.is_none() {
            return Err(at(line, name, "oscillator requires `half_period=K`"));
        }
        let takes_first = matches!(kind, BlockKind::SyncOscillator | BlockKind::ConstantSpikeSource);
        if p.first.is_some() && !takes_first {
            return Err(at(line, name, format!("`first` is not a parameter of {kind}")));
        }
        Ok(())
    }

    fn build_block(&mut self, index: usize, kind: &str, name: &str, p: &BlockParams) -> Result<(), Diagnostic> {
        let line = self.ast.line_of(index);
        let kind: BlockKind = kind.parse().map_err(|e: String| at(line, kind, e))?;
        self.check_params(line, name, kind, p)?;
        let n = p.inputs.unwrap_or(0) as usize;
        if kind.has_arity() && n < kind.min_arity() {
            return Err(at(line, name, format!("{kind} needs at least {} inputs (got {n})", kind.min_arity())));
        }
        let c = &mut self.circuit;
        let built = match kind {
            BlockKind::Or => blocks::build_or(c, name, n),
            BlockKind::AndClassic => blocks::build_and_classic(c, name, n),
            BlockKind::Xor => blocks::build_xor(c, name, n),
            BlockKind::SrLatch => blocks::build_sr_latch(c, name, true, true),
            BlockKind::Switch => blocks::build_switch(c, name),
            BlockKind::SyncOscillator => {
                let k = u32::try_from(p.half_period.unwrap_or(0))
                    .map_err(|_| at(line, name, "half_period is too large"))?;
                blocks::build_sync_oscillator(c, name, k, p.first.unwrap_or(DEFAULT_CSS_FIRST))
            }
            BlockKind::ConstantSpikeSource if self.explicit_css == Some(index) => {
                Ok(self.shared_css(line)?.handle)
            }
            BlockKind::ConstantSpikeSource => {
                blocks::build_css(c, name, p.first.unwrap_or(DEFAULT_CSS_FIRST)).map(|css| css.handle)
            }
            BlockKind::Not | BlockKind::AndFast | BlockKind::FlankDetector => {
                let css = self.shared_css(line)?;
                let c = &mut self.circuit;
                match kind {
                    BlockKind::Not => blocks::build_not(c, name, &css),
                    BlockKind::AndFast => blocks::build_and_fast(c, name, n, &css),
                    _ => blocks::build_flank_detector(c, name, &css),
                }
            }
        };
        let handle = built.map_err(|e| at(line, name, e.to_string()))?;
        self.blocks.push((name.to_string(), handle));
        Ok(())
    }

    fn resolve_output(&self, line: usize, ep: &EndpointRef) -> Result<OutputPort, Diagnostic> {
        if let Some(&id) = self.sources.get(&ep.name) {
            return match ep.port.as_deref() {
                None | Some("out") => Ok(OutputPort::from_source(&self.circuit, id)),
                Some(p) => Err(at(line, &ep.to_string(), format!("source `{}` has no port `{p}`", ep.name))),
            };
        }
        let h = self
            .block(&ep.name)
            .ok_or_else(|| at(line, &ep.name, format!("unknown name `{}`", ep.name)))?;
        let port = ep.port.as_deref().unwrap_or("out");
        if let Some(out) = h.output(port) {
            return Ok(out.clone());
        }
        if h.input(port).is_some() {
            return Err(at(line, &ep.to_string(), format!("`{ep}` is an input port, not an output")));
        }
        Err(at(line, &ep.to_string(), format!("{} `{}` has no output port `{port}`", h.kind, ep.name)))
    }

    fn resolve_input(&self, line: usize, ep: &EndpointRef) -> Result<InputTerminal, Diagnostic> {
        if self.sources.contains_key(&ep.name) {
            return Err(at(line, &ep.name, format!("source `{}` cannot be a connection target", ep.name)));
        }
        let h = self
            .block(&ep.name)
            .ok_or_else(|| at(line, &ep.name, format!("unknown name `{}`", ep.name)))?;
        let lexeme = ep.to_string();
        match ep.port.as_deref() {
            None if h.inputs.len() == 1 => Ok(h.inputs[0].clone()),
            None if h.inputs.is_empty() => Err(at(line, &lexeme, format!("{} `{}` has no inputs", h.kind, ep.name))),
            None => Err(at(line, &lexeme, format!("`{}` has several inputs; name a port", ep.name))),
            Some(port) => {
                if let Some(t) = h.input(port) {
                    return Ok(t.clone());
                }
                if port.starts_with("in") && port[2..].parse::<usize>().is_ok() {
                    return Err(at(
                        line,
                        &lexeme,
                        format!("port out of range: `{port}` on {} `{}` with {} input(s)", h.kind, ep.name, h.inputs.len()),
                    ));
                }
                Err(at(line, &lexeme, format!("{} `{}` has no input port `{port}`", h.kind, ep.name)))
            }
        }
    }

    fn connect(&mut self, line: usize, from: &EndpointRef, to: &EndpointRef, delay: u64) -> Result<(), Diagnostic> {
        let src = self.resolve_output(line, from);
        let dst = self.resolve_input(line, to);
        let (src, dst) = match (src, dst) {
            (Ok(s), Ok(d)) => (s, d),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let extra = i64::try_from(delay).unwrap_or(i64::MAX);
        blocks::connect(&mut self.circuit, &src, &dst, extra)
            .map(|_| ())
            .map_err(|e| at(line, &format!("{from} -> {to}"), e.to_string()))
    }

    fn probe(&mut self, line: usize, ep: &EndpointRef) -> Result<(), Diagnostic> {
        let signal = ep.to_string();
        let endpoints: Vec<Endpoint> = if self.sources.contains_key(&ep.name) {
            self.resolve_output(line, ep)?.endpoints
        } else {
            let h = self
                .block(&ep.name)
                .ok_or_else(|| at(line, &ep.name, format!("unknown name `{}`", ep.name)))?;
            let port = ep.port.as_deref().unwrap_or("out");
            match (h.output(port), h.internal(port)) {
                (Some(out), _) => out.endpoints.clone(),
                (None, Some(e)) => vec![e],
                (None, None) => {
                    return Err(at(line, &signal, format!("{} `{}` has no port or neuron `{port}`", h.kind, ep.name)))
                }
            }
        };
        if self.probes.iter().any(|p| p.signal == signal) {
            return Ok(());
        }
        for &e in &endpoints {
            self.circuit
                .add_probe(e)
                .map_err(|err| at(line, &signal, err.to_string()))?;
        }
        let members = endpoints
            .iter()
            .map(|&e| self.circuit.name_of(e).expect("resolved endpoint").to_string())
            .collect();
        self.probes.push(Probe { signal, members });
        Ok(())
    }

    fn statement(&mut self, index: usize) -> Result<(), Diagnostic> {
        let line = self.ast.line_of(index);
        match &self.ast.statements[index] {
            Statement::Source { name, spikes } => {
                let id = self
                    .circuit
                    .add_source(name, spikes.clone())
                    .map_err(|e| at(line, name, e.to_string()))?;
                self.sources.insert(name.clone(), id);
                Ok(())
            }
            Statement::Block { kind, name, params } => self.build_block(index, kind, name, params),
            Statement::Connect { from, to, delay } => self.connect(line, from, to, *delay),
            Statement::Probe(ep) => self.probe(line, ep),
            Statement::Run(t) => {
                if *t == 0 {
                    Err(at(line, "run", "run horizon must be at least 1"))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Builds the circuit described by `ast`.
///
/// Statements are processed in order, so blocks and sources must be
/// declared before they are connected or probed. NOT, fast AND and flank
/// blocks share one constant spike source: the first `block css` in the
/// file if there is one, otherwise an implicit `_css` with first spike 1.
pub fn elaborate(ast: &NetlistAst) -> Result<Elaboration, Vec<Diagnostic>> {
    let explicit_css = ast.statements.iter().position(|s| {
        matches!(s, Statement::Block { kind, .. } if kind == BlockKind::ConstantSpikeSource.keyword())
    });
    let mut el = Elaborator {
        ast,
        circuit: CircuitGraph::new(),
        blocks: Vec::new(),
        sources: BTreeMap::new(),
        css: None,
        explicit_css,
        probes: Vec::new(),
        diags: Vec::new(),
    };
    for i in 0..ast.statements.len() {
        if let Err(d) = el.statement(i) {
            el.diags.push(d);
        }
    }
    if !el.diags.is_empty() {
        return Err(el.diags);
    }
    Ok(Elaboration {
        circuit: el.circuit,
        blocks: el.blocks,
        sources: el.sources,
        css: el.css,
        probes: el.probes,
        horizon: ast.horizon(),
    })
}
