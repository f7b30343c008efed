// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::trace::Tick;

/// `name` or `name.port`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndpointRef {
    pub name: String,
    pub port: Option<String>,
}

impl EndpointRef {
    pub fn new(name: &str, port: Option<&str>) -> Self {
        EndpointRef {
            name: name.to_string(),
            port: port.map(str::to_string),
        }
    }
}

impl fmt::Display for EndpointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.port {
            Some(p) => write!(f, "{}.{}", self.name, p),
            None => f.write_str(&self.name),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BlockParams {
    pub inputs: Option<u64>,
    pub half_period: Option<u64>,
    pub first: Option<Tick>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Source { name: String, spikes: Vec<Tick> },
    /// `kind` is kept verbatim; elaboration resolves it.
    Block { kind: String, name: String, params: BlockParams },
    Connect { from: EndpointRef, to: EndpointRef, delay: u64 },
    Probe(EndpointRef),
    Run(Tick),
}

impl Statement {
    /// Name this statement declares, if any.
    pub fn declared_name(&self) -> Option<&str> {
        match self {
            Statement::Source { name, .. } | Statement::Block { name, .. } => Some(name),
            _ => None,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Source { name, spikes } => {
                let list: Vec<String> = spikes.iter().map(|t| t.to_string()).collect();
                write!(f, "source {name} spikes=[{}]", list.join(","))
            }
            Statement::Block { kind, name, params } => {
                write!(f, "block {kind} {name}")?;
                if let Some(n) = params.inputs {
                    write!(f, " inputs={n}")?;
                }
                if let Some(k) = params.half_period {
                    write!(f, " half_period={k}")?;
                }
                if let Some(t) = params.first {
                    write!(f, " first={t}")?;
                }
                Ok(())
            }
            Statement::Connect { from, to, delay } => {
                write!(f, "connect {from} -> {to}")?;
                if *delay > 0 {
                    write!(f, " delay=+{delay}")?;
                }
                Ok(())
            }
            Statement::Probe(ep) => write!(f, "probe {ep}"),
            Statement::Run(t) => write!(f, "run {t}"),
        }
    }
}

/// Parsed netlist: statements in source order plus the line each came from.
///
/// Equality compares statements only.
#[derive(Debug, Clone, Default)]
pub struct NetlistAst {
    pub statements: Vec<Statement>,
    pub lines: Vec<usize>,
}

impl PartialEq for NetlistAst {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl Eq for NetlistAst {}

impl NetlistAst {
    pub fn from_statements(statements: Vec<Statement>) -> Self {
        let lines = (1..=statements.len()).collect();
        NetlistAst { statements, lines }
    }

    pub fn line_of(&self, index: usize) -> usize {
        self.lines.get(index).copied().unwrap_or(index + 1)
    }

    pub fn horizon(&self) -> Option<Tick> {
        self.statements.iter().find_map(|s| match s {
            Statement::Run(t) => Some(*t),
            _ => None,
        })
    }
}

/// Canonical text: one statement per line, single spaces, no comments.
pub fn format(ast: &NetlistAst) -> String {
    let mut out = String::new();
    for s in &ast.statements {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}
