// SPDX-License-Identifier: Apache-2.0

//! The `.snl` circuit description language.
//!
//! ```text
//! # comment to end of line
//! source a spikes=[1,4,5]
//! block and_classic g inputs=2
//! connect a -> g.in0
//! connect a -> g.in1 delay=+1
//! probe g.out
//! run 20
//! ```
//!
//! Statements: `source ID spikes=[int,...]`,
//! `block KIND ID [inputs=N] [half_period=K] [first=T]`,
//! `connect EP -> EP [delay=+D]`, `probe EP`, `run T`, where `EP` is
//! `ID` or `ID.port`. Kinds are `or`, `and_classic`, `and_fast`,
//! `sr_latch`, `switch`, `xor`, `css`, `not`, `oscillator` and `flank`.
//! Input ports are `in0`..`in{n-1}`, `set` and `reset`; output ports are
//! `out`, `rise` and `fall`. Probes may also name a block's internal
//! neurons (`g.or`, `sw.u`, `sw.c`, `x.i0`, `x.o0`, `f.not`, ...). Times and
//! delays are integer ticks of 1 ms.

mod ast;
mod elaborate;
mod lexer;
mod parser;

use std::fmt;

pub use ast::{format, BlockParams, EndpointRef, NetlistAst, Statement};
pub use elaborate::{elaborate, Elaboration, Probe};
pub use parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
    pub message: String,
    pub lexeme: String,
}

impl Diagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>, lexeme: &str) -> Self {
        Diagnostic {
            severity: Severity::Error,
            line,
            column,
            message: message.into(),
            lexeme: lexeme.to_string(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.line, self.column, self.message)?;
        if !self.lexeme.is_empty() {
            write!(f, " (at `{}`)", self.lexeme)?;
        }
        Ok(())
    }
}

/// Parses and elaborates in one step.
pub fn load(text: &str) -> Result<Elaboration, Vec<Diagnostic>> {
    elaborate(&parse(text)?)
}
