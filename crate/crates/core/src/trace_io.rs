// SPDX-License-Identifier: Apache-2.0

//! Trace rendering, export and comparison.
//!
//! ASCII trace format, one line per row, each ending in `|` and LF:
//!
//! ```text
//! t(ms) |0|1|2|3|
//! a     |.|1|.|.|
//! g.out |.|.|.|1|
//! ```
//!
//! The label column is left-justified and padded to the longest of `t(ms)`
//! and the signal names, followed by ` |`. Header cells are tick numbers;
//! signal cells are one character: `1` for a spike, `.` for none.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::trace::{SpikeTrain, Tick, Trace};

const TIME_LABEL: &str = "t(ms)";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceIoError {
    #[error("unknown signal `{0}`")]
    UnknownSignal(String),
    #[error("empty or out-of-range window [{t0}, {t1}) for horizon {horizon}")]
    BadWindow { t0: Tick, t1: Tick, horizon: Tick },
    #[error("membrane recording was not enabled for this run")]
    NoMembrane,
    #[error("malformed trace JSON: {0}")]
    Json(String),
}

/// Renders `signals` over `[t0, t1)` in the ASCII trace format.
pub fn render_ascii<S: AsRef<str>>(
    trace: &Trace,
    signals: &[S],
    t0: Tick,
    t1: Tick,
) -> Result<String, TraceIoError> {
    if t0 >= t1 || t1 > trace.horizon {
        return Err(TraceIoError::BadWindow {
            t0,
            t1,
            horizon: trace.horizon,
        });
    }
    let rows = signals
        .iter()
        .map(|s| {
            let s = s.as_ref();
            trace
                .train(s)
                .map(|train| (s, train))
                .ok_or_else(|| TraceIoError::UnknownSignal(s.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let width = rows
        .iter()
        .map(|(s, _)| s.chars().count())
        .chain(std::iter::once(TIME_LABEL.len()))
        .max()
        .unwrap_or(0);

    let mut out = String::new();
    let _ = write!(out, "{TIME_LABEL:<width$} |");
    for t in t0..t1 {
        let _ = write!(out, "{t}|");
    }
    out.push('\n');
    for (name, train) in rows {
        let _ = write!(out, "{name:<width$} |");
        for t in t0..t1 {
            out.push(if train.contains(t) { '1' } else { '.' });
            out.push('|');
        }
        out.push('\n');
    }
    Ok(out)
}

/// `signal,tick` rows sorted by signal then tick, after a header line.
pub fn export_csv(trace: &Trace) -> String {
    let mut out = String::from("signal,tick\n");
    for (name, train) in &trace.spikes {
        for t in train.iter() {
            let _ = writeln!(out, "{name},{t}");
        }
    }
    out
}

/// JSON object mapping signal name to its sorted tick array, keys sorted.
pub fn export_json(trace: &Trace) -> String {
    let map: BTreeMap<&str, &[Tick]> = trace
        .spikes
        .iter()
        .map(|(k, v)| (k.as_str(), v.ticks()))
        .collect();
    let mut s = serde_json::to_string(&map).expect("plain map serializes");
    s.push('\n');
    s
}

/// Parses [`export_json`] output back into a trace without membrane data.
pub fn import_json(text: &str, horizon: Tick) -> Result<Trace, TraceIoError> {
    let spikes: BTreeMap<String, SpikeTrain> =
        serde_json::from_str(text).map_err(|e| TraceIoError::Json(e.to_string()))?;
    Ok(Trace {
        horizon,
        spikes,
        membrane: None,
    })
}

/// `neuron,tick,v_mV` rows with six decimals.
pub fn export_membrane_csv(trace: &Trace) -> Result<String, TraceIoError> {
    let membrane = trace.membrane.as_ref().ok_or(TraceIoError::NoMembrane)?;
    let mut out = String::from("neuron,tick,v_mV\n");
    for (name, samples) in membrane {
        for (t, v) in samples.iter().enumerate() {
            let _ = writeln!(out, "{name},{t},{v:.6}");
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    /// Spike present in the first trace only.
    OnlyInA { signal: String, tick: Tick },
    /// Spike present in the (shifted) second trace only.
    OnlyInB { signal: String, tick: Tick },
    /// Signal recorded in only one of the traces.
    MissingSignal { signal: String, in_a: bool },
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mismatch::OnlyInA { signal, tick } => write!(f, "{signal}: spike at {tick} only in A"),
            Mismatch::OnlyInB { signal, tick } => write!(f, "{signal}: spike at {tick} only in B"),
            Mismatch::MissingSignal { signal, in_a } => write!(
                f,
                "{signal}: recorded only in {}",
                if *in_a { "A" } else { "B" }
            ),
        }
    }
}

/// Compares `a` with `b` delayed by `latency_shift` ticks.
///
/// Only ticks observable in both traces after the shift are compared, so
/// spikes pushed past either horizon do not count as mismatches.
pub fn diff(a: &Trace, b: &Trace, latency_shift: i64) -> Vec<Mismatch> {
    let lo = latency_shift.max(0) as Tick;
    let hi = (b.horizon as i64 + latency_shift).clamp(0, a.horizon as i64) as Tick;
    let names: BTreeSet<&String> = a.spikes.keys().chain(b.spikes.keys()).collect();
    let mut out = Vec::new();
    for name in names {
        let (ta, tb) = match (a.spikes.get(name), b.spikes.get(name)) {
            (Some(ta), Some(tb)) => (ta, tb),
            (ta, _) => {
                out.push(Mismatch::MissingSignal {
                    signal: name.clone(),
                    in_a: ta.is_some(),
                });
                continue;
            }
        };
        let ta = ta.window(lo, hi);
        let tb = tb.shifted(latency_shift, hi).window(lo, hi);
        for t in ta.iter().filter(|&t| !tb.contains(t)) {
            out.push(Mismatch::OnlyInA {
                signal: name.clone(),
                tick: t,
            });
        }
        for t in tb.iter().filter(|&t| !ta.contains(t)) {
            out.push(Mismatch::OnlyInB {
                signal: name.clone(),
                tick: t,
            });
        }
    }
    out
}
