// SPDX-License-Identifier: Apache-2.0

//! Bundled experiment netlists and their pass criteria.
//!
//! Every experiment is simulated under both backends. It passes when the
//! two spike traces are identical, every probed block output equals its
//! oracle, and the experiment's timing checkpoints hold.

use std::fmt::{self, Write as _};

use crate::netlist::{self, Diagnostic, Elaboration};
use crate::oracle::{self, StimulusSet};
use crate::sim::{run, Backend, SimConfig, SimError};
use crate::trace::{SpikeTrain, Tick, Trace};
use crate::trace_io::{diff, render_ascii, Mismatch};

pub const EXPERIMENTS: [&str; 7] = ["and4", "xor4", "switch", "flank", "css", "latch", "oscillator"];

/// Seed of the frozen `and4` stimuli.
pub const AND4_SEED: u64 = 2022;

/// Source text of a bundled netlist.
pub fn netlist_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "and4" => include_str!("../netlists/and4.snl"),
        "xor4" => include_str!("../netlists/xor4.snl"),
        "switch" => include_str!("../netlists/switch.snl"),
        "flank" => include_str!("../netlists/flank.snl"),
        "css" => include_str!("../netlists/css.snl"),
        "latch" => include_str!("../netlists/latch.snl"),
        "oscillator" => include_str!("../netlists/oscillator.snl"),
        _ => return None,
    })
}

/// Regenerates the four `and4` input trains: ChaCha8 seed 2022, stream 0,
/// ticks 1..30, with coincidences forced at ticks 3 and 6.
pub fn and4_stimuli() -> Vec<SpikeTrain> {
    let mut rng = crate::gate_test::trial_rng(AND4_SEED, 0);
    let forced = SpikeTrain::from_unsorted([3, 6]);
    crate::gate_test::coincident_trains(&mut rng, 4, 0.3, 1, 31)
        .into_iter()
        .map(|t| t.union(&forced))
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum ReproError {
    #[error("unknown experiment `{name}` (expected one of {list})", name = .0, list = EXPERIMENTS.join(", "))]
    Unknown(String),
    #[error("bundled netlist does not load:\n{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Netlist(Vec<Diagnostic>),
    #[error("bundled netlist has no `run` statement")]
    NoHorizon,
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    /// Mismatches behind a failed comparison, empty otherwise.
    pub details: Vec<String>,
}

impl Check {
    fn holds(label: impl Into<String>, passed: bool) -> Self {
        Check {
            label: label.into(),
            passed,
            details: Vec::new(),
        }
    }

    fn compare(label: impl Into<String>, mismatches: &[Mismatch]) -> Self {
        Check {
            label: label.into(),
            passed: mismatches.is_empty(),
            details: mismatches.iter().map(Mismatch::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReproOutcome {
    pub name: String,
    pub elaboration: Elaboration,
    /// Probed signals under each backend, in [`Backend::ALL`] order.
    pub traces: Vec<(Backend, Trace)>,
    pub checks: Vec<Check>,
}

impl ReproOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn trace(&self, backend: Backend) -> &Trace {
        &self.traces.iter().find(|(b, _)| *b == backend).expect("every backend runs").1
    }

    /// ASCII trace of the probed signals under `backend`.
    pub fn ascii(&self, backend: Backend) -> String {
        let t = self.trace(backend);
        render_ascii(t, &self.elaboration.signal_order(), 0, t.horizon).expect("probed signals exist")
    }
}

impl fmt::Display for ReproOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "repro {}", self.name)?;
        f.write_str(&self.ascii(Backend::Lif))?;
        let mut body = String::new();
        for c in &self.checks {
            let _ = writeln!(body, "[{}] {}", if c.passed { "ok" } else { "FAIL" }, c.label);
            for d in &c.details {
                let _ = writeln!(body, "    {d}");
            }
        }
        f.write_str(&body)?;
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Loads, simulates and checks one bundled experiment.
pub fn run_experiment(name: &str) -> Result<ReproOutcome, ReproError> {
    let text = netlist_text(name).ok_or_else(|| ReproError::Unknown(name.to_string()))?;
    let el = netlist::load(text).map_err(ReproError::Netlist)?;
    let horizon = el.horizon.ok_or(ReproError::NoHorizon)?;

    let mut raws = Vec::new();
    for backend in Backend::ALL {
        raws.push((backend, run(&el.circuit, &SimConfig::new(backend, horizon))?));
    }
    let traces: Vec<(Backend, Trace)> = raws.iter().map(|(b, raw)| (*b, el.observe(raw))).collect();

    let mut checks = vec![Check::compare(
        "lif and abstract spike traces identical",
        &diff(&raws[0].1, &raws[1].1, 0),
    )];
    let expected = expected_outputs(name, &raws[0].1, horizon);
    for (backend, t) in &traces {
        let mut got = Trace::new(horizon);
        for k in expected.spikes.keys() {
            if let Some(train) = t.train(k) {
                got.spikes.insert(k.clone(), train.clone());
            }
        }
        checks.push(Check::compare(format!("outputs equal oracle ({backend})"), &diff(&got, &expected, 0)));
    }
    for (backend, t) in &traces {
        for mut c in checkpoints(name, t) {
            c.label = format!("{} ({backend})", c.label);
            checks.push(c);
        }
    }
    Ok(ReproOutcome {
        name: name.to_string(),
        elaboration: el,
        traces,
        checks,
    })
}

fn input(raw: &Trace, name: &str) -> SpikeTrain {
    raw.train(name).cloned().unwrap_or_default()
}

fn expected_outputs(name: &str, raw: &Trace, h: Tick) -> Trace {
    let mut e = Trace::new(h);
    let mut put = |k: &str, t: SpikeTrain| {
        e.spikes.insert(k.to_string(), t);
    };
    match name {
        "and4" => {
            let stims = StimulusSet::new((0..4).map(|k| input(raw, &format!("a{k}"))).collect(), h);
            put("classic.out", oracle::oracle_and(&stims, 2));
            put("fast.out", oracle::oracle_and(&stims, 1));
        }
        "xor4" => {
            let stims = StimulusSet::new((0..4).map(|k| input(raw, &format!("x{k}"))).collect(), h);
            put("x.out", oracle::oracle_xor(&stims));
        }
        "switch" => {
            let (u, c) = oracle::oracle_switch(&input(raw, "in"), h);
            put("sw.out", u.union(&c));
            put("sw.u", u);
            put("sw.c", c);
        }
        "flank" => {
            let clk = oracle::oracle_oscillator(4, 5, h);
            let (rise, fall) = oracle::oracle_flank(&clk, h);
            put("clk", clk);
            put("fd.rise", rise);
            put("fd.fall", fall);
        }
        "css" => {
            let out = oracle::oracle_css(1, h).expect("first spike before horizon");
            put("c.latch", out.window(2, h));
            put("c.src", SpikeTrain::from_unsorted([1]));
            put("c.out", out);
        }
        "latch" => put("l.out", oracle::oracle_latch(&input(raw, "set"), &input(raw, "reset"), h)),
        "oscillator" => put("osc.out", oracle::oracle_oscillator(4, 1, h)),
        _ => {}
    }
    e
}

fn fires(t: &Trace, signal: &str, tick: Tick) -> bool {
    t.train(signal).is_some_and(|s| s.contains(tick))
}

fn fires_on(t: &Trace, signal: &str, ticks: impl IntoIterator<Item = Tick>) -> bool {
    ticks.into_iter().all(|k| fires(t, signal, k))
}

fn silent_on(t: &Trace, signal: &str, ticks: impl IntoIterator<Item = Tick>) -> bool {
    ticks.into_iter().all(|k| !fires(t, signal, k))
}

/// Timing facts each experiment must show, independent of the oracles.
fn checkpoints(name: &str, t: &Trace) -> Vec<Check> {
    match name {
        "and4" => {
            let mut classic = Trace::new(t.horizon);
            let mut fast = Trace::new(t.horizon);
            classic.spikes.insert("and".into(), t.train("classic.out").cloned().unwrap_or_default());
            fast.spikes.insert("and".into(), t.train("fast.out").cloned().unwrap_or_default());
            vec![
                Check::holds("classic AND fires at 5 for coincident inputs at 3", fires(t, "classic.out", 5)),
                Check::holds("fast AND fires at 7 for coincident inputs at 6", fires(t, "fast.out", 7)),
                Check::compare("fast output leads classic by exactly 1 tick", &diff(&classic, &fast, 1)),
            ]
        }
        "xor4" => vec![
            Check::holds("x0 alone at 1 gives output at 3", fires(t, "x.out", 3)),
            Check::holds("x0 and x1 at 2 give no output at 4", !fires(t, "x.out", 4)),
            Check::holds("all four inputs at 12 give no output at 14", !fires(t, "x.out", 14)),
        ],
        "switch" => vec![
            Check::holds("U fires at 2", fires(t, "sw.u", 2)),
            Check::holds("C fires on 3..6", fires_on(t, "sw.c", 3..=6)),
            Check::holds("C silent from 7", silent_on(t, "sw.c", 7..t.horizon)),
            Check::holds("U fires at 8", fires(t, "sw.u", 8)),
            Check::holds("C does not resume at 9", !fires(t, "sw.c", 9)),
        ],
        "flank" => vec![
            Check::holds("clock high on 6..9", fires_on(t, "clk", 6..=9) && silent_on(t, "clk", [5, 10])),
            Check::holds("rise output at 8", fires(t, "fd.rise", 8) && silent_on(t, "fd.rise", 0..8)),
            Check::holds("fall output at 13", fires(t, "fd.fall", 13) && silent_on(t, "fd.fall", 0..13)),
        ],
        "css" => vec![Check::holds("spikes every tick from 1", fires_on(t, "c.out", 1..t.horizon))],
        "latch" => vec![
            Check::holds("holds on 3..8 after set at 2", fires_on(t, "l.out", 3..=8)),
            Check::holds("released on 9..14 after reset at 8", silent_on(t, "l.out", 9..=14)),
            Check::holds("simultaneous set and reset keep the hold", fires_on(t, "l.out", 15..=26)),
            Check::holds("released from 27", silent_on(t, "l.out", 27..t.horizon)),
        ],
        "oscillator" => vec![
            Check::holds("high on 2..5", fires_on(t, "osc.out", 2..=5)),
            Check::holds("low on 6..9", silent_on(t, "osc.out", 6..=9)),
            Check::holds("high on 10..13", fires_on(t, "osc.out", 10..=13)),
        ],
        _ => Vec::new(),
    }
}
