// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spikegate::blocks::{self, resource_report, BlockHandle, OutputPort};
use spikegate::gate_test::{gate_test, GateTestConfig};
use spikegate::netlist::{self, format, parse};
use spikegate::repro::{netlist_text, EXPERIMENTS};
use spikegate::sim::{calibrate_unit_current, lif_tick, NeuronState};
use spikegate::trace_io::diff;
use spikegate::{
    run, Backend, BlockKind, CircuitGraph, Latency, NeuronParams, SimConfig, SpikeTrain, Tick, Trace,
};

/// Wall-clock budget for the full oracle-equivalence sweep.
const ORACLE_SWEEP_BUDGET: Duration = Duration::from_secs(30);
/// Membrane tolerance for cancellation and sub-threshold checks, in mV.
const V_TOL_MV: f64 = 1e-6;
/// Round-trip cases for the parser criterion.
const ROUND_TRIP_CASES: u32 = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn simulate(c: &CircuitGraph, backend: Backend, horizon: Tick, membrane: bool) -> Trace {
    let mut cfg = SimConfig::new(backend, horizon);
    if membrane {
        cfg = cfg.with_membrane();
    }
    run(c, &cfg).expect("simulation runs")
}

/// Drives input `k` of every block in `targets` from one source per train.
fn feed(c: &mut CircuitGraph, targets: &[&BlockHandle], inputs: &[SpikeTrain]) {
    for (k, t) in inputs.iter().enumerate() {
        let id = c.add_source(&format!("stim{k}"), t.ticks().to_vec()).unwrap();
        let port = OutputPort::from_source(c, id);
        for h in targets {
            blocks::connect(c, &port, &h.inputs[k], 0).unwrap();
        }
    }
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut configs = 0;
    let mut spikes = 0;
    for kind in BlockKind::ALL {
        let arities: Vec<Option<usize>> = if kind.has_arity() {
            vec![Some(2), Some(3), Some(4)]
        } else {
            vec![None]
        };
        for inputs in arities {
            let cfg = GateTestConfig {
                trials: 100,
                horizon: 200,
                ..GateTestConfig::new(kind, inputs)
            };
            let report = gate_test(&cfg).map_err(|e| e.to_string())?;
            ensure(report.passed(), || report.to_string())?;
            spikes += report.trials.iter().map(|t| t.expected_spikes).sum::<usize>();
            configs += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ORACLE_SWEEP_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{configs} block configurations x 100 trials x 2 backends, 0 mismatches, {spikes} expected spikes, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn backend_equivalence() -> Outcome {
    for name in EXPERIMENTS {
        let el = netlist::load(netlist_text(name).unwrap()).map_err(|d| format!("{name}: {d:?}"))?;
        let horizon = el.horizon.unwrap();
        ensure(horizon <= 1000, || format!("{name}: horizon {horizon}"))?;
        let lif = simulate(&el.circuit, Backend::Lif, horizon, false);
        let abs = simulate(&el.circuit, Backend::Abstract, horizon, false);
        let d = diff(&lif, &abs, 0);
        ensure(d.is_empty(), || format!("{name}: {d:?}"))?;
        ensure(lif.spikes.values().any(|t| !t.is_empty()), || format!("{name}: silent"))?;
    }
    Ok(format!("{} repro circuits identical under lif and abstract", EXPERIMENTS.len()))
}

fn table_one() -> Outcome {
    let mut rows = Vec::new();
    let mut check = |label: String, h: &BlockHandle, neurons: usize, conns: usize, latency: Latency| {
        let r = resource_report(h);
        rows.push(format!("{label}={}/{}/{}", r.neurons, r.connections, r.latency));
        ensure(
            (r.neurons, r.connections, r.latency) == (neurons, conns, latency),
            || format!("{label}: got {r:?}, want ({neurons}, {conns}, {latency})"),
        )
    };
    let fresh_css = |c: &mut CircuitGraph| blocks::build_css(c, "css", 1).unwrap();
    for n in 2..=6 {
        let mut c = CircuitGraph::new();
        check(format!("or{n}"), &blocks::build_or(&mut c, "g", n).unwrap(), 1, n, Latency::Ticks(1))?;
        let mut c = CircuitGraph::new();
        check(
            format!("and_classic{n}"),
            &blocks::build_and_classic(&mut c, "g", n).unwrap(),
            2,
            2 * n + 1,
            Latency::Ticks(2),
        )?;
        let mut c = CircuitGraph::new();
        check(format!("xor{n}"), &blocks::build_xor(&mut c, "g", n).unwrap(), 2 * n, n * n + n, Latency::Ticks(2))?;
        let mut c = CircuitGraph::new();
        let css = fresh_css(&mut c);
        check(
            format!("and_fast{n}"),
            &blocks::build_and_fast(&mut c, "g", n, &css).unwrap(),
            3,
            n + 3,
            Latency::Ticks(1),
        )?;
    }
    for (set, reset, conns) in [(true, false, 2), (false, true, 2), (true, true, 3)] {
        let mut c = CircuitGraph::new();
        let h = blocks::build_sr_latch(&mut c, "l", set, reset).unwrap();
        check(format!("sr_latch(set={set},reset={reset})"), &h, 1, conns, Latency::Ticks(1))?;
    }
    let mut c = CircuitGraph::new();
    check("switch".into(), &blocks::build_switch(&mut c, "s").unwrap(), 2, 6, Latency::Ticks(1))?;
    let mut c = CircuitGraph::new();
    check("css".into(), &fresh_css(&mut c).handle, 2, 2, Latency::Ticks(1))?;
    let mut c = CircuitGraph::new();
    let css = fresh_css(&mut c);
    check("not".into(), &blocks::build_not(&mut c, "n", &css).unwrap(), 3, 4, Latency::Ticks(1))?;
    let mut c = CircuitGraph::new();
    check(
        "oscillator".into(),
        &blocks::build_sync_oscillator(&mut c, "o", 4, 1).unwrap(),
        3,
        3,
        Latency::Ticks(1),
    )?;
    let mut c = CircuitGraph::new();
    let css = fresh_css(&mut c);
    let flank = blocks::build_flank_detector(&mut c, "f", &css).unwrap();
    check("flank".into(), &flank, 7, 14, Latency::Edges { rise: 2, fall: 3 })?;
    let own = flank.own_resources.neurons;
    ensure(own == 5, || format!("flank without css: {own} neurons"))?;
    Ok(format!(
        "{} rows match; flank neurons 7 with css, 5 without (reference table lists 5)",
        rows.len()
    ))
}

fn and_timing() -> Outcome {
    let mut notes = Vec::new();
    for n in 2..=4 {
        let coincident = [4, 9, 17];
        // All inputs at the coincident ticks, all but the last at 12.
        let inputs: Vec<SpikeTrain> = (0..n)
            .map(|k| {
                let partial: &[Tick] = if k + 1 < n { &[12] } else { &[] };
                SpikeTrain::from_unsorted(coincident.iter().chain(partial).copied())
            })
            .collect();
        for backend in Backend::ALL {
            let mut c = CircuitGraph::new();
            let classic = blocks::build_and_classic(&mut c, "classic", n).unwrap();
            let css = blocks::build_css(&mut c, "css", 1).unwrap();
            let fast = blocks::build_and_fast(&mut c, "fast", n, &css).unwrap();
            feed(&mut c, &[&classic, &fast], &inputs);
            let trace = simulate(&c, backend, 30, backend == Backend::Lif);
            let got_classic = classic.out().train(&trace);
            let got_fast = fast.out().train(&trace);
            let want_classic = SpikeTrain::from_unsorted(coincident.map(|t| t + 2));
            let want_fast = SpikeTrain::from_unsorted(coincident.map(|t| t + 1));
            ensure(got_classic == want_classic, || format!("n={n} {backend}: classic {got_classic}"))?;
            ensure(got_fast == want_fast, || format!("n={n} {backend}: fast {got_fast}"))?;

            let mut a = Trace::new(30);
            a.spikes.insert("and".into(), got_classic);
            let mut b = Trace::new(30);
            b.spikes.insert("and".into(), got_fast);
            let d = diff(&a, &b, 1);
            ensure(d.is_empty(), || format!("n={n} {backend}: shift-1 diff {d:?}"))?;

            if backend == Backend::Lif {
                let params = NeuronParams::default();
                let m = trace.membrane.as_ref().expect("membrane recorded");
                // n-1 inputs at 12: classic decides at 14, fast at 13.
                let v_classic = m["classic.out"][14];
                let v_fast = m["fast.out"][13];
                ensure((v_classic - params.v_rest).abs() < V_TOL_MV, || {
                    format!("n={n}: classic v at 14 is {v_classic}")
                })?;
                ensure(v_fast <= params.v_rest, || format!("n={n}: fast v at 13 is {v_fast}"))?;
                notes.push(format!("n={n} |dv|={:.1e}", (v_classic - params.v_rest).abs()));
            }
        }
    }
    Ok(format!(
        "classic +2, fast +1, shift-1 diff empty, n-1 inputs silent at v_rest ({})",
        notes.join(", ")
    ))
}

fn flank_timing() -> Outcome {
    for backend in Backend::ALL {
        let mut c = CircuitGraph::new();
        let css = blocks::build_css(&mut c, "css", 1).unwrap();
        let f = blocks::build_flank_detector(&mut c, "fd", &css).unwrap();
        feed(&mut c, &[&f], &[SpikeTrain::from_unsorted(6..=9)]);
        let trace = simulate(&c, backend, 30, false);
        let rise = f.output("rise").unwrap().train(&trace);
        let fall = f.output("fall").unwrap().train(&trace);
        ensure(rise.ticks() == [8], || format!("{backend}: rise {rise}"))?;
        ensure(fall.ticks() == [13], || format!("{backend}: fall {fall}"))?;
    }
    Ok("clock high 6..9: rise at 8, fall at 13 under both backends".into())
}

fn switch_checkpoints() -> Outcome {
    for backend in Backend::ALL {
        let mut c = CircuitGraph::new();
        let sw = blocks::build_switch(&mut c, "sw").unwrap();
        feed(&mut c, &[&sw], &[SpikeTrain::from_unsorted([1, 6, 7, 8])]);
        let trace = simulate(&c, backend, 20, false);
        let u = trace.train("sw.u").unwrap();
        let cy = trace.train("sw.c").unwrap();
        ensure(u.contains(2), || format!("{backend}: U {u}"))?;
        ensure((3..=6).all(|t| cy.contains(t)), || format!("{backend}: C {cy}"))?;
        ensure(!cy.contains(7), || format!("{backend}: C at 7"))?;
        ensure(u.contains(8), || format!("{backend}: U {u}"))?;
        ensure(!cy.contains(9), || format!("{backend}: C resumed at 9"))?;
    }
    Ok("U at 2, C from 3, C silent at 7, U at 8, C off at 9".into())
}

fn calibration() -> Outcome {
    let p = NeuronParams::default();
    let unit = calibrate_unit_current(&p);
    let mut s = NeuronState::at_rest(&p);
    ensure(lif_tick(&mut s, &p, 1.0, 0.0, unit, 0), || "1.0 unit did not fire".into())?;
    let mut s = NeuronState::at_rest(&p);
    ensure(!lif_tick(&mut s, &p, 0.99, 0.0, unit, 0), || "0.99 unit fired".into())?;
    let mut worst: f64 = 0.0;
    for k in 1..=5 {
        let mut s = NeuronState::at_rest(&p);
        let fired = lif_tick(&mut s, &p, k as f64, k as f64, unit, 0);
        let dv = (s.v_peak - p.v_rest).abs();
        ensure(!fired && dv < V_TOL_MV, || format!("k={k}: fired={fired} dv={dv}"))?;

        // The same through a circuit: k excitatory and k inhibitory events.
        let mut c = CircuitGraph::new();
        let n = c.add_neuron("n", p).unwrap();
        let src = c.add_source("s", vec![2]).unwrap();
        c.add_synapse(src, n, k, 1).unwrap();
        c.add_synapse(src, n, -k, 1).unwrap();
        let trace = simulate(&c, Backend::Lif, 6, true);
        let v = &trace.membrane.as_ref().unwrap()["n"];
        let dv_circuit = v.iter().map(|v| (v - p.v_rest).abs()).fold(0.0, f64::max);
        ensure(trace.train("n").unwrap().is_empty() && dv_circuit < V_TOL_MV, || {
            format!("k={k}: circuit dv={dv_circuit}")
        })?;
        worst = worst.max(dv).max(dv_circuit);
    }
    Ok(format!(
        "unit current {unit:.6e} nA: 1.0 fires, 0.99 does not, max cancellation |dv| {worst:.1e} mV"
    ))
}

fn parser() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: ROUND_TRIP_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&common::netlist_ast(), |ast| {
            let text = format(&ast);
            let back = parse(&text).map_err(|d| proptest::test_runner::TestCaseError::fail(format!("{d:?}")))?;
            proptest::prop_assert_eq!(back, ast);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut gen = TestRunner::deterministic();
    let mut error_cases = 0;
    for k in 1..=10 {
        for _ in 0..20 {
            let ast = loop {
                let ast = proptest::strategy::ValueTree::current(
                    &proptest::strategy::Strategy::new_tree(&common::netlist_ast(), &mut gen).unwrap(),
                );
                if ast.statements.len() >= k {
                    break ast;
                }
            };
            let text = common::corrupt_lines(&format(&ast), k, &mut rng);
            let diags = parse(&text).err().unwrap_or_default();
            ensure(diags.len() >= k, || format!("k={k}: {} diagnostics for\n{text}", diags.len()))?;
            error_cases += 1;
        }
    }

    for name in EXPERIMENTS {
        let text = netlist_text(name).unwrap();
        let a = netlist::load(text).map_err(|d| format!("{name}: {d:?}"))?.circuit.dump();
        let b = netlist::load(text).unwrap().circuit.dump();
        ensure(a == b, || format!("{name}: dumps differ"))?;
    }
    Ok(format!(
        "{ROUND_TRIP_CASES} round trips, {error_cases} corrupted files with >= k diagnostics, {} deterministic dumps",
        EXPERIMENTS.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("backend equivalence", backend_equivalence),
        ("resource table", table_one),
        ("AND timing", and_timing),
        ("flank detector timing", flank_timing),
        ("switch checkpoints", switch_checkpoints),
        ("calibration", calibration),
        ("parser", parser),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (label, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {label}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {label}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
