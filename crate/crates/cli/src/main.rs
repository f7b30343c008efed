// SPDX-License-Identifier: Apache-2.0

//! `spikegate` command-line tool.
//!
//! Exit codes: 0 success or PASS, 1 diagnostics, simulation or
//! verification failure, 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spikegate::blocks::{resource_report, BlockKind};
use spikegate::gate_test::{gate_test, GateTestConfig, GateTestError, DEFAULT_HORIZON, DEFAULT_SEED, DEFAULT_TRIALS};
use spikegate::netlist::{self, Diagnostic, Elaboration};
use spikegate::repro::{self, EXPERIMENTS};
use spikegate::sim::{calibrate_unit_current, minimal_firing_current, UNIT_HEADROOM};
use spikegate::trace_io::{export_csv, export_json, export_membrane_csv, render_ascii};
use spikegate::{run, Backend, NeuronParams, SimConfig, Tick, Trace};

#[derive(Parser)]
#[command(name = "spikegate", version, about = "Spiking logic block simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Lif,
    Abstract,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Lif => Backend::Lif,
            BackendArg::Abstract => Backend::Abstract,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a netlist and write its trace.
    Run {
        file: PathBuf,
        /// Horizon in ticks; overrides the netlist's `run` statement.
        #[arg(long)]
        until: Option<Tick>,
        #[arg(long, value_enum, default_value_t = BackendArg::Lif)]
        backend: BackendArg,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Write the trace here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also record membrane potentials (neuron,tick,v_mV).
        #[arg(long)]
        membrane: bool,
    },
    /// Run a bundled experiment under both backends and check it.
    Repro {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(EXPERIMENTS))]
        experiment: String,
    },
    /// Compare a block against its oracle on seeded random stimuli.
    GateTest {
        #[arg(value_parser = parse_kind)]
        kind: BlockKind,
        /// Input count for or, and_classic, and_fast and xor.
        #[arg(long)]
        inputs: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, env = "SPIKEGATE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: Tick,
    },
    /// Parse, elaborate and validate a netlist; print per-block resources.
    Check { file: PathBuf },
    /// Print the calibrated unit current for the default neuron parameters.
    Calibrate,
}

fn parse_kind(s: &str) -> Result<BlockKind, String> {
    s.parse()
}

enum Failure {
    /// Exit 1; the message, if any, goes to standard error.
    Fail(String),
    /// Exit 2.
    Usage(String),
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            file,
            until,
            backend,
            format,
            out,
            membrane,
        } => cmd_run(&file, until, backend.into(), format, out.as_deref(), membrane),
        Command::Repro { experiment } => cmd_repro(&experiment),
        Command::GateTest {
            kind,
            inputs,
            trials,
            seed,
            horizon,
        } => cmd_gate_test(GateTestConfig {
            kind,
            inputs,
            trials,
            seed,
            horizon,
        }),
        Command::Check { file } => cmd_check(&file),
        Command::Calibrate => cmd_calibrate(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Fail(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Fail(format!("cannot write output: {e}")))
        }
    }
}

fn diagnostics(file: &Path, diags: &[Diagnostic]) -> Failure {
    let lines: Vec<String> = diags.iter().map(|d| format!("{}:{d}", file.display())).collect();
    Failure::Fail(lines.join("\n"))
}

fn load(file: &Path) -> Result<Elaboration, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", file.display())))?;
    let el = netlist::load(&text).map_err(|d| diagnostics(file, &d))?;
    let violations = el.circuit.validate();
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| format!("{}: error: {v}", file.display())).collect();
        return Err(Failure::Fail(lines.join("\n")));
    }
    Ok(el)
}

fn cmd_run(
    file: &Path,
    until: Option<Tick>,
    backend: Backend,
    format: Format,
    out: Option<&Path>,
    membrane: bool,
) -> CmdResult {
    if until == Some(0) {
        return Err(Failure::Usage("--until must be at least 1".into()));
    }
    let el = load(file)?;
    let horizon = until
        .or(el.horizon)
        .ok_or_else(|| Failure::Usage(format!("{} has no `run` statement; pass --until", file.display())))?;
    let mut cfg = SimConfig::new(backend, horizon);
    if membrane {
        cfg = cfg.with_membrane();
    }
    let raw = run(&el.circuit, &cfg).map_err(|e| Failure::Fail(e.to_string()))?;
    let trace = el.observe(&raw);
    let samples = Trace {
        horizon,
        spikes: Default::default(),
        membrane: raw.membrane.clone(),
    };

    let text = match format {
        Format::Ascii | Format::Csv => {
            let mut s = match format {
                Format::Ascii => render_ascii(&trace, &el.signal_order(), 0, horizon)
                    .map_err(|e| Failure::Fail(e.to_string()))?,
                _ => export_csv(&trace),
            };
            if membrane {
                s.push('\n');
                s.push_str(&export_membrane_csv(&samples).map_err(|e| Failure::Fail(e.to_string()))?);
            }
            s
        }
        Format::Json if membrane => {
            let spikes: serde_json::Value =
                serde_json::from_str(&export_json(&trace)).expect("exported JSON parses");
            let doc = serde_json::json!({ "spikes": spikes, "membrane": samples.membrane });
            format!("{doc}\n")
        }
        Format::Json => export_json(&trace),
    };
    emit(&text, out)
}

fn cmd_repro(name: &str) -> CmdResult {
    let outcome = repro::run_experiment(name).map_err(|e| Failure::Fail(e.to_string()))?;
    emit(&format!("{outcome}\n"), None)?;
    if outcome.passed() {
        Ok(())
    } else {
        Err(Failure::Fail(String::new()))
    }
}

fn cmd_gate_test(cfg: GateTestConfig) -> CmdResult {
    let report = gate_test(&cfg).map_err(|e| match e {
        GateTestError::Arity { .. } | GateTestError::NoArity(_) | GateTestError::ShortHorizon => {
            Failure::Usage(e.to_string())
        }
        other => Failure::Fail(other.to_string()),
    })?;
    emit(&format!("{report}\n"), None)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Fail(String::new()))
    }
}

fn cmd_check(file: &Path) -> CmdResult {
    let el = load(file)?;
    let mut s = String::new();
    let mut footnote = false;
    for (name, h) in &el.blocks {
        let r = resource_report(h);
        let neurons = if h.kind == BlockKind::FlankDetector {
            footnote = true;
            format!("{} neurons ({} without css)*", r.neurons, h.own_resources.neurons)
        } else {
            format!("{} neurons", r.neurons)
        };
        s.push_str(&format!(
            "{}: {neurons}, {} connections, latency {} (block {name})\n",
            h.kind, r.connections, r.latency
        ));
    }
    let c = &el.circuit;
    s.push_str(&format!(
        "circuit: {} neurons, {} sources, {} synapses, {} probes\n",
        c.neuron_count(),
        c.source_count(),
        c.synapse_count(),
        c.probes().len()
    ));
    if footnote {
        s.push_str(
            "* the reference resource table lists 5 neurons for the flank detector; \
             the count here includes its 2-neuron constant spike source\n",
        );
    }
    emit(&s, None)
}

fn cmd_calibrate() -> CmdResult {
    let p = NeuronParams::default();
    let minimal = minimal_firing_current(&p);
    let unit = calibrate_unit_current(&p);
    let s = format!(
        "c_m={} nF tau_m={} ms tau_syn_e={} ms tau_syn_i={} ms tau_refrac={} ms v_rest={} mV v_reset={} mV v_thresh={} mV\n\
         minimal_firing_current_nA={minimal:.9e}\n\
         headroom={UNIT_HEADROOM}\n\
         unit_current_nA={unit:.9e}\n",
        p.c_m, p.tau_m, p.tau_syn_e, p.tau_syn_i, p.tau_refrac, p.v_rest, p.v_reset, p.v_thresh
    );
    emit(&s, None)
}
