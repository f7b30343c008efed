// SPDX-License-Identifier: Apache-2.0

//! Per-neuron update rules for the two backends.

use super::params::{NeuronParams, TICK_MS};
use crate::trace::Tick;

/// Fraction of the minimal firing current that one calibrated unit sits above.
///
/// A unit exactly at threshold would be vetoed by the ~4.5e-5 unit of current
/// left over from the previous tick's inhibition. 0.995 puts 1.0 unit 0.5%
/// above threshold and 0.99 unit 0.5% below it.
pub const UNIT_HEADROOM: f64 = 0.995;

const CALIBRATION_REL_PRECISION: f64 = 1e-6;

/// Dynamic state of one neuron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronState {
    /// Membrane potential (mV) after the last update, post-reset.
    pub v: f64,
    /// Membrane potential (mV) at the end of the last update, before any reset.
    pub v_peak: f64,
    /// Excitatory synaptic current (nA).
    pub i_e: f64,
    /// Inhibitory synaptic current (nA), never positive.
    pub i_i: f64,
    pub last_spike: Option<Tick>,
}

impl NeuronState {
    pub fn at_rest(params: &NeuronParams) -> Self {
        NeuronState {
            v: params.v_rest,
            v_peak: params.v_rest,
            i_e: 0.0,
            i_i: 0.0,
            last_spike: None,
        }
    }
}

/// Threshold-gate update: fires iff the tick's net input is at least one unit.
///
/// Nothing but `last_spike` survives the tick, which is what the LIF backend
/// reduces to when every time constant is far below the tick length.
pub fn abstract_tick(state: &mut NeuronState, params: &NeuronParams, net: i64, t: Tick) -> bool {
    state.i_e = 0.0;
    state.i_i = 0.0;
    state.v_peak = params.v_rest + net as f64 * (params.v_thresh - params.v_rest);
    let fired = net >= 1 && !params.refractory_at(state.last_spike, t);
    if fired {
        state.last_spike = Some(t);
        state.v = params.v_reset;
    } else {
        state.v = params.v_rest;
    }
    fired
}

/// Current-based exponential LIF update over one tick.
///
/// `exc_in` and `inh_in` are event magnitudes in units arriving this tick;
/// `unit_current` converts units to nA. Order: decay currents, add this
/// tick's events, integrate v with the current held over the tick, then
/// test the threshold at the tick boundary.
pub fn lif_tick(
    state: &mut NeuronState,
    params: &NeuronParams,
    exc_in: f64,
    inh_in: f64,
    unit_current: f64,
    t: Tick,
) -> bool {
    state.i_e = state.i_e * (-TICK_MS / params.tau_syn_e).exp() + exc_in * unit_current;
    state.i_i = state.i_i * (-TICK_MS / params.tau_syn_i).exp() - inh_in * unit_current;

    if params.refractory_at(state.last_spike, t) {
        state.v = params.v_reset;
        state.v_peak = params.v_reset;
        return false;
    }

    let decay = (-TICK_MS / params.tau_m).exp();
    let resistance = params.tau_m / params.c_m;
    let drive = resistance * (state.i_e + state.i_i);
    state.v = params.v_rest + (state.v - params.v_rest) * decay + drive * (1.0 - decay);
    state.v_peak = state.v;

    let fired = state.v >= params.v_thresh;
    if fired {
        state.v = params.v_reset;
        state.last_spike = Some(t);
    }
    fired
}

fn single_unit_fires(params: &NeuronParams, scale: f64) -> bool {
    let mut s = NeuronState::at_rest(params);
    lif_tick(&mut s, params, 1.0, 0.0, scale, 0)
}

/// Smallest current (nA) with which one unit fires a resting neuron in its
/// delivery tick, found by bisection to 1e-6 relative precision.
pub fn minimal_firing_current(params: &NeuronParams) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1e-3;
    let mut guard = 0;
    while !single_unit_fires(params, hi) {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        assert!(guard < 2048, "no finite current fires this neuron");
    }
    while hi - lo > CALIBRATION_REL_PRECISION * hi {
        let mid = 0.5 * (lo + hi);
        if single_unit_fires(params, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Current per unit weight (nA) for the LIF backend: the minimal firing
/// current divided by [`UNIT_HEADROOM`].
pub fn calibrate_unit_current(params: &NeuronParams) -> f64 {
    minimal_firing_current(params) / UNIT_HEADROOM
}
