// SPDX-License-Identifier: Apache-2.0

//! Leaky integrate-and-fire parameter set.

use serde::{Deserialize, Serialize};

/// Simulation tick length in milliseconds.
pub const TICK_MS: f64 = 1.0;

/// Constants of a current-based exponential LIF neuron.
///
/// Units: capacitance in nF, time constants in ms, potentials in mV.
/// The default is the set used for every building block, tuned so that a
/// neuron is back at rest one tick after any input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeuronParams {
    pub c_m: f64,
    pub tau_m: f64,
    pub tau_refrac: f64,
    pub tau_syn_e: f64,
    pub tau_syn_i: f64,
    pub v_rest: f64,
    pub v_reset: f64,
    pub v_thresh: f64,
}

impl Default for NeuronParams {
    fn default() -> Self {
        NeuronParams {
            c_m: 0.1,
            tau_m: 0.1,
            tau_refrac: 1.0,
            tau_syn_e: 0.1,
            tau_syn_i: 0.1,
            v_rest: -65.0,
            v_reset: -65.0,
            v_thresh: -64.91,
        }
    }
}

impl NeuronParams {
    /// Lists every violated invariant; empty when the set is usable.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let positive = [
            ("c_m", self.c_m),
            ("tau_m", self.tau_m),
            ("tau_syn_E", self.tau_syn_e),
            ("tau_syn_I", self.tau_syn_i),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                out.push(format!("{name} must be > 0 (got {value})"));
            }
        }
        if !(self.tau_refrac >= 0.0 && self.tau_refrac.is_finite()) {
            out.push(format!("tau_refrac must be >= 0 (got {})", self.tau_refrac));
        }
        let potentials = [self.v_rest, self.v_reset, self.v_thresh];
        if potentials.iter().any(|v| !v.is_finite()) {
            out.push("potentials must be finite".to_string());
        } else {
            if self.v_reset > self.v_rest {
                out.push(format!(
                    "v_reset ({}) must not exceed v_rest ({})",
                    self.v_reset, self.v_rest
                ));
            }
            if self.v_rest >= self.v_thresh {
                out.push(format!(
                    "v_rest ({}) must be below v_thresh ({})",
                    self.v_rest, self.v_thresh
                ));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.problems().is_empty()
    }

    /// Whether a neuron that fired at `last` is still refractory at `t`.
    pub fn refractory_at(&self, last: Option<u64>, t: u64) -> bool {
        match last {
            Some(last) if t > last => ((t - last) as f64) * TICK_MS < self.tau_refrac,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_set_is_valid() {
        assert!(NeuronParams::default().is_valid());
    }

    #[test]
    fn rejects_zero_time_constant() {
        let p = NeuronParams {
            tau_m: 0.0,
            ..NeuronParams::default()
        };
        assert_eq!(p.problems().len(), 1);
    }

    #[test]
    fn rejects_reset_above_rest_and_rest_above_thresh() {
        let p = NeuronParams {
            v_reset: -60.0,
            v_thresh: -70.0,
            ..NeuronParams::default()
        };
        assert_eq!(p.problems().len(), 2);
    }

    #[test]
    fn one_ms_refractory_blocks_nothing() {
        let p = NeuronParams::default();
        assert!(!p.refractory_at(Some(4), 5));
        assert!(!p.refractory_at(None, 5));
        let slow = NeuronParams {
            tau_refrac: 2.5,
            ..p
        };
        assert!(slow.refractory_at(Some(4), 5));
        assert!(slow.refractory_at(Some(4), 6));
        assert!(!slow.refractory_at(Some(4), 7));
    }
}
