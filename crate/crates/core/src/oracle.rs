// SPDX-License-Identifier: Apache-2.0

//! Reference semantics for every block, written directly over spike trains.
//!
//! Each oracle states what a block should output for given input trains,
//! without going through neurons or synapses. Outputs landing at or after
//! the horizon are dropped; silence is assumed before tick 0.

use crate::trace::{SpikeTrain, Tick};

/// Input trains for one block, one per terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StimulusSet {
    pub trains: Vec<SpikeTrain>,
    pub horizon: Tick,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("first spike {first} is not before horizon {horizon}")]
    FirstAfterHorizon { first: Tick, horizon: Tick },
}

impl StimulusSet {
    /// Builds a set, clipping every train to the horizon.
    pub fn new(trains: Vec<SpikeTrain>, horizon: Tick) -> Self {
        let trains = trains.into_iter().map(|t| t.window(0, horizon)).collect();
        StimulusSet { trains, horizon }
    }

    /// Number of terminals spiking at `t`.
    fn count_at(&self, t: Tick) -> usize {
        self.trains.iter().filter(|s| s.contains(t)).count()
    }

    fn output_where(&self, latency: Tick, pred: impl Fn(usize) -> bool) -> SpikeTrain {
        SpikeTrain::from_unsorted(
            (0..self.horizon)
                .filter(|&t| pred(self.count_at(t)))
                .map(|t| t + latency)
                .filter(|&t| t < self.horizon),
        )
    }
}

/// Spike one tick after any input spikes.
pub fn oracle_or(stims: &StimulusSet) -> SpikeTrain {
    stims.output_where(1, |k| k >= 1)
}

/// Spike `latency` ticks after all inputs spike together (2 classic, 1 fast).
pub fn oracle_and(stims: &StimulusSet, latency: Tick) -> SpikeTrain {
    let n = stims.trains.len();
    stims.output_where(latency, |k| n > 0 && k == n)
}

/// Spike two ticks after exactly one input spikes.
pub fn oracle_xor(stims: &StimulusSet) -> SpikeTrain {
    stims.output_where(2, |k| k == 1)
}

/// Spike at `t` when the constant source is running and the input was silent at `t - 1`.
pub fn oracle_not(input: &SpikeTrain, css_first: Tick, horizon: Tick) -> SpikeTrain {
    SpikeTrain::from_unsorted(
        (css_first + 1..horizon).filter(|&t| !input.contains(t - 1)),
    )
}

/// Hold from one tick after a set; a reset at `t` ends the hold from `t + 1`.
/// Simultaneous set and reset cancel, except that an ongoing hold survives.
pub fn oracle_latch(set: &SpikeTrain, reset: &SpikeTrain, horizon: Tick) -> SpikeTrain {
    let mut out = Vec::new();
    let mut holding = false;
    for t in 1..horizon {
        let s = set.contains(t - 1);
        let r = reset.contains(t - 1);
        holding = match (holding, s, r) {
            (_, false, false) => holding,
            (_, true, false) => true,
            (false, _, true) => false,
            (true, true, true) => true,
            (true, false, true) => false,
        };
        if holding {
            out.push(t);
        }
    }
    SpikeTrain::from_unsorted(out)
}

/// Toggle switch as the two neurons it is built from: the input neuron U
/// and the cycle neuron C. Returns `(U, C)`.
///
/// U fires after an input spike unless either neuron fired in the same
/// tick as that input. C fires after U or C fired unless an input arrived.
pub fn oracle_switch(input: &SpikeTrain, horizon: Tick) -> (SpikeTrain, SpikeTrain) {
    let mut u = vec![false; horizon as usize];
    let mut c = vec![false; horizon as usize];
    for t in 1..horizon as usize {
        let pulse = input.contains(t as Tick - 1);
        u[t] = pulse && !u[t - 1] && !c[t - 1];
        c[t] = (u[t - 1] || c[t - 1]) && !pulse;
    }
    (SpikeTrain::from_bits(&u), SpikeTrain::from_bits(&c))
}

/// Every tick from `first_spike` to the horizon.
pub fn oracle_css(first_spike: Tick, horizon: Tick) -> Result<SpikeTrain, OracleError> {
    if first_spike >= horizon {
        return Err(OracleError::FirstAfterHorizon {
            first: first_spike,
            horizon,
        });
    }
    Ok(SpikeTrain::from_unsorted(first_spike..horizon))
}

/// High on `[first + 1, first + k]`, low for the next `k` ticks, repeating.
pub fn oracle_oscillator(half_period: Tick, first_spike: Tick, horizon: Tick) -> SpikeTrain {
    assert!(half_period >= 1, "half-period must be at least 1");
    SpikeTrain::from_unsorted(
        (first_spike + 1..horizon).filter(|&t| ((t - first_spike - 1) / half_period).is_multiple_of(2)),
    )
}

/// Rising edges (silence then spike at r) fire at r + 2; falling edges
/// (spike then silence at f) fire at f + 3. Returns `(rise, fall)`.
pub fn oracle_flank(input: &SpikeTrain, horizon: Tick) -> (SpikeTrain, SpikeTrain) {
    let high = |t: i64| t >= 0 && input.contains(t as Tick);
    let mut rise = Vec::new();
    let mut fall = Vec::new();
    for t in 0..horizon as i64 {
        if high(t) && !high(t - 1) && t + 2 < horizon as i64 {
            rise.push((t + 2) as Tick);
        }
        if !high(t) && high(t - 1) && t + 3 < horizon as i64 {
            fall.push((t + 3) as Tick);
        }
    }
    (SpikeTrain::from_unsorted(rise), SpikeTrain::from_unsorted(fall))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(v: &[Tick]) -> SpikeTrain {
        SpikeTrain::new(v.to_vec()).unwrap()
    }

    fn set(trains: &[&[Tick]], horizon: Tick) -> StimulusSet {
        StimulusSet::new(trains.iter().map(|t| tr(t)).collect(), horizon)
    }

    #[test]
    fn or_cases() {
        assert_eq!(oracle_or(&set(&[&[2]], 10)), tr(&[3]));
        assert_eq!(oracle_or(&set(&[&[2], &[2]], 10)), tr(&[3]));
        assert_eq!(oracle_or(&set(&[&[], &[]], 10)), tr(&[]));
        assert_eq!(oracle_or(&set(&[&[9]], 10)), tr(&[]));
    }

    #[test]
    fn and_cases() {
        let all = set(&[&[3], &[3], &[3], &[3]], 10);
        assert_eq!(oracle_and(&all, 2), tr(&[5]));
        assert_eq!(oracle_and(&all, 1), tr(&[4]));
        let three = set(&[&[3], &[3], &[3], &[]], 10);
        assert_eq!(oracle_and(&three, 2), tr(&[]));
    }

    #[test]
    fn xor_cases() {
        assert_eq!(oracle_xor(&set(&[&[4], &[]], 10)), tr(&[6]));
        assert_eq!(oracle_xor(&set(&[&[4], &[4]], 10)), tr(&[]));
        let every: Vec<Tick> = (0..10).collect();
        let even: Vec<Tick> = (0..10).step_by(2).collect();
        let out = oracle_xor(&set(&[&every, &even], 12));
        assert_eq!(out, tr(&[3, 5, 7, 9, 11]));
    }

    #[test]
    fn not_cases() {
        let silent = oracle_not(&tr(&[]), 1, 8);
        assert_eq!(silent, tr(&[2, 3, 4, 5, 6, 7]));
        let gap = oracle_not(&tr(&[6]), 1, 10);
        assert_eq!(gap, tr(&[2, 3, 4, 5, 6, 8, 9]));
        let busy: Vec<Tick> = (2..10).collect();
        assert_eq!(oracle_not(&tr(&busy), 1, 10), tr(&[2]));
    }

    #[test]
    fn latch_cases() {
        assert_eq!(oracle_latch(&tr(&[4]), &tr(&[]), 8), tr(&[5, 6, 7]));
        assert_eq!(oracle_latch(&tr(&[4]), &tr(&[9]), 14), tr(&[5, 6, 7, 8, 9]));
        assert_eq!(oracle_latch(&tr(&[4]), &tr(&[4]), 10), tr(&[]));
        assert_eq!(
            oracle_latch(&tr(&[2, 5]), &tr(&[5]), 8),
            tr(&[3, 4, 5, 6, 7])
        );
    }

    #[test]
    fn switch_cases() {
        let (u, c) = oracle_switch(&tr(&[1]), 8);
        assert_eq!(u, tr(&[2]));
        assert_eq!(c, tr(&[3, 4, 5, 6, 7]));

        let (u, c) = oracle_switch(&tr(&[1, 6, 7, 8]), 15);
        assert_eq!(u, tr(&[2, 8]));
        assert_eq!(c, tr(&[3, 4, 5, 6]));

        let (_, c) = oracle_switch(&tr(&[1, 5]), 15);
        assert!(c.window(8, 15).is_empty());
    }

    #[test]
    fn css_cases() {
        assert_eq!(oracle_css(1, 5), Ok(tr(&[1, 2, 3, 4])));
        assert_eq!(oracle_css(0, 1), Ok(tr(&[0])));
        assert!(oracle_css(3, 3).is_err());
    }

    #[test]
    fn oscillator_cases() {
        let o = oracle_oscillator(4, 1, 22);
        let expected: Vec<Tick> = (2..=5).chain(10..=13).chain(18..=21).collect();
        assert_eq!(o, tr(&expected));
        assert_eq!(oracle_oscillator(1, 0, 8), tr(&[1, 3, 5, 7]));
        assert!(!o.contains(1));
    }

    #[test]
    fn flank_cases() {
        let (r, f) = oracle_flank(&tr(&[6, 7, 8, 9]), 20);
        assert_eq!((r, f), (tr(&[8]), tr(&[13])));
        let high: Vec<Tick> = (0..20).collect();
        let (r, f) = oracle_flank(&tr(&high), 20);
        assert_eq!((r, f), (tr(&[2]), tr(&[])));
        let (r, f) = oracle_flank(&tr(&[5]), 20);
        assert_eq!((r, f), (tr(&[7]), tr(&[9])));
    }
}
