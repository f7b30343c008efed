// SPDX-License-Identifier: Apache-2.0

//! Spike trains and simulation traces.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Simulation time in ticks (1 tick = 1 ms).
pub type Tick = u64;

/// Strictly increasing list of spike ticks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Tick>", into = "Vec<Tick>")]
pub struct SpikeTrain(Vec<Tick>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("spike ticks must be strictly increasing: {prev} followed by {next}")]
pub struct NotIncreasing {
    pub prev: Tick,
    pub next: Tick,
}

impl SpikeTrain {
    pub fn new(ticks: Vec<Tick>) -> Result<Self, NotIncreasing> {
        if let Some(w) = ticks.windows(2).find(|w| w[0] >= w[1]) {
            return Err(NotIncreasing {
                prev: w[0],
                next: w[1],
            });
        }
        Ok(SpikeTrain(ticks))
    }

    pub fn empty() -> Self {
        SpikeTrain(Vec::new())
    }

    /// Builds a train from ticks in any order, dropping duplicates.
    pub fn from_unsorted<I: IntoIterator<Item = Tick>>(ticks: I) -> Self {
        let mut v: Vec<Tick> = ticks.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SpikeTrain(v)
    }

    pub fn ticks(&self) -> &[Tick] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, t: Tick) -> bool {
        self.0.binary_search(&t).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Tick> + '_ {
        self.0.iter().copied()
    }

    /// Shifts every spike by `by` ticks, dropping spikes that leave `[0, horizon)`.
    pub fn shifted(&self, by: i64, horizon: Tick) -> SpikeTrain {
        SpikeTrain(
            self.0
                .iter()
                .filter_map(|&t| {
                    let s = t as i64 + by;
                    (s >= 0 && (s as Tick) < horizon).then_some(s as Tick)
                })
                .collect(),
        )
    }

    pub fn union(&self, other: &SpikeTrain) -> SpikeTrain {
        SpikeTrain::from_unsorted(self.iter().chain(other.iter()))
    }

    /// Spikes inside `[from, to)`.
    pub fn window(&self, from: Tick, to: Tick) -> SpikeTrain {
        SpikeTrain(self.iter().filter(|&t| t >= from && t < to).collect())
    }

    /// Dense per-tick occupancy over `[0, horizon)`.
    pub fn to_bits(&self, horizon: Tick) -> Vec<bool> {
        let mut bits = vec![false; horizon as usize];
        for t in self.iter().filter(|&t| t < horizon) {
            bits[t as usize] = true;
        }
        bits
    }

    pub fn from_bits(bits: &[bool]) -> SpikeTrain {
        SpikeTrain(
            bits.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(t, _)| t as Tick)
                .collect(),
        )
    }
}

impl TryFrom<Vec<Tick>> for SpikeTrain {
    type Error = NotIncreasing;

    fn try_from(v: Vec<Tick>) -> Result<Self, Self::Error> {
        SpikeTrain::new(v)
    }
}

impl From<SpikeTrain> for Vec<Tick> {
    fn from(s: SpikeTrain) -> Self {
        s.0
    }
}

impl fmt::Display for SpikeTrain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

/// Recorded result of a simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub horizon: Tick,
    pub spikes: BTreeMap<String, SpikeTrain>,
    /// Per-tick membrane samples in mV, present only when recording was requested.
    pub membrane: Option<BTreeMap<String, Vec<f64>>>,
}

impl Trace {
    pub fn new(horizon: Tick) -> Self {
        Trace {
            horizon,
            spikes: BTreeMap::new(),
            membrane: None,
        }
    }

    pub fn train(&self, signal: &str) -> Option<&SpikeTrain> {
        self.spikes.get(signal)
    }

    /// Union of the named signals; unknown names contribute nothing.
    pub fn merged<S: AsRef<str>>(&self, signals: &[S]) -> SpikeTrain {
        signals
            .iter()
            .filter_map(|s| self.spikes.get(s.as_ref()))
            .fold(SpikeTrain::empty(), |acc, t| acc.union(t))
    }

    /// Keeps only the signals named in `map`, renamed to the mapped values.
    pub fn renamed(&self, map: &BTreeMap<String, String>) -> Trace {
        let spikes = map
            .iter()
            .filter_map(|(from, to)| self.spikes.get(from).map(|t| (to.clone(), t.clone())))
            .collect();
        let membrane = self.membrane.as_ref().map(|m| {
            map.iter()
                .filter_map(|(from, to)| m.get(from).map(|v| (to.clone(), v.clone())))
                .collect()
        });
        Trace {
            horizon: self.horizon,
            spikes,
            membrane,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_repeated_tick() {
        assert_eq!(
            SpikeTrain::new(vec![3, 3]),
            Err(NotIncreasing { prev: 3, next: 3 })
        );
        assert!(SpikeTrain::new(vec![]).is_ok());
    }

    #[test]
    fn shift_drops_out_of_range() {
        let t = SpikeTrain::new(vec![0, 4, 9]).unwrap();
        assert_eq!(t.shifted(1, 10).ticks(), &[1, 5]);
        assert_eq!(t.shifted(-1, 10).ticks(), &[3, 8]);
    }

    #[test]
    fn bits_round_trip() {
        let t = SpikeTrain::new(vec![1, 2, 7]).unwrap();
        assert_eq!(SpikeTrain::from_bits(&t.to_bits(8)), t);
    }

    #[test]
    fn serde_rejects_unsorted() {
        assert!(serde_json::from_str::<SpikeTrain>("[2,1]").is_err());
        let t: SpikeTrain = serde_json::from_str("[1,2]").unwrap();
        assert_eq!(t.ticks(), &[1, 2]);
    }
}
