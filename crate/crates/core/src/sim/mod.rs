//! Synchronous simulations: the line synchronizer, the one-hole square
//! synchronizer, and the message-timing simulator for partial solutions.

pub mod line;
pub mod plan;
pub mod sh1;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::grid::{Configuration, Position};

/// Per-node first firing time over a run (`None`: never fired by the
/// horizon).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiringTranscript {
    pub size: i32,
    #[serde(with = "crate::grid::pos_map")]
    pub fire_time: BTreeMap<Position, Option<u32>>,
    /// Last simulated time step.
    pub horizon: u32,
}

impl FiringTranscript {
    /// A transcript over the nodes of `c` with no firing.
    pub fn silent(c: &Configuration, horizon: u32) -> FiringTranscript {
        FiringTranscript { size: c.size(), fire_time: c.nodes().map(|p| (p, None)).collect(), horizon }
    }

    /// The common firing time if every node fired at the same step.
    pub fn simultaneous_time(&self) -> Option<u32> {
        let mut times = self.fire_time.values();
        let first = (*times.next()?)?;
        times.all(|&t| t == Some(first)).then_some(first)
    }

    /// Earliest firing time of any node.
    pub fn first_fire_time(&self) -> Option<u32> {
        self.fire_time.values().flatten().min().copied()
    }

    /// True iff no node fired.
    pub fn never_fires(&self) -> bool {
        self.fire_time.values().all(Option::is_none)
    }

    /// Whether this is an accepted transcript firing at exactly `t`: all
    /// nodes fire at `t` and none earlier.
    pub fn fires_exactly_at(&self, t: u32) -> bool {
        self.simultaneous_time() == Some(t) && self.first_fire_time() == Some(t)
    }
}
