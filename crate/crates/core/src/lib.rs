//! Firing squad synchronization on squares with holes.
//!
//! The crate provides the geometry of configurations (a square of side
//! `w + 1` with `k` interior holes), the barrier and `c_k` combinatorics that
//! bound the minimum firing time, lower-bound certificates built from
//! pattern-preserving hole moves, cellular-automaton simulators (a
//! minimal-time line synchronizer and a minimal-time solution for one hole),
//! a message-timing simulator for partial solutions, and a complete
//! minimum-firing-time classifier for two holes.

pub mod barriers;
pub mod error;
pub mod grid;
pub mod io;
pub mod mft2;
pub mod shapes;
pub mod sim;
pub mod timebounds;

pub use barriers::Rect;
pub use error::{Error, Result};
pub use grid::{
    BoundaryCondition, Cell, ConfigError, Configuration, GridError, HalfPlane, Pattern, Position, Region, RegionFamily,
    V_GEN,
};
pub use mft2::{AppendixOutcome, Certificate, DistanceException, HoleTypeProfile, MftVerdict, PlanCase};
pub use shapes::{BarrierShape, Budget, CkResult, ShapeEval};
pub use sim::plan::{ConditionReport, Message, MessagePlan};
pub use sim::FiringTranscript;
pub use timebounds::{CertStep, CertificateChain, CertificateIndex, NotFound};
