//! Exact core separation for cooperative 2-matching games.
//!
//! A 2-matching game lives on a graph with vertex capacities `b ∈ {1, 2}`
//! and nonnegative edge weights; the value ν(S) of a coalition is the
//! maximum weight of a b-matching in the subgraph induced by S. This crate
//! decides whether an allocation lies in the core, returns a violated
//! coalition when it does not, builds the compact extended formulation of
//! the core, and carries brute-force oracles for all of it.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, random
//! instances and the command line live in the `twomatch` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod blossom;
pub mod extform;
pub mod fixtures;
pub mod flawed;
pub mod matching;
pub mod model;
pub mod negcycle;
pub mod oracle;
pub mod rational;
pub mod separation;

pub use matching::{max_weight_b_matching, nu, MatchingResult};
pub use model::{Allocation, Coalition, Edge, Instance, ModelError, VertexId, Violation, ViolationKind};
pub use rational::Rational;
pub use separation::{separate, SeparationVerdict};
