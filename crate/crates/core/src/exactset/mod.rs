//! Finitely representable subsets of the real line.
//!
//! A [`RealSet`] is a normalized union of intervals, isolated points and
//! [`Cluster`]s (convergent sequences, possibly nested). All operations are
//! exact.

mod cluster;
mod interval;
mod realset;

pub use cluster::{Cluster, Piece, Rule, Side};
pub use interval::Interval;
pub use realset::RealSet;
