//! Exact generalized means of finitely representable subsets of ℝ.

pub mod analysis;
pub mod axioms;
pub mod enclosure;
pub mod error;
pub mod exactset;
pub mod json;
pub mod means;
pub mod measure;
pub mod par;
pub mod rational;

pub use error::{Error, Result};
pub use exactset::{Cluster, Interval, RealSet, Rule, Side};
pub use means::{Mean, MeanValue};
pub use par::Execution;
pub use rational::Rational;
