//! Construction, rewriting, minimisation and certification of perfect state
//! transfer graphs described as equitable distance partitions.
//!
//! The central object is [`PartitionedGraph`]: nodes carrying vertex counts
//! (occupancies) joined by edges carrying per-side degrees. Rules in
//! [`rewrite`] change occupancies without touching the quotient couplings,
//! [`spectral`] certifies transfer on the quotient or on explicit graphs,
//! [`catalog`] builds the named families and [`bounds`] holds the
//! degree/distance/vertex bounds and brute-force searches.

pub mod arith;
pub mod bounds;
pub mod catalog;
pub mod cli;
pub mod explicit;
pub mod partition;
pub mod rewrite;
pub mod spectral;
pub mod weighted;

pub use arith::{BigInt, QuadraticEigenvalue, Rational};
pub use explicit::ExplicitGraph;
pub use partition::{Edge, GraphError, Node, PartitionedGraph, ValidationReport};
pub use weighted::WeightedGraph;
