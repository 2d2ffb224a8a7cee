//! Random walks, cores and conductance on sparse random graphs.

pub mod conductance;
pub mod decompose;
pub mod edgelist;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod rng;
pub mod scalar;
pub mod walk;


pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
pub use rng::RngSeed;
pub use scalar::Scalar;

/// Exact rational scalar used by the small-graph oracles.
pub type Exact = num::BigRational;
pub type Distribution64 = walk::Distribution<f64>;
pub type Distribution32 = walk::Distribution<f32>;
pub type ExactDistribution = walk::Distribution<Exact>;
