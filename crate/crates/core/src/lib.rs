//! Partition-parallel GraphSAGE training with random boundary-node sampling.
//!
//! The pipeline: partition a graph to minimize boundary nodes, derive the
//! per-pair communication plan, then train synchronously across in-process
//! workers that exchange sampled boundary features forward and boundary
//! gradients backward, AllReduce weight gradients, and apply identical Adam
//! updates. Companion modules verify the communication-volume identity, the
//! memory model, estimator unbiasedness, and the sampled-propagation
//! variance bound.

pub mod data;
pub mod error;
pub mod graph;
pub mod nn;
pub mod partition;
pub mod plan;
pub mod runtime;
pub mod sample;
pub mod variance;

pub use error::{Error, Result};
