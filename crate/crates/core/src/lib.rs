//! Approximate maximum s-t flow and minimum s-t cut in undirected
//! capacitated graphs, driven by electrical flows.
//!
//! * [`mw`]: multiplicative weights over an electrical-flow oracle, plus the
//!   capacity preprocessing and binary search on the flow value.
//! * [`improved`]: the same driver with an oracle that removes
//!   over-congested edges.
//! * [`dualcut`]: cuts extracted from electrical potentials.
//! * [`laplacian`] and [`electrical`]: the linear-algebra layer.
//! * [`exact`]: integer max-flow and brute-force min-cut for verification.

pub mod cli;
pub mod dualcut;
pub mod electrical;
pub mod error;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod improved;
pub mod instrument;
pub mod laplacian;
pub mod mw;

pub use error::{Error, Result};
pub use graph::{Cut, DivergenceVector, EdgeId, FlowVector, Graph, PotentialVector, VertexId};
pub use laplacian::{CertifiedElectricalFlow, LaplacianSystem, ResistanceVector};
