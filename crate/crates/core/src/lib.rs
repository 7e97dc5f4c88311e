//! Growth of networks by cooperative aggregation of cliques that may carry a
//! defect bond, plus the analyses used to characterise the assemblies:
//! Q-analysis of the clique complex, Gromov four-point hyperbolicity and the
//! usual scalar graph measures.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`] holds the edge-labelled simple graph every other module reads.
//! - [`simplex`] and [`census`] describe arriving simplexes and the
//!   incrementally maintained census of all cliques of the growing graph.
//! - [`growth`] runs the stochastic aggregation process.
//! - [`transform`] edits finished assemblies (defect-bond and random removal).
//! - [`qanalysis`], [`geometry`] and [`metrics`] measure them.
//! - [`io`] reads and writes the edge-list and sidecar formats.

pub mod census;
pub mod community;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod growth;
pub mod io;
pub mod metrics;
pub mod qanalysis;
pub mod simplex;
pub mod transform;

pub use error::{Error, Result};
pub use graph::{BondType, Edge, LabeledGraph, VertexId};
