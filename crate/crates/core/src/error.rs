use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),

    #[error("vertex {vertex} out of range for a graph with {nodes} nodes")]
    VertexOutOfRange { vertex: VertexId, nodes: usize },

    #[error("edge {0}-{1} is already present")]
    DuplicateEdge(VertexId, VertexId),

    #[error("face level {level} out of range for a simplex of {size} vertices (valid: 0..={max})")]
    LevelOutOfRange { level: usize, size: usize, max: usize },

    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),

    #[error("{0} is undefined on a graph without edges")]
    NoEdges(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot remove {requested} edges from a graph with {available} edges")]
    TooManyEdges { requested: usize, available: usize },

    #[error("the four-point condition needs four distinct vertices, got {0:?}")]
    RepeatedVertices([VertexId; 4]),

    #[error("graph has {nodes} vertices, the four-point condition needs at least 4")]
    TooFewVertices { nodes: usize },

    #[error(
        "exhaustive hyperbolicity is limited to {threshold} vertices but the graph has {nodes}; \
         use sampled mode"
    )]
    ExhaustiveTooLarge { nodes: usize, threshold: usize },

    #[error("graph is disconnected; distances are only defined within a component")]
    Disconnected,

    #[error("edge list, line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
