use alloc::string::String;

use crate::graph::{EdgeId, VertexId};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("rotation system is not a valid planar embedding: {0}")]
    NonPlanarRotation(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("graph is not planar")]
    NotPlanar,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("the parent edge of a skeleton has no expansion graph")]
    ParentEdgeNotExpandable,
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("cycle {second} duplicates cycle {first}")]
    DuplicateCycle { first: usize, second: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("SPQR-tree has an R-node; graph is not series-parallel")]
    HasRNode,
    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("embedding count overflows (>= 2^63)")]
    Overflow,
    #[error("graph is not cubic")]
    NotCubic,
    #[error("graph is not 3-connected")]
    Not3Connected,
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
}
