use thiserror::Error;

use crate::netcore::{ArcId, VertexId};

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("unknown arc {0}")]
    UnknownArc(ArcId),

    #[error("terminal {0} must have infinite vertex capacity")]
    FiniteTerminal(VertexId),

    #[error("vertex {0} cannot be both a source and a sink")]
    TerminalOverlap(VertexId),

    #[error("network has no sources or sinks")]
    NoTerminals,

    #[error("invalid rotation system: {0}")]
    Rotation(String),

    #[error("arc {0} has no correspondence in the derived network")]
    MissingCorrespondence(ArcId),

    #[error("vertex {0} has finite capacity; this solver accepts arc capacities only")]
    FiniteVertexCapacity(VertexId),

    #[error("{op} is not applicable: {reason}")]
    NotApplicable { op: &'static str, reason: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("flow is unbounded: an infinite-capacity path leaves {0}")]
    Unbounded(VertexId),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("iteration budget of {budget} exhausted in {phase}")]
    Budget { phase: &'static str, budget: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
