use thiserror::Error;

use crate::grid::VertexId;

#[derive(Error, Debug)]
pub enum Error {
    #[error("grid needs 2 or 3 axes with at least 2 vertices each, got {0:?}")]
    InvalidDims(Vec<usize>),

    #[error("level {level} out of range (hierarchy depth {depth})")]
    InvalidLevel { level: u32, depth: u32 },

    #[error("vertex {0:?} does not exist at level {1}")]
    InvalidVertex(VertexId, u32),

    #[error("vertex {0:?} is not a new vertex at level {1}")]
    NotNewVertex(VertexId, u32),

    #[error("cannot compare a vertex with itself ({0:?})")]
    CompareSameVertex(VertexId),

    #[error("non-finite scalar value at vertex index {0}")]
    NonFiniteValue(usize),

    #[error("field length {got} does not match grid vertex count {expected}")]
    FieldSizeMismatch { expected: usize, got: usize },

    #[error("fields have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("epsilon percentage {0} outside [0, 100]")]
    EpsilonPercentOutOfRange(f64),

    #[error("epsilon must be non-negative, got {0}")]
    NegativeEpsilon(f64),

    #[error("staircase quantization needs a positive epsilon, got {0}")]
    NonPositiveQuantizationStep(f64),
}
