use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not in span")]
    NotInSpan,
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("form vanishes on lattice")]
    FormVanishes,
    #[error("degenerate simplex")]
    DegenerateSimplex,
    #[error("grading not positive")]
    GradingNotPositive,
    #[error("grading is not primitive")]
    GradingNotPrimitive,
    #[error("polytope is empty")]
    Empty,
    #[error("not a face")]
    NotAFace,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("oracle bound exceeded: dim {dim} (max {max_dim}), {vertices} vertices (max {max_vertices})")]
    OracleBound {
        dim: usize,
        max_dim: usize,
        vertices: usize,
        max_vertices: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("Borda only full field")]
    BordaRestricted,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
