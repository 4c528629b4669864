//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node id {id} out of range (num_nodes = {num_nodes})")]
    NodeIdOutOfRange { id: usize, num_nodes: usize },

    #[error("feature matrix has {rows} rows but graph has {num_nodes} nodes")]
    FeatureRowMismatch { rows: usize, num_nodes: usize },

    #[error("label/mask length {len} does not match num_nodes {num_nodes}")]
    LengthMismatch { len: usize, num_nodes: usize },

    #[error("partition count {m} out of range for {num_nodes} nodes")]
    PartCountOutOfRange { m: usize, num_nodes: usize },

    #[error("infeasible size cap: cap {cap} * {m} parts < {num_nodes} nodes")]
    InfeasibleCap { cap: usize, m: usize, num_nodes: usize },

    #[error("assignment file has {got} lines, expected {expected}")]
    AssignmentLineCount { got: usize, expected: usize },

    #[error("halo node {id} is not adjacent to any inner node")]
    HaloNotAdjacent { id: usize },

    #[error("inner and halo sets overlap at node {id}")]
    InnerHaloOverlap { id: usize },

    #[error("sampling rate p = 0 with nonempty halo")]
    ZeroRateWithHalo,

    #[error("p must lie in (0, 1] for variance estimation, got {p}")]
    InvalidVarianceRate { p: f64 },

    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("phase timeout after {millis} ms in epoch {epoch}, partition {part}: {phase}")]
    PhaseTimeout {
        millis: u64,
        epoch: usize,
        part: usize,
        phase: &'static str,
    },

    #[error("non-finite loss at epoch {epoch} (partition {part})")]
    Divergence { epoch: usize, part: usize },

    #[error("received {got} rows from partition {src}, epoch plan expects {expected}")]
    RowCountMismatch { src: usize, got: usize, expected: usize },

    #[error("malformed {file} at line {line}: {reason}")]
    Parse {
        file: String,
        line: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
