use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: need d >= 2")]
    InvalidDimension(usize),

    #[error("invalid qudit count {0}: need N >= 2")]
    InvalidQuditCount(usize),

    #[error("dimension mismatch: expected {expected}x{expected}, got {found}x{found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("channel strength p = {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("epsilon = {0} outside the open interval (0, 1)")]
    EpsilonOutOfRange(f64),

    #[error("expected {expected} amplitudes, got {found}")]
    AmplitudeCount { expected: usize, found: usize },

    #[error("amplitude vector is zero")]
    ZeroAmplitudes,

    #[error("amplitude vector contains a non-finite entry")]
    NonFiniteAmplitude,

    #[error("level pair ({i}, {j}) invalid for d = {d}: need i < j < d")]
    InvalidPair { i: usize, j: usize, d: usize },

    #[error("bipartition size n = {n} invalid for N = {qudits}: need 1 <= n <= N-1")]
    InvalidPartition { n: usize, qudits: usize },

    #[error("invalid site subset {sites:?} for N = {qudits}")]
    InvalidSubset { sites: Vec<usize>, qudits: usize },

    #[error("dense matrix of dimension {dim} exceeds the cap of {cap}")]
    Capacity { dim: usize, cap: usize },

    #[error("closed form requires an even qudit count, got N = {0}; use the partition root finder instead")]
    OddQuditCount(usize),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("input is not a valid density matrix: {0}")]
    NotDensityMatrix(String),
}
