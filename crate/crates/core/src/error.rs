use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator {index} has a nonzero θ component; partition generators must be α+βe with α, β ∈ Z[i]")]
    NotThetaFree { index: usize },
    #[error("generators {first} and {second} are not coprime (ideal sum has index {index})")]
    NotCoprime { first: usize, second: usize, index: i128 },
    #[error("generator {index} has zero reduced norm")]
    ZeroDivisor { index: usize },
    #[error("partition needs at least one generator")]
    EmptyPartition,
    #[error("shaping lattice is not contained in the sublattice")]
    NotSublattice,
    #[error("message {index} = {value} is out of range 0..{size}")]
    IndexOutOfRange { index: usize, value: usize, size: usize },
    #[error("expected {expected} message components, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("side information refers to message {index}, but only {count} messages exist")]
    InvalidSideInfo { index: usize, count: usize },
    #[error("need at least two codewords, got {0}")]
    DegenerateSet(usize),
    #[error("curve does not bracket CER {target}")]
    OutOfRange { target: f64 },
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: field `{field}`: {message}")]
    Parse { line: usize, field: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
