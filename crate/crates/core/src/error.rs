use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("requested dimension {requested} exceeds table capacity {capacity}")]
    DimensionTooLarge { requested: usize, capacity: usize },
    #[error("digit precision {0} outside [1, 53]")]
    Precision(u32),
    #[error("Fibonacci index {0} out of range")]
    FibonacciIndex(u32),
    #[error("coordinate {coord} out of range for {bits}-bit Hilbert grid")]
    HilbertCoordinate { coord: u64, bits: u32 },
    #[error("Hilbert key {0} out of range")]
    HilbertKey(u64),
    #[error("invalid Hilbert configuration: d={dim}, p={bits}")]
    HilbertConfig { dim: usize, bits: u32 },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("point is not on the boundary (distance {0:e})")]
    NotOnBoundary(f64),
    #[error("point is outside the domain")]
    OutsideDomain,
    #[error("scene has no source term")]
    NoSource,
    #[error("scene has no closed-form solution")]
    NoExactSolution,
    #[error("source-term shortcut requires a constant source")]
    NotConstantSource,
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("unknown scene '{name}'; known scenes: {known}")]
    UnknownScene { name: String, known: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("randomization schedule has {have} steps, need {need}")]
    ScheduleTooShort { have: usize, need: usize },
    #[error("lattice entry z_{dim} = {z} shares a factor with n = {n}; the column would not be Latin")]
    LatticeNotCoprime { n: usize, dim: usize, z: u64 },
    #[error("point set provides {have} columns, walk needs {need}")]
    PointSetCapacity { have: usize, need: usize },
    #[error("Green's function requires 0 < rho <= r (got rho={rho}, r={radius})")]
    GreenDomain { rho: f64, radius: f64 },
    #[error("Poisson kernel needs |z| < 1 (got {0})")]
    PoissonDomain(f64),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("zero variance")]
    ZeroVariance,
    #[error("column {k} out of range (have {columns})")]
    ColumnOutOfRange { k: usize, columns: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
