use std::fmt;

/// Which endpoint condition of a zipper map failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Endpoint {
    /// The image of the first vertex `z_0`.
    Start,
    /// The image of the last vertex `z_m`.
    End,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Start => f.write_str("z_0 image"),
            Endpoint::End => f.write_str("z_m image"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("map {index} is not contracting (ratio {ratio})")]
    NonContracting { index: usize, ratio: f64 },

    #[error("orthogonal part is not orthogonal (defect {defect:.3e})")]
    NotOrthogonal { defect: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degenerate source segment")]
    DegenerateSegment,

    #[error("{what} requires dimension {required}, got {found}")]
    UnsupportedDimension { what: &'static str, required: usize, found: usize },

    #[error("vertex condition violated for map {index} ({endpoint}): residual {residual:.3e}")]
    VertexConditionViolated { index: usize, endpoint: Endpoint, residual: f64 },

    #[error("{field}: expected length {expected}, found {found}")]
    LengthMismatch { field: &'static str, expected: usize, found: usize },

    #[error("a zipper needs at least 2 maps, got {0}")]
    TooFewMaps(usize),

    #[error("address letter {letter} outside alphabet 1..={m}")]
    InvalidAddress { letter: usize, m: usize },

    #[error("depth {depth} exceeds cap {cap}")]
    DepthCap { depth: usize, cap: usize },

    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("knots must be strictly increasing from 0 to 1")]
    InvalidKnots,

    #[error("tolerance {tol:.3e} unreachable within depth cap {cap}")]
    ToleranceUnreachable { tol: f64, cap: usize },

    #[error("node budget exceeded: {requested} > {budget}")]
    BudgetExceeded { requested: u128, budget: u64 },

    #[error("degenerate parameter pair: t1 = {0} must be < t2 = {1}")]
    DegenerateInterval(f64, f64),

    #[error("zippers have different numbers of maps ({left} vs {right})")]
    MapCountMismatch { left: usize, right: usize },

    #[error("signatures differ at map {0}")]
    SignatureMismatch(usize),

    #[error("ratio lists are invalid: {0}")]
    InvalidRatios(String),

    #[error("missing prerequisite: {0}")]
    Prerequisite(String),

    #[error("map {index} does not attain the exponent in the q/p direction")]
    NotWitnessIndex { index: usize },

    #[error("{field}: {message}")]
    Spec { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
