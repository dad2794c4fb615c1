use thiserror::Error;

/// Errors produced by grid construction, interpolation and the benchmark harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WenoError {
    #[error("invalid range: lower bound {a} is not below upper bound {b}")]
    InvalidRange { a: f64, b: f64 },

    #[error("invalid count: {what} must be at least {min}, got {got}")]
    InvalidCount {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("nodes must be strictly increasing (violated at index {index})")]
    NotIncreasing { index: usize },

    #[error("duplicate node at index {index}")]
    DuplicateNode { index: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at flat index {index}")]
    NonFinite { index: usize },

    #[error("degenerate grid: could not draw distinct nodes after {attempts} attempts")]
    DegenerateGrid { attempts: usize },

    #[error("grid construction failed: {0}")]
    Construction(String),

    #[error("point {value} on axis {axis} lies outside [{lo}, {hi}]")]
    OutOfDomain {
        axis: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("insufficient stencil on axis {axis}: cell {cell} needs nodes {lo}..={hi}, grid has 0..={last}")]
    InsufficientStencil {
        axis: usize,
        cell: usize,
        lo: i64,
        hi: i64,
        last: usize,
    },

    #[error("dimension mismatch: expected {expected} axes, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("derivative order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("quadrature needs at least {min} points per axis, got {got}")]
    QuadratureTooSmall { min: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("diagnostics were not captured for this result")]
    DiagnosticsNotCaptured,

    #[error("unknown test function `{0}`")]
    UnknownFunction(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, WenoError>;
