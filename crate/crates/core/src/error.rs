use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime in [2, 65536)")]
    InvalidModulus(u32),
    #[error("entry {value} is not a residue modulo {modulus}")]
    EntryOutOfRange { value: u64, modulus: u32 },
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("tensor order {0} is too small; order must be at least {1}")]
    OrderTooSmall(usize, usize),
    #[error("axis {axis} out of range for order {order}")]
    AxisOutOfRange { axis: usize, order: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("index {0:?} is out of range")]
    IndexOutOfRange(Vec<usize>),
    #[error("duplicate entry at index {0:?}")]
    DuplicateIndex(Vec<usize>),
    #[error("invalid block structure: {0}")]
    InvalidBlocks(String),
    #[error("basis is not in canonical reduced echelon form")]
    NonCanonicalBasis,
    #[error("certificate bound {stated} does not match codimension sum {actual}")]
    BoundMismatch { stated: usize, actual: usize },
    #[error("certificate does not annihilate the tensor")]
    CertificateRejected,
    #[error("enumeration needs {required} tuples, over the limit of {limit}")]
    LimitExceeded { required: u128, limit: u128 },
    #[error("option choice must use the first option on some axis and the second on another")]
    OptionConstraint,
    #[error("support condition violated: nonzero block component {0:?}")]
    SupportCondition(Vec<usize>),
    #[error("tensor is not block upper triangular: nonzero block component {0:?}")]
    NotTriangular(Vec<usize>),
    #[error("vector {0} is not in the span of the new spanning set")]
    SpanContainment(usize),
    #[error("dual functionals are not biorthogonal to the vectors")]
    Biorthogonality,
    #[error("support is not an antichain, so the slice cover only bounds the rank from above")]
    CoverNotExact,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
