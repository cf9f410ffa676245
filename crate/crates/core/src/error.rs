use thiserror::Error;

/// Errors raised by the algebra, module and homology routines.
///
/// Every query that would need data beyond a computed truncation fails with
/// one of the `*Beyond*`/`WindowExceeded` variants instead of returning a
/// partial answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no element of multiplicative order {order} in {field}")]
    NoSuchRoot { field: String, order: u64 },
    #[error("operation not supported over {0}")]
    UnsupportedField(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("relation `{0}` is not homogeneous")]
    NonHomogeneousRelation(String),
    #[error("element is not homogeneous")]
    NonHomogeneous,
    #[error("truncation degree {requested} is below relation degree {needed}")]
    TruncationTooLow { requested: i64, needed: i64 },
    #[error("degree {degree} is beyond the truncation bound {bound}")]
    DegreeBeyondTruncation { degree: i64, bound: i64 },
    #[error("automorphism is invalid: {0}")]
    InvalidAutomorphism(String),
    #[error("modules are defined over different algebras")]
    AlgebraMismatch,
    #[error("window exceeded: {0}")]
    WindowExceeded(String),
    #[error("kernel generators found at the degree cap {cap} in step {step}")]
    IncompleteKernel { step: usize, cap: i64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("residue algebra of dimension {0} is not certified split or a division algebra")]
    NonSplitResidue(usize),
    #[error("field characteristic {characteristic} must exceed the algebra dimension {dim}")]
    FieldTooSmall { characteristic: u64, dim: usize },
    #[error("semisimple block does not split over the base field")]
    NonSplit,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("algebra is not connected (dim of degree-0 piece is {0})")]
    NotConnected(usize),
    #[error("presentation is not quadratic")]
    NotQuadratic,
    #[error("element is not central")]
    NotCentral,
    #[error("localization did not stabilize within degree {0}")]
    NotStabilized(i64),
    #[error("algebra is not commutative")]
    NotCommutative,
    #[error("algebra is not semisimple (radical of dimension {0})")]
    NotSemisimple(usize),
    #[error("structure is not associative or unital: {0}")]
    NotAssociative(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("arithmetic overflow")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
