use thiserror::Error;

/// Errors shared across the element engine, group construction, quotients,
/// and searches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("alphabet degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),

    #[error("defining vector has length {got}, expected p-1 = {expected}")]
    VectorLength { expected: usize, got: usize },

    #[error("defining vector must be non-zero mod p")]
    ZeroVector,

    #[error("lambda = {lambda} is rejected in theorem-compliant mode (needs lambda != 1, 2 mod p)")]
    NonCompliantLambda { lambda: u32 },

    #[error("generator relation {relation} failed to verify (engine bug)")]
    RelationFailure { relation: String },

    #[error("letter {letter} out of range for degree {degree}")]
    LetterOutOfRange { letter: u8, degree: u32 },

    #[error("section closure exceeded the state budget of {budget} states")]
    StateBudgetExceeded { budget: usize },

    #[error("degree {degree} exceeds the configured budget of {budget}")]
    DegreeBudgetExceeded { degree: u64, budget: u64 },

    #[error("permutation degree {got} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("cannot parse word {input:?}: {reason}")]
    ParseWord { input: String, reason: String },

    #[error("cannot parse vertex {input:?}: {reason}")]
    ParseVertex { input: String, reason: String },

    #[error("|A|*|B| = {product} violates the precondition |A|*|B| >= 2")]
    SubsetTooSmall { product: u64 },

    #[error("subset contains duplicate elements (indices {first} and {second} are equal in the group)")]
    DuplicateInSubset { first: usize, second: usize },

    #[error("empty subset where a non-empty one is required")]
    EmptySubset,

    #[error("ball enumeration exceeded budget ({detail}); partial result refused")]
    BallBudgetExceeded { detail: String },

    #[error("vertex {vertex:?} has length {len}, expected < {bound}")]
    VertexTooDeep {
        vertex: String,
        len: usize,
        bound: usize,
    },

    #[error("resume cursor {cursor} is out of range (total {total})")]
    CursorOutOfRange { cursor: u64, total: u64 },

    #[error("search space too large to index: {detail}")]
    SearchSpaceOverflow { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
