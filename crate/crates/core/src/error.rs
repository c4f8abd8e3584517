//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable `{0}` missing from evaluation assignment")]
    MissingVariable(String),
    #[error("assignment mixes exact and numeric scalars")]
    MixedScalarMode,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} too large for factorial enumeration (max 8)")]
    DimensionTooLarge(usize),
    #[error("not symmetric: swapping coordinates {m} and {m_next} changes entry A[{k}][{i}][{j}]")]
    NotSymmetric {
        m: usize,
        m_next: usize,
        k: usize,
        i: usize,
        j: usize,
    },
    #[error("input polynomial is not symmetric (changes under the transposition ({0} {1}))")]
    NotSymmetricInput(usize, usize),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("not generic: elimination constant c_{0} vanishes")]
    NotGeneric(usize),
    #[error("not almost generic")]
    NotAlmostGeneric,
    #[error("not reducible: system is neither generic nor almost generic")]
    NotReducible,
    #[error("degenerate input: discriminant vanishes at the given point")]
    DegenerateInput,
    #[error("degenerate initial data: coordinates must be pairwise distinct")]
    DegenerateInitialData,
    #[error("zero scale factor")]
    ZeroScale,
    #[error("genericity violated: (a + 2b)(a - b) = 0")]
    GenericityViolated,
    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),
    #[error("bad indices: i and j must be distinct and within dimension")]
    BadIndices,
    #[error("step size underflow at t = {0}")]
    StepSizeUnderflow(f64),
    #[error("almost-generic integration needs the auxiliary initial value sigma_n(t0)")]
    MissingAuxiliaryInitialValue,
    #[error("discriminant degenerate: roots collide along the path (min separation {0:.3e})")]
    DiscriminantDegenerate(f64),
    #[error("root solver diverged")]
    RootSolverDiverged,
    #[error("unknown closed-form case `{0}`")]
    UnknownCase(String),
    #[error("grid point {0} too close to a singularity of the closed form")]
    SingularGridPoint(f64),
    #[error("operation needs exact rational input")]
    NotExact,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
