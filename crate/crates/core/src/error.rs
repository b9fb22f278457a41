use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A partition does not fit the `k x (n-k)` box of the ambient Grassmannian.
    #[error("partition {partition} does not fit the {k}x{width} box")]
    BoxViolation {
        partition: String,
        k: usize,
        width: usize,
    },

    /// Input is outside the domain of the inclusion map (too many parts or a part too large).
    #[error("partition {partition} is not a class of Gr_{{k-1}}(n-1) for k={k}, n={n}")]
    DomainViolation {
        partition: String,
        k: usize,
        n: usize,
    },

    /// An index or size parameter is out of its admissible range.
    #[error("{what} out of range: {value} (expected {expected})")]
    RangeError {
        what: &'static str,
        value: i64,
        expected: String,
    },

    /// Consecutive differentials fail to compose to zero (or are not composable).
    #[error("not a complex: {0}")]
    NotAComplex(String),

    /// The matrix is not self-adjoint (or not real in the real case).
    #[error("matrix is not self-adjoint: {0}")]
    NotSelfAdjoint(String),

    /// The Jacobi sweep cap was reached with the off-diagonal norm still large.
    #[error("eigensolver did not converge: off-diagonal norm {off:.3e} after {sweeps} sweeps")]
    NoConvergence { off: f64, sweeps: usize },

    /// Normalization of a (near-)scalar operator is undefined.
    #[error("operator is scalar up to tolerance; normalization to the sphere is undefined")]
    ScalarOperator,

    /// The operator does not lie in M^k (lambda_1 is not separated from lambda_{k+1}).
    #[error("operator not in M^k at k={k}: lambda_{{k+1}} - lambda_1 = {gap:.3e} below threshold")]
    NotInMk { k: usize, gap: f64 },

    /// Averaging the top block crossed lambda_k; signals inconsistent tolerances.
    #[error("degenerate collapse at k={k}: lambda_k exceeds the averaged upper block")]
    DegenerateCollapse { k: usize },

    /// The spectral gap at level k closed somewhere on the family.
    #[error("gap lambda_{{k+1}} - lambda_k = {gap:.3e} below threshold at {location}")]
    DegenerateAtK {
        k: usize,
        gap: f64,
        location: String,
    },

    /// A frame-overlap determinant on a lattice link is numerically singular.
    #[error("singular link at {location}: |det overlap| = {modulus:.3e}")]
    SingularLink { location: String, modulus: f64 },

    /// Loop discretization too coarse for reliable frame transport.
    #[error("step too coarse at t={t}: |det overlap| = {modulus:.3e} <= 0.5")]
    StepTooCoarse { t: f64, modulus: f64 },

    /// A loop family fails its closure invariant A(0) = A(1).
    #[error("loop not closed: max |A(0) - A(1)| = {deviation:.3e}")]
    LoopNotClosed { deviation: f64 },

    /// Malformed serialized input (matrix, family or loop file).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
