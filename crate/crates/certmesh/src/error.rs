use thiserror::Error;

/// Unified error type for the whole pipeline.
///
/// Every variant names the violated precondition or the degeneracy that was
/// detected; none of them is a silent best-effort fallback. The CLI maps each
/// variant to a documented exit code (see `cli::exit_code`).
#[derive(Debug, Error)]
pub enum Error {
    /// Input text did not match the polynomial / box grammar.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// An operation received operands over incompatible variable sets or a
    /// box whose dimensions do not cover the polynomial's variables.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The zero polynomial was passed where a nonzero one is required.
    #[error("zero polynomial in {0}")]
    ZeroPolynomial(&'static str),

    /// Degree in the relevant variable is too low for the operation.
    #[error("degree too low: {0}")]
    DegreeTooLow(String),

    /// The input polynomial must be square-free but is not.
    #[error("input polynomial is not square-free (square factor: {0})")]
    NotSquareFree(String),

    /// A triangular-system level is degenerate over the current base point:
    /// the specialized level polynomial vanishes identically, so the system
    /// has a positive-dimensional solution set there.
    #[error("triangular system level {level} is not square-free over the base point: {msg}")]
    NonSquareFreeLevel { level: usize, msg: String },

    /// A triangular-system level polynomial is identically zero.
    #[error("triangular system level {0} polynomial is identically zero")]
    ZeroLevelPolynomial(usize),

    /// A segregation loop could not certify curve-free box sides within the
    /// iteration cap.
    #[error("segregation failed: {0}")]
    SegregationFailed(String),

    /// Subdivision hit the depth cap before every box became nice; the
    /// region violates the regularity precondition (or eps is unattainably
    /// small for the cap).
    #[error("region not regular: {0}")]
    RegionNotRegular(String),

    /// A projection-direction resultant vanished identically, so the chosen
    /// projection is degenerate for this input.
    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),

    /// The surface contains a z-vertical line over the base box, which the
    /// projection approach cannot handle (out of scope by construction).
    #[error("surface contains a vertical line over ({x}, {y}); vertical-line fibers are out of scope")]
    VerticalLineContained { x: String, y: String },

    /// The surface polynomial is degenerate in z (z-degree zero or leading
    /// coefficient structure unusable).
    #[error("degenerate in z: {0}")]
    DegenerateInZ(String),

    /// The surface touches the top or bottom face of the box with a
    /// tangential (z-critical) contact that the lifting step cannot resolve.
    /// Enlarging the z-range of the box avoids the contact.
    #[error("unresolved boundary contact at z-face: {0}; enlarge the z-range of the box")]
    BoundaryContactUnresolved(String),

    /// A decision requires true irreducible factors, but only a partial
    /// (square-free, pairwise-coprime) split is available. Supply exact
    /// factors through the factor hook to proceed.
    #[error("exact factorization required: {0}")]
    FactorizationRequired(String),

    /// A spatial curve segment failed the z-monotonicity guarantee inside
    /// its slab within the iteration cap.
    #[error("z-monotonicity violated: {0}")]
    MonotonicityViolated(String),

    /// Two adjacent cells disagree about the points on their shared edge.
    #[error("inconsistent adjacency: {0}")]
    InconsistentAdjacency(String),

    /// The singular-side and regular-side meshes disagree about crossings on
    /// a shared wall during the merge step.
    #[error("adjacency mismatch during merge: {0}")]
    AdjacencyMismatch(String),

    /// An internal exact identity that must hold by construction failed;
    /// this is a bug or a broken certificate, never user error.
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    /// I/O failure while reading input or writing output.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::InternalInvariantViolation(msg.into())
    }
}
