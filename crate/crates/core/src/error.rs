use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("cannot parse `{0}` as an exact rational (expected p/q, an integer, or a decimal)")]
    Rational(String),
    #[error("malformed input: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("genus {genus} needs {expected} Weierstrass points, got {found}")]
    WrongPointCount {
        genus: usize,
        expected: usize,
        found: usize,
    },
    #[error("Weierstrass point {0} is repeated")]
    DuplicatePoint(String),
    #[error("point set is not closed under conjugation: conjugate of {0} is missing")]
    NotConjugationSymmetric(String),
    #[error("divisor point {0} has multiplicity zero")]
    ZeroMultiplicity(String),
    #[error("divisor point {0} is listed twice")]
    DuplicateDivisorPoint(String),
    #[error("divisor is not conjugation-symmetric at {0}")]
    DivisorNotSymmetric(String),
    #[error("divisor multiplicities must sum to -(2g+1) = {expected}, got {found}")]
    WrongDivisorDegree { expected: i64, found: i64 },
    #[error("divisor point {0} coincides with a Weierstrass point")]
    DivisorOnWeierstrassPoint(String),
    #[error(
        "divisor point {point} lies inside the tau∘iota locus and must have even multiplicity, got {mult}"
    )]
    OddMultiplicityOffRealCircle { point: String, mult: i64 },
    #[error("no chart change in the search family normalizes this configuration")]
    ChartSearchExhausted,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PencilError {
    #[error("Q0 vanishes at the Weierstrass point {0}")]
    VanishingValue(String),
    #[error("chart is not normalized: the negative half-infinite interval is odd")]
    NotNormalized,
    #[error("epsilon sign mismatch at pair {index}: expected {expected}, found {found}")]
    EpsilonMismatch {
        index: usize,
        expected: i8,
        found: i8,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(
        "congruence check failed for Q{form} at ({row}, {col}): deviation {deviation:e}, imaginary part {imaginary:e}"
    )]
    CongruenceFailure {
        form: usize,
        row: usize,
        col: usize,
        deviation: f64,
        imaginary: f64,
    },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlError {
    #[error("lambda configuration is not generic")]
    NotGeneric,
    #[error("lambda points too close to an antipode for floating-point angles (gap {0:e})")]
    NumericalSeparation(f64),
    #[error("reduction terminated with an even number of groups ({0})")]
    EvenTerminalCount(usize),
    #[error("genus-2 lookup needs r + 2s = 6, got r = {r}, s = {s}")]
    NotGenusTwo { r: usize, s: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("d_max = {d_max} outside the supported range 1..={limit}")]
    DegreeOutOfRange { d_max: usize, limit: usize },
    #[error("class has zero constant term and is not invertible")]
    NotInvertible,
    #[error("polynomial in the formal roots is not symmetric")]
    NotSymmetric,
    #[error("generator count mismatch: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("matrices are not square and symmetric of equal size")]
    BadMatrices,
    #[error("sampling failed: {converged} of {attempted} starts converged (inconclusive, not a proof of emptiness)")]
    SamplingFailed { converged: usize, attempted: usize },
    #[error("point {index} does not lie on the intersection (residual {residual:e})")]
    OffVariety { index: usize, residual: f64 },
    #[error(
        "Jacobian rank drops at sample {index}: second singular value {sigma:e}, point {point:?}"
    )]
    RankDeficient {
        index: usize,
        sigma: f64,
        point: Vec<f64>,
    },
    #[error("cloud has {0} points, need at least {1}")]
    TooFewPoints(usize, usize),
    #[error("empty sample cloud")]
    EmptyCloud,
}

/// Top-level error for the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Gl(#[from] GlError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
