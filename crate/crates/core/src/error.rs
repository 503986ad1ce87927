use thiserror::Error;

/// Everything that can go wrong while building or analysing a curve.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree must be at least 1, got {0}")]
    DegenerateDegree(i64),
    #[error("exponent {exponent} outside [0, {degree}]")]
    OutOfRange { exponent: i64, degree: u32 },
    #[error("exponent set must contain {0}")]
    MissingEndpoint(u32),
    #[error("nonzero exponents have gcd {0}, expected 1")]
    NonCoprime(u32),
    #[error("malformed input `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("monomial s^{s} t^{t} is not graded for degree {degree}")]
    NotGraded { s: u32, t: u32, degree: u32 },
    #[error("monomial s^{s} t^{t} does not lie in the ring")]
    NotInRing { s: u32, t: u32 },
    #[error("query {value} exceeds semigroup bound {bound}")]
    BoundExceeded { value: u64, bound: u64 },
    #[error("degree bound {bound} is below required degree {required}")]
    BoundTooSmall { bound: u32, required: u32 },
    #[error("ideals live over different curves")]
    CurveMismatch,
    #[error("saturation did not stabilize within {0} colon steps")]
    SaturationNotStabilized(u32),
    #[error("extension nonempty in degree {degree}, above the stabilization bound {limit}")]
    StabilizationViolated { degree: u32, limit: u32 },
    #[error("reduction number not reached by degree {0}")]
    NotStabilized(u32),
    #[error("new generators do not share a single degree")]
    LUndefined,
    #[error("level hypothesis on the new generators does not hold")]
    HypothesisNotVerified,
    #[error("family parameters out of range: {0}")]
    ParamsOutOfRange(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Failures that indicate a bug or a broken assumption rather than bad
    /// input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::StabilizationViolated { .. }
                | Error::NotStabilized(_)
                | Error::SaturationNotStabilized(_)
                | Error::InvariantViolation(_)
        )
    }
}
