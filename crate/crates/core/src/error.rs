use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("mismatched prime context: {0:?} vs {1:?}")]
    PrimeContextMismatch(Option<u64>, Option<u64>),
    #[error("degree {requested} exceeds the supported truncation cap {cap}")]
    DegreeCap { requested: usize, cap: usize },
    #[error("input series violates the regime bound at degree {degree}: valuation {valuation}, required {bound}")]
    InputBoundViolation { degree: usize, valuation: String, bound: String },
    #[error("no solution meeting the certified bound at degree {degree}: valuation {valuation}, required {bound}")]
    OutputBoundViolation { degree: usize, valuation: String, bound: String },
    #[error("linear system inconsistent at degree {0}")]
    LinearSystemInconsistent(usize),
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("bracket constant c[{i},{j}]^{m} is not well defined on the given moduli")]
    WellDefinednessViolation { i: usize, j: usize, m: usize },
    #[error("regime violation: {0}")]
    RegimeViolation(String),
    #[error("coefficient is not integral at the available precision: {0}")]
    NonIntegralCoefficient(String),
    #[error("automorphism check failed: {0}")]
    AutomorphismCheckFailed(String),
    #[error("evaluation not integral: {0}")]
    EvaluationNotIntegral(String),
    #[error("property failed: {property}; witness: {witness}")]
    PropertyFailed { property: String, witness: String },
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("orbit stability audit failed: {0}")]
    StabilityCheckFailed(String),
    #[error("function is not conjugation invariant: {0}")]
    NotInvariant(String),
    #[error("group order {order} exceeds cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("degenerate spectrum after {0} attempts")]
    DegenerateSpectrum(usize),
    #[error("character table validation failed: {0}")]
    ValidationFailed(String),
    #[error("no perfect matching between orbit characters and table rows ({matched} of {total} matched)")]
    NoMatching { matched: usize, total: usize, partial: Vec<Option<usize>> },
    #[error("subring not closed: {0}")]
    SubringNotClosed(String),
    #[error("partition failure: {0}")]
    PartitionFailure(String),
    #[error("identity failed inside the guaranteed regime: {0}")]
    UnexpectedFailure(String),
    #[error("chain property ({property}) failed at level {level}: {witness}")]
    ChainAssertion { property: char, level: usize, witness: String },
    #[error("restriction equivalence failed for orbit {orbit} and suborbit {suborbit}")]
    EquivalenceFailed { orbit: usize, suborbit: usize },
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for outcomes that mean a checked property does not hold, as
    /// opposed to unusable input or a case outside the supported regimes.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::OutputBoundViolation { .. }
                | Error::LinearSystemInconsistent(_)
                | Error::AutomorphismCheckFailed(_)
                | Error::PropertyFailed { .. }
                | Error::StabilityCheckFailed(_)
                | Error::NotInvariant(_)
                | Error::DegenerateSpectrum(_)
                | Error::ValidationFailed(_)
                | Error::NoMatching { .. }
                | Error::PartitionFailure(_)
                | Error::UnexpectedFailure(_)
                | Error::ChainAssertion { .. }
                | Error::EquivalenceFailed { .. }
        )
    }
}
