use num_rational::BigRational;
use thiserror::Error;

use crate::quiver::DimVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("q-binomial with negative lower index {0}")]
    NegativeN(i64),
    #[error("rational function has a pole at q = {0}")]
    PoleAt(BigRational),
    #[error("{value} is not an integral Laurent polynomial: {reason}")]
    NotLaurentIntegral { value: String, reason: String },

    #[error("quiver has an oriented cycle through {}", cycle.join(" -> "))]
    CyclicQuiver { cycle: Vec<String> },
    #[error("arrow refers to unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` is listed twice")]
    DuplicateVertex(String),
    #[error("dimension vector has {got} entries, quiver has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a nonzero dimension vector")]
    ZeroDimVector,
    #[error("quiver is not of Dynkin type; Tits form is not positive on {witness}")]
    NotDynkin { witness: DimVector },

    #[error("series belong to different quivers or truncation orders")]
    IncompatibleSeries,
    #[error("constant term must be 1")]
    NonUnitConstantTerm,
    #[error("factor at slope {0} does not have constant term 1")]
    UnnormalizedFactor(BigRational),
    #[error("factor keyed by slope {key} has support {d} of slope {found}")]
    MixedSlopeFactor { key: String, d: DimVector, found: String },
    #[error("coefficient at {0} has a pole at q = 1")]
    PoleAtOne(DimVector),
    #[error("{0} is not a real root (<d,d> != 1)")]
    NotRealRoot(DimVector),

    #[error("coefficient at {d} is {coefficient}: {reason}")]
    IntegralityFailure {
        d: DimVector,
        coefficient: String,
        reason: String,
    },
    #[error("{d} is not coprime for the stability; {witness} has the same slope")]
    NotCoprime { d: DimVector, witness: DimVector },
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("exponent c({k}) = {value} is not an integer")]
    NonIntegerExponent { k: u32, value: BigRational },
    #[error("stability is not generic: slope class {slope} {detail}")]
    NonGenericStability { slope: BigRational, detail: String },

    #[error("enumeration needs {required} points, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("representation is not semistable")]
    NotSemistable,
    #[error("unsupported field size {0}")]
    UnsupportedField(u32),
}
