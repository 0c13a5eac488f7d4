use thiserror::Error;

/// Errors raised by the engine. A failing verification is not an error;
/// see [`crate::verify::CheckReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter lists must be nonempty and of equal length (got {alpha} and {beta})")]
    LengthMismatch { alpha: usize, beta: usize },
    #[error("alpha entry {alpha} and beta entry {beta} coincide modulo Z")]
    NotDisjointModZ { alpha: String, beta: String },
    #[error("{k} is not coprime to {modulus}")]
    NotCoprime { k: i64, modulus: u64 },
    #[error("p = {p} does not permute the parameters (p does not split in the field of definition)")]
    DoesNotSplit { p: u64 },
    #[error("cannot parse {0:?}")]
    Parse(String),

    #[error("division by zero")]
    DivisionByZero,
    #[error("{m} does not divide {n}")]
    NotDivisor { m: u64, n: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of size {size} exceeds the configured bound {bound}")]
    FieldTooLarge { size: u64, bound: u64 },
    #[error("F_(p^{e}) is not a subfield of F_(p^{f})")]
    NotSubfield { e: u32, f: u32 },
    #[error("zero has no discrete logarithm or character value")]
    ZeroElement,
    #[error("element is not a unit")]
    NotUnit,
    #[error("operands live over different fields or algebras")]
    FieldMismatch,

    #[error("division assumption fails: q - 1 = {q_minus_1} is not divisible by every parameter denominator")]
    AssumptionFails { q_minus_1: u64 },
    #[error("t = 0 is not an admissible argument")]
    ZeroArgument,
    #[error("algebras have different dimensions ({dim_a} and {dim_b}) over the base field")]
    NotEquidimensional { dim_a: u32, dim_b: u32 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("{0} is not a p-adic integer")]
    NotPAdicInteger(String),
    #[error("prime {p} is not admissible here ({reason})")]
    BadPrime { p: u64, reason: &'static str },
    #[error("pi-exponent {0} is not an integral multiple of p - 1")]
    ExponentNotIntegral(String),
    #[error("conductor {conductor} does not divide p - 1 = {p_minus_1}")]
    ConductorNotDividing { conductor: u64, p_minus_1: u64 },
    #[error("p^N = {size} exceeds the configured bound {bound}")]
    PrecisionTooLarge { size: u128, bound: u128 },
    #[error("operands are over different primes")]
    PrimeMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors caused by configured size bounds rather than bad input.
    pub fn is_resource_bound(&self) -> bool {
        matches!(self, Error::FieldTooLarge { .. } | Error::PrecisionTooLarge { .. })
    }
}
