use thiserror::Error;

/// Everything that can go wrong in this crate. Variants carry enough context
/// for the CLI to print a useful diagnostic without re-deriving anything.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("malformed rational {text:?} at byte {position}")]
    Parse { text: String, position: usize },

    #[error("expected {expected} comma-separated components, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{base} is not coprime to {modulus}")]
    NotCoprime { base: u64, modulus: u64 },

    #[error("{x} is not a {p}-adic integer")]
    NotPIntegral { x: String, p: u64 },

    #[error("closed-form digit needs 0 < x < 1 with x-1 a {p}-adic unit, got x = {x}")]
    DigitPrecondition { x: String, p: u64 },

    #[error("digit index {index} out of range 0..{period}")]
    IndexOutOfRange { index: usize, period: usize },

    #[error("lower parameter {0} is a non-positive integer; the series is undefined")]
    LowerParameterPole(String),

    #[error("parameters are not admissible: {0}")]
    NotAdmissible(String),

    #[error("expected {expected} upper parameters, got {got}")]
    WrongShape { expected: usize, got: usize },

    #[error("{p} is not a good prime for {params}")]
    NotGoodPrime { p: u64, params: String },

    #[error("valuation formula needs v_{p}(x-1) >= 0, violated by x = {x}")]
    FormulaHypothesis { x: String, p: u64 },

    #[error("cannot shift to admissible parameters: {0} is an integer")]
    IntegralShift(&'static str),

    #[error("{p} is a bounded prime for {params}; it has no unbounded witnesses")]
    BoundedPrime { p: u64, params: String },

    #[error("prime {p} must exceed the modulus {modulus}")]
    PrimeTooSmall { p: u64, modulus: u64 },

    #[error("no qualifying prime = {residue} (mod {modulus}) below {cap}")]
    SearchExhausted { residue: u64, modulus: u64, cap: u64 },

    #[error("degenerate representation record: m1 = m2 = {0}")]
    DegenerateRecord(String),

    #[error("table row {row}: {detail}")]
    TableMismatch { row: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
