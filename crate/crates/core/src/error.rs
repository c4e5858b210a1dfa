use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports. [`Error::name`] gives the stable
/// variant name used by the CLI and the C API.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    // field tower
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {m}")]
    NonIrreducibleModulus { m: u32, modulus: u32 },
    #[error("subfield degree {d} does not divide extension degree {m}")]
    DegreeNotDividing { m: u32, d: u32 },
    #[error("no built-in modulus for m = {m} (supported: 1..=16)")]
    NoDefaultModulus { m: u32 },
    #[error("value {value:#x} is not an element of GF(2^{m})")]
    ElementOutOfRange { value: u32, m: u32 },
    #[error("Gram matrix of the proposed basis is singular")]
    SingularGram,
    #[error("element is not in the B-span of the given basis")]
    NotInSpan,
    #[error("basis elements are not independent over the subfield")]
    DependentBasis,

    // polynomials and codes
    #[error("evaluation point {point} appears more than once")]
    DuplicatePoint { point: String },
    #[error("alpha is not a member of S")]
    AlphaNotInS,
    #[error("alpha* must not be a member of S")]
    AlphaStarInS,
    #[error("message has degree {degree}, code dimension is {k}")]
    MessageDegreeTooHigh { degree: usize, k: usize },
    #[error("invalid code dimensions: n = {n}, k = {k}")]
    InvalidDimensions { n: usize, k: usize },
    #[error("GRS multiplier at position {index} is zero")]
    ZeroMultiplier { index: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{size} messages exceed the enumeration budget of {budget}")]
    TooLargeToEnumerate { size: u128, budget: u128 },

    // repair schemes
    #[error("polynomial {index} for alpha* = {star} has degree {degree}, must be below {bound}")]
    DegreeTooHigh {
        star: String,
        index: usize,
        degree: usize,
        bound: usize,
    },
    #[error("values at alpha* = {star} span dimension {rank} over B, need {t}")]
    RankDeficientAtStar { star: String, rank: usize, t: usize },
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("point {point} is not an evaluation point of the code")]
    PointNotInCode { point: String },
    #[error("coefficients for alpha* = {star}, index {index} do not form a dual codeword")]
    NotADualCodeword { star: String, index: usize },

    // constructions
    #[error("k = {k} exceeds the construction limit {limit}")]
    KTooLarge { k: usize, limit: usize },
    #[error("construction requires the evaluation set to be the whole field")]
    AMustBeWholeField,
    #[error("construction requires F = GF(2^s) with even s over GF(2^(s/2)); got m = {m}, d = {d}")]
    OddExtension { m: u32, d: u32 },
    #[error("n = {n} is not allowed (need even n with 4 <= n <= {limit})")]
    NTooLarge { n: usize, limit: usize },
    #[error("naive repair needs k < n")]
    KEqualsN,
    #[error("unknown construction '{0}'")]
    UnknownConstruction(String),

    // bounds
    #[error("locality {locality} is below k = {k}")]
    LocalityTooSmall { locality: usize, k: usize },

    // search
    #[error("search space of {size} tuples exceeds the budget {budget}")]
    SearchSpaceTooLarge { size: u128, budget: u128 },
    #[error("no candidate tuple has full rank at alpha* = {star}")]
    NoValidTuple { star: String },
    #[error("table comparison requires the built-in (14,10) code")]
    WrongCode,

    // files
    #[error("scheme file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Variant name, stable across releases.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonIrreducibleModulus { .. } => "NonIrreducibleModulus",
            Error::DegreeNotDividing { .. } => "DegreeNotDividing",
            Error::NoDefaultModulus { .. } => "NoDefaultModulus",
            Error::ElementOutOfRange { .. } => "ElementOutOfRange",
            Error::SingularGram => "SingularGram",
            Error::NotInSpan => "NotInSpan",
            Error::DependentBasis => "DependentBasis",
            Error::DuplicatePoint { .. } => "DuplicatePoint",
            Error::AlphaNotInS => "AlphaNotInS",
            Error::AlphaStarInS => "AlphaStarInS",
            Error::MessageDegreeTooHigh { .. } => "MessageDegreeTooHigh",
            Error::InvalidDimensions { .. } => "InvalidDimensions",
            Error::ZeroMultiplier { .. } => "ZeroMultiplier",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::TooLargeToEnumerate { .. } => "TooLargeToEnumerate",
            Error::DegreeTooHigh { .. } => "DegreeTooHigh",
            Error::RankDeficientAtStar { .. } => "RankDeficientAtStar",
            Error::InvalidScheme(_) => "InvalidScheme",
            Error::PointNotInCode { .. } => "PointNotInCode",
            Error::NotADualCodeword { .. } => "NotADualCodeword",
            Error::KTooLarge { .. } => "KTooLarge",
            Error::AMustBeWholeField => "AMustBeWholeField",
            Error::OddExtension { .. } => "OddExtension",
            Error::NTooLarge { .. } => "NTooLarge",
            Error::KEqualsN => "KEqualsN",
            Error::UnknownConstruction(_) => "UnknownConstruction",
            Error::LocalityTooSmall { .. } => "LocalityTooSmall",
            Error::SearchSpaceTooLarge { .. } => "SearchSpaceTooLarge",
            Error::NoValidTuple { .. } => "NoValidTuple",
            Error::WrongCode => "WrongCode",
            Error::Parse { .. } => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
