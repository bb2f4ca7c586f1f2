use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomials live over different prime fields (mod {0} vs mod {1})")]
    ModulusMismatch(u64, u64),

    #[error("polynomial is not squarefree mod {p}")]
    NotSquarefree { p: u64 },

    #[error("no splitting rule or override for bad prime {p} in field {field}")]
    UnknownSplitting { p: u64, field: String },

    #[error("field discriminants are not coprime: gcd({d1}, {d2}) = {gcd}")]
    NonCoprimeDiscriminants { d1: String, d2: String, gcd: String },

    #[error("field discriminant of {0} is unknown; coprimality cannot be checked")]
    MissingDiscriminant(String),

    #[error("no shift c <= {max_shift} gives a squarefree resultant of degree {degree}")]
    CompositumDegreeMismatch { degree: usize, max_shift: i64 },

    #[error("compositum requires Galois fields; {0} is not flagged Galois")]
    NotGalois(String),

    #[error("Dirichlet series has zero leading coefficient")]
    ZeroLeadingCoefficient,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("memory budget exceeded: {required} bytes required, {available} bytes available")]
    MemoryBudget { required: u64, available: u64 },

    #[error("character is principal; L(1, chi) has a pole")]
    PrincipalCharacter,

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("splitting type {0} is inconsistent with a Galois field")]
    GaloisInconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse { column, message: message.into() }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidInput(message.into())
    }
}
