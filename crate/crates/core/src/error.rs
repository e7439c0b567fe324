use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime modulus")]
    NotPrime(u32),

    #[error("entry {value} out of range for modulus {modulus}")]
    EntryOutOfRange { value: u32, modulus: u32 },

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),

    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i32),

    #[error("not a chain map at degree {0}")]
    NotAChainMap(i32),

    #[error("degree range [{lo}, {hi}] exceeds the configured cap [{cap_lo}, {cap_hi}]")]
    DegreeCap {
        lo: i32,
        hi: i32,
        cap_lo: i32,
        cap_hi: i32,
    },

    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid functor: {0}")]
    InvalidFunctor(String),

    #[error("not filtered: {0}")]
    NotFiltered(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Shape {
        op,
        detail: detail.into(),
    }
}
