use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix data has {got} entries, expected {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, got: usize },

    #[error("gram matrix is not symmetric")]
    NotSymmetric,

    #[error("invalid transcendental form (a={a}, b={b}, c={c}): {reason}")]
    InvalidForm { a: i64, b: i64, c: i64, reason: &'static str },

    #[error("binary form is not positive definite")]
    NotPositiveDefinite,

    #[error("lattice is not negative definite")]
    NotNegativeDefinite,

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("integer overflow: {0}")]
    Overflow(&'static str),

    #[error("norm {norm} exceeds the enumeration ceiling {ceiling}")]
    CeilingExceeded { norm: i64, ceiling: u64 },

    #[error("vector is not primitive")]
    NotPrimitive,

    #[error("vector is isotropic")]
    Isotropic,

    #[error("embedding is primitive, no torsion witness exists")]
    AlreadyPrimitive,

    #[error("matrix does not have full row rank")]
    RankDeficient,

    #[error("parameter {param} is out of range for {what}")]
    OutOfRange { what: String, param: i64 },

    #[error("unknown family {0}")]
    UnknownFamily(String),

    #[error("family {name}({param}) failed verification: {reason}")]
    FamilyCheck { name: String, param: i64, reason: String },

    #[error("form is not in the requested parity branch")]
    WrongBranch,

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
