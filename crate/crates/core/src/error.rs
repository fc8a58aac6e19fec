use thiserror::Error;

/// Errors raised by the library.
///
/// Matrix positions are reported 1-based, as rows and columns are written
/// in the usual mathematical convention.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not homogeneous: a[{i},{j}] + a[{k},{l}] != a[{i},{l}] + a[{k},{j}]")]
    NotHomogeneous {
        i: usize,
        k: usize,
        j: usize,
        l: usize,
    },

    #[error("entries are not ordered at ({row},{col}): {reason}")]
    NotOrdered {
        row: usize,
        col: usize,
        reason: &'static str,
    },

    #[error("diagonal entry a[{0},{0}] is not positive")]
    NonPositiveDiagonal(usize),

    #[error("matrix contains a zero entry at ({row},{col})")]
    ContainsZero { row: usize, col: usize },

    #[error("rows of the degree matrix are not all equal")]
    RowsNotEqual,

    #[error("index {index} out of range (must be < {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("monomials with different numbers of variables")]
    MixedArity,

    #[error("empty generator set")]
    EmptyGenerators,

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("vertex {0} is not in the complex")]
    UnknownVertex(u32),

    #[error("complex is not a matroid")]
    NotAMatroid,

    #[error("complex is not pure")]
    NotPure,

    #[error("scheme is not level")]
    NotLevel,

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
