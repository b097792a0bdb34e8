use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A search would exceed one of the fixed enumeration guards.
    #[error("size guard: {what} needs {needed}, limit is {limit}")]
    SizeGuard {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("End too large: {size} endomorphisms exceed the limit {limit}")]
    EndTooLarge { size: usize, limit: usize },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid structure: {0}")]
    Invalid(String),

    /// A table entry is malformed; `path` locates it (e.g. `add_table[2][3]`).
    #[error("{path}: {message}")]
    Table { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    /// Two independent decision procedures disagreed. Always an implementation bug.
    #[error("cross-check disagreement: {0}")]
    Disagreement(String),
}

impl Error {
    pub(crate) fn mismatch(msg: impl Into<String>) -> Self {
        Error::Mismatch(msg.into())
    }

    pub(crate) fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

/// Element-enumeration ops accept carriers up to this size.
pub const MAX_CARRIER: usize = 1 << 16;
/// Above this size hom enumeration requires an explicit generator list.
pub const MAX_CARRIER_WITHOUT_GENERATORS: usize = 256;
/// Constructions that materialize a full addition table stop at this carrier size.
pub const MAX_TABLE_CARRIER: usize = 2048;
/// Exhaustive idempotent search bound.
pub const MAX_END: usize = 1 << 16;
/// Largest intermediate relation materialized by the pp solver.
pub const MAX_RELATION: usize = 1 << 22;

pub(crate) fn guard(what: &'static str, needed: u128, limit: u128) -> Result<()> {
    if needed > limit {
        Err(Error::SizeGuard {
            what,
            needed,
            limit,
        })
    } else {
        Ok(())
    }
}
