use thiserror::Error;

#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("arity {got} out of range 1..={max}")]
    ArityOutOfRange { got: u32, max: u32 },

    #[error("truth table has {got} entries, expected 2^{n} = {expected}")]
    TableLengthMismatch { n: u32, expected: usize, got: usize },

    #[error("output value {value} at index {index} does not fit in {m} bits")]
    OutputOutOfRange { index: usize, value: u16, m: u32 },

    #[error("hex truth table: {0}")]
    HexFormat(String),

    #[error("empty algebraic normal form")]
    EmptyAnf,

    #[error("unrecognized token `{0}` in algebraic normal form")]
    AnfToken(String),

    #[error("variable x{index} out of range (function has {n} inputs)")]
    VariableOutOfRange { index: u32, n: u32 },

    #[error("linear-form mask must be nonzero")]
    ZeroMask,

    #[error("change-of-variables matrix is singular")]
    SingularMatrix,

    #[error("modulus {modulus:#x} does not have degree {k}")]
    DegreeMismatch { modulus: u32, k: u32 },

    #[error("modulus {modulus:#x} is reducible over GF(2)")]
    ReducibleModulus { modulus: u32 },

    #[error("rank {r} out of range for {ncols} columns")]
    RankOutOfRange { ncols: u32, r: u32 },

    #[error("projection map has {got} columns, expected {expected}")]
    ColumnMismatch { expected: u32, got: u32 },

    #[error("function has empty support; induced distribution is undefined")]
    EmptySupport,

    #[error("distributions have different denominators ({0} vs {1})")]
    DenominatorMismatch(u64, u64),

    #[error("partial censuses were computed with different parameters")]
    ParameterMismatch,

    #[error("partial censuses do not cover the subspace enumeration exactly")]
    IncompleteCover,

    #[error("subspace enumeration is too large to index")]
    EnumerationTooLarge,

    #[error("subspace range {lo}..{hi} exceeds the enumeration of {total}")]
    RangeOutOfBounds { lo: u128, hi: u128, total: u128 },

    #[error("function space of {bits} table bits exceeds the full-scan cap of {cap}")]
    SpaceTooLarge { bits: u32, cap: u32 },

    #[error("search scope matched no functions")]
    EmptyScope,

    #[error("jobs must be at least 1")]
    ZeroJobs,
}
