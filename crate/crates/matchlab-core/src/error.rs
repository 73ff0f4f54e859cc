use thiserror::Error;

/// Errors shared by the group and field layers.
///
/// `TheoremViolation` and `Internal` are reserved for situations that should
/// be impossible unless either the implementation or a proven statement is
/// wrong; callers are expected to escalate them rather than recover.
#[derive(Debug, Error)]
pub enum Error {
    #[error("torsion order must be at least 2, got {0}")]
    InvalidTorsionOrder(u64),

    #[error("element shape does not match the group: {0}")]
    GroupMismatch(String),

    #[error("operands belong to different groups")]
    DifferentGroups,

    #[error("operation requires a non-empty subset")]
    EmptySubset,

    #[error("subset sizes differ: #A = {a}, #B = {b}")]
    SizeMismatch { a: usize, b: usize },

    #[error("0 must not belong to B")]
    ZeroInB,

    #[error("1 must not belong to B")]
    OneInB,

    #[error("element {0} is foreign to the instance")]
    ForeignElement(String),

    #[error("subgroup enumeration over an infinite group needs an order bound")]
    UnboundedEnumeration,

    #[error("subgroup generated by an infinite-order element")]
    InfiniteSubgroup,

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("subgroup does not qualify: {0}")]
    SubgroupNotQualified(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus must be monic of degree n with coefficients mod p")]
    BadModulus,

    #[error("modulus is reducible over F_p")]
    ReducibleModulus,

    #[error("field contexts or ambient dimensions do not match")]
    CtxMismatch,

    #[error("inversion of zero in F_{{p^n}}")]
    ZeroInversion,

    #[error("operation requires a non-zero subspace")]
    ZeroSpace,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("vectors are not linearly independent")]
    NotIndependent,

    #[error("exhaustive budget exceeded: {need} objects, budget {budget}")]
    BudgetExceeded { need: u128, budget: u128 },

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("internal contradiction: {0}")]
    Internal(String),
}
