use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multiplication table is not closed: entry ({0},{1}) = {2} out of range")]
    TableNotClosed(usize, usize, usize),
    #[error("multiplication table is not associative at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity element in multiplication table")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("element index {0} out of range for group of order {1}")]
    ElementOutOfRange(usize, usize),
    #[error("not a left action: {0}")]
    NotAnAction(String),
    #[error("map is not equivariant at element {elt}, point {point}")]
    NotEquivariant { elt: usize, point: usize },
    #[error("mismatched acting groups")]
    GroupMismatch,
    #[error("subgroup {0} is not contained in subgroup {1}")]
    NotContained(usize, usize),
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid permutation: {0:?} is not a bijection of 0..{1}")]
    BadPermutation(Vec<usize>, usize),
    #[error("subgroup pair ({0},{1}) is not a nested pair K <= H")]
    BadPair(usize, usize),
    #[error("H-set is not admissible: orbit with stabilizer id {stab} under subgroup id {sub}")]
    InadmissibleHSet { stab: usize, sub: usize },
    #[error("equivariant map is not admissible: fiber over point {point} of target orbit with stabilizer id {stab}")]
    InadmissibleMap { point: usize, stab: usize },
    #[error("norm tree invalid: {0}")]
    BadTree(String),
    #[error("span legs do not match the declared source/target/apex: {0}")]
    BadSpan(String),
    #[error("label list length {labels} does not match tree length {len}")]
    LabelMismatch { labels: usize, len: usize },
    #[error("morphism is not label-compatible at position {0}")]
    LabelIncompatible(usize),
    #[error("functor data is not equivariant at element {elt}, point {point}")]
    DataNotEquivariant { elt: usize, point: usize },
    #[error("assignment for the normed generator is not fixed under its graph subgroup")]
    AssignmentNotFixed,
    #[error("monoid table invalid: {0}")]
    BadMonoid(String),
    #[error("enumeration guard exceeded: {0} candidate pairs, guard {1}")]
    GuardExceeded(usize, usize),
    #[error("budget overflow: {0}")]
    BudgetOverflow(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
