use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("malformed scalar {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("sqrt({0}) is not a square-free root > 1")]
    BadRoot(u32),
}

/// Failures of the forest layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("cycle detected in tree {tree}")]
    CycleDetected { tree: String },
    #[error("edge {edge} of tree {tree} has non-positive length")]
    NonPositiveLength { tree: String, edge: String },
    #[error("tree {tree} is disconnected")]
    Disconnected { tree: String },
    #[error("tree {tree} has no vertices")]
    EmptyTree { tree: String },
    #[error("duplicate name {name} in tree {tree}")]
    DuplicateName { tree: String, name: String },
    #[error("unknown vertex {vertex} in tree {tree}")]
    UnknownVertex { tree: String, vertex: String },
    #[error("edge {edge} of tree {tree} is a loop or repeats an existing edge")]
    Multigraph { tree: String, edge: String },
    #[error("point is not in the tree")]
    PointNotInTree,
    #[error("point is not in the subtree")]
    PointNotInSubtree,
    #[error("subtrees live in different host trees")]
    HostMismatch,
    #[error("empty generator set")]
    NoGenerators,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("word is not reduced at position {0}")]
    UnreducedWord(usize),
    #[error("enumeration budget of {0} words exceeded")]
    BudgetExceeded(usize),
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductionError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("Rips step produced an empty forest")]
    EmptyOutput,
    #[error("point is not a splitting point: {0}")]
    NotASplittingPoint(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IetError {
    #[error("invalid interval exchange: {0}")]
    InvalidIet(String),
    #[error("Keane violation at step {step}: rightmost intervals have equal length")]
    KeaneViolation { step: usize },
    #[error("interval exchange is reducible")]
    Reducible,
    #[error(transparent)]
    Induction(#[from] InductionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("orbit cycle found: {word}")]
    FreenessViolation { word: String },
    #[error("point is not in the forest")]
    PointNotInForest,
    #[error("radius must be at least {0}")]
    RadiusTooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaminationError {
    #[error("half-leaf basepoint differs from the leaf set basepoint")]
    BasepointMismatch,
    #[error("pair refers to unknown half {0}")]
    UnknownHalf(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DocumentError {
    pub line: usize,
    pub message: String,
}
