//! Error types, one enum per subsystem, plus the umbrella `EngineError`
//! carrying the process exit-code convention.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("undeclared generator {name:?}")]
    UndeclaredGenerator { name: String },
    #[error("duplicate generator {name:?}")]
    DuplicateGenerator { name: String },
    #[error("empty generator list")]
    EmptyGeneratorList,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown catalog group {name:?}")]
    UnknownName { name: String },
    #[error("group order {order} exceeds configured ceiling {ceiling}")]
    CeilingExceeded { order: usize, ceiling: usize },
    #[error("semidirect action {action} does not have order {expected} mod {modulus}")]
    BadSemidirectAction { action: u64, expected: u64, modulus: u64 },
    #[error("missing image for generator {gen}")]
    MissingImage { gen: usize },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset limit {limit} exceeded; enumeration did not close")]
    LimitExceeded { limit: usize },
    #[error("coset table is not complete")]
    Incomplete,
    #[error("low-index node budget {budget} exceeded")]
    NodeBudgetExceeded { budget: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("work budget {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("epimorphism count {epi} not divisible by |Aut| = {aut} for target {target}")]
    InexactAutDivision { epi: u64, aut: u64, target: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("abelianization is infinite (free rank {free_rank}); abelian cover is not finite-index")]
    InfiniteAbelianization { free_rank: usize },
    #[error(transparent)]
    Coset(#[from] CosetError),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error("register error: {0}")]
    Register(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl EngineError {
    /// Exit codes: 0 success, 1 computational error, 2 input error, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            EngineError::Parse(_) | EngineError::Register(_) => 2,
            EngineError::Group(GroupError::UnknownName { .. })
            | EngineError::Group(GroupError::BadSemidirectAction { .. }) => 2,
            EngineError::Io(_) => 2,
            EngineError::Coset(CosetError::LimitExceeded { .. })
            | EngineError::Coset(CosetError::NodeBudgetExceeded { .. })
            | EngineError::Census(CensusError::BudgetExceeded { .. })
            | EngineError::Group(GroupError::CeilingExceeded { .. }) => 3,
            EngineError::Abelian(AbelianError::Coset(CosetError::LimitExceeded { .. })) => 3,
            _ => 1,
        }
    }
}
