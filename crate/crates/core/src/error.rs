use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("generator {name}{index} does not exist in this space")]
    UnknownGenerator { name: String, index: u32 },

    #[error("mode index {index} of {name}{gen_index} is not in the {sector} parity class")]
    ModeParity {
        name: String,
        gen_index: u32,
        index: String,
        sector: String,
    },

    #[error("{name}{gen_index}_{{{index}}} is an annihilation mode; kets contain creation modes only")]
    AnnihilationInKet {
        name: String,
        gen_index: u32,
        index: String,
    },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("block of {size} monomials exceeds the basis budget of {budget}")]
    BudgetExceeded { size: usize, budget: usize },

    #[error("structure mismatch: {0}")]
    Structure(String),

    #[error("series mismatch: {0}")]
    Series(String),
}

pub type Result<T> = std::result::Result<T, Error>;
