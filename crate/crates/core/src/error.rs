use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what}: budget exceeded (needs {required}, budget {budget})")]
    BudgetExceeded {
        what: String,
        required: u128,
        budget: u128,
    },

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("infeasible input: {0}")]
    InfeasibleInput(String),

    #[error("missing variable `{0}`")]
    MissingVariable(String),

    #[error("wrong instance shape: {0}")]
    WrongShape(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn budget(what: impl Into<String>, required: u128, budget: u128) -> Error {
    Error::BudgetExceeded {
        what: what.into(),
        required,
        budget,
    }
}
