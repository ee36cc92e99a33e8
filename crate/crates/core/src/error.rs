use thiserror::Error;

/// Errors raised by the simulation and evaluation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("jump budget of {budget} exceeded before t = {t_end}; try a smaller horizon")]
    BudgetExceeded { budget: u64, t_end: f64 },

    #[error("quadrature did not converge: estimated error {achieved:e} > requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("degenerate tail: {0}")]
    DegenerateTail(String),

    #[error("degenerate test: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
