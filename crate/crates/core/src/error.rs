use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("state with lambda = {lam} is not on the left phase (lambda_l = {expected})")]
    PhaseSide { lam: f64, expected: f64 },

    #[error("root finder did not converge after {iterations} iterations, bracket [{lo}, {hi}]")]
    NonConvergence { lo: f64, hi: f64, iterations: usize },

    #[error("degenerate jump: {0}")]
    DegenerateJump(&'static str),

    #[error("no admissible parameters: m must lie in ({lower}, {upper})")]
    Infeasible { lower: f64, upper: f64 },

    #[error("invalid initial data: {0}")]
    InvalidData(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("event budget of {0} events exhausted")]
    EventBudget(usize),

    #[error("monitor violation at t = {time}: {message}")]
    Monitor { time: f64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
