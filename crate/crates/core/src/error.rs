use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("need {needed} derivatives, got {got}")]
    Arity { needed: usize, got: usize },

    #[error("series has a non-invertible constant term")]
    Inversion,

    #[error("infinite product does not converge: {0}")]
    Divergence(String),

    #[error("case mismatch: {0}")]
    Case(String),

    #[error("pole: {kind} vanishes at argument {argument}{}", component.map(|c| format!(" (component {c})")).unwrap_or_default())]
    Pole {
        kind: String,
        argument: String,
        component: Option<usize>,
    },

    #[error("quadrature did not converge: doubling changed the result by {0:e}")]
    Quadrature(f64),

    #[error("graded algebra: {0}")]
    Grading(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
