use thiserror::Error;

/// Errors produced by the expression front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("non-finite result evaluating expression at x = {x}")]
    Domain { x: f64 },
}

/// Errors produced by the solvers and transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("{what} is not finite at x = {x} (refined node {node})")]
    NonFinite {
        what: String,
        node: usize,
        x: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "forcing violates the compatibility condition g2 = i conj(g1), u2(0) = i conj(u1(0)) \
         (max deviation {max_deviation:e}); solve the general system with \
         `integrate_linear_system` instead"
    )]
    Compatibility { max_deviation: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
