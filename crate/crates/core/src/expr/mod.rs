//! Coefficient expressions in the single real variable `x`.
//!
//! Grammar, loosest to tightest: `+ -` (left), `* /` (left), unary `-`,
//! `^` (right). So `-x^2` is `-(x^2)` and `-x*y` is `(-x)*y`. Constants are
//! `i`, `pi` and `e`; functions are `sin cos tan sinh cosh tanh exp log sqrt
//! abs re im conj`. There are no user variables: callers substitute any
//! parameters textually before parsing.

mod ast;
mod eval;
mod lexer;
mod parser;

pub use ast::{BinOp, Constant, Expr, Func};
pub use eval::evaluate;
pub use parser::{parse, MAX_DEPTH};

use crate::error::ExprError;
use num_complex::Complex64;

/// Parses a constant expression (no `x`) and evaluates it.
pub fn parse_constant(text: &str) -> Result<Complex64, ExprError> {
    let expr = parse(text)?;
    if !expr.is_constant() {
        return Err(ExprError::Syntax {
            offset: 0,
            expected: "a constant expression (no `x`)".into(),
        });
    }
    evaluate(&expr, 0.0)
}
