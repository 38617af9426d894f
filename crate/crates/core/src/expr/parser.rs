use super::ast::{BinOp, Constant, Expr, Func, PREFIX};
use super::lexer::{tokenize, Spanned, Token};
use crate::error::ExprError;

/// Parses an expression in the variable `x`.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        nesting: 0,
    };
    let (expr, _) = parser.expression(0)?;
    match parser.peek() {
        Token::End => Ok(expr),
        other => Err(ExprError::Syntax {
            offset: parser.offset(),
            expected: format!("an operator or end of input, found {}", other.describe()),
        }),
    }
}

/// Maximum depth of the parsed tree; evaluation and printing recurse over it.
pub const MAX_DEPTH: usize = 200;

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    nesting: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].token
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    fn advance(&mut self) -> Spanned {
        let tok = self.tokens[self.pos].clone();
        if !matches!(tok.token, Token::End) {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(ExprError::Syntax {
                offset: self.offset(),
                expected: format!("{what}, found {}", self.peek().describe()),
            })
        }
    }

    fn too_deep(&self) -> ExprError {
        ExprError::Syntax {
            offset: self.offset(),
            expected: format!("an expression nested at most {MAX_DEPTH} levels deep"),
        }
    }

    fn expression(&mut self, min_bp: u8) -> Result<(Expr, usize), ExprError> {
        let (mut lhs, mut depth) = self.prefix()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                Token::Caret => BinOp::Pow,
                _ => break,
            };
            let left_bp = op.precedence();
            if left_bp < min_bp {
                break;
            }
            let right_bp = if op.right_assoc() { left_bp } else { left_bp + 1 };
            self.advance();
            let (rhs, rhs_depth) = self.expression(right_bp)?;
            depth = depth.max(rhs_depth) + 1;
            if depth > MAX_DEPTH {
                return Err(self.too_deep());
            }
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok((lhs, depth))
    }

    fn prefix(&mut self) -> Result<(Expr, usize), ExprError> {
        self.nesting += 1;
        if self.nesting > MAX_DEPTH {
            return Err(self.too_deep());
        }
        let result = self.prefix_inner();
        self.nesting -= 1;
        result
    }

    fn prefix_inner(&mut self) -> Result<(Expr, usize), ExprError> {
        let Spanned { token, offset } = self.advance();
        match token {
            Token::Number(v) => Ok((Expr::Number(v), 1)),
            Token::Minus => {
                let (inner, depth) = self.expression(PREFIX)?;
                Ok((Expr::negate(inner), depth + 1))
            }
            // unary plus is accepted and dropped
            Token::Plus => self.expression(PREFIX),
            Token::LParen => {
                let inner = self.expression(0)?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Ident(name) => self.identifier(name, offset),
            other => Err(ExprError::Syntax {
                offset,
                expected: format!("an operand, found {}", other.describe()),
            }),
        }
    }

    fn identifier(&mut self, name: String, offset: usize) -> Result<(Expr, usize), ExprError> {
        if let Some(c) = Constant::from_name(&name) {
            return Ok((Expr::Constant(c), 1));
        }
        if name == "x" {
            return Ok((Expr::Var, 1));
        }
        match Func::from_name(&name) {
            Some(func) => {
                self.expect(Token::LParen, &format!("`(` after `{name}`"))?;
                let (arg, depth) = self.expression(0)?;
                self.expect(Token::RParen, "`)`")?;
                Ok((Expr::call(func, arg), depth + 1))
            }
            None => Err(ExprError::UnknownIdentifier { name, offset }),
        }
    }
}
