use num_complex::Complex64;

use super::ast::{BinOp, Constant, Expr, Func};
use crate::error::ExprError;

/// Evaluates `expr` at the real point `x`. `log` and `sqrt` use principal
/// branches; the only error is a non-finite final value.
pub fn evaluate(expr: &Expr, x: f64) -> Result<Complex64, ExprError> {
    let value = eval(expr, x);
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(ExprError::Domain { x })
    }
}

fn eval(expr: &Expr, x: f64) -> Complex64 {
    match expr {
        Expr::Number(v) => Complex64::new(*v, 0.0),
        Expr::Constant(Constant::I) => Complex64::i(),
        Expr::Constant(Constant::Pi) => Complex64::new(std::f64::consts::PI, 0.0),
        Expr::Constant(Constant::E) => Complex64::new(std::f64::consts::E, 0.0),
        Expr::Var => Complex64::new(x, 0.0),
        Expr::Neg(inner) => {
            // 0 - z keeps a +0 imaginary part: sqrt(-4) = 2i
            let z = eval(inner, x);
            Complex64::new(0.0 - z.re, 0.0 - z.im)
        }
        Expr::Binary(op, lhs, rhs) => {
            let a = eval(lhs, x);
            let b = eval(rhs, x);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => divide(a, b),
                BinOp::Pow => power(a, b),
            }
        }
        Expr::Call(func, arg) => apply(*func, eval(arg, x)),
    }
}

fn divide(a: Complex64, b: Complex64) -> Complex64 {
    if b.im == 0.0 {
        // real divisor: 1/0 is inf, not NaN
        Complex64::new(a.re / b.re, a.im / b.re)
    } else {
        a / b
    }
}

fn power(base: Complex64, exponent: Complex64) -> Complex64 {
    if exponent.im == 0.0 {
        let p = exponent.re;
        if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
            if base.im == 0.0 {
                return Complex64::new(base.re.powi(p as i32), 0.0);
            }
            return base.powi(p as i32);
        }
        if base.im == 0.0 && base.re >= 0.0 {
            return Complex64::new(base.re.powf(p), 0.0);
        }
    }
    if base.re == 0.0 && base.im == 0.0 {
        return if exponent.re > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(f64::NAN, f64::NAN)
        };
    }
    base.powc(exponent)
}

fn apply(func: Func, z: Complex64) -> Complex64 {
    match func {
        Func::Sin => z.sin(),
        Func::Cos => z.cos(),
        Func::Tan => z.tan(),
        Func::Sinh => z.sinh(),
        Func::Cosh => z.cosh(),
        Func::Tanh => z.tanh(),
        Func::Exp => z.exp(),
        Func::Log => z.ln(),
        Func::Sqrt => z.sqrt(),
        Func::Abs => Complex64::new(z.norm(), 0.0),
        Func::Re => Complex64::new(z.re, 0.0),
        Func::Im => Complex64::new(z.im, 0.0),
        Func::Conj => z.conj(),
    }
}
