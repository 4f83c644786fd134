//! Univariate real-valued symbolic expressions.
//!
//! An [`Expr`] is an immutable tree over a single free variable. Trees come
//! from [`parse`] or from the arithmetic operators implemented on `Expr`, and
//! support pointwise evaluation, exact differentiation ([`Expr::derivative`])
//! and shallow simplification ([`Expr::simplify`]).
//!
//! The variable carries no name inside the tree; the name is only needed
//! when parsing and printing. `Display` prints the variable as `x`, use
//! [`Expr::to_text`] for another name.

mod calculus;
mod parse;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub use parse::parse;

/// Evaluation and parsing failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: String },
}

/// Elementary functions accepted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, a: f64) -> Result<f64, &'static str> {
        match self {
            Func::Log if a <= 0.0 => Err("logarithm of a non-positive number"),
            Func::Sqrt if a < 0.0 => Err("square root of a negative number"),
            Func::Sin => Ok(a.sin()),
            Func::Cos => Ok(a.cos()),
            Func::Tan => Ok(a.tan()),
            Func::Exp => Ok(a.exp()),
            Func::Log => Ok(a.ln()),
            Func::Sinh => Ok(a.sinh()),
            Func::Cosh => Ok(a.cosh()),
            Func::Tanh => Ok(a.tanh()),
            Func::Sqrt => Ok(a.sqrt()),
        }
    }
}

/// Expression tree over one real variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Func(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn apply(f: Func, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn powf(self, exponent: f64) -> Expr {
        Expr::Pow(Box::new(self), Box::new(Expr::Const(exponent)))
    }

    pub fn pow(self, exponent: Expr) -> Expr {
        Expr::Pow(Box::new(self), Box::new(exponent))
    }

    /// True if the variable occurs nowhere in the tree.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Func(_, a) => a.is_constant(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::Func(_, a) => 1 + a.size(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Value of the expression at `x`.
    ///
    /// Any non-finite intermediate result is reported as a domain error
    /// naming the offending subexpression.
    pub fn eval(&self, x: f64) -> Result<f64, ExprError> {
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Neg(a) => -a.eval(x)?,
            Expr::Add(a, b) => a.eval(x)? + b.eval(x)?,
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Mul(a, b) => a.eval(x)? * b.eval(x)?,
            Expr::Div(a, b) => {
                let num = a.eval(x)?;
                let den = b.eval(x)?;
                if den == 0.0 {
                    return Err(self.domain("division by zero"));
                }
                num / den
            }
            Expr::Pow(a, b) => {
                let base = a.eval(x)?;
                let exponent = b.eval(x)?;
                if b.is_constant() {
                    if base == 0.0 && exponent < 0.0 {
                        return Err(self.domain("zero raised to a negative power"));
                    }
                    if exponent.fract() == 0.0 && exponent.abs() < i32::MAX as f64 {
                        base.powi(exponent as i32)
                    } else if base < 0.0 {
                        return Err(self.domain("negative base with non-integer exponent"));
                    } else {
                        base.powf(exponent)
                    }
                } else {
                    if base <= 0.0 {
                        return Err(self.domain("variable exponent requires a positive base"));
                    }
                    (exponent * base.ln()).exp()
                }
            }
            Expr::Func(f, a) => {
                let arg = a.eval(x)?;
                f.apply(arg).map_err(|reason| self.domain(reason))?
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(self.domain("non-finite result"))
        }
    }

    fn domain(&self, reason: &str) -> ExprError {
        ExprError::Domain {
            node: self.to_string(),
            reason: reason.to_string(),
        }
    }

    /// Fully parenthesized text using `var` for the variable.
    pub fn to_text(&self, var: &str) -> String {
        let mut out = String::new();
        self.write_text(&mut out, var);
        out
    }

    fn write_text(&self, out: &mut String, var: &str) {
        use std::fmt::Write;
        match self {
            Expr::Const(c) if *c < 0.0 => {
                let _ = write!(out, "(-{})", -c);
            }
            Expr::Const(c) => {
                let _ = write!(out, "{}", c);
            }
            Expr::Var => out.push_str(var),
            Expr::Neg(a) => {
                out.push_str("(-");
                a.write_text(out, var);
                out.push(')');
            }
            Expr::Add(a, b) => binary(out, var, a, " + ", b),
            Expr::Sub(a, b) => binary(out, var, a, " - ", b),
            Expr::Mul(a, b) => binary(out, var, a, " * ", b),
            Expr::Div(a, b) => binary(out, var, a, " / ", b),
            Expr::Pow(a, b) => binary(out, var, a, " ^ ", b),
            Expr::Func(f, a) => {
                out.push_str(f.name());
                out.push('(');
                a.write_text(out, var);
                out.push(')');
            }
        }
    }
}

fn binary(out: &mut String, var: &str, a: &Expr, op: &str, b: &Expr) {
    out.push('(');
    a.write_text(out, var);
    out.push_str(op);
    b.write_text(out, var);
    out.push(')');
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text("x"))
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Self {
        Expr::Const(c)
    }
}

// Operators build raw nodes; call `simplify` to fold them.
impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_cubic_example() {
        let e = parse("x + x^3/3", "x").unwrap();
        assert!((e.eval(2.0).unwrap() - 14.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sinh_at_zero() {
        assert_eq!(parse("sinh(x)", "x").unwrap().eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors_name_the_node() {
        let err = parse("1 + log(x)", "x").unwrap().eval(-1.0).unwrap_err();
        match err {
            ExprError::Domain { node, .. } => assert_eq!(node, "log(x)"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("1/x", "x").unwrap().eval(0.0).is_err());
        assert!(parse("sqrt(x)", "x").unwrap().eval(-0.5).is_err());
        assert!(parse("x^(-2)", "x").unwrap().eval(0.0).is_err());
        assert!(parse("x^0.5", "x").unwrap().eval(-4.0).is_err());
        assert!(parse("2^x", "x").unwrap().eval(-4.0).is_ok());
        assert!(parse("x^x", "x").unwrap().eval(-1.0).is_err());
    }

    #[test]
    fn integer_powers_of_negative_bases() {
        let e = parse("x^3", "x").unwrap();
        assert_eq!(e.eval(-2.0).unwrap(), -8.0);
        let e = parse("(-3)^2", "x").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 9.0);
    }

    #[test]
    fn printing_is_fully_parenthesized() {
        let e = parse("x + x^3/3", "x").unwrap();
        assert_eq!(e.to_string(), "(x + ((x ^ 3) / 3))");
        assert_eq!(e.to_text("t"), "(t + ((t ^ 3) / 3))");
        assert_eq!(Expr::Const(-2.5).to_string(), "(-2.5)");
    }
}
