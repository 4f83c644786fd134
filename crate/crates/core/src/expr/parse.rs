//! Recursive-descent parser.
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, unary `-`, `^`.
//! `^` is right-associative and its right operand may carry a unary minus,
//! so `-x^2` is `-(x^2)` and `2^-x` is `2^(-x)`. There is no implicit
//! multiplication.

use super::{Expr, ExprError, Func};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'.' {
                    j += 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                    }
                }
                let literal = &text[i..j];
                let value: f64 = literal
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number `{literal}`")))?;
                if !value.is_finite() {
                    return Err(syntax(start, format!("number `{literal}` is out of range")));
                }
                i = j;
                toks.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                toks.push((Tok::Ident(text[i..j].to_string()), start));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        toks.push((tok, start));
        i += 1;
    }
    toks.push((Tok::End, text.len()));
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    var: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!(
                    "expected {}, found {}",
                    want.describe(),
                    self.peek().describe()
                ),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = lhs + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    lhs = lhs - self.term()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = lhs * self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    lhs = lhs / self.unary()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(base.pow(exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Const(v)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if name == self.var {
                    return Ok(Expr::Var);
                }
                match Func::from_name(&name) {
                    Some(f) => {
                        if *self.peek() != Tok::LParen {
                            return Err(syntax(
                                self.offset(),
                                format!("function `{name}` must be followed by `(`"),
                            ));
                        }
                        self.bump();
                        let arg = self.expr()?;
                        self.expect(Tok::RParen)?;
                        Ok(Expr::apply(f, arg))
                    }
                    None => Err(ExprError::UnknownIdentifier { name, offset }),
                }
            }
            other => Err(syntax(offset, format!("unexpected {}", other.describe()))),
        }
    }
}

/// Parse `text` as an expression in the single variable `var_name`.
///
/// Syntax errors carry the 0-based byte offset of the offending token.
pub fn parse(text: &str, var_name: &str) -> Result<Expr, ExprError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        var: var_name,
    };
    if *parser.peek() == Tok::End {
        return Err(syntax(0, "empty expression"));
    }
    let e = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(syntax(
            parser.offset(),
            format!("unexpected {}", parser.peek().describe()),
        ));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Box<Expr> {
        Box::new(Expr::Const(v))
    }

    #[test]
    fn cubic_tree() {
        let e = parse("x + x^3/3", "x").unwrap();
        let want = Expr::Add(
            Box::new(Expr::Var),
            Box::new(Expr::Div(
                Box::new(Expr::Pow(Box::new(Expr::Var), c(3.0))),
                c(3.0),
            )),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn function_application() {
        assert_eq!(
            parse("sinh(x)", "x").unwrap(),
            Expr::Func(Func::Sinh, Box::new(Expr::Var))
        );
    }

    #[test]
    fn syntax_error_offset() {
        assert_eq!(
            parse("x + * 3", "x").unwrap_err(),
            ExprError::Syntax {
                offset: 4,
                message: "unexpected `*`".into()
            }
        );
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = parse("-x^2", "x").unwrap();
        assert_eq!(e.eval(3.0).unwrap(), -9.0);
        let e = parse("-x*2", "x").unwrap();
        assert!(matches!(e, Expr::Mul(..)));
        let e = parse("2^-x", "x").unwrap();
        assert_eq!(e.eval(1.0).unwrap(), 0.5);
    }

    #[test]
    fn power_is_right_associative() {
        let e = parse("2^3^2", "x").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 512.0);
    }

    #[test]
    fn rejects_implicit_multiplication_and_unknowns() {
        assert!(matches!(
            parse("2x", "x"),
            Err(ExprError::Syntax { offset: 1, .. })
        ));
        assert_eq!(
            parse("x + y", "x").unwrap_err(),
            ExprError::UnknownIdentifier {
                name: "y".into(),
                offset: 4
            }
        );
        assert!(matches!(
            parse("", "x"),
            Err(ExprError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("sin x", "x"),
            Err(ExprError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse("(x", "x"),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("x $ 1", "x"),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
    }

    #[test]
    fn other_variable_names() {
        let e = parse("cos(2*t)", "t").unwrap();
        assert!((e.eval(0.5).unwrap() - 1f64.cos()).abs() < 1e-15);
        assert!(parse("cos(2*x)", "t").is_err());
    }

    #[test]
    fn exponent_literals() {
        assert_eq!(parse("1.5e-3", "x").unwrap(), Expr::Const(1.5e-3));
        assert_eq!(parse(".25", "x").unwrap(), Expr::Const(0.25));
        assert!(parse("1e999", "x").is_err());
    }
}
