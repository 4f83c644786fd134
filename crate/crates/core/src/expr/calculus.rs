//! Differentiation and shallow simplification.

use super::{Expr, Func};

fn fold(v: f64) -> Option<Expr> {
    v.is_finite().then_some(Expr::Const(v))
}

fn is(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Const(c) if *c == v)
}

// Smart constructors. Each assumes simplified operands and returns a node
// to which no rule applies at the root, which makes `simplify` idempotent.

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
        if let Some(e) = fold(x + y) {
            return e;
        }
    }
    if is(&a, 0.0) {
        return b;
    }
    if is(&b, 0.0) {
        return a;
    }
    Expr::Add(Box::new(a), Box::new(b))
}

fn sub(a: Expr, b: Expr) -> Expr {
    if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
        if let Some(e) = fold(x - y) {
            return e;
        }
    }
    if is(&b, 0.0) {
        return a;
    }
    if is(&a, 0.0) {
        return neg(b);
    }
    Expr::Sub(Box::new(a), Box::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
        if let Some(e) = fold(x * y) {
            return e;
        }
    }
    if is(&a, 0.0) || is(&b, 0.0) {
        return Expr::Const(0.0);
    }
    if is(&a, 1.0) {
        return b;
    }
    if is(&b, 1.0) {
        return a;
    }
    if is(&a, -1.0) {
        return neg(b);
    }
    if is(&b, -1.0) {
        return neg(a);
    }
    Expr::Mul(Box::new(a), Box::new(b))
}

fn div(a: Expr, b: Expr) -> Expr {
    if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
        if *y != 0.0 {
            if let Some(e) = fold(x / y) {
                return e;
            }
        }
    }
    if is(&b, 1.0) {
        return a;
    }
    if is(&a, 0.0) && !is(&b, 0.0) {
        return Expr::Const(0.0);
    }
    Expr::Div(Box::new(a), Box::new(b))
}

fn pow(a: Expr, b: Expr) -> Expr {
    if let (Expr::Const(x), Expr::Const(y)) = (&a, &b) {
        if let Ok(v) = Expr::Pow(Box::new(Expr::Const(*x)), Box::new(Expr::Const(*y))).eval(0.0) {
            return Expr::Const(v);
        }
    }
    if is(&b, 1.0) {
        return a;
    }
    if is(&b, 0.0) || is(&a, 1.0) {
        return Expr::Const(1.0);
    }
    Expr::Pow(Box::new(a), Box::new(b))
}

fn func(f: Func, a: Expr) -> Expr {
    if let Expr::Const(c) = a {
        if let Ok(v) = Expr::apply(f, Expr::Const(c)).eval(0.0) {
            return Expr::Const(v);
        }
    }
    Expr::Func(f, Box::new(a))
}

impl Expr {
    /// Constant folding and 0/1 identity elimination, applied bottom-up.
    ///
    /// Value-preserving wherever both trees are defined, and idempotent.
    /// No polynomial canonicalization is attempted.
    pub fn simplify(&self) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => Expr::Var,
            Expr::Neg(a) => neg(a.simplify()),
            Expr::Add(a, b) => add(a.simplify(), b.simplify()),
            Expr::Sub(a, b) => sub(a.simplify(), b.simplify()),
            Expr::Mul(a, b) => mul(a.simplify(), b.simplify()),
            Expr::Div(a, b) => div(a.simplify(), b.simplify()),
            Expr::Pow(a, b) => pow(a.simplify(), b.simplify()),
            Expr::Func(f, a) => func(*f, a.simplify()),
        }
    }

    /// Exact derivative of the given order, lightly simplified.
    ///
    /// `order == 0` returns the simplified expression itself.
    pub fn derivative(&self, order: usize) -> Expr {
        let mut e = self.simplify();
        for _ in 0..order {
            e = e.d();
        }
        e
    }

    // First derivative of an already simplified tree.
    fn d(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Neg(a) => neg(a.d()),
            Expr::Add(a, b) => add(a.d(), b.d()),
            Expr::Sub(a, b) => sub(a.d(), b.d()),
            Expr::Mul(a, b) => add(mul(a.d(), (**b).clone()), mul((**a).clone(), b.d())),
            Expr::Div(a, b) => {
                // (a'b - ab') / b^2
                let num = sub(mul(a.d(), (**b).clone()), mul((**a).clone(), b.d()));
                div(num, pow((**b).clone(), Expr::Const(2.0)))
            }
            Expr::Pow(a, b) => {
                let base = (**a).clone();
                let exponent = (**b).clone();
                if exponent.is_constant() {
                    let lowered = pow(base.clone(), sub(exponent.clone(), Expr::Const(1.0)));
                    mul(mul(exponent, lowered), a.d())
                } else if base.is_constant() {
                    mul(mul(self.clone(), func(Func::Log, base)), b.d())
                } else {
                    // a^b (b' log a + b a'/a)
                    let inner = add(
                        mul(b.d(), func(Func::Log, base.clone())),
                        div(mul(exponent, a.d()), base),
                    );
                    mul(self.clone(), inner)
                }
            }
            Expr::Func(f, a) => {
                let u = (**a).clone();
                let outer = match f {
                    Func::Sin => func(Func::Cos, u),
                    Func::Cos => neg(func(Func::Sin, u)),
                    Func::Tan => div(Expr::Const(1.0), pow(func(Func::Cos, u), Expr::Const(2.0))),
                    Func::Exp => self.clone(),
                    Func::Log => div(Expr::Const(1.0), u),
                    Func::Sinh => func(Func::Cosh, u),
                    Func::Cosh => func(Func::Sinh, u),
                    Func::Tanh => div(Expr::Const(1.0), pow(func(Func::Cosh, u), Expr::Const(2.0))),
                    Func::Sqrt => div(Expr::Const(0.5), self.clone()),
                };
                mul(outer, a.d())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s, "x").unwrap()
    }

    #[test]
    fn power_rule() {
        let d = p("x + x^3/3").derivative(1);
        for x in [-1.5, 0.0, 0.3, 2.0] {
            assert!((d.eval(x).unwrap() - (1.0 + x * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn second_derivative_of_sinh() {
        let d = p("sinh(x)").derivative(2);
        for x in [-1.0, 0.25, 3.0] {
            assert!((d.eval(x).unwrap() - x.sinh()).abs() < 1e-13 * (1.0 + x.sinh().abs()));
        }
        assert_eq!(d, p("sinh(x)"));
    }

    #[test]
    fn third_derivative_of_exp() {
        let d = p("exp(x)").derivative(3);
        assert!((d.eval(1.0).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(d, p("exp(x)"));
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(p("0*x + 1*sinh(x)").simplify(), p("sinh(x)"));
        assert_eq!(p("x^1").simplify(), Expr::Var);
        assert_eq!(p("2+3").simplify(), Expr::Const(5.0));
        assert_eq!(p("-(-x)").simplify(), Expr::Var);
        assert_eq!(p("0 - x").simplify(), p("-x"));
        assert_eq!(p("x/1 - 0").simplify(), Expr::Var);
    }

    #[test]
    fn simplify_leaves_invalid_constants_alone() {
        let e = p("log(-1) + x").simplify();
        assert!(e.eval(1.0).is_err());
        let e = p("1/0").simplify();
        assert!(matches!(e, Expr::Div(..)));
    }

    #[test]
    fn derivative_rules_against_closed_forms() {
        let cases: [(&str, fn(f64) -> f64); 8] = [
            ("tan(x)", |x| 1.0 / x.cos().powi(2)),
            ("log(x)", |x| 1.0 / x),
            ("sqrt(x)", |x| 0.5 / x.sqrt()),
            ("tanh(x)", |x| 1.0 / x.cosh().powi(2)),
            ("cos(2*x)", |x| -2.0 * (2.0 * x).sin()),
            ("2^x", |x| 2f64.powf(x) * 2f64.ln()),
            ("x^x", |x| x.powf(x) * (x.ln() + 1.0)),
            ("1/(x*x)", |x| -2.0 / x.powi(3)),
        ];
        for (text, exact) in cases {
            let d = p(text).derivative(1);
            for x in [0.3, 0.9, 1.7] {
                let got = d.eval(x).unwrap();
                let want = exact(x);
                assert!(
                    (got - want).abs() <= 1e-13 * (1.0 + want.abs()),
                    "{text} at {x}: {got} vs {want}"
                );
            }
        }
    }
}
