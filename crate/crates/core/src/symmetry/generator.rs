use num_complex::Complex64;

use crate::error::Result;
use crate::expr::{Expr, Func};
use crate::model::LienardModel;

/// Time dependence of one coefficient term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeFactor {
    One,
    /// `cos(nu t)`
    Cos(f64),
    /// `sin(nu t)`
    Sin(f64),
    /// `exp(i nu t)`
    Exp(f64),
}

/// `p(h(x)) * h'(x)^hp_pow`, the x-dependence of one term.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceFactor {
    /// Ascending coefficients of `p` in powers of `xi = h`.
    pub xi_poly: Vec<f64>,
    pub hp_pow: i32,
}

impl SpaceFactor {
    pub fn new(xi_poly: Vec<f64>, hp_pow: i32) -> Self {
        Self { xi_poly, hp_pow }
    }

    /// `xi^k * h'^hp_pow`.
    pub fn monomial(k: usize, hp_pow: i32) -> Self {
        let mut xi_poly = vec![0.0; k + 1];
        xi_poly[k] = 1.0;
        Self { xi_poly, hp_pow }
    }

    fn to_expr(&self, m: &LienardModel) -> Expr {
        let mut poly: Option<Expr> = None;
        for (j, c) in self.xi_poly.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let power = if j == 0 {
                Expr::Const(1.0)
            } else {
                m.h().clone().powf(j as f64)
            };
            let term = Expr::Const(*c) * power;
            poly = Some(match poly {
                None => term,
                Some(p) => p + term,
            });
        }
        let poly = poly.unwrap_or(Expr::Const(0.0));
        let e = if self.hp_pow == 0 {
            poly
        } else {
            poly * m.h_prime().clone().powf(self.hp_pow as f64)
        };
        e.simplify()
    }
}

/// `scale * time(t) * space(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub scale: Complex64,
    pub time: TimeFactor,
    pub space: SpaceFactor,
}

impl Term {
    pub fn new(scale: impl Into<Complex64>, time: TimeFactor, space: SpaceFactor) -> Self {
        Self {
            scale: scale.into(),
            time,
            space,
        }
    }
}

/// A coefficient and its partial derivatives at one point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Partials {
    pub v: Complex64,
    pub t: Complex64,
    pub x: Complex64,
    pub tt: Complex64,
    pub tx: Complex64,
    pub xx: Complex64,
}

#[derive(Debug, Clone)]
struct Compiled {
    scale: Complex64,
    t: [Expr; 3],
    x: [Expr; 3],
}

fn derivatives(e: Expr) -> [Expr; 3] {
    let d1 = e.derivative(1);
    let d2 = d1.derivative(1);
    [e, d1, d2]
}

fn time_exprs(tf: TimeFactor) -> Vec<(Complex64, Expr)> {
    let t = Expr::Var;
    let arg = |nu: f64| (Expr::Const(nu) * t.clone()).simplify();
    match tf {
        TimeFactor::One => vec![(Complex64::new(1.0, 0.0), Expr::Const(1.0))],
        TimeFactor::Cos(nu) => vec![(Complex64::new(1.0, 0.0), Expr::apply(Func::Cos, arg(nu)))],
        TimeFactor::Sin(nu) => vec![(Complex64::new(1.0, 0.0), Expr::apply(Func::Sin, arg(nu)))],
        TimeFactor::Exp(nu) => vec![
            (Complex64::new(1.0, 0.0), Expr::apply(Func::Cos, arg(nu))),
            (Complex64::new(0.0, 1.0), Expr::apply(Func::Sin, arg(nu))),
        ],
    }
}

/// Sum of separable terms; each single-variable factor is an [`Expr`]
/// differentiated exactly.
#[derive(Debug, Clone)]
pub struct Coefficient {
    terms: Vec<Term>,
    compiled: Vec<Compiled>,
}

impl Coefficient {
    pub fn new(m: &LienardModel, terms: Vec<Term>) -> Self {
        let mut compiled = Vec::new();
        for term in &terms {
            let x = derivatives(term.space.to_expr(m));
            for (phase, t) in time_exprs(term.time) {
                compiled.push(Compiled {
                    scale: term.scale * phase,
                    t: derivatives(t),
                    x: x.clone(),
                });
            }
        }
        Self { terms, compiled }
    }

    pub fn zero() -> Self {
        Self {
            terms: vec![],
            compiled: vec![],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn partials(&self, t: f64, x: f64) -> Result<Partials> {
        let mut p = Partials::default();
        for c in &self.compiled {
            let tv = [c.t[0].eval(t)?, c.t[1].eval(t)?, c.t[2].eval(t)?];
            let xv = [c.x[0].eval(x)?, c.x[1].eval(x)?, c.x[2].eval(x)?];
            p.v += c.scale * (tv[0] * xv[0]);
            p.t += c.scale * (tv[1] * xv[0]);
            p.x += c.scale * (tv[0] * xv[1]);
            p.tt += c.scale * (tv[2] * xv[0]);
            p.tx += c.scale * (tv[1] * xv[1]);
            p.xx += c.scale * (tv[0] * xv[2]);
        }
        Ok(p)
    }

    pub fn value(&self, t: f64, x: f64) -> Result<Complex64> {
        let mut v = Complex64::new(0.0, 0.0);
        for c in &self.compiled {
            v += c.scale * (c.t[0].eval(t)? * c.x[0].eval(x)?);
        }
        Ok(v)
    }

    fn scaled(&self, k: Complex64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.scale *= k;
        }
        for c in &mut out.compiled {
            c.scale *= k;
        }
        out
    }
}

/// A point-symmetry generator `tau d_t + eta d_x (+ g psi d_psi)`.
#[derive(Debug, Clone)]
pub struct Generator {
    label: String,
    tau: Coefficient,
    eta: Coefficient,
    psi: Option<Coefficient>,
    expected: bool,
}

impl Generator {
    pub fn new(
        label: impl Into<String>,
        tau: Coefficient,
        eta: Coefficient,
        psi: Option<Coefficient>,
    ) -> Self {
        Self {
            label: label.into(),
            tau,
            eta,
            psi,
            expected: true,
        }
    }

    pub fn with_expected(mut self, expected: bool) -> Self {
        self.expected = expected;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tau(&self) -> &Coefficient {
        &self.tau
    }

    pub fn eta(&self) -> &Coefficient {
        &self.eta
    }

    /// The `psi d_psi` coefficient of a Schrödinger-equation symmetry.
    pub fn psi(&self) -> Option<&Coefficient> {
        self.psi.as_ref()
    }

    /// Whether the generator is expected to be a symmetry of its model.
    pub fn expected(&self) -> bool {
        self.expected
    }

    /// The same generator multiplied by a constant.
    pub fn scaled(&self, k: impl Into<Complex64>) -> Self {
        let k = k.into();
        Self {
            label: self.label.clone(),
            tau: self.tau.scaled(k),
            eta: self.eta.scaled(k),
            psi: self.psi.as_ref().map(|g| g.scaled(k)),
            expected: self.expected,
        }
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ci(im: f64) -> Complex64 {
    Complex64::new(0.0, im)
}

/// `Gamma_1 .. Gamma_8`, tagged valid for all eight when `A = 0` and only
/// for the first three otherwise.
pub fn standard_generators(m: &LienardModel) -> Vec<Generator> {
    use TimeFactor::{Cos, One, Sin};
    let w = m.omega();
    let harmonic = m.is_harmonic();
    let one = || SpaceFactor::monomial(0, 0);
    let xi_over_hp = || SpaceFactor::monomial(1, -1);
    let xi2_over_hp = || SpaceFactor::monomial(2, -1);
    let inv_hp = || SpaceFactor::monomial(0, -1);
    let coef = |terms: Vec<Term>| Coefficient::new(m, terms);
    let gen = |label: &str, tau: Vec<Term>, eta: Vec<Term>, valid: bool| {
        Generator::new(label, coef(tau), coef(eta), None).with_expected(valid)
    };
    vec![
        gen("Gamma1", vec![Term::new(1.0, One, one())], vec![], true),
        gen(
            "Gamma2",
            vec![Term::new(1.0, Cos(2.0 * w), one())],
            vec![Term::new(-w, Sin(2.0 * w), xi_over_hp())],
            true,
        ),
        gen(
            "Gamma3",
            vec![Term::new(1.0, Sin(2.0 * w), one())],
            vec![Term::new(w, Cos(2.0 * w), xi_over_hp())],
            true,
        ),
        gen(
            "Gamma4",
            vec![Term::new(
                1.0 / (w * w),
                Cos(w),
                SpaceFactor::monomial(1, 0),
            )],
            vec![Term::new(-1.0 / w, Sin(w), xi2_over_hp())],
            harmonic,
        ),
        gen(
            "Gamma5",
            vec![Term::new(
                1.0 / (w * w),
                Sin(w),
                SpaceFactor::monomial(1, 0),
            )],
            vec![Term::new(1.0 / w, Cos(w), xi2_over_hp())],
            harmonic,
        ),
        gen(
            "Gamma6",
            vec![],
            vec![Term::new(1.0, One, xi_over_hp())],
            harmonic,
        ),
        gen(
            "Gamma7",
            vec![],
            vec![Term::new(w * w, Sin(w), inv_hp())],
            harmonic,
        ),
        gen(
            "Gamma8",
            vec![],
            vec![Term::new(w * w, Cos(w), inv_hp())],
            harmonic,
        ),
    ]
}

/// Whether a Schrödinger symmetry is taken in its literal or corrected form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Literal,
    Corrected,
}

/// Names of the Schrödinger-equation generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PdeSymmetry {
    Xi1,
    Xi2,
    Xi3,
    Xi4,
    Xi5,
    Omega1,
    Omega2Plus,
    Omega2Minus,
    Omega3Plus,
    Omega3Minus,
}

impl PdeSymmetry {
    pub const ALL: [PdeSymmetry; 10] = [
        PdeSymmetry::Xi1,
        PdeSymmetry::Xi2,
        PdeSymmetry::Xi3,
        PdeSymmetry::Xi4,
        PdeSymmetry::Xi5,
        PdeSymmetry::Omega1,
        PdeSymmetry::Omega2Plus,
        PdeSymmetry::Omega2Minus,
        PdeSymmetry::Omega3Plus,
        PdeSymmetry::Omega3Minus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PdeSymmetry::Xi1 => "Xi1",
            PdeSymmetry::Xi2 => "Xi2",
            PdeSymmetry::Xi3 => "Xi3",
            PdeSymmetry::Xi4 => "Xi4",
            PdeSymmetry::Xi5 => "Xi5",
            PdeSymmetry::Omega1 => "Omega1",
            PdeSymmetry::Omega2Plus => "Omega2+",
            PdeSymmetry::Omega2Minus => "Omega2-",
            PdeSymmetry::Omega3Plus => "Omega3+",
            PdeSymmetry::Omega3Minus => "Omega3-",
        }
    }

    /// Whether the operator is a symmetry for every `A` or only for `A = 0`.
    pub fn needs_harmonic(self) -> bool {
        matches!(
            self,
            PdeSymmetry::Xi4
                | PdeSymmetry::Xi5
                | PdeSymmetry::Omega3Plus
                | PdeSymmetry::Omega3Minus
        )
    }

    /// The generator in the requested form. Where the literal and corrected
    /// forms coincide both return the same operator.
    pub fn generator(self, m: &LienardModel, form: Form) -> Generator {
        use TimeFactor::{Cos, Exp, One, Sin};
        let w = m.omega();
        let fixed = form == Form::Corrected;
        let coef = |terms: Vec<Term>| Coefficient::new(m, terms);
        let one = || SpaceFactor::monomial(0, 0);
        let xi = || SpaceFactor::monomial(1, 0);
        let xi2 = || SpaceFactor::monomial(2, 0);
        let xi_over_hp = || SpaceFactor::monomial(1, -1);
        let inv_hp = || SpaceFactor::monomial(0, -1);
        let label = match (self, form) {
            (
                PdeSymmetry::Xi4
                | PdeSymmetry::Xi5
                | PdeSymmetry::Omega2Plus
                | PdeSymmetry::Omega2Minus,
                Form::Literal,
            ) => {
                format!("{} (literal)", self.label())
            }
            _ => self.label().to_string(),
        };
        let (tau, eta, psi) = match self {
            PdeSymmetry::Xi1 => (vec![Term::new(1.0, One, one())], vec![], vec![]),
            PdeSymmetry::Xi2 => (
                vec![Term::new(1.0, Cos(2.0 * w), one())],
                vec![Term::new(-w, Sin(2.0 * w), xi_over_hp())],
                vec![
                    Term::new(w / 2.0, Sin(2.0 * w), one()),
                    Term::new(ci(-w * w), Cos(2.0 * w), xi2()),
                ],
            ),
            PdeSymmetry::Xi3 => (
                vec![Term::new(1.0, Sin(2.0 * w), one())],
                vec![Term::new(w, Cos(2.0 * w), xi_over_hp())],
                vec![
                    Term::new(-w / 2.0, Cos(2.0 * w), one()),
                    Term::new(ci(-w * w), Sin(2.0 * w), xi2()),
                ],
            ),
            PdeSymmetry::Xi4 => {
                let k = if fixed { w * w * w } else { w };
                (
                    vec![],
                    vec![Term::new(w * w, Sin(w), inv_hp())],
                    vec![Term::new(ci(k), Cos(w), xi())],
                )
            }
            PdeSymmetry::Xi5 => {
                let k = if fixed { w * w * w } else { w };
                (
                    vec![],
                    vec![Term::new(w * w, Cos(w), inv_hp())],
                    vec![Term::new(ci(-k), Sin(w), xi())],
                )
            }
            PdeSymmetry::Omega1 => (vec![Term::new(ci(1.0), One, one())], vec![], vec![]),
            PdeSymmetry::Omega2Plus | PdeSymmetry::Omega2Minus => {
                let sign = if self == PdeSymmetry::Omega2Plus {
                    1.0
                } else {
                    -1.0
                };
                let nu = sign * 2.0 * w;
                let eta_scale = if fixed { ci(sign * w) } else { ci(sign) };
                // -i (w^2 h^2 +- i w / 2) literal, -i (w^2 h^2 +- w / 2) corrected
                let constant = if fixed {
                    ci(-sign * w / 2.0)
                } else {
                    c(sign * w / 2.0)
                };
                (
                    vec![Term::new(1.0, Exp(nu), one())],
                    vec![Term::new(eta_scale, Exp(nu), xi_over_hp())],
                    vec![
                        Term::new(ci(-w * w), Exp(nu), xi2()),
                        Term::new(constant, Exp(nu), one()),
                    ],
                )
            }
            PdeSymmetry::Omega3Plus | PdeSymmetry::Omega3Minus => {
                let sign = if self == PdeSymmetry::Omega3Plus {
                    1.0
                } else {
                    -1.0
                };
                (
                    vec![],
                    vec![Term::new(1.0, Exp(sign * w), inv_hp())],
                    vec![Term::new(-sign * w, Exp(sign * w), xi())],
                )
            }
        };
        let psi = if psi.is_empty() {
            None
        } else {
            Some(coef(psi))
        };
        Generator::new(label, coef(tau), coef(eta), psi)
            .with_expected(m.is_harmonic() || !self.needs_harmonic())
    }
}
