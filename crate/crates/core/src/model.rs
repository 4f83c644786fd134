//! The quadratic Liénard family
//!
//! ```text
//! x'' + (h''/h') x'^2 + w^2 h/h' + A/(h' h^3) = 0
//! ```
//!
//! built from a user-supplied increasing function `h(x)`. The point
//! transformation `xi = h(x)` maps it onto the isotonic oscillator
//! `xi'' + w^2 xi + A/xi^3 = 0` (harmonic when `A = 0`).

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};

/// Number of uniform samples used to validate monotonicity and positivity.
pub const VALIDATION_SAMPLES: usize = 1001;

/// Gaussian tail exponent `w xi*^2 / 2` the xi-image must reach on both
/// sides in the harmonic case before spectra are compared.
pub const COVERAGE_EXPONENT: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// `h` and its first three derivatives at one point.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub h: f64,
    pub hp: f64,
    pub hpp: f64,
    pub hppp: f64,
}

/// A validated member of the family.
#[derive(Debug, Clone)]
pub struct LienardModel {
    h: Expr,
    hp: Expr,
    hpp: Expr,
    hppp: Expr,
    omega: f64,
    coupling: f64,
    domain: Interval,
    image: Interval,
    h_abs_max: f64,
}

impl LienardModel {
    /// Parse `h_text` (variable `x`) and validate the model.
    pub fn build(h_text: &str, omega: f64, coupling: f64, domain: Interval) -> Result<Self> {
        let h = parse(h_text, "x")?;
        Self::from_expr(h, omega, coupling, domain)
    }

    pub fn from_expr(h: Expr, omega: f64, coupling: f64, domain: Interval) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        if !coupling.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "A must be finite, got {coupling}"
            )));
        }
        if !(domain.lo.is_finite() && domain.hi.is_finite() && domain.lo < domain.hi) {
            return Err(Error::InvalidParameter(format!(
                "domain ({}, {}) is empty or unbounded",
                domain.lo, domain.hi
            )));
        }
        if coupling >= 0.25 {
            return Err(Error::CouplingTooLarge(coupling));
        }
        let h = h.simplify();
        let hp = h.derivative(1);
        let hpp = hp.derivative(1);
        let hppp = hpp.derivative(1);

        let mut h_abs_max: f64 = 0.0;
        let n = VALIDATION_SAMPLES;
        for i in 0..n {
            let x = domain.lo + domain.width() * i as f64 / (n - 1) as f64;
            let value = hp.eval(x)?;
            if value <= 0.0 {
                return Err(Error::NotIncreasing { x, value });
            }
            let hx = h.eval(x)?;
            if coupling != 0.0 && hx <= 0.0 {
                return Err(Error::NonPositiveImage { x, value: hx });
            }
            h_abs_max = h_abs_max.max(hx.abs());
        }
        let image = Interval::new(h.eval(domain.lo)?, h.eval(domain.hi)?);
        Ok(Self {
            h,
            hp,
            hpp,
            hppp,
            omega,
            coupling,
            domain,
            image,
            h_abs_max,
        })
    }

    pub fn h(&self) -> &Expr {
        &self.h
    }

    pub fn h_prime(&self) -> &Expr {
        &self.hp
    }

    pub fn h_second(&self) -> &Expr {
        &self.hpp
    }

    pub fn h_third(&self) -> &Expr {
        &self.hppp
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The inverse-square coupling `A`.
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// `k = sqrt(1 - 4A)`.
    pub fn k(&self) -> f64 {
        (1.0 - 4.0 * self.coupling).sqrt()
    }

    pub fn is_harmonic(&self) -> bool {
        self.coupling == 0.0
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// `h(domain)`, the range of the isotonic coordinate.
    pub fn xi_range(&self) -> Interval {
        self.image
    }

    /// Largest `|h|` over the validation samples.
    pub fn h_abs_max(&self) -> f64 {
        self.h_abs_max
    }

    /// Half-width `xi*` with `w xi*^2 / 2 = 40`.
    pub fn xi_star(&self) -> f64 {
        (2.0 * COVERAGE_EXPONENT / self.omega).sqrt()
    }

    /// Whether `h` maps the domain over `[-xi*, xi*]`.
    pub fn covers_full_line(&self) -> bool {
        let s = self.xi_star();
        self.image.lo <= -s && self.image.hi >= s
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                x,
                xmin: self.domain.lo,
                xmax: self.domain.hi,
            })
        }
    }

    /// `h`, `h'`, `h''`, `h'''` at `x`.
    pub fn jet(&self, x: f64) -> Result<Jet> {
        self.check_domain(x)?;
        Ok(Jet {
            h: self.h.eval(x)?,
            hp: self.hp.eval(x)?,
            hpp: self.hpp.eval(x)?,
            hppp: self.hppp.eval(x)?,
        })
    }

    fn regular_jet(&self, x: f64) -> Result<Jet> {
        let j = self.jet(x)?;
        if self.coupling != 0.0 && j.h == 0.0 {
            return Err(Error::Singular { x });
        }
        Ok(j)
    }

    /// Acceleration `x'' = F(x, v)`.
    pub fn ode_rhs(&self, x: f64, v: f64) -> Result<f64> {
        Ok(self.rhs_partials(x, v)?.0)
    }

    /// `(F, dF/dx, dF/dv)` from exact derivatives of `h`.
    pub fn rhs_partials(&self, x: f64, v: f64) -> Result<(f64, f64, f64)> {
        let j = self.regular_jet(x)?;
        let w2 = self.omega * self.omega;
        let a = self.coupling;
        let p = j.hpp / j.hp;
        let dp = j.hppp / j.hp - p * p;
        let mut q = w2 * j.h / j.hp;
        let mut dq = w2 * (1.0 - j.h * j.hpp / (j.hp * j.hp));
        if a != 0.0 {
            let h3 = j.h.powi(3);
            q += a / (j.hp * h3);
            dq -= a * (j.hpp / (j.hp * j.hp * h3) + 3.0 / j.h.powi(4));
        }
        let f = -p * v * v - q;
        let fx = -dp * v * v - dq;
        let fv = -2.0 * p * v;
        Ok((f, fx, fv))
    }

    /// `L = h'^2 v^2 / 2 + A / (2 h^2) - w^2 h^2 / 2`.
    pub fn lagrangian(&self, x: f64, v: f64) -> Result<f64> {
        Ok(self.lagrangian_partials(x, v)?.0)
    }

    /// `(L, dL/dx, dL/dv)`; the Lagrangian has no explicit time dependence.
    pub fn lagrangian_partials(&self, x: f64, v: f64) -> Result<(f64, f64, f64)> {
        let j = self.regular_jet(x)?;
        let w2 = self.omega * self.omega;
        let a = self.coupling;
        let mut l = 0.5 * j.hp * j.hp * v * v - 0.5 * w2 * j.h * j.h;
        let mut lx = j.hp * j.hpp * v * v - w2 * j.h * j.hp;
        if a != 0.0 {
            l += a / (2.0 * j.h * j.h);
            lx -= a * j.hp / j.h.powi(3);
        }
        Ok((l, lx, j.hp * j.hp * v))
    }

    /// `V = (w^2 h^2 - A/h^2) / 2`.
    pub fn potential(&self, x: f64) -> Result<f64> {
        let j = self.regular_jet(x)?;
        Ok(self.potential_of_xi(j.h))
    }

    /// `V` as a function of `xi = h`.
    pub fn potential_of_xi(&self, xi: f64) -> f64 {
        let mut v = 0.5 * self.omega * self.omega * xi * xi;
        if self.coupling != 0.0 {
            v -= 0.5 * self.coupling / (xi * xi);
        }
        v
    }

    /// Conserved energy `h'^2 v^2 / 2 + V(x)`.
    pub fn energy(&self, x: f64, v: f64) -> Result<f64> {
        let j = self.regular_jet(x)?;
        Ok(0.5 * j.hp * j.hp * v * v + self.potential_of_xi(j.h))
    }

    /// Minimum of the potential over the xi-line (`0` or `w sqrt(-A)`).
    pub fn potential_minimum(&self) -> f64 {
        if self.coupling < 0.0 {
            self.omega * (-self.coupling).sqrt()
        } else {
            0.0
        }
    }

    /// Jacobi last multiplier `M = exp(2 int h''/h') = h'^2`.
    pub fn jacobi_last_multiplier(&self, x: f64) -> Result<f64> {
        let hp = self.jet(x)?.hp;
        Ok(hp * hp)
    }

    /// `xi = h(x)`.
    pub fn to_isotonic(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.h.eval(x)?)
    }

    /// Inverse of [`to_isotonic`](Self::to_isotonic) by bisection on the
    /// increasing `h`. Errors if `xi` is outside `h(domain)`.
    pub fn from_isotonic(&self, xi: f64) -> Result<f64> {
        if !self.image.contains(xi) {
            return Err(Error::InvalidParameter(format!(
                "xi = {xi} lies outside h(domain) = [{}, {}]",
                self.image.lo, self.image.hi
            )));
        }
        let (mut lo, mut hi) = (self.domain.lo, self.domain.hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.h.eval(mid)? < xi {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Lcg64;

    fn cubic() -> LienardModel {
        LienardModel::build("x + x^3/3", 1.0, 0.0, Interval::new(-4.0, 4.0)).unwrap()
    }

    fn isotonic() -> LienardModel {
        LienardModel::build("x", 1.0, -2.0, Interval::new(0.1, 8.0)).unwrap()
    }

    #[test]
    fn build_examples() {
        assert!(LienardModel::build("x", 1.0, 0.0, Interval::new(-8.0, 8.0)).is_ok());
        assert!(LienardModel::build("x + x^3/3", 1.0, 0.0, Interval::new(-4.0, 4.0)).is_ok());
        assert_eq!(
            LienardModel::build("x", 1.0, 0.5, Interval::new(0.1, 8.0)).unwrap_err(),
            Error::CouplingTooLarge(0.5)
        );
    }

    #[test]
    fn build_rejects_bad_inputs() {
        let d = Interval::new(-1.0, 1.0);
        assert!(matches!(
            LienardModel::build("x^2", 1.0, 0.0, d),
            Err(Error::NotIncreasing { .. })
        ));
        assert!(matches!(
            LienardModel::build("-x", 1.0, 0.0, d),
            Err(Error::NotIncreasing { .. })
        ));
        assert!(matches!(
            LienardModel::build("x", 1.0, -1.0, d),
            Err(Error::NonPositiveImage { .. })
        ));
        assert!(matches!(
            LienardModel::build("x", 0.0, 0.0, d),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            LienardModel::build("x", 1.0, 0.0, Interval::new(1.0, 1.0)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            LienardModel::build("x +", 1.0, 0.0, d),
            Err(Error::Expr(_))
        ));
        assert!(matches!(
            LienardModel::build("x", 1.0, 0.25, Interval::new(0.1, 1.0)),
            Err(Error::CouplingTooLarge(_))
        ));
    }

    #[test]
    fn ode_rhs_examples() {
        let ho = LienardModel::build("x", 1.0, 0.0, Interval::new(-8.0, 8.0)).unwrap();
        assert!((ho.ode_rhs(0.3, 7.0).unwrap() + 0.3).abs() < 1e-15);
        assert!((isotonic().ode_rhs(1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let sinh = LienardModel::build("sinh(x)", 1.0, 0.0, Interval::new(-3.0, 3.0)).unwrap();
        assert_eq!(sinh.ode_rhs(0.0, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn lagrangian_examples() {
        let ho = LienardModel::build("x", 1.0, 0.0, Interval::new(-8.0, 8.0)).unwrap();
        assert!((ho.lagrangian(1.0, 0.0).unwrap() + 0.5).abs() < 1e-15);
        assert!((isotonic().lagrangian(1.0, 2.0).unwrap() - 0.5).abs() < 1e-15);
        // (2^2)/2 - (4/3)^2/2
        let want = 2.0 - 8.0 / 9.0;
        assert!((cubic().lagrangian(1.0, 1.0).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn potential_energy_multiplier_examples() {
        let ho = LienardModel::build("x", 1.0, 0.0, Interval::new(-8.0, 8.0)).unwrap();
        assert_eq!(ho.potential(2.0).unwrap(), 2.0);
        assert!((isotonic().potential(1.0).unwrap() - 1.5).abs() < 1e-15);
        let exp = LienardModel::build("exp(x)", 1.0, -2.0, Interval::new(-9.0, 2.5)).unwrap();
        assert!((exp.potential(0.0).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(ho.energy(1.0, 0.0).unwrap(), 0.5);
        assert!((isotonic().energy(1.0, 0.0).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(ho.jacobi_last_multiplier(0.7).unwrap(), 1.0);
        assert!((cubic().jacobi_last_multiplier(1.0).unwrap() - 4.0).abs() < 1e-14);
    }

    #[test]
    fn isotonic_map_examples() {
        let ho = LienardModel::build("x", 1.0, 0.0, Interval::new(-8.0, 8.0)).unwrap();
        assert_eq!(ho.to_isotonic(0.7).unwrap(), 0.7);
        let exp = LienardModel::build("exp(x)", 1.0, 0.0, Interval::new(-3.0, 3.0)).unwrap();
        assert_eq!(exp.to_isotonic(0.0).unwrap(), 1.0);
        assert!((cubic().to_isotonic(1.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let x = cubic().from_isotonic(4.0 / 3.0).unwrap();
        assert!((x - 1.0).abs() < 1e-13);
        assert!(cubic().to_isotonic(5.0).is_err());
    }

    #[test]
    fn singular_point_rejected() {
        let m = LienardModel::build("x", 1.0, -2.0, Interval::new(0.0, 2.0));
        // h(0) = 0 is caught by positivity validation.
        assert!(matches!(m, Err(Error::NonPositiveImage { .. })));
    }

    #[test]
    fn rhs_partials_match_finite_differences() {
        let m = LienardModel::build("exp(x)", 1.3, -2.0, Interval::new(-2.0, 2.0)).unwrap();
        let (x, v, d) = (0.4, -0.7, 1e-6);
        let (_, fx, fv) = m.rhs_partials(x, v).unwrap();
        let fdx = (m.ode_rhs(x + d, v).unwrap() - m.ode_rhs(x - d, v).unwrap()) / (2.0 * d);
        let fdv = (m.ode_rhs(x, v + d).unwrap() - m.ode_rhs(x, v - d).unwrap()) / (2.0 * d);
        assert!((fx - fdx).abs() < 1e-6 * (1.0 + fx.abs()));
        assert!((fv - fdv).abs() < 1e-6 * (1.0 + fv.abs()));
    }

    // d/dt(dL/dv) - dL/dx along x'' = F, with the chain rule expanded by
    // hand from the exact h derivatives.
    fn euler_lagrange_residual(m: &LienardModel, x: f64, v: f64) -> (f64, f64) {
        let j = m.jet(x).unwrap();
        let a = m.ode_rhs(x, v).unwrap();
        let (_, lx, _) = m.lagrangian_partials(x, v).unwrap();
        let ddt_lv = 2.0 * j.hp * j.hpp * v * v + j.hp * j.hp * a;
        (ddt_lv - lx, lx)
    }

    #[test]
    fn euler_lagrange_consistency() {
        let mut rng = Lcg64::default();
        for m in [cubic(), isotonic()] {
            let d = m.domain();
            for _ in 0..100 {
                let x = rng.uniform(d.lo, d.hi);
                let v = rng.uniform(-2.0, 2.0);
                let (res, lx) = euler_lagrange_residual(&m, x, v);
                assert!(
                    res.abs() <= 1e-9 * (1.0 + lx.abs()),
                    "x={x} v={v} res={res}"
                );
            }
        }
    }

    #[test]
    fn maps_onto_isotonic_oscillator() {
        let mut rng = Lcg64::new(7);
        let exp = LienardModel::build("exp(x)", 1.5, -2.0, Interval::new(-2.0, 2.0)).unwrap();
        for m in [cubic(), isotonic(), exp] {
            let d = m.domain();
            for _ in 0..100 {
                let x = rng.uniform(d.lo, d.hi);
                let v = rng.uniform(-2.0, 2.0);
                let j = m.jet(x).unwrap();
                let a = m.ode_rhs(x, v).unwrap();
                let xi = j.h;
                let xidd = j.hpp * v * v + j.hp * a;
                let w = m.omega();
                let mut res = xidd + w * w * xi;
                if m.coupling() != 0.0 {
                    res += m.coupling() / xi.powi(3);
                }
                assert!(res.abs() <= 1e-9, "x={x} v={v} res={res}");
            }
        }
    }

    #[test]
    fn coverage_rule() {
        assert!(cubic().covers_full_line());
        let ho = LienardModel::build("x", 1.0, 0.0, Interval::new(-8.0, 8.0)).unwrap();
        assert!(!ho.covers_full_line());
        let ho = LienardModel::build("x", 1.0, 0.0, Interval::new(-9.0, 9.0)).unwrap();
        assert!(ho.covers_full_line());
    }
}
