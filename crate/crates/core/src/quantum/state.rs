use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::LienardModel;
use crate::polyspec::{hermite_coeffs, inner_product, laguerre_coeffs, QuasiPolynomial};

/// `re + i im`, two quasi-polynomials sharing `w` and exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexQuasi {
    pub re: QuasiPolynomial,
    pub im: QuasiPolynomial,
}

impl ComplexQuasi {
    pub fn real(q: QuasiPolynomial) -> Self {
        let im = QuasiPolynomial::new(q.omega(), q.exponent(), vec![]);
        Self { re: q, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.re.max_abs_coeff().max(self.im.max_abs_coeff())
    }

    pub fn eval(&self, xi: f64) -> Result<Complex64> {
        let re = if self.re.is_zero() {
            0.0
        } else {
            self.re.eval(xi)?
        };
        let im = if self.im.is_zero() {
            0.0
        } else {
            self.im.eval(xi)?
        };
        Ok(Complex64::new(re, im))
    }

    pub fn derivative(&self) -> Self {
        Self {
            re: self.re.derivative(),
            im: self.im.derivative(),
        }
    }

    /// `c * p(xi) * self`.
    pub fn times(&self, c: Complex64, p: &[f64]) -> Result<Self> {
        let re = self.re.mul_poly(p);
        let im = self.im.mul_poly(p);
        Ok(Self {
            re: re.scale(c.re).sub(&im.scale(c.im))?,
            im: re.scale(c.im).add(&im.scale(c.re))?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            re: self.re.add(&other.re)?,
            im: self.im.add(&other.im)?,
        })
    }

    pub fn chop(&self, tol: f64) -> Self {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return self.clone();
        }
        let rel = tol / scale;
        Self {
            re: self.re.chop(rel),
            im: self.im.chop(rel),
        }
    }

    /// The real profile `Y` with `self = c Y`, taking `c` as the largest
    /// complex coefficient. Fails if `self` is not a complex multiple of a
    /// real function.
    pub fn strip_phase(&self, exponent: f64) -> Result<QuasiPolynomial> {
        let re = self.re.rebase(exponent)?;
        let im = self.im.rebase(exponent)?;
        let n = re.coeffs().len().max(im.coeffs().len());
        let coeff = |j: usize| {
            Complex64::new(
                re.coeffs().get(j).copied().unwrap_or(0.0),
                im.coeffs().get(j).copied().unwrap_or(0.0),
            )
        };
        let pivot = (0..n)
            .map(coeff)
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .ok_or_else(|| Error::Annihilated("zero profile".into()))?;
        let scaled: Vec<Complex64> = (0..n).map(|j| coeff(j) / pivot).collect();
        let worst = scaled.iter().fold(0.0f64, |a, c| a.max(c.im.abs()));
        if worst > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "profile is not a complex multiple of a real function (imaginary part {worst:e})"
            )));
        }
        Ok(QuasiPolynomial::new(
            re.omega(),
            exponent,
            scaled.iter().map(|c| c.re).collect(),
        ))
    }
}

/// `psi(t, x) = exp(-i E t) spatial(h(x))`.
#[derive(Debug, Clone)]
pub struct StationaryState {
    energy: f64,
    spatial: QuasiPolynomial,
    n: usize,
    model: LienardModel,
}

impl StationaryState {
    pub fn new(model: &LienardModel, n: usize, energy: f64, spatial: QuasiPolynomial) -> Self {
        Self {
            energy,
            spatial,
            n,
            model: model.clone(),
        }
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn spatial(&self) -> &QuasiPolynomial {
        &self.spatial
    }

    /// Quantum number.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> &LienardModel {
        &self.model
    }

    /// `psi(t, x)`.
    pub fn value(&self, t: f64, x: f64) -> Result<Complex64> {
        let xi = self.model.to_isotonic(x)?;
        Ok(Complex64::from_polar(1.0, -self.energy * t) * self.spatial.eval(xi)?)
    }
}

/// `w (n + 1/2)` for `A = 0`, `2w (n + 1/2 + k/4)` otherwise.
pub fn closed_form_eigenvalue(m: &LienardModel, n: usize) -> f64 {
    let n = n as f64;
    if m.is_harmonic() {
        m.omega() * (n + 0.5)
    } else {
        2.0 * m.omega() * (n + 0.5 + 0.25 * m.k())
    }
}

/// Energy spacing of the closed-form spectrum.
pub fn level_gap(m: &LienardModel) -> f64 {
    if m.is_harmonic() {
        m.omega()
    } else {
        2.0 * m.omega()
    }
}

/// Exponent `s` of the closed-form states: `0` or `(k + 1) / 2`.
pub fn state_exponent(m: &LienardModel) -> f64 {
    if m.is_harmonic() {
        0.0
    } else {
        0.5 * (m.k() + 1.0)
    }
}

/// Unit norm under [`inner_product`] and a positive leading coefficient,
/// which makes the outermost lobe (beyond the last node) positive.
pub fn normalize(m: &LienardModel, q: &QuasiPolynomial) -> Result<QuasiPolynomial> {
    let norm2 = inner_product(m, q, q)?;
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "state has non-positive norm {norm2}"
        )));
    }
    let lead = q.coeffs().last().copied().unwrap_or(1.0);
    Ok(q.scale(lead.signum() / norm2.sqrt()))
}

/// Hermite (`A = 0`) or associated Laguerre (`A != 0`) eigenfunction.
pub fn closed_form_eigenfunction(m: &LienardModel, n: usize) -> Result<StationaryState> {
    let w = m.omega();
    let q = if m.is_harmonic() {
        let sw = w.sqrt();
        let coeffs = hermite_coeffs(n)
            .iter()
            .enumerate()
            .map(|(j, c)| c * sw.powi(j as i32))
            .collect();
        QuasiPolynomial::new(w, 0.0, coeffs)
    } else {
        let lag = laguerre_coeffs(n, 0.5 * m.k());
        let mut coeffs = vec![0.0; 2 * lag.len() - 1];
        for (j, c) in lag.iter().enumerate() {
            coeffs[2 * j] = c * w.powi(j as i32);
        }
        QuasiPolynomial::new(w, state_exponent(m), coeffs)
    };
    Ok(StationaryState::new(
        m,
        n,
        closed_form_eigenvalue(m, n),
        normalize(m, &q)?,
    ))
}

/// `<a, b> / sqrt(<a, a> <b, b>)`.
pub fn overlap(m: &LienardModel, a: &QuasiPolynomial, b: &QuasiPolynomial) -> Result<f64> {
    let ab = inner_product(m, a, b)?;
    let aa = inner_product(m, a, a)?;
    let bb = inner_product(m, b, b)?;
    Ok(ab / (aa * bb).sqrt())
}

/// One stationary component `exp(-i E t) X(h(x))` of a solution.
#[derive(Debug, Clone)]
pub struct Component {
    pub energy: f64,
    pub spatial: ComplexQuasi,
}

/// Finite sum of stationary components.
#[derive(Debug, Clone, Default)]
pub struct Superposition {
    pub components: Vec<Component>,
}

impl Superposition {
    pub fn stationary(st: &StationaryState) -> Self {
        Self {
            components: vec![Component {
                energy: st.energy(),
                spatial: ComplexQuasi::real(st.spatial().clone()),
            }],
        }
    }

    /// Adds a component, merging equal energies.
    pub fn push(&mut self, energy: f64, spatial: ComplexQuasi) -> Result<()> {
        for c in &mut self.components {
            if (c.energy - energy).abs() <= 1e-12 * (1.0 + energy.abs()) {
                c.spatial = c.spatial.add(&spatial)?;
                return Ok(());
            }
        }
        self.components.push(Component { energy, spatial });
        Ok(())
    }

    pub fn value(&self, m: &LienardModel, t: f64, x: f64) -> Result<Complex64> {
        let xi = m.to_isotonic(x)?;
        let mut total = Complex64::new(0.0, 0.0);
        for c in &self.components {
            total += Complex64::from_polar(1.0, -c.energy * t) * c.spatial.eval(xi)?;
        }
        Ok(total)
    }
}

/// Normalised Schrödinger residual of a superposition at `(t, x)`.
pub fn superposition_residual(m: &LienardModel, s: &Superposition, t: f64, x: f64) -> Result<f64> {
    let j = m.jet(x)?;
    if !m.is_harmonic() && j.h == 0.0 {
        return Err(Error::Singular { x });
    }
    let xi = j.h;
    let mut total = Complex64::new(0.0, 0.0);
    let mut size = 0.0f64;
    let mut e_max = 0.0f64;
    for c in &s.components {
        let phase = Complex64::from_polar(1.0, -c.energy * t);
        let d1 = c.spatial.derivative();
        let d2 = d1.derivative();
        let psi = phase * c.spatial.eval(xi)?;
        let psi_t = Complex64::new(0.0, -c.energy) * psi;
        let psi_x = phase * d1.eval(xi)? * j.hp;
        let psi_xx = phase * (d2.eval(xi)? * (j.hp * j.hp) + d1.eval(xi)? * j.hpp);
        let mut pot = -m.omega() * m.omega() * xi * xi;
        if !m.is_harmonic() {
            pot += m.coupling() / (xi * xi);
        }
        total += Complex64::new(0.0, 2.0) * psi_t + psi_xx / (j.hp * j.hp)
            - psi_x * (j.hpp / j.hp.powi(3))
            + psi * pot;
        size += psi.norm();
        e_max = e_max.max(c.energy.abs());
    }
    Ok(total.norm() / (1.0 + size * (1.0 + e_max)))
}

/// `|2i psi_t + psi_xx/h'^2 - h'' psi_x/h'^3 + (A/h^2 - w^2 h^2) psi|`
/// over `1 + |psi| (1 + E)`.
pub fn pde_residual(m: &LienardModel, st: &StationaryState, t: f64, x: f64) -> Result<f64> {
    superposition_residual(m, &Superposition::stationary(st), t, x)
}
