use crate::error::{Error, Result};

/// `xi -> p(xi) * xi^s * exp(-w xi^2 / 2)` with `p` stored in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiPolynomial {
    omega: f64,
    s: f64,
    coeffs: Vec<f64>,
}

fn is_integer(s: f64) -> bool {
    s.fract() == 0.0
}

impl QuasiPolynomial {
    /// Trailing zero coefficients are trimmed, so the empty list is zero.
    pub fn new(omega: f64, s: f64, coeffs: Vec<f64>) -> Self {
        assert!(omega > 0.0 && omega.is_finite(), "omega must be positive");
        assert!(s.is_finite(), "exponent must be finite");
        let mut q = Self { omega, s, coeffs };
        q.trim();
        q
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// The exponent `s`.
    pub fn exponent(&self) -> f64 {
        self.s
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `p(xi)` alone.
    pub fn poly_at(&self, xi: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * xi + c)
    }

    /// Pointwise value. A non-integer exponent needs `xi > 0`.
    pub fn eval(&self, xi: f64) -> Result<f64> {
        let p = self.poly_at(xi);
        let g = -0.5 * self.omega * xi * xi;
        let value = if self.s == 0.0 {
            p * g.exp()
        } else if is_integer(self.s) && self.s.abs() < i32::MAX as f64 {
            p * xi.powi(self.s as i32) * g.exp()
        } else if xi > 0.0 {
            p * (self.s * xi.ln() + g).exp()
        } else {
            return Err(Error::InvalidParameter(format!(
                "xi^{} needs xi > 0, got xi = {xi}",
                self.s
            )));
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::InvalidParameter(format!(
                "quasi-polynomial is not finite at xi = {xi}"
            )))
        }
    }

    /// `sum |c_i| |xi|^(i+s) exp(-w xi^2/2)`, an upper bound for `|self(xi)|`.
    pub fn envelope(&self, xi: f64) -> f64 {
        let a = xi.abs();
        let p: f64 = self
            .coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * a + c.abs());
        if self.s == 0.0 {
            p * (-0.5 * self.omega * a * a).exp()
        } else {
            p * (self.s * a.ln() - 0.5 * self.omega * a * a).exp()
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(
            self.omega,
            self.s,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Multiply by `xi^k`, shifting coefficients and keeping `s`.
    pub fn mul_xi(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0.0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(self.omega, self.s, coeffs)
    }

    /// Multiply by the plain polynomial `sum p_j xi^j`.
    pub fn mul_poly(&self, p: &[f64]) -> Self {
        if self.is_zero() || p.is_empty() {
            return Self::new(self.omega, self.s, vec![]);
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + p.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in p.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(self.omega, self.s, coeffs)
    }

    /// `d/dxi`.
    ///
    /// `(p xi^s)' = (p' xi + s p - w xi^2 p) xi^(s-1)`; for `s = 0` the factor
    /// `xi` cancels and the exponent stays at zero.
    pub fn derivative(&self) -> Self {
        let w = self.omega;
        let n = self.coeffs.len();
        if self.s == 0.0 {
            // p' - w xi p
            let mut out = vec![0.0; n + 1];
            for (j, c) in self.coeffs.iter().enumerate() {
                if j > 0 {
                    out[j - 1] += j as f64 * c;
                }
                out[j + 1] -= w * c;
            }
            return Self::new(w, 0.0, out);
        }
        let mut out = vec![0.0; n + 2];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j] += (j as f64 + self.s) * c;
            out[j + 2] -= w * c;
        }
        Self::new(w, self.s - 1.0, out)
    }

    /// Rewrite with exponent `target`, moving integer powers between `xi^s`
    /// and `p`. Fails if `s - target` is not an integer or if lowering would
    /// need nonzero low-order coefficients.
    pub fn rebase(&self, target: f64) -> Result<Self> {
        let shift = self.s - target;
        if !is_integer(shift) {
            return Err(Error::InvalidParameter(format!(
                "cannot rebase exponent {} onto {target}",
                self.s
            )));
        }
        if self.is_zero() {
            return Ok(Self::new(self.omega, target, vec![]));
        }
        if shift >= 0.0 {
            let mut q = self.mul_xi(shift as usize);
            q.s = target;
            return Ok(q);
        }
        let drop = (-shift) as usize;
        let tol = 1e-13 * self.max_abs_coeff();
        if self.coeffs.iter().take(drop).any(|c| c.abs() > tol) {
            return Err(Error::InvalidParameter(format!(
                "cannot lower exponent {} to {target}: low-order terms are nonzero",
                self.s
            )));
        }
        let coeffs = self.coeffs.iter().skip(drop).copied().collect();
        Ok(Self::new(self.omega, target, coeffs))
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        if (self.omega - other.omega).abs() > 1e-15 * self.omega {
            return Err(Error::InvalidParameter(format!(
                "Gaussian widths differ: {} vs {}",
                self.omega, other.omega
            )));
        }
        let s = if self.is_zero() {
            other.s
        } else if other.is_zero() {
            self.s
        } else {
            self.s.min(other.s)
        };
        Ok((self.rebase(s)?, other.rebase(s)?))
    }

    /// Sum of two quasi-polynomials with the same `w` and exponents
    /// differing by an integer.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let n = a.coeffs.len().max(b.coeffs.len());
        let coeffs = (0..n)
            .map(|i| a.coeffs.get(i).unwrap_or(&0.0) + b.coeffs.get(i).unwrap_or(&0.0))
            .collect();
        Ok(Self::new(a.omega, a.s, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Pointwise product: exponents and Gaussian widths add.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(self.omega + other.omega, self.s + other.s, vec![]);
        }
        let mut coeffs = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(self.omega + other.omega, self.s + other.s, coeffs)
    }

    /// Drop coefficients below `rel * max|c|`.
    pub fn chop(&self, rel: f64) -> Self {
        let tol = rel * self.max_abs_coeff();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| if c.abs() <= tol { 0.0 } else { c })
            .collect();
        Self::new(self.omega, self.s, coeffs)
    }
}
