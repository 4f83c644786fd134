use num_complex::Complex64;

use super::state::StationaryState;
use crate::error::{Error, Result};
use crate::model::LienardModel;

/// `(alpha, beta, gamma)` with `alpha = gamma - 1/4`, `beta = -1/2` and
/// `alpha + beta + gamma = -1`.
pub const COMPLIANT: (f64, f64, f64) = (-0.375, -0.5, -0.125);

/// Potential of the ordered equation in `xi = int exp(int f) = h`:
/// `xi^2 / 2` at `w = 1`, `xi^2 / 8 + (mu^2 - 1/4) / (2 xi^2)` with
/// `mu = k / 2` at `w = 1/2`.
pub fn vonroos_potential(m: &LienardModel, xi: f64) -> f64 {
    if m.is_harmonic() {
        0.5 * xi * xi
    } else {
        let mu = 0.5 * m.k();
        xi * xi / 8.0 + 0.5 * (0.75 - (1.0 + mu) * (1.0 - mu)) / (xi * xi)
    }
}

/// Residual of
/// `2i phi_t + (1/h'^2) {phi_xx - 2 f phi_x + [(b+1)(2f^2 - f') + 4a(a+b+1) f^2] phi} - 2 V phi`
/// on `phi = sqrt(h') psi`, `f = h''/h'`, normalised as in
/// [`pde_residual`](super::pde_residual).
#[allow(clippy::too_many_arguments)]
pub fn vonroos_residual(
    m: &LienardModel,
    st: &StationaryState,
    alpha: f64,
    beta: f64,
    gamma: f64,
    t: f64,
    x: f64,
) -> Result<f64> {
    let sum = alpha + beta + gamma;
    if (sum + 1.0).abs() > 1e-12 {
        return Err(Error::ParameterSum(sum));
    }
    let w_needed = if m.is_harmonic() { 1.0 } else { 0.5 };
    if (m.omega() - w_needed).abs() > 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "the ordered equation is stated for w = {w_needed}, got {}",
            m.omega()
        )));
    }
    let j = m.jet(x)?;
    if !m.is_harmonic() && j.h <= 0.0 {
        return Err(Error::Singular { x });
    }
    let q = st.spatial();
    let d1 = q.derivative();
    let d2 = d1.derivative();
    let (p0, p1, p2) = (q.eval(j.h)?, d1.eval(j.h)?, d2.eval(j.h)?);
    let phase = Complex64::from_polar(1.0, -st.energy() * t);
    let psi = phase * p0;
    let psi_x = phase * (j.hp * p1);
    let psi_xx = phase * (j.hpp * p1 + j.hp * j.hp * p2);
    let r = j.hp.sqrt();
    let r_x = j.hpp / (2.0 * r);
    let r_xx = j.hppp / (2.0 * r) - j.hpp * j.hpp / (4.0 * j.hp * r);
    let phi = psi * r;
    let phi_t = Complex64::new(0.0, -st.energy()) * phi;
    let phi_x = psi * r_x + psi_x * r;
    let phi_xx = psi * r_xx + psi_x * (2.0 * r_x) + psi_xx * r;
    let f = j.hpp / j.hp;
    let f_x = j.hppp / j.hp - f * f;
    let bracket = (beta + 1.0) * (2.0 * f * f - f_x) + 4.0 * alpha * (alpha + beta + 1.0) * f * f;
    let v = vonroos_potential(m, j.h);
    let total = Complex64::new(0.0, 2.0) * phi_t
        + (phi_xx - phi_x * (2.0 * f) + phi * bracket) / (j.hp * j.hp)
        - phi * (2.0 * v);
    Ok(total.norm() / (1.0 + phi.norm() * (1.0 + st.energy())))
}
