use num_complex::Complex64;

use super::state::{
    closed_form_eigenfunction, level_gap, normalize, pde_residual, state_exponent,
    superposition_residual, ComplexQuasi, StationaryState, Superposition,
};
use crate::error::{Error, Result};
use crate::model::LienardModel;
use crate::rng::DEFAULT_SEED;
use crate::symmetry::{sample_points, Coefficient, Form, Generator, PdeSymmetry, TimeFactor};

/// Residual accepted for solutions of the Schrödinger equation.
pub const PDE_TOLERANCE: f64 = 1e-8;
/// Coefficients below this fraction of the largest contribution count as zero.
pub const ZERO_TOLERANCE: f64 = 1e-13;
/// Largest ladder index accepted by [`ladder_generate`].
pub const MAX_LADDER: usize = 30;
const CHECK_POINTS: usize = 20;
const SOUNDNESS_STATES: usize = 4;

// (weight, energy shift) of T(t) exp(-i E t) = sum w exp(-i (E + shift) t)
fn time_split(tf: TimeFactor) -> Vec<(Complex64, f64)> {
    let half = Complex64::new(0.5, 0.0);
    match tf {
        TimeFactor::One => vec![(Complex64::new(1.0, 0.0), 0.0)],
        TimeFactor::Exp(nu) => vec![(Complex64::new(1.0, 0.0), -nu)],
        TimeFactor::Cos(nu) => vec![(half, -nu), (half, nu)],
        TimeFactor::Sin(nu) => vec![
            (Complex64::new(0.0, -0.5), -nu),
            (Complex64::new(0.0, 0.5), nu),
        ],
    }
}

fn ladder_form(label: &str, c: &Coefficient, hp_pow: i32) -> Result<()> {
    if c.terms().iter().all(|t| t.space.hp_pow == hp_pow) {
        Ok(())
    } else {
        Err(Error::InvalidGenerator {
            label: label.to_string(),
            reason: format!("coefficient is not of the form p(h) h'^{hp_pow}"),
        })
    }
}

/// `Q = g psi - tau psi_t - eta psi_x` applied to a superposition, exactly.
///
/// Needs `tau` and `g` polynomial in `h` and `eta` of the form `p(h) / h'`.
pub fn characteristic(g: &Generator, s: &Superposition) -> Result<Superposition> {
    ladder_form(g.label(), g.tau(), 0)?;
    ladder_form(g.label(), g.eta(), -1)?;
    if let Some(psi) = g.psi() {
        ladder_form(g.label(), psi, 0)?;
    }
    let mut out = Superposition::default();
    let mut scale = 0.0f64;
    for comp in &s.components {
        let e = comp.energy;
        let x = &comp.spatial;
        let dx = x.derivative();
        let mut add = |out: &mut Superposition,
                       tf,
                       c: Complex64,
                       p: &[f64],
                       f: &ComplexQuasi|
         -> Result<()> {
            for (w, shift) in time_split(tf) {
                let piece = f.times(c * w, p)?;
                scale = scale.max(piece.max_abs_coeff());
                out.push(e + shift, piece)?;
            }
            Ok(())
        };
        if let Some(psi) = g.psi() {
            for t in psi.terms() {
                add(&mut out, t.time, t.scale, &t.space.xi_poly, x)?;
            }
        }
        // -tau psi_t = i E tau psi
        for t in g.tau().terms() {
            add(
                &mut out,
                t.time,
                t.scale * Complex64::new(0.0, e),
                &t.space.xi_poly,
                x,
            )?;
        }
        // -eta psi_x = -(p / h') T h' X'
        for t in g.eta().terms() {
            add(&mut out, t.time, -t.scale, &t.space.xi_poly, &dx)?;
        }
    }
    let tol = ZERO_TOLERANCE * scale;
    out.components = out
        .components
        .into_iter()
        .map(|mut c| {
            c.spatial = c.spatial.chop(tol);
            c
        })
        .filter(|c| c.spatial.max_abs_coeff() > tol)
        .collect();
    Ok(out)
}

/// Largest [`superposition_residual`] over seeded interior points.
pub fn max_superposition_residual(m: &LienardModel, s: &Superposition) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in sample_points(m, CHECK_POINTS, DEFAULT_SEED) {
        worst = worst.max(superposition_residual(m, s, p.t, p.x)?);
    }
    Ok(worst)
}

fn max_state_residual(m: &LienardModel, st: &StationaryState) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in sample_points(m, CHECK_POINTS, DEFAULT_SEED) {
        worst = worst.max(pde_residual(m, st, p.t, p.x)?);
    }
    Ok(worst)
}

/// The stationary state `Q[psi]`, normalised and sign-fixed.
///
/// Errors with [`Error::Annihilated`] when `Q[psi]` vanishes, with
/// [`Error::NotEigenstate`] when `st` fails the residual check and with
/// [`Error::InvalidGenerator`] when the image is not a single stationary
/// state.
pub fn apply_characteristic(
    m: &LienardModel,
    g: &Generator,
    st: &StationaryState,
) -> Result<StationaryState> {
    let r = max_state_residual(m, st)?;
    if r > PDE_TOLERANCE {
        return Err(Error::NotEigenstate(r));
    }
    let image = characteristic(g, &Superposition::stationary(st))?;
    match image.components.as_slice() {
        [] => Err(Error::Annihilated(format!(
            "{} maps the state with E = {} to zero",
            g.label(),
            st.energy()
        ))),
        [c] => {
            let profile =
                c.spatial
                    .strip_phase(state_exponent(m))
                    .map_err(|e| Error::InvalidGenerator {
                        label: g.label().to_string(),
                        reason: e.to_string(),
                    })?;
            let shift = (c.energy - st.energy()) / level_gap(m);
            let n = (st.n() as f64 + shift.round()).max(0.0) as usize;
            Ok(StationaryState::new(
                m,
                n,
                c.energy,
                normalize(m, &profile)?,
            ))
        }
        _ => Err(Error::InvalidGenerator {
            label: g.label().to_string(),
            reason: format!("image mixes {} energies", image.components.len()),
        }),
    }
}

/// Largest residual of `Q[psi_n]`, `n < 4`, for the generator in `form`.
pub fn soundness_residual(m: &LienardModel, g: &Generator) -> Result<f64> {
    let mut worst = 0.0f64;
    for n in 0..SOUNDNESS_STATES {
        let st = closed_form_eigenfunction(m, n)?;
        let image = characteristic(g, &Superposition::stationary(&st))?;
        worst = worst.max(max_superposition_residual(m, &image)?);
    }
    Ok(worst)
}

/// The generator `sym` after checking that it maps solutions to solutions.
///
/// The literal coefficients are tried first; if they fail and the
/// corrected ones pass, the correction is logged and used.
pub fn pde_generator(m: &LienardModel, sym: PdeSymmetry) -> Result<Generator> {
    if sym.needs_harmonic() && !m.is_harmonic() {
        return Err(Error::InvalidGenerator {
            label: sym.label().to_string(),
            reason: "only a symmetry when A = 0".into(),
        });
    }
    let literal = sym.generator(m, Form::Literal);
    let r = soundness_residual(m, &literal)?;
    if r <= PDE_TOLERANCE {
        return Ok(sym.generator(m, Form::Corrected));
    }
    let fixed = sym.generator(m, Form::Corrected);
    let rf = soundness_residual(m, &fixed)?;
    if rf <= PDE_TOLERANCE {
        log::warn!(
            "{}: literal coefficients fail the symmetry check (residual {r:.2e}); using corrected form (residual {rf:.2e})",
            sym.label()
        );
        Ok(fixed)
    } else {
        Err(Error::InvalidGenerator {
            label: sym.label().to_string(),
            reason: format!("literal residual {r:.2e}, corrected residual {rf:.2e}"),
        })
    }
}

/// Creation operator of the model: `Omega3-` for `A = 0`, `Omega2-` otherwise.
pub fn creation_operator(m: &LienardModel) -> Result<Generator> {
    pde_generator(
        m,
        if m.is_harmonic() {
            PdeSymmetry::Omega3Minus
        } else {
            PdeSymmetry::Omega2Minus
        },
    )
}

/// Annihilation operator of the model: `Omega3+` or `Omega2+`.
pub fn annihilation_operator(m: &LienardModel) -> Result<Generator> {
    pde_generator(
        m,
        if m.is_harmonic() {
            PdeSymmetry::Omega3Plus
        } else {
            PdeSymmetry::Omega2Plus
        },
    )
}

/// `psi_n` built by `n` applications of the creation characteristic to the
/// ground state.
pub fn ladder_generate(m: &LienardModel, n: usize) -> Result<StationaryState> {
    if n > MAX_LADDER {
        return Err(Error::InvalidParameter(format!(
            "ladder index {n} exceeds {MAX_LADDER}"
        )));
    }
    let up = creation_operator(m)?;
    let mut st = closed_form_eigenfunction(m, 0)?;
    for _ in 0..n {
        st = apply_characteristic(m, &up, &st)?;
    }
    Ok(st)
}
