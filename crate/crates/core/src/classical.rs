//! Fixed-step RK4 orbits, Poincaré-section periods and the `u = h^2/2` test.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::model::LienardModel;

/// Steps per nominal period `2 pi / w` used by [`default_step`].
pub const STEPS_PER_PERIOD: f64 = 2000.0;
const SINGULAR_GUARD: f64 = 1e-6;
const SECANT_ITERATIONS: usize = 50;

/// `(2 pi / w) / 2000`.
pub fn default_step(m: &LienardModel) -> f64 {
    2.0 * PI / m.omega() / STEPS_PER_PERIOD
}

/// Samples of an orbit on a uniform grid starting at `t = 0`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    model: LienardModel,
    dt: f64,
    x: Vec<f64>,
    v: Vec<f64>,
    energy: Vec<f64>,
}

impl Trajectory {
    pub fn model(&self) -> &LienardModel {
        &self.model
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn energy(&self) -> &[f64] {
        &self.energy
    }

    /// `u = h(x)^2 / 2` at every sample.
    pub fn u(&self) -> Result<Vec<f64>> {
        self.x
            .iter()
            .map(|&x| {
                let h = self.model.h().eval(x)?;
                Ok(0.5 * h * h)
            })
            .collect()
    }

    /// `max |E_i - E_0| / |E_0|`.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
        self.energy
            .iter()
            .map(|e| (e - e0).abs() / scale)
            .fold(0.0, f64::max)
    }
}

fn rk4_step(m: &LienardModel, x: f64, v: f64, dt: f64) -> Result<(f64, f64)> {
    let k1x = v;
    let k1v = m.ode_rhs(x, v)?;
    let k2x = v + 0.5 * dt * k1v;
    let k2v = m.ode_rhs(x + 0.5 * dt * k1x, k2x)?;
    let k3x = v + 0.5 * dt * k2v;
    let k3v = m.ode_rhs(x + 0.5 * dt * k2x, k3x)?;
    let k4x = v + dt * k3v;
    let k4v = m.ode_rhs(x + dt * k3x, k4x)?;
    Ok((
        x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    ))
}

fn admissible(m: &LienardModel, x: f64) -> Result<bool> {
    if !m.domain().contains(x) {
        return Ok(false);
    }
    if m.is_harmonic() {
        return Ok(true);
    }
    Ok(m.h().eval(x)? >= SINGULAR_GUARD * m.h_abs_max())
}

/// Classical RK4 from `(x0, v0)` to `t_end`.
///
/// The step is shrunk to `t_end / ceil(t_end / dt)` so the last sample
/// falls exactly on `t_end`.
pub fn integrate_orbit(
    m: &LienardModel,
    x0: f64,
    v0: f64,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !dt.is_finite() || !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need dt > 0 and t_end > 0, got dt = {dt}, t_end = {t_end}"
        )));
    }
    if !v0.is_finite() {
        return Err(Error::InvalidParameter(format!("v0 = {v0} is not finite")));
    }
    if !admissible(m, x0)? {
        return Err(Error::DomainExit { t: 0.0 });
    }
    let steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    let step = t_end / steps as f64;
    let mut x = Vec::with_capacity(steps + 1);
    let mut v = Vec::with_capacity(steps + 1);
    let mut energy = Vec::with_capacity(steps + 1);
    let (mut xc, mut vc) = (x0, v0);
    x.push(xc);
    v.push(vc);
    energy.push(m.energy(xc, vc)?);
    for i in 0..steps {
        let t = (i + 1) as f64 * step;
        let (xn, vn) = rk4_step(m, xc, vc, step).map_err(|_| Error::DomainExit { t })?;
        if !xn.is_finite() || !vn.is_finite() || !admissible(m, xn)? {
            return Err(Error::DomainExit { t });
        }
        xc = xn;
        vc = vn;
        x.push(xc);
        v.push(vc);
        energy.push(m.energy(xc, vc)?);
    }
    Ok(Trajectory {
        model: m.clone(),
        dt: step,
        x,
        v,
        energy,
    })
}

// Section {x = x0} crossed with the initial sign of v, or {v = 0} crossed
// with the initial sign of the acceleration when the orbit starts at rest.
#[derive(Clone, Copy)]
enum Section {
    Position { x0: f64, dir: f64 },
    Velocity { dir: f64 },
}

impl Section {
    fn value(self, x: f64, v: f64) -> f64 {
        match self {
            Section::Position { x0, dir } => dir * (x - x0),
            Section::Velocity { dir } => dir * v,
        }
    }
}

/// Mean return time to the Poincaré section through the initial state.
///
/// Crossing times are refined by secant iteration on the RK4 step length
/// from the last sample before each crossing.
pub fn estimate_period(tr: &Trajectory) -> Result<f64> {
    let m = &tr.model;
    if tr.len() < 3 {
        return Err(Error::NoCrossing);
    }
    let (x0, v0) = (tr.x[0], tr.v[0]);
    let a0 = m.ode_rhs(x0, v0)?;
    let section = if v0.abs() > 1e-12 * (1.0 + a0.abs()) {
        Section::Position {
            x0,
            dir: v0.signum(),
        }
    } else if a0 != 0.0 {
        Section::Velocity { dir: a0.signum() }
    } else {
        // equilibrium
        return Err(Error::NoCrossing);
    };
    let mut crossings = vec![0.0];
    for i in 1..tr.len() - 1 {
        let s0 = section.value(tr.x[i], tr.v[i]);
        let s1 = section.value(tr.x[i + 1], tr.v[i + 1]);
        if !(s0 < 0.0 && s1 >= 0.0) {
            continue;
        }
        let g = |h: f64| -> Result<f64> {
            let (x, v) = rk4_step(m, tr.x[i], tr.v[i], h)?;
            Ok(section.value(x, v))
        };
        let (mut ha, mut hb) = (0.0, tr.dt);
        let (mut ga, mut gb) = (s0, s1);
        for _ in 0..SECANT_ITERATIONS {
            if gb == ga {
                break;
            }
            let hn = hb - gb * (hb - ha) / (gb - ga);
            let gn = g(hn)?;
            ha = hb;
            ga = gb;
            hb = hn;
            gb = gn;
            if (hb - ha).abs() <= 1e-15 * tr.dt {
                break;
            }
        }
        crossings.push(tr.time(i) + hb);
    }
    if crossings.len() < 2 {
        return Err(Error::NoCrossing);
    }
    let periods: Vec<f64> = crossings.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(periods.iter().sum::<f64>() / periods.len() as f64)
}

/// Fit `u = c0 + c1 cos 2wt + c2 sin 2wt` by least squares and return
/// `(max |residual| / sqrt(c1^2 + c2^2), [c0, c1, c2])`.
pub fn hidden_linearity_fit(m: &LienardModel, tr: &Trajectory) -> Result<(f64, [f64; 3])> {
    let u = tr.u()?;
    let w2 = 2.0 * m.omega();
    let basis = |t: f64| Vector3::new(1.0, (w2 * t).cos(), (w2 * t).sin());
    let mut ata = Matrix3::zeros();
    let mut atb = Vector3::zeros();
    for (i, ui) in u.iter().enumerate() {
        let b = basis(tr.time(i));
        ata += b * b.transpose();
        atb += b * *ui;
    }
    let c = ata
        .lu()
        .solve(&atb)
        .ok_or_else(|| Error::DegenerateFit("normal equations are singular".into()))?;
    let amplitude = c[1].hypot(c[2]);
    let level = u.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if amplitude <= 1e-12 * level.max(f64::MIN_POSITIVE) {
        return Err(Error::DegenerateFit(format!(
            "oscillation amplitude {amplitude:e} vanishes"
        )));
    }
    let worst = u
        .iter()
        .enumerate()
        .map(|(i, ui)| (ui - basis(tr.time(i)).dot(&c)).abs())
        .fold(0.0, f64::max);
    Ok((worst / amplitude, [c[0], c[1], c[2]]))
}

/// Normalised residual of the `u = h^2/2` harmonic fit at frequency `2w`.
pub fn hidden_linearity_residual(m: &LienardModel, tr: &Trajectory) -> Result<f64> {
    Ok(hidden_linearity_fit(m, tr)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Interval;

    fn model(h: &str, w: f64, a: f64, lo: f64, hi: f64) -> LienardModel {
        LienardModel::build(h, w, a, Interval::new(lo, hi)).unwrap()
    }

    #[test]
    fn harmonic_returns_after_one_period() {
        let m = model("x", 1.0, 0.0, -5.0, 5.0);
        let tr = integrate_orbit(&m, 1.0, 0.0, 2.0 * PI, default_step(&m)).unwrap();
        assert!((tr.x().last().unwrap() - 1.0).abs() < 1e-8);
        assert!((tr.time(tr.len() - 1) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn isotonic_orbit_stays_positive() {
        let m = model("x", 1.0, -2.0, 0.01, 10.0);
        let tr = integrate_orbit(&m, 1.0, 0.0, 20.0, default_step(&m)).unwrap();
        assert!(tr.x().iter().all(|x| *x > 0.0));
        let t = estimate_period(&tr).unwrap();
        assert!((t - PI).abs() < 1e-7, "{t}");
    }

    #[test]
    fn cubic_image_is_sinusoidal() {
        let m = model("x + x^3/3", 1.0, 0.0, -3.0, 3.0);
        let tr = integrate_orbit(&m, 1.0, 0.0, 4.0 * PI, default_step(&m)).unwrap();
        for (i, x) in tr.x().iter().enumerate().step_by(97) {
            let xi = x + x * x * x / 3.0;
            let want = 4.0 / 3.0 * tr.time(i).cos();
            assert!((xi - want).abs() < 1e-8, "{xi} vs {want}");
        }
    }

    #[test]
    fn exit_is_reported() {
        let m = model("x", 1.0, 0.0, -1.0, 1.0);
        match integrate_orbit(&m, 0.9, 1.0, 10.0, 0.01) {
            Err(Error::DomainExit { t }) => assert!(t > 0.0 && t < 10.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn period_with_moving_start() {
        let m = model("x + x^3/3", 2.0, 0.0, -3.0, 3.0);
        let tr = integrate_orbit(&m, 0.0, 1.0, 10.0, default_step(&m)).unwrap();
        assert!((estimate_period(&tr).unwrap() - PI).abs() < 1e-8);
    }

    #[test]
    fn double_angle_fit() {
        let m = model("x", 1.0, 0.0, -5.0, 5.0);
        let tr = integrate_orbit(&m, 1.0, 0.0, 4.0 * PI, default_step(&m)).unwrap();
        let (r, c) = hidden_linearity_fit(&m, &tr).unwrap();
        assert!(r < 1e-7);
        assert!((c[0] - 0.25).abs() < 1e-9 && (c[1] - 0.25).abs() < 1e-9);
    }

    #[test]
    fn rest_at_equilibrium_has_no_section() {
        let m = model("x", 1.0, 0.0, -5.0, 5.0);
        let tr = integrate_orbit(&m, 0.0, 0.0, 10.0, 0.01).unwrap();
        assert!(matches!(estimate_period(&tr), Err(Error::NoCrossing)));
        assert!(matches!(
            hidden_linearity_fit(&m, &tr),
            Err(Error::DegenerateFit(_))
        ));
    }
}
