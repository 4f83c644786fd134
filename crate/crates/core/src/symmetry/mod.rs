//! Point symmetries of the Liénard equation and of its Schrödinger equation.

mod generator;

pub use generator::{
    standard_generators, Coefficient, Form, Generator, Partials, PdeSymmetry, SpaceFactor, Term,
    TimeFactor,
};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::LienardModel;
use crate::rng::Lcg64;

/// Points used by the Noether and closure checks.
pub const SAMPLE_POINTS: usize = 50;
/// Points swept by [`max_lie_residual`].
pub const LIE_POINTS: usize = 100;
/// Lie residual accepted as a symmetry.
pub const LIE_TOLERANCE: f64 = 1e-8;
const V_RANGE: f64 = 2.0;
const FIT_VS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Outcome of [`noether_classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Noether,
    LieOnly,
    NotSymmetry,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Noether => "noether",
            Classification::LieOnly => "lie_only",
            Classification::NotSymmetry => "not_symmetry",
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sample `(t, x, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

/// `t` in one period `[0, 2 pi / w)`, `x` in the domain with 1% trimmed off
/// each end and `v` in `[-2, 2]`.
pub fn sample_points(m: &LienardModel, count: usize, seed: u64) -> Vec<SamplePoint> {
    let mut rng = Lcg64::new(seed);
    let d = m.domain();
    let margin = 0.01 * d.width();
    let period = 2.0 * PI / m.omega();
    (0..count)
        .map(|_| SamplePoint {
            t: rng.uniform(0.0, period),
            x: rng.uniform(d.lo + margin, d.hi - margin),
            v: rng.uniform(-V_RANGE, V_RANGE),
        })
        .collect()
}

/// `eta^(1) = D_t eta - v D_t tau`.
pub fn first_prolongation(tau: &Partials, eta: &Partials, v: f64) -> Complex64 {
    eta.t + eta.x * v - (tau.t + tau.x * v) * v
}

/// Second prolongation on solutions, with `x'' = f`.
pub fn second_prolongation(tau: &Partials, eta: &Partials, v: f64, f: f64) -> Complex64 {
    eta.tt + eta.tx * (2.0 * v) + eta.xx * (v * v)
        - tau.tt * v
        - tau.tx * (2.0 * v * v)
        - tau.xx * (v * v * v)
        + (eta.x - tau.t * 2.0 - tau.x * (3.0 * v)) * f
}

/// Normalised determining-equation residual at one point.
pub fn lie_symmetry_residual(
    m: &LienardModel,
    g: &Generator,
    t: f64,
    x: f64,
    v: f64,
) -> Result<f64> {
    let tau = g.tau().partials(t, x)?;
    let eta = g.eta().partials(t, x)?;
    let (f, fx, fv) = m.rhs_partials(x, v)?;
    let e1 = first_prolongation(&tau, &eta, v);
    let e2 = second_prolongation(&tau, &eta, v, f);
    // F has no explicit t dependence
    let r = e2 - eta.v * fx - e1 * fv;
    Ok(r.norm() / (1.0 + fx.abs() + fv.abs()))
}

/// Largest residual over `count` seeded samples.
pub fn max_lie_residual(m: &LienardModel, g: &Generator, count: usize, seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in sample_points(m, count, seed) {
        worst = worst.max(lie_symmetry_residual(m, g, p.t, p.x, p.v)?);
    }
    Ok(worst)
}

// W = eta L_x + eta^(1) L_v + L D_t tau at velocity v, with its size.
fn noether_w(
    m: &LienardModel,
    tau: &Partials,
    eta: &Partials,
    x: f64,
    v: f64,
) -> Result<(Complex64, f64)> {
    let (l, lx, lv) = m.lagrangian_partials(x, v)?;
    let e1 = first_prolongation(tau, eta, v);
    let dtau = tau.t + tau.x * v;
    let a = eta.v * lx;
    let b = e1 * lv;
    let c = dtau * l;
    Ok((a + b + c, a.norm() + b.norm() + c.norm()))
}

// Least-squares cubic in v through W at FIT_VS.
fn fit_cubic(values: &[Complex64; 5]) -> Result<[Complex64; 4]> {
    let mut ata = Matrix4::<f64>::zeros();
    let mut re = Vector4::<f64>::zeros();
    let mut im = Vector4::<f64>::zeros();
    for (v, w) in FIT_VS.iter().zip(values) {
        let row = Vector4::new(1.0, *v, v * v, v * v * v);
        ata += row * row.transpose();
        re += row * w.re;
        im += row * w.im;
    }
    let lu = ata.lu();
    let (Some(a), Some(b)) = (lu.solve(&re), lu.solve(&im)) else {
        return Err(Error::DegenerateFit(
            "cubic velocity fit is singular".into(),
        ));
    };
    Ok([0, 1, 2, 3].map(|i| Complex64::new(a[i], b[i])))
}

// Cubic coefficients of W in v at (t, x), with the size of its terms.
fn gauge_parts(
    m: &LienardModel,
    g: &Generator,
    t: f64,
    x: f64,
) -> Result<(Complex64, Complex64, f64, [Complex64; 4])> {
    let tau = g.tau().partials(t, x)?;
    let eta = g.eta().partials(t, x)?;
    let mut values = [Complex64::new(0.0, 0.0); 5];
    let mut scale = 0.0f64;
    for (slot, v) in values.iter_mut().zip(FIT_VS) {
        let (w, s) = noether_w(m, &tau, &eta, x, v)?;
        *slot = w;
        scale = scale.max(s);
    }
    let c = fit_cubic(&values)?;
    Ok((c[0], c[1], scale, c))
}

/// Noether test: `W` must be affine in `v`, `W = a(t,x) + b(t,x) v`, with
/// `a_x = b_t` so that `W = D_t f` for a gauge `f`.
pub fn is_noether(m: &LienardModel, g: &Generator, seed: u64) -> Result<bool> {
    let d = m.domain();
    for p in sample_points(m, SAMPLE_POINTS, seed) {
        let (_, _, scale, c) = gauge_parts(m, g, p.t, p.x)?;
        let tol = 1e-9 * scale.max(1e-300);
        if c[2].norm() > tol || c[3].norm() > tol {
            return Ok(false);
        }
        let hx = 1e-5 * (1.0 + p.x.abs()).min(d.width());
        let ht = 1e-5 * (1.0 + p.t.abs());
        if p.x - hx <= d.lo || p.x + hx >= d.hi {
            continue;
        }
        let (a_plus, ..) = gauge_parts(m, g, p.t, p.x + hx)?;
        let (a_minus, ..) = gauge_parts(m, g, p.t, p.x - hx)?;
        let (_, b_plus, ..) = gauge_parts(m, g, p.t + ht, p.x)?;
        let (_, b_minus, ..) = gauge_parts(m, g, p.t - ht, p.x)?;
        let a_x = (a_plus - a_minus) / (2.0 * hx);
        let b_t = (b_plus - b_minus) / (2.0 * ht);
        if (a_x - b_t).norm() > 1e-6 * (1.0 + a_x.norm() + b_t.norm()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `not_symmetry` when the Lie residual exceeds `1e-8`; otherwise `noether`
/// or `lie_only` from the gauge test.
pub fn noether_classify(m: &LienardModel, g: &Generator) -> Result<Classification> {
    noether_classify_seeded(m, g, crate::rng::DEFAULT_SEED)
}

pub fn noether_classify_seeded(
    m: &LienardModel,
    g: &Generator,
    seed: u64,
) -> Result<Classification> {
    if max_lie_residual(m, g, LIE_POINTS, seed)? > LIE_TOLERANCE {
        return Ok(Classification::NotSymmetry);
    }
    Ok(if is_noether(m, g, seed)? {
        Classification::Noether
    } else {
        Classification::LieOnly
    })
}

/// One row of the symmetry report.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryRow {
    pub generator: String,
    pub max_residual: f64,
    pub classification: Classification,
}

/// Residual and classification of all eight standard generators.
pub fn symmetry_report(m: &LienardModel, seed: u64) -> Result<Vec<SymmetryRow>> {
    standard_generators(m)
        .iter()
        .map(|g| {
            Ok(SymmetryRow {
                generator: g.label().to_string(),
                max_residual: max_lie_residual(m, g, LIE_POINTS, seed)?,
                classification: noether_classify_seeded(m, g, seed)?,
            })
        })
        .collect()
}

/// `det` of the rows `(tau_i, eta_i, eta_i^(1))` for three generators; the
/// first row may be the flow `(1, v, f)`.
pub fn det3(rows: [[Complex64; 3]; 3]) -> Complex64 {
    let [a, b, c] = rows;
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Determinant of the flow vector with the prolonged `Gamma7` and `Gamma8`.
pub fn delta78(m: &LienardModel, t: f64, x: f64, v: f64) -> Result<f64> {
    let gens = standard_generators(m);
    let f = m.ode_rhs(x, v)?;
    let row = |g: &Generator| -> Result<[Complex64; 3]> {
        let tau = g.tau().partials(t, x)?;
        let eta = g.eta().partials(t, x)?;
        Ok([tau.v, eta.v, first_prolongation(&tau, &eta, v)])
    };
    let one = Complex64::new(1.0, 0.0);
    let d = det3([
        [one, Complex64::new(v, 0.0), Complex64::new(f, 0.0)],
        row(&gens[6])?,
        row(&gens[7])?,
    ]);
    Ok(d.re)
}

fn apply_vector(tau: Complex64, eta: Complex64, p: &Partials) -> Complex64 {
    tau * p.t + eta * p.x
}

/// Components `(tau, eta, g)` of `[X, Y]` at `(t, x)`.
pub fn commutator_at(x: &Generator, y: &Generator, t: f64, pos: f64) -> Result<[Complex64; 3]> {
    let (xt, xe) = (x.tau().partials(t, pos)?, x.eta().partials(t, pos)?);
    let (yt, ye) = (y.tau().partials(t, pos)?, y.eta().partials(t, pos)?);
    let tau = apply_vector(xt.v, xe.v, &yt) - apply_vector(yt.v, ye.v, &xt);
    let eta = apply_vector(xt.v, xe.v, &ye) - apply_vector(yt.v, ye.v, &xe);
    let zero = Partials::default();
    let xg = match x.psi() {
        Some(c) => c.partials(t, pos)?,
        None => zero,
    };
    let yg = match y.psi() {
        Some(c) => c.partials(t, pos)?,
        None => zero,
    };
    let g = apply_vector(xt.v, xe.v, &yg) - apply_vector(yt.v, ye.v, &xg);
    Ok([tau, eta, g])
}

fn components(g: &Generator, t: f64, x: f64) -> Result<[Complex64; 3]> {
    let psi = match g.psi() {
        Some(c) => c.value(t, x)?,
        None => Complex64::new(0.0, 0.0),
    };
    Ok([g.tau().value(t, x)?, g.eta().value(t, x)?, psi])
}

/// Result of [`algebra_closure_check`].
#[derive(Debug, Clone)]
pub struct ClosureReport {
    /// `structure[i][j][k]`: coefficient of generator `k` in `[X_i, X_j]`.
    pub structure: Vec<Vec<Vec<Complex64>>>,
    /// Largest relative least-squares residual over all pairs.
    pub max_residual: f64,
    /// Rank of the matrix whose rows are the commutator coefficient vectors.
    pub derived_rank: usize,
}

impl ClosureReport {
    pub fn closed(&self) -> bool {
        self.max_residual <= CLOSURE_TOLERANCE
    }
}

/// Relative residual accepted as closure.
pub const CLOSURE_TOLERANCE: f64 = 1e-8;

/// Expresses every commutator `[X_i, X_j]` as a constant combination of the
/// set by least squares over seeded sample points.
pub fn algebra_closure_check(m: &LienardModel, gens: &[Generator]) -> Result<ClosureReport> {
    algebra_closure_check_seeded(m, gens, crate::rng::DEFAULT_SEED)
}

pub fn algebra_closure_check_seeded(
    m: &LienardModel,
    gens: &[Generator],
    seed: u64,
) -> Result<ClosureReport> {
    let n = gens.len();
    if n == 0 {
        return Err(Error::InvalidParameter("empty generator set".into()));
    }
    for g in gens.iter().filter(|g| g.psi().is_none()) {
        let r = max_lie_residual(m, g, LIE_POINTS, seed)?;
        if r > LIE_TOLERANCE {
            return Err(Error::InvalidGenerator {
                label: g.label().to_string(),
                reason: format!("Lie residual {r:.3e} is above {LIE_TOLERANCE:.0e}"),
            });
        }
    }
    let points = sample_points(m, SAMPLE_POINTS, seed);
    let rows = 3 * points.len();
    let mut basis = DMatrix::<Complex64>::zeros(rows, n);
    for (i, p) in points.iter().enumerate() {
        for (k, g) in gens.iter().enumerate() {
            let c = components(g, p.t, p.x)?;
            for j in 0..3 {
                basis[(3 * i + j, k)] = c[j];
            }
        }
    }
    let svd = basis.clone().svd(true, true);
    let zero = Complex64::new(0.0, 0.0);
    let mut structure = vec![vec![vec![zero; n]; n]; n];
    let mut max_residual = 0.0f64;
    let mut coefficient_rows = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut rhs = DVector::<Complex64>::zeros(rows);
            for (pi, p) in points.iter().enumerate() {
                let c = commutator_at(&gens[i], &gens[j], p.t, p.x)?;
                for r in 0..3 {
                    rhs[3 * pi + r] = c[r];
                }
            }
            let sol = svd
                .solve(&rhs, 1e-12)
                .map_err(|e| Error::DegenerateFit(e.to_string()))?;
            let fit = &basis * &sol;
            let size = rhs.norm();
            let residual = (&fit - &rhs).norm() / size.max(1.0);
            max_residual = max_residual.max(residual);
            for k in 0..n {
                structure[i][j][k] = sol[k];
                structure[j][i][k] = -sol[k];
            }
            coefficient_rows.push(sol);
        }
    }
    let derived_rank = if coefficient_rows.is_empty() {
        0
    } else {
        let mat =
            DMatrix::<Complex64>::from_fn(coefficient_rows.len(), n, |r, c| coefficient_rows[r][c]);
        let sv = mat.singular_values();
        let top = sv.iter().fold(0.0f64, |a, b| a.max(*b));
        sv.iter().filter(|s| **s > 1e-8 * top.max(1e-300)).count()
    };
    Ok(ClosureReport {
        structure,
        max_residual,
        derived_rank,
    })
}
