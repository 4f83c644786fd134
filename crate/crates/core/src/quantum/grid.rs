use crate::error::{Error, Result};
use crate::model::{Interval, LienardModel};

use super::state::closed_form_eigenfunction;

/// Default number of grid intervals.
pub const DEFAULT_GRID: usize = 4000;
/// Smallest accepted number of grid intervals.
pub const MIN_GRID: usize = 200;
/// Most eigenvalues [`lowest_eigenvalues`] will return.
pub const MAX_LEVELS: usize = 20;
const TAIL: f64 = 1e-16;
const MIN_SWEEPS: usize = 3;
const MAX_SWEEPS: usize = 10;

/// Symmetrised three-point discretisation of
/// `H = -(1/(2h')) d/dx ((1/h') d/dx) + V` with Dirichlet ends.
#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    x: Vec<f64>,
    xi: Vec<f64>,
    dx: f64,
    /// Diagonal over the interior nodes `1..N`.
    d: Vec<f64>,
    /// `e[i]` couples interior nodes `i` and `i + 1`.
    e: Vec<f64>,
    /// `h'` at every node.
    weights: Vec<f64>,
}

impl DiscreteHamiltonian {
    /// All nodes `x_0 .. x_N`, ends included.
    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    /// `h(x_i)` at every node.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn step(&self) -> f64 {
        self.dx
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.d
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.e
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of interior unknowns.
    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// Dense copy, for tests.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = self.d[i];
            if i + 1 < n {
                a[i][i + 1] = self.e[i];
                a[i + 1][i] = self.e[i];
            }
        }
        a
    }

    /// Matrix from its tridiagonal parts on a unit-weight grid.
    pub fn from_tridiagonal(d: Vec<f64>, e: Vec<f64>) -> Result<Self> {
        if d.is_empty() || e.len() + 1 != d.len() {
            return Err(Error::InvalidParameter(format!(
                "need len(e) = len(d) - 1, got {} and {}",
                e.len(),
                d.len()
            )));
        }
        let n = d.len() + 1;
        let x: Vec<f64> = (0..=n).map(|i| i as f64).collect();
        Ok(Self {
            xi: x.clone(),
            x,
            dx: 1.0,
            d,
            e,
            weights: vec![1.0; n + 1],
        })
    }

    /// Number of eigenvalues below `lambda` (Sturm sequence).
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.d.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.e[i - 1] * self.e[i - 1]
            };
            q = self.d[i] - lambda - if i == 0 { 0.0 } else { coupling / q };
            if q == 0.0 {
                q = -f64::EPSILON * (1.0 + lambda.abs());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - left - right);
            hi = hi.max(self.d[i] + left + right);
        }
        (lo, hi)
    }
}

/// Three-point flux scheme on `n_grid` uniform intervals of `x_range`.
///
/// For `A = 0` the image `h(x_range)` must contain `[-xi*, xi*]`.
pub fn build_hamiltonian(
    m: &LienardModel,
    n_grid: usize,
    x_range: Interval,
) -> Result<DiscreteHamiltonian> {
    if n_grid < MIN_GRID {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least {MIN_GRID} intervals, got {n_grid}"
        )));
    }
    let dom = m.domain();
    if !(x_range.lo < x_range.hi) || x_range.lo < dom.lo || x_range.hi > dom.hi {
        return Err(Error::InvalidParameter(format!(
            "x range [{}, {}] is not inside the domain [{}, {}]",
            x_range.lo, x_range.hi, dom.lo, dom.hi
        )));
    }
    if m.is_harmonic() {
        let s = m.xi_star();
        let (a, b) = (m.to_isotonic(x_range.lo)?, m.to_isotonic(x_range.hi)?);
        if a > -s || b < s {
            return Err(Error::Coverage(format!(
                "h maps the grid onto [{a}, {b}], which does not contain [-{s}, {s}]"
            )));
        }
    }
    let dx = x_range.width() / n_grid as f64;
    let x: Vec<f64> = (0..=n_grid)
        .map(|i| {
            if i == n_grid {
                x_range.hi
            } else {
                x_range.lo + i as f64 * dx
            }
        })
        .collect();
    let finite = |v: f64, index: usize| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { index })
        }
    };
    let mut weights = Vec::with_capacity(n_grid + 1);
    let mut xi = Vec::with_capacity(n_grid + 1);
    for (i, &xv) in x.iter().enumerate() {
        weights.push(finite(m.h_prime().eval(xv)?, i)?);
        xi.push(finite(m.h().eval(xv)?, i)?);
    }
    // a = 1/h' at midpoints
    let mut a = Vec::with_capacity(n_grid);
    for i in 0..n_grid {
        let mid = x_range.lo + (i as f64 + 0.5) * dx;
        a.push(finite(1.0 / m.h_prime().eval(mid)?, i)?);
    }
    let inv = 1.0 / (2.0 * dx * dx);
    let mut d = Vec::with_capacity(n_grid - 1);
    let mut e = Vec::with_capacity(n_grid - 2);
    for i in 1..n_grid {
        let v = if m.is_harmonic() || xi[i] != 0.0 {
            m.potential_of_xi(xi[i])
        } else {
            f64::INFINITY
        };
        d.push(finite((a[i] + a[i - 1]) * inv / weights[i] + v, i)?);
        if i + 1 < n_grid {
            e.push(finite(
                -a[i] * inv / (weights[i] * weights[i + 1]).sqrt(),
                i,
            )?);
        }
    }
    Ok(DiscreteHamiltonian {
        x,
        xi,
        dx,
        d,
        e,
        weights,
    })
}

// xi-interval where the closed-form state n_max exceeds TAIL of its peak.
fn significant_xi(m: &LienardModel, n_max: usize) -> Result<Interval> {
    let st = closed_form_eigenfunction(m, n_max)?;
    let q = st.spatial();
    let range = m.xi_range();
    let reach = ((2.0 * n_max as f64 + q.exponent() + 1.0 + 2.0 * 40.0) / m.omega()).sqrt() * 1.5;
    let lo = range.lo.max(if m.is_harmonic() { -reach } else { 0.0 });
    let hi = range.hi.min(reach);
    let samples = 20_000;
    let step = (hi - lo) / samples as f64;
    let mut values = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let xi = lo + i as f64 * step;
        let v = if xi > 0.0 || m.is_harmonic() {
            q.eval(xi)?.abs()
        } else {
            0.0
        };
        values.push(v);
    }
    let peak = values.iter().fold(0.0f64, |a, b| a.max(*b));
    let threshold = TAIL * peak;
    let first = values.iter().position(|v| *v >= threshold).unwrap_or(0);
    let last = values
        .iter()
        .rposition(|v| *v >= threshold)
        .unwrap_or(samples);
    let a = if first == 0 {
        lo
    } else {
        lo + (first - 1) as f64 * step
    };
    let b = if last == samples {
        hi
    } else {
        lo + (last + 1) as f64 * step
    };
    Ok(Interval::new(a, b))
}

/// Preimage of the `xi`-interval where the highest requested closed-form
/// state exceeds `1e-16` of its peak, widened to `[-xi*, xi*]` for `A = 0`
/// and clipped to the domain.
pub fn default_x_range(m: &LienardModel, levels: usize) -> Result<Interval> {
    let mut band = significant_xi(m, levels.max(1) - 1)?;
    if m.is_harmonic() {
        let s = m.xi_star();
        band = Interval::new(band.lo.min(-s), band.hi.max(s));
    }
    let image = m.xi_range();
    let lo = band.lo.max(image.lo);
    let hi = band.hi.min(image.hi);
    let dom = m.domain();
    let x_lo = if lo <= image.lo {
        dom.lo
    } else {
        m.from_isotonic(lo)?
    };
    let x_hi = if hi >= image.hi {
        dom.hi
    } else {
        m.from_isotonic(hi)?
    };
    Ok(Interval::new(x_lo, x_hi))
}

/// The `count` smallest eigenvalues, ascending, by Sturm bisection to
/// `1e-12 (1 + |E|)`.
pub fn lowest_eigenvalues(h: &DiscreteHamiltonian, count: usize) -> Result<Vec<f64>> {
    if count > MAX_LEVELS || count > h.dim() {
        return Err(Error::InvalidParameter(format!(
            "asked for {count} eigenvalues of a {}-dimensional matrix (limit {MAX_LEVELS})",
            h.dim()
        )));
    }
    let (lo0, hi0) = h.gershgorin();
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (mut lo, mut hi) = (lo0, hi0);
        while hi - lo > 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if h.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Grid samples of an eigenfunction, ends included.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub psi: Vec<f64>,
}

impl GridFunction {
    /// Interior sign changes.
    pub fn sign_changes(&self) -> usize {
        let peak = self.psi.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let significant: Vec<f64> = self
            .psi
            .iter()
            .copied()
            .filter(|v| v.abs() > 1e-8 * peak)
            .collect();
        significant.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }
}

// Solve (T - shift) y = b for symmetric tridiagonal T by LU with partial
// pivoting (row swaps fill a second superdiagonal).
fn tridiagonal_solve(d: &[f64], e: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = d.len();
    let tiny = f64::EPSILON * d.iter().chain(e).fold(1.0f64, |a, v| a.max(v.abs()));
    let mut dg: Vec<f64> = d.iter().map(|v| v - shift).collect();
    let mut dl = e.to_vec();
    let mut du = e.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if dg[i].abs() >= dl[i].abs() {
            if dg[i] == 0.0 {
                dg[i] = tiny;
            }
            let fact = dl[i] / dg[i];
            dl[i] = fact;
            dg[i + 1] -= fact * du[i];
        } else {
            let fact = dg[i] / dl[i];
            dg[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = dg[i + 1];
            dg[i + 1] = temp - fact * dg[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -fact;
            }
            swapped[i] = true;
        }
    }
    if dg[n - 1] == 0.0 {
        dg[n - 1] = tiny;
    }
    let mut y = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            let temp = y[i];
            y[i] = y[i + 1];
            y[i + 1] = temp - dl[i] * y[i];
        } else {
            y[i + 1] -= dl[i] * y[i];
        }
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        if i + 1 < n {
            s -= du[i] * y[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * y[i + 2];
        }
        y[i] = s / dg[i];
    }
    y
}

fn unit(v: &mut [f64]) {
    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in v.iter_mut() {
        *a /= n;
    }
}

/// Inverse iteration at `energy`, weighted-normalised so that
/// `sum psi_i^2 h'_i dx = 1`, with the rightmost extremum positive.
pub fn eigenvector(h: &DiscreteHamiltonian, energy: f64) -> Result<GridFunction> {
    let n = h.dim();
    let mut y = vec![1.0; n];
    // break symmetry with the ground state of odd problems
    for (i, v) in y.iter_mut().enumerate() {
        *v += 1e-3 * (i as f64 / n as f64);
    }
    unit(&mut y);
    let mut change = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let mut next = tridiagonal_solve(&h.d, &h.e, energy, &y);
        unit(&mut next);
        let dot: f64 = next.iter().zip(&y).map(|(a, b)| a * b).sum();
        if dot < 0.0 {
            next.iter_mut().for_each(|v| *v = -*v);
        }
        change = next
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        y = next;
        sweeps += 1;
        if sweeps >= MIN_SWEEPS && change <= 1e-10 {
            break;
        }
    }
    if change > 1e-10 {
        return Err(Error::NoConvergence {
            sweeps,
            residual: change,
        });
    }
    // undo the similarity and normalise in the h'-weighted norm
    let mut psi = vec![0.0; n + 2];
    for i in 0..n {
        psi[i + 1] = y[i] / h.weights[i + 1].sqrt();
    }
    let norm = psi
        .iter()
        .zip(&h.weights)
        .map(|(p, w)| p * p * w * h.dx)
        .sum::<f64>()
        .sqrt();
    psi.iter_mut().for_each(|p| *p /= norm);
    if rightmost_extremum(&psi) < 0.0 {
        psi.iter_mut().for_each(|p| *p = -*p);
    }
    Ok(GridFunction {
        x: h.x.clone(),
        xi: h.xi.clone(),
        psi,
    })
}

fn rightmost_extremum(psi: &[f64]) -> f64 {
    let peak = psi.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    for i in (1..psi.len() - 1).rev() {
        let left = psi[i] - psi[i - 1];
        let right = psi[i + 1] - psi[i];
        if left * right <= 0.0 && psi[i].abs() >= 1e-3 * peak {
            return psi[i];
        }
    }
    psi.iter()
        .copied()
        .fold(0.0, |a, b| if b.abs() > a.abs() { b } else { a })
}
