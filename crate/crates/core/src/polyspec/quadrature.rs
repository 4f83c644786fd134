use std::sync::OnceLock;

use super::QuasiPolynomial;
use crate::error::{Error, Result};
use crate::model::LienardModel;

const NODES: usize = 64;
const TAIL: f64 = 1e-18;
const AGREEMENT: f64 = 1e-11;
const MAX_DOUBLINGS: usize = 16;
const GRADED_LEVELS: usize = 60;

/// Nodes and weights of the 64-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_64() -> &'static ([f64; NODES], [f64; NODES]) {
    static RULE: OnceLock<([f64; NODES], [f64; NODES])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        let mut x = [0.0; NODES];
        let mut w = [0.0; NODES];
        for i in 0..n / 2 {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let weight = 2.0 / ((1.0 - z * z) * dp * dp);
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = weight;
            w[n - 1 - i] = weight;
        }
        (x, w)
    })
}

/// `(sum f, sum |f|)` over the panels delimited by `edges`.
pub fn integrate_fn<F>(f: F, edges: &[f64]) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let (x, w) = gauss_legendre_64();
    let mut total = 0.0;
    let mut abs_total = 0.0;
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut panel = 0.0;
        let mut abs_panel = 0.0;
        for (xi, wi) in x.iter().zip(w) {
            let v = f(mid + half * xi)?;
            panel += wi * v;
            abs_panel += wi * v.abs();
        }
        total += half * panel;
        abs_total += half * abs_panel;
    }
    Ok((total, abs_total))
}

// |xi| beyond which the envelope stays below TAIL times its maximum.
fn cutoff(q: &QuasiPolynomial) -> f64 {
    let w = q.omega();
    let deg = q.degree().unwrap_or(0) as f64;
    let d = ((deg + q.exponent()).max(0.0) / w).sqrt();
    let start = d.max(1.0 / w.sqrt());
    let reach = 2.0 * start;
    let peak = (1..=512)
        .map(|j| q.envelope(reach * j as f64 / 512.0))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max);
    let threshold = TAIL * peak;
    let mut hi = start;
    while q.envelope(hi) >= threshold {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if q.envelope(mid) >= threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

fn lowest_power(q: &QuasiPolynomial) -> f64 {
    let j = q.coeffs().iter().position(|c| *c != 0.0).unwrap_or(0);
    q.exponent() + j as f64
}

/// `int_lo^hi q(xi) dxi`, bounds may be infinite.
pub fn integrate(q: &QuasiPolynomial, lo: f64, hi: f64) -> Result<f64> {
    integrate_bounded(q, |xi| q.eval(xi), lo, hi)
}

/// Integrate `f` over `(lo, hi)` using the quasi-polynomial `bound` (with
/// `|f| <= bound.envelope`) to place the cutoff and the panels.
///
/// The interval is clipped where the envelope falls below `1e-18` of its
/// maximum, covered by uniform 64-node panels and refined by doubling
/// until two passes agree to `1e-11` of `int |q|`. Panels are graded
/// geometrically towards `xi = 0` when `q` is not smooth there.
pub fn integrate_bounded<F>(q: &QuasiPolynomial, f: F, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidParameter(format!(
            "integration interval ({lo}, {hi}) is empty"
        )));
    }
    if q.is_zero() {
        return Ok(0.0);
    }
    let s = q.exponent();
    let smooth = s.fract() == 0.0 && s >= 0.0;
    if s.fract() != 0.0 && lo < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "xi^{s} is undefined on ({lo}, 0)"
        )));
    }
    if lo <= 0.0 && hi >= 0.0 && lowest_power(q) <= -1.0 {
        return Err(Error::NonIntegrable {
            exponent: lowest_power(q),
        });
    }

    let c = cutoff(q);
    let a = lo.max(-c);
    let b = hi.min(c);
    if a >= b {
        return Ok(0.0);
    }
    let graded = !smooth && a >= 0.0;
    let width = b - a;
    let mut panels = ((width * q.omega().sqrt() / 2.0).ceil() as usize).max(1);

    let mut previous: Option<f64> = None;
    let mut last_gap = f64::INFINITY;
    for _ in 0..=MAX_DOUBLINGS {
        let step = width / panels as f64;
        let mut edges = Vec::with_capacity(panels + GRADED_LEVELS + 2);
        if graded {
            // geometric edges towards 0, cut off at a
            let first = a + step;
            let mut inner = vec![first];
            let mut e = first;
            for _ in 0..GRADED_LEVELS {
                e *= 0.5;
                if e <= a {
                    break;
                }
                inner.push(e);
            }
            edges.push(a);
            edges.extend(inner.into_iter().rev());
            for i in 2..=panels {
                edges.push(a + step * i as f64);
            }
        } else {
            for i in 0..=panels {
                edges.push(a + step * i as f64);
            }
        }
        *edges.last_mut().unwrap() = b;
        let (value, scale) = integrate_fn(&f, &edges)?;
        if let Some(prev) = previous {
            last_gap = (value - prev).abs();
            if last_gap <= AGREEMENT * scale {
                return Ok(value);
            }
        }
        previous = Some(value);
        panels *= 2;
    }
    Err(Error::NoConvergence {
        sweeps: MAX_DOUBLINGS,
        residual: last_gap,
    })
}

/// `int F(h(x)) G(h(x)) h'(x) dx` over the model domain, done in `xi`.
///
/// The factors are evaluated separately; multiplying high-degree
/// polynomials in the monomial basis first loses up to eight digits.
pub fn inner_product(m: &LienardModel, f: &QuasiPolynomial, g: &QuasiPolynomial) -> Result<f64> {
    let range = m.xi_range();
    product_integral(f, g, range.lo, range.hi)
}

/// `int_lo^hi F G dxi`, evaluating the factors pointwise.
pub fn product_integral(f: &QuasiPolynomial, g: &QuasiPolynomial, lo: f64, hi: f64) -> Result<f64> {
    integrate_bounded(&f.mul(g), |xi| Ok(f.eval(xi)? * g.eval(xi)?), lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Interval;
    use crate::polyspec::{gamma_fn, hermite_coeffs, laguerre_coeffs};
    use std::f64::consts::PI;

    #[test]
    fn rule_integrates_polynomials() {
        let (x, w) = gauss_legendre_64();
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let m126: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(126)).sum();
        assert!((m126 - 2.0 / 127.0).abs() < 1e-14);
    }

    #[test]
    fn gaussian_examples() {
        let m = LienardModel::build("x", 1.0, 0.0, Interval::new(-8.0, 8.0)).unwrap();
        let g = QuasiPolynomial::new(1.0, 0.0, vec![1.0]);
        let xg = QuasiPolynomial::new(1.0, 0.0, vec![0.0, 1.0]);
        assert!((inner_product(&m, &g, &g).unwrap() - PI.sqrt()).abs() < 1e-13);
        assert!(inner_product(&m, &g, &xg).unwrap().abs() < 1e-15);
        let full = integrate(&g.mul(&g), f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!((full - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn half_line_fractional_power() {
        let f = QuasiPolynomial::new(0.5, 0.75, vec![1.0]);
        let got = integrate(&f.mul(&f), 0.0, f64::INFINITY).unwrap();
        let want = gamma_fn(1.25).unwrap() / (2.0 * 0.5f64.powf(1.25));
        assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
        assert!((got - 1.0779).abs() < 1e-4);
    }

    #[test]
    fn singular_and_invalid_intervals() {
        let q = QuasiPolynomial::new(1.0, -1.5, vec![1.0]);
        assert!(matches!(
            integrate(&q, 0.0, 1.0),
            Err(Error::NonIntegrable { .. })
        ));
        assert!(integrate(&q, -1.0, 1.0).is_err());
        let g = QuasiPolynomial::new(1.0, 0.0, vec![1.0]);
        assert!(integrate(&g, 1.0, 1.0).is_err());
        // far outside the Gaussian bulk
        assert_eq!(integrate(&g, 100.0, 200.0).unwrap(), 0.0);
    }

    #[test]
    fn hermite_orthogonality() {
        let mut fact = 1.0;
        for n in 0..=10usize {
            if n > 0 {
                fact *= n as f64;
            }
            let hn = QuasiPolynomial::new(1.0, 0.0, hermite_coeffs(n));
            for m in 0..=10usize {
                let hm = QuasiPolynomial::new(1.0, 0.0, hermite_coeffs(m));
                let got = product_integral(&hn, &hm, f64::NEG_INFINITY, f64::INFINITY).unwrap();
                let norm = 2f64.powi(n as i32) * fact * PI.sqrt();
                let want = if m == n { norm } else { 0.0 };
                assert!((got - want).abs() <= 1e-8 * norm, "m={m} n={n}: {got}");
            }
        }
    }

    // x = xi^2 turns int L_m L_n x^a e^-x dx into a Gaussian integral in xi.
    #[test]
    fn laguerre_orthogonality() {
        for alpha in [0.5, 1.5, 3.0] {
            let lag = |n: usize| {
                let c = laguerre_coeffs(n, alpha);
                let mut even = vec![0.0; 2 * c.len() - 1];
                for (j, v) in c.iter().enumerate() {
                    even[2 * j] = *v;
                }
                QuasiPolynomial::new(1.0, alpha + 0.5, even)
            };
            for n in 0..=8usize {
                for m in 0..=8usize {
                    let got = 2.0 * product_integral(&lag(n), &lag(m), 0.0, f64::INFINITY).unwrap();
                    let mut fact = 1.0;
                    for j in 1..=n {
                        fact *= j as f64;
                    }
                    let norm = gamma_fn(n as f64 + alpha + 1.0).unwrap() / fact;
                    let want = if m == n { norm } else { 0.0 };
                    assert!(
                        (got - want).abs() <= 1e-8 * norm,
                        "a={alpha} m={m} n={n}: {got}"
                    );
                }
            }
        }
    }
}
