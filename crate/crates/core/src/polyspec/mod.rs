//! Orthogonal polynomials, the Gamma function, quasi-polynomials
//! `p(xi) xi^s exp(-w xi^2 / 2)` and Gauss-Legendre quadrature in `xi`.

mod quadrature;
mod quasi;

pub use quadrature::{
    gauss_legendre_64, inner_product, integrate, integrate_bounded, integrate_fn, product_integral,
};
pub use quasi::QuasiPolynomial;

use crate::error::{Error, Result};

/// Physicists' Hermite polynomial by the three-term recurrence.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Laguerre polynomial `L_n^alpha(x)`.
pub fn assoc_laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients of `H_n` in ascending powers of `x`.
pub fn hermite_coeffs(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += 2.0 * c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Coefficients of `L_n^alpha` in ascending powers of `x`.
pub fn laguerre_coeffs(n: usize, alpha: f64) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![1.0 + alpha, -1.0];
    for k in 1..n {
        let kf = k as f64;
        let mut next = vec![0.0; k + 2];
        for (j, c) in cur.iter().enumerate() {
            next[j] += (2.0 * kf + 1.0 + alpha) * c;
            next[j + 1] -= c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= (kf + alpha) * c;
        }
        for c in &mut next {
            *c /= kf + 1.0;
        }
        prev = cur;
        cur = next;
    }
    cur
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive arguments (Lanczos, g = 7).
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gamma_fn needs a positive finite argument, got {x}"
        )));
    }
    if x < 0.5 {
        return Ok(gamma_fn(x + 1.0)? / x);
    }
    let z = x - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z+1/2) e^-t split in two to stay finite up to x ~ 170
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * std::f64::consts::PI).sqrt() * half * (half * (-t).exp()) * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(0, 3.7), 1.0);
        assert_eq!(hermite(1, 0.5), 1.0);
        assert_eq!(hermite(3, 2.0), 40.0);
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(assoc_laguerre(0, 0.5, 9.0), 1.0);
        assert_eq!(assoc_laguerre(1, 0.5, 1.0), 0.5);
        assert!((assoc_laguerre(2, 0.5, 1.0) + 0.125).abs() < 1e-15);
    }

    #[test]
    fn gamma_examples() {
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma_fn(2.5).unwrap() - 1.5 * 0.5 * PI.sqrt()).abs() < 1e-14);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn gamma_against_factorials() {
        let mut f = 1.0;
        for n in 1..=40u32 {
            let g = gamma_fn(n as f64).unwrap();
            assert!((g - f).abs() <= 1e-13 * f, "n={n}");
            f *= n as f64;
        }
    }

    #[test]
    fn coefficient_arrays_match_recurrence() {
        for n in 0..=12 {
            let c = hermite_coeffs(n);
            assert_eq!(c.len(), n + 1);
            for x in [-1.3, 0.2, 2.1] {
                let v: f64 = c.iter().rev().fold(0.0, |acc, a| acc * x + a);
                let want = hermite(n, x);
                assert!((v - want).abs() <= 1e-12 * (1.0 + want.abs()));
            }
            let c = laguerre_coeffs(n, 1.5);
            for x in [0.1, 1.0, 4.5] {
                let v: f64 = c.iter().rev().fold(0.0, |acc, a| acc * x + a);
                let size: f64 = c.iter().rev().fold(0.0, |acc, a| acc * x + a.abs());
                let want = assoc_laguerre(n, 1.5, x);
                assert!((v - want).abs() <= 1e-14 * size);
            }
        }
        assert_eq!(hermite_coeffs(2), vec![-2.0, 0.0, 4.0]);
    }
}
