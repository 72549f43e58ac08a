//! Composite Gauss-Legendre quadrature with a fixed 16-node rule per panel.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const NODES: usize = 16;

/// Nodes and weights of the 16-point rule on [-1, 1], computed once by
/// Newton iteration on P_16 (initial guesses cos(pi (i + 3/4)/(n + 1/2))).
fn rule_16() -> &'static ([f64; NODES], [f64; NODES]) {
    static RULE: OnceLock<([f64; NODES], [f64; NODES])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = NODES;
        // Legendre recurrence for (P_n(x), P'_n(x)).
        let legendre = |x: f64| {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
        };
        let mut nodes = [0.0; NODES];
        let mut weights = [0.0; NODES];
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            // One extra Newton step pins the root at machine precision.
            let (p, dp) = legendre(x);
            x -= p / dp;
            let (_, dp) = legendre(x);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

/// Composite estimate of the integral of `f` over [a, b] with `panels`
/// equal subintervals, 16 Gauss-Legendre nodes each.
pub fn quadrature<F>(f: F, a: f64, b: f64, panels: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(a < b) {
        return Err(Error::domain(format!("quadrature needs a < b, got [{a}, {b}]")));
    }
    if panels == 0 {
        return Err(Error::domain("quadrature needs at least one panel"));
    }
    let (nodes, weights) = rule_16();
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let left = a + p as f64 * h;
        let mid = left + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += f(mid + half * x) * *w;
        }
        total += acc * half;
    }
    Ok(total)
}

/// Real-valued convenience wrapper.
pub fn quadrature_real<F>(f: F, a: f64, b: f64, panels: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    Ok(quadrature(|x| Complex64::new(f(x), 0.0), a, b, panels)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_and_sine() {
        assert_relative_eq!(quadrature_real(|x| x, 0.0, 1.0, 1).unwrap(), 0.5, epsilon = 1e-15);
        let s = quadrature_real(|x| x.sin(), 0.0, std::f64::consts::PI, 2).unwrap();
        assert_relative_eq!(s, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn degree_31_is_exact() {
        // A single 16-node panel integrates x^31 on [0,1] exactly.
        let v = quadrature_real(|x| x.powi(31), 0.0, 1.0, 1).unwrap();
        assert_relative_eq!(v, 1.0 / 32.0, max_relative = 1e-14);
    }

    #[test]
    fn odd_function_cancels() {
        let v = quadrature_real(|x| x.powi(3) * (x * x).sin(), -2.0, 2.0, 8).unwrap();
        assert!(v.abs() <= 1e-14, "odd integrand left {v}");
    }

    #[test]
    fn bad_interval_rejected() {
        assert!(quadrature_real(|x| x, 1.0, 1.0, 4).is_err());
        assert!(quadrature_real(|x| x, 2.0, 1.0, 4).is_err());
        assert!(quadrature_real(|x| x, 0.0, 1.0, 0).is_err());
    }
}
