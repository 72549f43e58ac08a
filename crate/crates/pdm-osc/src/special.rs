//! Scalar special functions: log-gamma and associated Laguerre polynomials.
//!
//! Every normalization constant in the crate is a ratio of Gamma functions,
//! evaluated as a difference of `ln_gamma` values and exponentiated once, so
//! that large s = 1/(gamma sigma0)^2 (small deformation) cannot overflow.

use crate::error::{Error, Result};

/// Lanczos coefficients for g = 7, giving close to machine precision for
/// Re(x) > 0 once combined with the reflection step below 0.5.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Gamma(x) for x > 0.
///
/// Relative error stays below 1e-12 over [1e-3, 1e6] (checked against a
/// 30-digit reference in the unit tests; near the zeros of ln Gamma at
/// x = 1, 2 the bound is absolute).
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x); sin > 0 on (0,1).
        let reflected = ln_gamma_lanczos(1.0 - x);
        return Ok(std::f64::consts::PI.ln() - (std::f64::consts::PI * x).sin().ln() - reflected);
    }
    Ok(ln_gamma_lanczos(x))
}

fn ln_gamma_lanczos(x: f64) -> f64 {
    // Series in shifted form: Gamma(x) = sqrt(2 pi) t^(x-1/2) e^(-t) A(x),
    // t = x + g - 1/2.
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x - 1.0 + i as f64);
    }
    let t = x + LANCZOS_G - 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x - 0.5) * t.ln() - t + acc.ln()
}

/// Ratio Gamma(a)/Gamma(b) through one exponentiation of a log difference.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
}

/// Associated Laguerre polynomial L_n^(nu)(z) by the forward three-term
/// recurrence (n+1) L_{n+1} = (2n + 1 + nu - z) L_n - (n + nu) L_{n-1}.
///
/// Stable for the moderate degrees n <= s used by the bound spectrum.
pub fn assoc_laguerre(n: usize, nu: f64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm = 1.0;
    let mut l = 1.0 + nu - z;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + nu - z) * l - (kf + nu) * lm) / (kf + 1.0);
        lm = l;
        l = next;
    }
    l
}

/// Physicists' Hermite polynomial H_n(y), used by the gamma = 0 dispatch of
/// the spectrum module.
pub fn hermite(n: usize, y: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut hm = 1.0;
    let mut h = 2.0 * y;
    for k in 1..n {
        let next = 2.0 * y * h - 2.0 * (k as f64) * hm;
        hm = h;
        h = next;
    }
    h
}
