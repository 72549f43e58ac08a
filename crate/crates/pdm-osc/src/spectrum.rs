//! Closed-form bound-state spectrum and eigenfunctions of the quantum
//! deformed oscillator, with their exact moments.
//!
//! The Hamiltonian orders the kinetic term symmetrically in the mass
//! profile (ambiguity parameters 1/4, 1/2, 1/4); bound levels exist for
//! nu_n = 2s - 2n - 1 > 0 with s = 1 / (gamma sigma0)^2, so the spectrum
//! is finite for any gamma > 0 and reduces to the harmonic ladder at
//! gamma = 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{DensityConvention, Grid, WaveFn};
use crate::params::ModelParams;
use crate::special::{assoc_laguerre, hermite, ln_gamma};

/// Which route produced an energy value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergySource {
    Analytic,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub n: usize,
    pub energy: f64,
    pub source: EnergySource,
}

/// Closed-form spectrum for levels 0..=n_hi, truncated to the bound range.
pub fn spectrum_table(params: &ModelParams, n_hi: usize) -> Result<Vec<SpectrumEntry>> {
    let top = max_bound_index(params)?.max_or(n_hi).min(n_hi);
    (0..=top)
        .map(|n| {
            Ok(SpectrumEntry { n, energy: energy(params, n)?, source: EnergySource::Analytic })
        })
        .collect()
}

/// How many bound levels the model holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundLevels {
    /// gamma = 0: the full harmonic ladder.
    Infinite,
    /// gamma > 0: levels n = 0..=max.
    Finite(usize),
}

impl BoundLevels {
    pub fn contains(&self, n: usize) -> bool {
        match self {
            BoundLevels::Infinite => true,
            BoundLevels::Finite(max) => n <= *max,
        }
    }

    pub fn max_or(&self, fallback: usize) -> usize {
        match self {
            BoundLevels::Infinite => fallback,
            BoundLevels::Finite(max) => *max,
        }
    }
}

/// Largest bound index, or the fact that all levels are bound (gamma = 0).
/// Errors when even the ground state fails nu_0 = 2s - 1 > 0.
pub fn max_bound_index(params: &ModelParams) -> Result<BoundLevels> {
    if params.gamma() == 0.0 {
        return Ok(BoundLevels::Infinite);
    }
    let s = params.s()?;
    if 2.0 * s - 1.0 <= 0.0 {
        return Err(Error::NoBoundStates { two_s_minus_one: 2.0 * s - 1.0 });
    }
    // Largest n with 2s - 2n - 1 > 0, strictly.
    let max = ((s - 0.5).ceil() - 1.0) as usize;
    debug_assert!(2.0 * s - 2.0 * max as f64 - 1.0 > 0.0);
    Ok(BoundLevels::Finite(max))
}

fn check_level(params: &ModelParams, n: usize) -> Result<()> {
    match max_bound_index(params)? {
        BoundLevels::Infinite => Ok(()),
        BoundLevels::Finite(max) if n <= max => Ok(()),
        BoundLevels::Finite(max) => Err(Error::BoundIndex { n, max }),
    }
}

/// nu_n = 2s - 2n - 1, the Laguerre parameter of level n.
pub(crate) fn nu(params: &ModelParams, n: usize) -> Result<f64> {
    check_level(params, n)?;
    let s = params.s()?;
    Ok(2.0 * s - 2.0 * n as f64 - 1.0)
}

/// E_n = hbar omega0 (n + 1/2) - (hbar^2 gamma^2 / 2 m0) (n + 1/2)^2.
pub fn energy(params: &ModelParams, n: usize) -> Result<f64> {
    check_level(params, n)?;
    let nh = n as f64 + 0.5;
    let hw = params.hbar() * params.omega0();
    let g = params.gtilde();
    Ok(hw * nh * (1.0 - 0.5 * g * g * nh))
}

/// Normalized bound eigenfunction sampled on `grid`, in the PSI convention
/// (|psi|^2 integrates to one in dx). Points at or below the mass wall
/// x = -1/gamma evaluate to exactly zero.
pub fn eigenfunction(params: &ModelParams, n: usize, grid: &Grid) -> Result<WaveFn> {
    check_level(params, n)?;
    let x = grid.x_values(params)?;
    let values = if params.gamma() == 0.0 {
        hermite_values(params, n, &x)
    } else {
        deformed_values(params, n, &x)?
    };
    WaveFn::new(grid.clone(), values, DensityConvention::Psi)
}

/// Normalized bound eigenfunction at a single point.
pub fn eigenfunction_point(params: &ModelParams, n: usize, x: f64) -> Result<Complex64> {
    check_level(params, n)?;
    let values = if params.gamma() == 0.0 {
        hermite_values(params, n, &[x])
    } else {
        deformed_values(params, n, &[x])?
    };
    Ok(values[0])
}

fn deformed_values(params: &ModelParams, n: usize, x: &[f64]) -> Result<Vec<Complex64>> {
    let s = params.s()?;
    let g = params.gamma();
    let nu_n = nu(params, n)?;
    // N_n^2 = nu_n gamma n! / Gamma(nu_n + n + 1); carry everything in logs.
    let ln_norm2 =
        nu_n.ln() + g.ln() + ln_gamma(n as f64 + 1.0)? - ln_gamma(nu_n + n as f64 + 1.0)?;
    let ln_pref = 0.5 * ln_norm2 + 0.5 * (2.0 * s).ln();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let values = x
        .iter()
        .map(|&xi| {
            let w = 1.0 + g * xi;
            if w <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let z = 2.0 * s * w;
            let ln_mag = ln_pref - 0.5 * z + 0.5 * (nu_n - 1.0) * z.ln();
            let lag = assoc_laguerre(n, nu_n, z);
            Complex64::new(sign * lag * ln_mag.exp(), 0.0)
        })
        .collect();
    Ok(values)
}

fn hermite_values(params: &ModelParams, n: usize, x: &[f64]) -> Vec<Complex64> {
    let s0 = params.sigma0();
    // (2^n n! sqrt(pi) sigma0)^{-1/2}, positive leading coefficient.
    let ln_pref = -0.5
        * (n as f64 * std::f64::consts::LN_2
            + ln_gamma(n as f64 + 1.0).expect("n + 1 is positive")
            + 0.5 * std::f64::consts::PI.ln()
            + s0.ln());
    x.iter()
        .map(|&xi| {
            let y = xi / s0;
            Complex64::new((ln_pref - 0.5 * y * y).exp() * hermite(n, y), 0.0)
        })
        .collect()
}

/// Ground-state probability density |psi_0(x)|^2 in closed form: a Gamma
/// density in z = 2s (1 + gamma x) of shape lambda = 2s - 1, reducing to
/// the Gaussian of width sigma0/sqrt(2) at gamma = 0.
pub fn ground_density(params: &ModelParams, x: f64) -> Result<f64> {
    max_bound_index(params)?;
    let s0 = params.sigma0();
    if params.gamma() == 0.0 {
        let y = x / s0;
        return Ok((-y * y).exp() / (s0 * std::f64::consts::PI.sqrt()));
    }
    let g = params.gamma();
    let w = 1.0 + g * x;
    if w <= 0.0 {
        return Ok(0.0);
    }
    let s = params.s()?;
    let z = 2.0 * s * w;
    let lambda = 2.0 * s - 1.0;
    let ln_rho = (2.0 / (g * s0 * s0)).ln() - ln_gamma(lambda)? - z + (lambda - 1.0) * z.ln();
    Ok(ln_rho.exp())
}

/// Closed-form first and second moments of position and of the deformed
/// momentum Pi_gamma = (1 + gamma x) p in level n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub x_mean: f64,
    pub x2_mean: f64,
    pub pi_mean: f64,
    pub pi2_mean: f64,
}

pub fn moments(params: &ModelParams, n: usize) -> Result<Moments> {
    check_level(params, n)?;
    let nh = n as f64 + 0.5;
    let s0 = params.sigma0();
    let g = params.gamma();
    let hbar = params.hbar();
    Ok(Moments {
        x_mean: -g * s0 * s0 * nh,
        x2_mean: s0 * s0 * nh,
        pi_mean: 0.0,
        pi2_mean: (hbar * hbar / (s0 * s0)) * nh * (1.0 - g * g * s0 * s0 * nh),
    })
}

/// Delta x Delta Pi_gamma = hbar (n + 1/2) [1 - gamma^2 sigma0^2 (n + 1/2)].
pub fn uncertainty_product(params: &ModelParams, n: usize) -> Result<f64> {
    let m = moments(params, n)?;
    let var_x = m.x2_mean - m.x_mean * m.x_mean;
    let var_pi = m.pi2_mean - m.pi_mean * m.pi_mean;
    Ok((var_x * var_pi).sqrt())
}

/// Expectation of the deformed number operator in level n:
/// n [1 - (gamma^2 sigma0^2 / 2) (n + 1)].
pub fn number_expectation(params: &ModelParams, n: usize) -> Result<f64> {
    check_level(params, n)?;
    let g = params.gtilde();
    Ok(n as f64 * (1.0 - 0.5 * g * g * (n as f64 + 1.0)))
}
