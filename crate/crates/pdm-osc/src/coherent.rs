//! Annihilation-operator coherent states of the deformed oscillator, their
//! moments and uncertainty structure, and exact time evolution of the state
//! label through the deformed phase.
//!
//! The state with label alpha has, for gamma > 0, the Gamma-type density
//! |psi|^2 ~ e^{-z} z^{lambda_cs - 1} with lambda_cs = 2s(1 + sqrt(2)
//! gamma sigma0 Re alpha) - 1; normalizability demands lambda_cs > 0.
//! Evolution rotates the label, alpha(t) = |alpha| e^{-i Theta(t)}, where
//! Theta solves the same phase equation as the classical orbit with the
//! quantum-shifted amplitude A_cs = A / (1 - gamma^2 sigma0^2 / 2).

use num_complex::Complex64;

use crate::classical::unwrap_phase;
use crate::error::{Error, Result};
use crate::grid::{Coordinate, DensityConvention, Grid, WaveFn};
use crate::params::ModelParams;
use crate::special::ln_gamma;
use crate::spectrum::energy;

#[derive(Debug, Clone, Copy)]
pub struct CoherentState {
    alpha: Complex64,
    params: ModelParams,
}

impl CoherentState {
    pub fn new(params: ModelParams, alpha: Complex64) -> Result<Self> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::domain("coherent label must be finite"));
        }
        let state = CoherentState { alpha, params };
        if params.gamma() > 0.0 {
            let lam = state.lambda_cs()?;
            if lam <= 0.0 {
                return Err(Error::domain(format!(
                    "coherent state alpha = {alpha} is not normalizable (lambda_cs = {lam} <= 0)"
                )));
            }
        }
        Ok(state)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Shape parameter of the position density, 2s(1 + sqrt2 gamma sigma0 Re alpha) - 1.
    pub fn lambda_cs(&self) -> Result<f64> {
        let s = self.params.s()?;
        let g = self.params.gtilde();
        Ok(2.0 * s * (1.0 + std::f64::consts::SQRT_2 * g * self.alpha.re) - 1.0)
    }

    /// Classical amplitude carried by the label, A = sqrt2 sigma0 |alpha|.
    pub fn amplitude(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.params.sigma0() * self.alpha.norm()
    }
}

/// Evolution window starting at t0 = 0 with a uniform time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub t0: f64,
    pub t_end: f64,
    pub samples: usize,
}

impl EvolutionConfig {
    pub fn new(t_end: f64, samples: usize) -> Result<Self> {
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::domain("evolution needs t_end > t0 = 0"));
        }
        if samples < 2 {
            return Err(Error::domain("evolution needs at least two samples"));
        }
        Ok(EvolutionConfig { t0: 0.0, t_end, samples })
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = (self.t_end - self.t0) / (self.samples - 1) as f64;
        (0..self.samples).map(|i| self.t0 + i as f64 * dt).collect()
    }
}

/// psi_cs(x): the exact annihilation-operator eigenstate. For gamma > 0 it
/// is N_cs sqrt(2s) e^{-z/2} z^mu with a complex exponent mu carrying the
/// label; at gamma = 0 it is the displaced Gaussian.
pub fn coherent_wavefunction(state: &CoherentState, x: f64) -> Result<Complex64> {
    let p = state.params();
    let s0 = p.sigma0();
    if p.gamma() == 0.0 {
        let re = state.alpha().re;
        let ln_pref = -0.25 * (std::f64::consts::PI * s0 * s0).ln() - re * re;
        let y = x / s0;
        let expo = Complex64::new(ln_pref - 0.5 * y * y, 0.0)
            + state.alpha() * (std::f64::consts::SQRT_2 * y);
        return Ok(expo.exp());
    }
    let w = 1.0 + p.gamma() * x;
    if w <= 0.0 {
        return Err(Error::domain(format!(
            "x = {x} is outside the configuration space (need 1 + gamma x > 0)"
        )));
    }
    let s = p.s()?;
    let lam = state.lambda_cs()?;
    if lam <= 0.0 {
        return Err(Error::domain(format!("state is not normalizable (lambda_cs = {lam})")));
    }
    let z = 2.0 * s * w;
    // mu = sqrt2 alpha / (gamma sigma0) + s - 1; Re mu = (lambda_cs - 1)/2.
    let mu = state.alpha() * (std::f64::consts::SQRT_2 / (p.gamma() * s0)) + (s - 1.0);
    let ln_pref = 0.5 * (p.gamma().ln() - ln_gamma(lam)?) + 0.5 * (2.0 * s).ln();
    let expo = Complex64::new(ln_pref - 0.5 * z, 0.0) + mu * z.ln();
    Ok(expo.exp())
}

/// The coherent state sampled on a grid, PSI convention.
pub fn coherent_wavefn(state: &CoherentState, grid: &Grid) -> Result<WaveFn> {
    let values = grid
        .x_values(state.params())?
        .iter()
        .map(|&xi| coherent_wavefunction(state, xi))
        .collect::<Result<Vec<_>>>()?;
    WaveFn::new(grid.clone(), values, DensityConvention::Psi)
}

/// Displacement-constructed state: exp(sqrt2 alpha u / sigma0) psi_0(x)
/// with u the canonical coordinate, left unnormalized here. Up to a
/// constant complex factor this is the annihilation eigenstate.
pub fn perelomov_wavefunction(state: &CoherentState, x: f64) -> Result<Complex64> {
    let p = state.params();
    let g = p.gamma();
    let u = if g == 0.0 {
        x
    } else {
        let w = 1.0 + g * x;
        if w <= 0.0 {
            return Err(Error::domain(format!(
                "x = {x} is outside the configuration space (need 1 + gamma x > 0)"
            )));
        }
        w.ln() / g
    };
    let ground = crate::spectrum::eigenfunction_point(p, 0, x)?;
    let factor = (state.alpha() * (std::f64::consts::SQRT_2 * u / p.sigma0())).exp();
    Ok(factor * ground)
}

/// Perelomov state sampled and normalized numerically on the grid.
pub fn perelomov_wavefn(state: &CoherentState, grid: &Grid) -> Result<WaveFn> {
    let values = grid
        .x_values(state.params())?
        .iter()
        .map(|&xi| perelomov_wavefunction(state, xi))
        .collect::<Result<Vec<_>>>()?;
    WaveFn::new(grid.clone(), values, DensityConvention::Psi)?.normalized(state.params())
}

/// Closed-form first and second moments of x and Pi_gamma in the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentMoments {
    pub x_mean: f64,
    pub x2_mean: f64,
    pub pi_mean: f64,
    pub pi2_mean: f64,
}

impl CoherentMoments {
    pub fn x_variance(&self) -> f64 {
        self.x2_mean - self.x_mean * self.x_mean
    }

    pub fn pi_variance(&self) -> f64 {
        self.pi2_mean - self.pi_mean * self.pi_mean
    }
}

pub fn coherent_moments(state: &CoherentState) -> Result<CoherentMoments> {
    let p = state.params();
    if p.gamma() > 0.0 && state.lambda_cs()? <= 0.0 {
        return Err(Error::domain("state is not normalizable"));
    }
    let s0 = p.sigma0();
    let g = p.gamma();
    let gt = p.gtilde();
    let hbar = p.hbar();
    let two_re = 2.0 * state.alpha().re;
    let two_im = 2.0 * state.alpha().im;
    let x_mean = s0 / std::f64::consts::SQRT_2 * two_re - 0.5 * g * s0 * s0;
    let x2_mean = 0.5
        * s0
        * s0
        * (1.0 + two_re * two_re - gt / std::f64::consts::SQRT_2 * two_re);
    // (alpha* - alpha) = -2i Im alpha, so i hbar (alpha* - alpha) is real.
    let pi_mean = hbar / (std::f64::consts::SQRT_2 * s0) * two_im;
    let pi2_mean = 0.5 * hbar * hbar / (s0 * s0)
        * (1.0 + two_im * two_im + gt / std::f64::consts::SQRT_2 * two_re - 0.5 * gt * gt);
    Ok(CoherentMoments { x_mean, x2_mean, pi_mean, pi2_mean })
}

/// Closed-form moments of the plain momentum p: rational expressions whose
/// denominators must stay positive for the state to lie in the validity
/// region.
pub fn coherent_p_moments(state: &CoherentState) -> Result<(f64, f64)> {
    let p = state.params();
    if p.gamma() > 0.0 && state.lambda_cs()? <= 0.0 {
        return Err(Error::domain("state is not normalizable"));
    }
    let s0 = p.sigma0();
    let gt = p.gtilde();
    let hbar = p.hbar();
    let two_re = 2.0 * state.alpha().re;
    let two_im = 2.0 * state.alpha().im;
    let den1 = 1.0 + gt / std::f64::consts::SQRT_2 * two_re - gt * gt;
    let den2 = 1.0 + gt / std::f64::consts::SQRT_2 * two_re - 1.5 * gt * gt;
    if den1 <= 0.0 || den2 <= 0.0 {
        return Err(Error::domain(format!(
            "momentum moments undefined here (denominators {den1}, {den2} must be positive)"
        )));
    }
    let ep = hbar / (std::f64::consts::SQRT_2 * s0) * two_im / den1;
    // (alpha* - alpha)^2 = -(2 Im alpha)^2.
    let ep2 = 0.5 * hbar * hbar / (s0 * s0) * (1.0 + two_im * two_im / den1) / den2;
    Ok((ep, ep2))
}

fn omega_and_kappa(params: &ModelParams, amp: f64) -> Result<(f64, f64)> {
    let gt = p_gt(params);
    let shrink = 1.0 - 0.5 * gt * gt;
    if shrink <= 0.0 {
        return Err(Error::regime(format!(
            "deformation gamma sigma0 = {gt} is too strong for coherent evolution"
        )));
    }
    let ga = params.gamma() * amp;
    if ga >= shrink {
        return Err(Error::regime(format!(
            "label amplitude leaves the oscillatory regime (gamma A = {ga} >= {shrink})"
        )));
    }
    let omega = params.omega0() * (shrink * shrink - ga * ga).sqrt();
    let a_cs = amp / shrink;
    let kappa = ((1.0 + params.gamma() * a_cs) / (1.0 - params.gamma() * a_cs)).sqrt();
    Ok((omega, kappa))
}

fn p_gt(params: &ModelParams) -> f64 {
    params.gtilde()
}

/// Angular frequency of the coherent phase,
/// Omega_cs = omega0 sqrt((1 - gamma^2 sigma0^2 / 2)^2 - gamma^2 A^2).
pub fn coherent_frequency(params: &ModelParams, alpha_abs: f64) -> Result<f64> {
    let amp = std::f64::consts::SQRT_2 * params.sigma0() * alpha_abs.abs();
    Ok(omega_and_kappa(params, amp)?.0)
}

/// Theta_gamma(t) with Theta(theta0 at t = 0): the same continuous
/// unwrapping as the classical phase, at the quantum-shifted amplitude.
fn phase_from(params: &ModelParams, alpha_abs: f64, theta0: f64, t: f64) -> Result<f64> {
    let amp = std::f64::consts::SQRT_2 * params.sigma0() * alpha_abs.abs();
    let (omega, kappa) = omega_and_kappa(params, amp)?;
    let v = 0.5 * theta0;
    let k0 = (v / std::f64::consts::PI).round();
    let u0 = ((v - k0 * std::f64::consts::PI).tan() / kappa).atan() + k0 * std::f64::consts::PI;
    Ok(unwrap_phase(kappa, u0 + 0.5 * omega * t))
}

/// Coherent phase with Theta(0) = 0.
pub fn coherent_phase(params: &ModelParams, alpha_abs: f64, t: f64) -> Result<f64> {
    if alpha_abs < 0.0 {
        return Err(Error::domain("label magnitude must be nonnegative"));
    }
    phase_from(params, alpha_abs, 0.0, t)
}

#[derive(Debug, Clone, Copy)]
pub struct EvolutionSample {
    pub t: f64,
    pub state: CoherentState,
    /// Accumulated phase -E0 (t - t0) / hbar; it never affects densities.
    pub global_phase: f64,
}

/// Exact evolution of the label: alpha(t) = |alpha| e^{-i Theta(t)} with
/// Theta continuing from the initial arg, plus the ground-state global
/// phase. The magnitude |alpha| is conserved identically.
pub fn evolve(state0: &CoherentState, cfg: &EvolutionConfig) -> Result<Vec<EvolutionSample>> {
    let p = *state0.params();
    let a0 = state0.alpha();
    let mag = a0.norm();
    let theta0 = -a0.arg();
    let e0 = energy(&p, 0)?;
    cfg.times()
        .iter()
        .map(|&t| {
            let theta = phase_from(&p, mag, theta0, t - cfg.t0)?;
            let alpha = Complex64::from_polar(mag, -theta);
            Ok(EvolutionSample {
                t,
                state: CoherentState::new(p, alpha)?,
                global_phase: -e0 * (t - cfg.t0) / p.hbar(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub x_mean: f64,
    pub pi_mean: f64,
    pub p_mean: f64,
}

/// Closed-form quantum trajectory of the expectation values:
/// <x> = A cos Theta - gamma sigma0^2 / 2, <Pi> = -m0 omega0 A sin Theta,
/// <p> = <Pi> / (1 + gamma A cos Theta - gamma^2 sigma0^2).
pub fn expected_trajectory(
    params: &ModelParams,
    alpha_abs: f64,
    t: f64,
) -> Result<TrajectoryPoint> {
    let theta = coherent_phase(params, alpha_abs, t)?;
    let s0 = params.sigma0();
    let g = params.gamma();
    let amp = std::f64::consts::SQRT_2 * s0 * alpha_abs.abs();
    let x_mean = amp * theta.cos() - 0.5 * g * s0 * s0;
    let pi_mean = -params.m0() * params.omega0() * amp * theta.sin();
    let den = 1.0 + g * amp * theta.cos() - g * g * s0 * s0;
    if den <= 0.0 {
        return Err(Error::domain(format!(
            "momentum expectation undefined here (denominator {den} must be positive)"
        )));
    }
    Ok(TrajectoryPoint { x_mean, pi_mean, p_mean: pi_mean / den })
}

/// Position density rho(x, t) = |psi_cs(x; alpha(t))|^2 in its closed Gamma
/// form, sampled over the evolution window on an X grid.
pub fn density_evolution(
    state0: &CoherentState,
    cfg: &EvolutionConfig,
    grid: &Grid,
) -> Result<Vec<Vec<f64>>> {
    if grid.coordinate() != Coordinate::X {
        return Err(Error::domain("density snapshots are defined on an X grid"));
    }
    let p = state0.params();
    let g = p.gamma();
    if g > 0.0 && grid.points()[0] * g <= -1.0 {
        return Err(Error::domain("grid reaches past the mass wall x = -1/gamma"));
    }
    let samples = evolve(state0, cfg)?;
    let mut out = Vec::with_capacity(samples.len());
    for sample in &samples {
        let row = if g == 0.0 {
            let s0 = p.sigma0();
            let center = std::f64::consts::SQRT_2 * s0 * sample.state.alpha().re;
            grid.points()
                .iter()
                .map(|&x| {
                    let y = (x - center) / s0;
                    (-y * y).exp() / (s0 * std::f64::consts::PI.sqrt())
                })
                .collect()
        } else {
            let s = p.s()?;
            let lam = sample.state.lambda_cs()?;
            let ln_pref = (2.0 / (g * p.sigma0() * p.sigma0())).ln() - ln_gamma(lam)?;
            grid.points()
                .iter()
                .map(|&x| {
                    let z = 2.0 * s * (1.0 + g * x);
                    (ln_pref - z + (lam - 1.0) * z.ln()).exp()
                })
                .collect()
        };
        out.push(row);
    }
    Ok(out)
}

/// One cell of the uncertainty surface over the label plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GupCell {
    pub alpha: Complex64,
    /// None marks a label outside the validity region (non-normalizable
    /// state or momentum denominators of the wrong sign).
    pub values: Option<GupValues>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GupValues {
    pub dx: f64,
    pub dp: f64,
    pub product: f64,
}

/// Uncertainty surfaces (Delta x, Delta p, product) on a resolution x
/// resolution grid of labels. Cells where any closed form loses meaning
/// are flagged, never dropped.
pub fn gup_surface(
    params: &ModelParams,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: usize,
) -> Result<Vec<GupCell>> {
    if resolution < 2 {
        return Err(Error::domain("surface needs at least a 2 x 2 grid"));
    }
    if !(re_range.0 < re_range.1) || !(im_range.0 < im_range.1) {
        return Err(Error::domain("label ranges must be nonempty intervals"));
    }
    let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (resolution - 1) as f64;
    let mut cells = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let im = step(im_range.0, im_range.1, i);
        for j in 0..resolution {
            let re = step(re_range.0, re_range.1, j);
            let alpha = Complex64::new(re, im);
            cells.push(GupCell { alpha, values: cell_values(params, alpha) });
        }
    }
    Ok(cells)
}

fn cell_values(params: &ModelParams, alpha: Complex64) -> Option<GupValues> {
    let state = CoherentState::new(*params, alpha).ok()?;
    let m = coherent_moments(&state).ok()?;
    let var_x = m.x_variance();
    if var_x < 0.0 {
        return None;
    }
    let (ep, ep2) = coherent_p_moments(&state).ok()?;
    let var_p = ep2 - ep * ep;
    if var_p < 0.0 {
        return None;
    }
    let dx = var_x.sqrt();
    let dp = var_p.sqrt();
    Some(GupValues { dx, dp, product: dx * dp })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyPoint {
    pub t: f64,
    pub dx: f64,
    pub dp: f64,
    pub dxdp: f64,
}

/// Time series of (Delta x, Delta p, product) along the evolution of the
/// real label |alpha|; at gamma = 0 all three are constants.
pub fn uncertainty_timeseries(
    params: &ModelParams,
    alpha_abs: f64,
    cfg: &EvolutionConfig,
) -> Result<Vec<UncertaintyPoint>> {
    let state0 = CoherentState::new(*params, Complex64::new(alpha_abs, 0.0))?;
    evolve(&state0, cfg)?
        .iter()
        .map(|sample| {
            let m = coherent_moments(&sample.state)?;
            let (ep, ep2) = coherent_p_moments(&sample.state)?;
            let var_x = m.x_variance();
            let var_p = ep2 - ep * ep;
            if var_x < 0.0 || var_p < 0.0 {
                return Err(Error::domain(format!(
                    "uncertainty radicand went negative at t = {}",
                    sample.t
                )));
            }
            let dx = var_x.sqrt();
            let dp = var_p.sqrt();
            Ok(UncertaintyPoint { t: sample.t, dx, dp, dxdp: dx * dp })
        })
        .collect()
}
