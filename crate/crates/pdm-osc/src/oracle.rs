//! Independent numeric routes used to cross-check every closed form in the
//! crate: a finite-difference solver for the mapped constant-mass problem
//! and stencil-plus-quadrature expectation values.
//!
//! Nothing here evaluates a closed-form eigenfunction, energy, or moment.
//! The solver discretizes -(hbar^2/2m0) d^2/du^2 + U(u) on the canonical
//! coordinate u = x_gamma, where the deformed oscillator becomes a Morse
//! well U = W (e^{gamma u} - 1)^2 and the supersymmetric partner picks up
//! the extra term hbar omega0 e^{gamma u}. Eigenvalues of the base variant
//! are the model energies E_n directly; the partner variant's sit at
//! E_{n+1} in the same units.

use num_complex::Complex64;

use crate::classical::morse_params;
use crate::error::{Error, Result};
use crate::grid::{deformed_derivative, Coordinate, DensityConvention, Grid, WaveFn};
use crate::params::ModelParams;
use crate::spectrum::{EnergySource, SpectrumEntry};
use crate::tridiag::tridiag_lowest_eigen_with_vectors;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorseVariant {
    /// U = W (e^{gamma u} - 1)^2, eigenvalues E_n.
    Base,
    /// U = W (e^{gamma u} - 1)^2 + hbar omega0 e^{gamma u}, eigenvalues E_{n+1}.
    PartnerMinus,
}

/// Finite-difference discretization parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    pub l_left: f64,
    pub l_right: f64,
    pub n_points: usize,
    pub k_states: usize,
}

impl FdConfig {
    pub fn new(l_left: f64, l_right: f64, n_points: usize, k_states: usize) -> Result<Self> {
        if !(l_left > 0.0) || !(l_right > 0.0) || !l_left.is_finite() || !l_right.is_finite() {
            return Err(Error::domain("box half-widths must be positive and finite"));
        }
        if n_points < 201 || n_points % 2 == 0 {
            return Err(Error::domain(format!(
                "n_points = {n_points} must be odd and at least 201"
            )));
        }
        if k_states == 0 {
            return Err(Error::domain("at least one state must be requested"));
        }
        Ok(FdConfig { l_left, l_right, n_points, k_states })
    }

    /// Box and resolution that hold every bound state of the tested
    /// deformations to better than the discretization error itself.
    pub fn reference(params: &ModelParams) -> Self {
        let s0 = params.sigma0();
        FdConfig { l_left: 45.0 * s0, l_right: 16.0 * s0, n_points: 8001, k_states: 6 }
    }

    fn refined(&self) -> Self {
        FdConfig { n_points: 2 * self.n_points - 1, ..*self }
    }
}

/// Output of the finite-difference solve: bound eigenvalues below the
/// left plateau of the well, with box eigenvectors on the u grid.
#[derive(Debug, Clone)]
pub struct FdSolution {
    pub spectrum: Vec<SpectrumEntry>,
    pub variant: MorseVariant,
    /// Asymptotic potential value used as the bound/continuum cut.
    pub plateau: f64,
    /// True when fewer bound states exist than were requested.
    pub truncated: bool,
    grid: Grid,
    vectors: Vec<Vec<f64>>,
}

impl FdSolution {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Box eigenvector k on the u grid, continuum-normalized.
    pub fn eigenvector(&self, k: usize) -> Option<&[f64]> {
        self.vectors.get(k).map(|v| v.as_slice())
    }

    /// Eigenvector k as a position-space state: psi = phi e^{-gamma u / 2}
    /// in the PSI convention on the same u grid.
    pub fn psi_wavefn(&self, k: usize, params: &ModelParams) -> Result<WaveFn> {
        let phi = self
            .vectors
            .get(k)
            .ok_or_else(|| Error::domain(format!("no bound eigenvector {k} in this solve")))?;
        let g = params.gamma();
        let values: Vec<Complex64> = self
            .grid
            .points()
            .iter()
            .zip(phi.iter())
            .map(|(u, v)| Complex64::new(v * (-0.5 * g * u).exp(), 0.0))
            .collect();
        WaveFn::new(self.grid.clone(), values, DensityConvention::Psi)?.normalized(params)
    }
}

fn potential(params: &ModelParams, variant: MorseVariant, w: f64, u: f64) -> f64 {
    let e = (params.gamma() * u).exp();
    let base = w * (e - 1.0) * (e - 1.0);
    match variant {
        MorseVariant::Base => base,
        MorseVariant::PartnerMinus => base + params.hbar() * params.omega0() * e,
    }
}

/// Solve the mapped problem with the 3-point Laplacian on a uniform u grid
/// and Dirichlet walls. Eigenvalues above the left plateau of the well are
/// box artifacts and are dropped; if that leaves fewer states than asked
/// for, the result is flagged truncated.
pub fn solve_morse_fd(
    params: &ModelParams,
    variant: MorseVariant,
    cfg: &FdConfig,
) -> Result<FdSolution> {
    FdConfig::new(cfg.l_left, cfg.l_right, cfg.n_points, cfg.k_states)?;
    if params.gamma() == 0.0 {
        return Err(Error::domain(
            "the Morse oracle needs gamma > 0; at gamma = 0 compare with the harmonic ladder",
        ));
    }
    let w = morse_params(params)?.w_gamma;
    let grid = Grid::uniform(Coordinate::XGamma, -cfg.l_left, cfg.l_right, cfg.n_points)?;
    let h = grid.spacing().expect("uniform by construction");
    let kin = params.hbar() * params.hbar() / (params.m0() * h * h);
    let diag: Vec<f64> = grid
        .points()
        .iter()
        .map(|&u| kin + potential(params, variant, w, u))
        .collect();
    let off = vec![-0.5 * kin; cfg.n_points - 1];
    let (vals, vecs) = tridiag_lowest_eigen_with_vectors(&diag, &off, cfg.k_states)?;

    let bound = vals.iter().take_while(|&&e| e < w).count();
    let truncated = bound < cfg.k_states;
    let spectrum = vals[..bound]
        .iter()
        .enumerate()
        .map(|(n, &energy)| SpectrumEntry { n, energy, source: EnergySource::Oracle })
        .collect();
    let vectors = vecs
        .into_iter()
        .take(bound)
        .map(|v| continuum_normalize(v, h))
        .collect();
    Ok(FdSolution { spectrum, variant, plateau: w, truncated, grid, vectors })
}

/// Scale a box vector so trapezoid integration of |phi|^2 du gives one,
/// with a deterministic sign: the largest-magnitude component is positive.
fn continuum_normalize(mut v: Vec<f64>, h: f64) -> Vec<f64> {
    let mut sq = 0.0;
    let mut peak = 0.0f64;
    let mut peak_sign = 1.0;
    let n = v.len();
    for (i, &vi) in v.iter().enumerate() {
        let wgt = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        sq += wgt * vi * vi;
        if vi.abs() > peak {
            peak = vi.abs();
            peak_sign = vi.signum();
        }
    }
    let scale = peak_sign / (h * sq).sqrt();
    for vi in v.iter_mut() {
        *vi *= scale;
    }
    v
}

/// One step of h^2 Richardson extrapolation: solve at n_points and at
/// 2 n_points - 1, combine as (4 E_fine - E_coarse) / 3. Only levels bound
/// in both solves are returned.
pub fn solve_morse_fd_richardson(
    params: &ModelParams,
    variant: MorseVariant,
    cfg: &FdConfig,
) -> Result<Vec<SpectrumEntry>> {
    let coarse = solve_morse_fd(params, variant, cfg)?;
    let fine = solve_morse_fd(params, variant, &cfg.refined())?;
    let k = coarse.spectrum.len().min(fine.spectrum.len());
    Ok((0..k)
        .map(|n| SpectrumEntry {
            n,
            energy: (4.0 * fine.spectrum[n].energy - coarse.spectrum[n].energy) / 3.0,
            source: EnergySource::Oracle,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    X,
    X2,
    Pi,
    Pi2,
    P,
    P2,
}

/// Symmetrized deformed momentum applied by stencil:
/// Pi psi = -i hbar [ (1 + gamma x) psi' + (gamma / 2) psi ].
pub fn apply_pi(params: &ModelParams, f: &WaveFn) -> Result<WaveFn> {
    if f.convention() != DensityConvention::Psi {
        return Err(Error::domain("momentum stencils act on PSI-convention states"));
    }
    let d = deformed_derivative(f, params)?;
    let half_g = 0.5 * params.gamma();
    let mi = Complex64::new(0.0, -params.hbar());
    let values = f
        .values()
        .iter()
        .zip(d.iter())
        .map(|(v, dv)| mi * (dv + v * half_g))
        .collect();
    WaveFn::new(f.grid().clone(), values, DensityConvention::Psi)
}

/// Full Hamiltonian applied by stencils: Hf = Pi^2 f / 2 m0 + (m0 omega0^2
/// x^2 / 2) f. The kinetic term really is the square of the symmetrized
/// deformed momentum; no factorized or closed-form route is involved.
pub fn apply_hamiltonian(params: &ModelParams, f: &WaveFn) -> Result<WaveFn> {
    let twice = apply_pi(params, &apply_pi(params, f)?)?;
    let x = f.grid().x_values(params)?;
    let half_k = 0.5 * params.m0() * params.omega0() * params.omega0();
    let inv_2m = 1.0 / (2.0 * params.m0());
    let values = f
        .values()
        .iter()
        .zip(twice.values().iter())
        .zip(x.iter())
        .map(|((v, t), xi)| t * inv_2m + v * (half_k * xi * xi))
        .collect();
    WaveFn::new(f.grid().clone(), values, DensityConvention::Psi)
}

fn ddx_values(params: &ModelParams, f: &WaveFn) -> Result<Vec<Complex64>> {
    let d = deformed_derivative(f, params)?;
    let x = f.grid().x_values(params)?;
    let g = params.gamma();
    Ok(d.iter().zip(x.iter()).map(|(dv, xi)| dv / (1.0 + g * xi)).collect())
}

/// Expectation value of an observable in a sampled PSI-convention state,
/// computed purely from stencils and trapezoid quadrature.
pub fn expectation_quadrature(
    params: &ModelParams,
    psi: &WaveFn,
    obs: Observable,
) -> Result<f64> {
    if psi.convention() != DensityConvention::Psi {
        return Err(Error::domain("expectation route is defined for PSI-convention states"));
    }
    let wgt = psi.measure_weights(params)?;
    let norm_sq: f64 = wgt
        .iter()
        .zip(psi.values())
        .map(|(w, v)| w * v.norm_sqr())
        .sum();
    let x = psi.grid().x_values(params)?;
    let raw = match obs {
        Observable::X => wgt
            .iter()
            .zip(psi.values())
            .zip(x.iter())
            .map(|((w, v), xi)| w * v.norm_sqr() * xi)
            .sum(),
        Observable::X2 => wgt
            .iter()
            .zip(psi.values())
            .zip(x.iter())
            .map(|((w, v), xi)| w * v.norm_sqr() * xi * xi)
            .sum(),
        Observable::Pi => bilinear(&wgt, psi.values(), apply_pi(params, psi)?.values()),
        Observable::Pi2 => {
            let once = apply_pi(params, psi)?;
            bilinear(&wgt, psi.values(), apply_pi(params, &once)?.values())
        }
        Observable::P => {
            let d = ddx_values(params, psi)?;
            let vals: Vec<Complex64> =
                d.iter().map(|dv| Complex64::new(0.0, -params.hbar()) * dv).collect();
            bilinear(&wgt, psi.values(), &vals)
        }
        Observable::P2 => {
            let d1 = ddx_values(params, psi)?;
            let f1 = WaveFn::new(psi.grid().clone(), d1, DensityConvention::Psi)?;
            let d2 = ddx_values(params, &f1)?;
            let h2 = params.hbar() * params.hbar();
            let vals: Vec<Complex64> = d2.iter().map(|dv| -h2 * dv).collect();
            bilinear(&wgt, psi.values(), &vals)
        }
    };
    Ok(raw / norm_sq)
}

fn bilinear(wgt: &[f64], a: &[Complex64], b: &[Complex64]) -> f64 {
    wgt.iter()
        .zip(a.iter().zip(b.iter()))
        .map(|(w, (ai, bi))| w * (ai.conj() * bi).re)
        .sum()
}

/// <a|b> in the states' common measure. Conjugate-symmetric by
/// construction; errors when grids or conventions differ.
pub fn inner_product(params: &ModelParams, a: &WaveFn, b: &WaveFn) -> Result<Complex64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch("inner product needs a common grid".into()));
    }
    if a.convention() != b.convention() {
        return Err(Error::GridMismatch("inner product needs a common density convention".into()));
    }
    let wgt = a.measure_weights(params)?;
    Ok(wgt
        .iter()
        .zip(a.values().iter().zip(b.values().iter()))
        .map(|(w, (ai, bi))| ai.conj() * bi * *w)
        .sum())
}

/// ||a - b|| in the common measure, after grids are checked to agree.
pub fn l2_distance(params: &ModelParams, a: &WaveFn, b: &WaveFn) -> Result<f64> {
    if a.grid() != b.grid() || a.convention() != b.convention() {
        return Err(Error::GridMismatch("distance needs a common grid and convention".into()));
    }
    let wgt = a.measure_weights(params)?;
    let sq: f64 = wgt
        .iter()
        .zip(a.values().iter().zip(b.values().iter()))
        .map(|(w, (ai, bi))| w * (ai - bi).norm_sqr())
        .sum();
    Ok(sq.sqrt())
}
