//! Grids, sampled wavefunctions, measures, and finite-difference stencils.
//!
//! Three coordinates appear throughout: the physical position x (domain
//! x > -1/gamma), the canonical image x_gamma = ln(1 + gamma x)/gamma, and
//! the Morse-side variable z = 2s (1 + gamma x). A sampled state carries a
//! density convention: PSI integrates |psi|^2 dx, PHI integrates |phi|^2 in
//! the deformed measure d_gamma x = dx/(1 + gamma x).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::special::ln_gamma;

pub const STENCIL_MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    X,
    XGamma,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityConvention {
    Psi,
    Phi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    coordinate: Coordinate,
    points: Vec<f64>,
}

impl Grid {
    pub fn new(coordinate: Coordinate, points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("grid needs at least two points"));
        }
        if !points.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::domain("grid points must be strictly increasing"));
        }
        if coordinate == Coordinate::Z && points[0] <= 0.0 {
            return Err(Error::domain("z-coordinate grid points must be positive"));
        }
        Ok(Grid { coordinate, points })
    }

    pub fn uniform(coordinate: Coordinate, a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a < b) {
            return Err(Error::domain(format!("grid interval [{a}, {b}] is empty")));
        }
        if n < 2 {
            return Err(Error::domain("uniform grid needs at least two points"));
        }
        let h = (b - a) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| a + i as f64 * h).collect();
        points[n - 1] = b;
        Grid::new(coordinate, points)
    }

    pub fn coordinate(&self) -> Coordinate {
        self.coordinate
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Common spacing if the grid is uniform (to 1e-9 relative), else None.
    pub fn spacing(&self) -> Option<f64> {
        let h = self.points[1] - self.points[0];
        let uniform = self
            .points
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
        uniform.then_some(h)
    }

    /// Physical positions x for every grid point.
    pub fn x_values(&self, params: &ModelParams) -> Result<Vec<f64>> {
        let g = params.gamma();
        match self.coordinate {
            Coordinate::X => Ok(self.points.clone()),
            Coordinate::XGamma => {
                if g == 0.0 {
                    Ok(self.points.clone())
                } else {
                    Ok(self.points.iter().map(|u| ((g * u).exp() - 1.0) / g).collect())
                }
            }
            Coordinate::Z => {
                let s = params.s().map_err(|_| {
                    Error::domain("z-coordinate grids are defined only for gamma > 0")
                })?;
                Ok(self.points.iter().map(|z| (z / (2.0 * s) - 1.0) / g).collect())
            }
        }
    }

    /// Trapezoid weights in the grid's own coordinate.
    pub(crate) fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.points.len();
        let mut w = vec![0.0; n];
        w[0] = 0.5 * (self.points[1] - self.points[0]);
        w[n - 1] = 0.5 * (self.points[n - 1] - self.points[n - 2]);
        for i in 1..n - 1 {
            w[i] = 0.5 * (self.points[i + 1] - self.points[i - 1]);
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFn {
    grid: Grid,
    values: Vec<Complex64>,
    convention: DensityConvention,
}

impl WaveFn {
    pub fn new(grid: Grid, values: Vec<Complex64>, convention: DensityConvention) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::GridMismatch(format!(
                "{} grid points vs {} values",
                grid.len(),
                values.len()
            )));
        }
        Ok(WaveFn { grid, values, convention })
    }

    pub fn from_real(grid: Grid, values: Vec<f64>, convention: DensityConvention) -> Result<Self> {
        let values = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        WaveFn::new(grid, values, convention)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn convention(&self) -> DensityConvention {
        self.convention
    }

    /// Integration weights turning sum(w_i |f_i|^2) into the convention's
    /// normalization integral (dx for PSI, d_gamma x for PHI), regardless of
    /// which coordinate the grid is sampled in.
    pub fn measure_weights(&self, params: &ModelParams) -> Result<Vec<f64>> {
        let g = params.gamma();
        let trap = self.grid.trapezoid_weights();
        let factor: Vec<f64> = match (self.convention, self.grid.coordinate()) {
            (DensityConvention::Psi, Coordinate::X) => vec![1.0; self.grid.len()],
            (DensityConvention::Psi, Coordinate::XGamma) => {
                // dx = e^{gamma u} du.
                self.grid.points().iter().map(|u| (g * u).exp()).collect()
            }
            (DensityConvention::Psi, Coordinate::Z) => {
                let s = params.s()?;
                vec![1.0 / (2.0 * s * g); self.grid.len()]
            }
            (DensityConvention::Phi, Coordinate::X) => {
                // d_gamma x = dx / (1 + gamma x).
                self.grid.points().iter().map(|x| 1.0 / (1.0 + g * x)).collect()
            }
            (DensityConvention::Phi, Coordinate::XGamma) => vec![1.0; self.grid.len()],
            (DensityConvention::Phi, Coordinate::Z) => {
                params.s()?;
                self.grid.points().iter().map(|z| 1.0 / (g * z)).collect()
            }
        };
        Ok(trap.iter().zip(factor.iter()).map(|(t, f)| t * f).collect())
    }

    /// L2 norm in the convention's measure.
    pub fn norm(&self, params: &ModelParams) -> Result<f64> {
        let w = self.measure_weights(params)?;
        let sq: f64 = w
            .iter()
            .zip(self.values.iter())
            .map(|(wi, v)| wi * v.norm_sqr())
            .sum();
        Ok(sq.sqrt())
    }

    pub fn normalized(mut self, params: &ModelParams) -> Result<WaveFn> {
        let n = self.norm(params)?;
        if n == 0.0 {
            return Err(Error::domain("cannot normalize the zero function"));
        }
        for v in self.values.iter_mut() {
            *v /= n;
        }
        Ok(self)
    }
}

/// Fourth-order first derivative of uniformly sampled values: 5-point
/// central stencil inside, one-sided 5-point rows at each edge.
pub(crate) fn derivative_uniform(values: &[Complex64], h: f64) -> Result<Vec<Complex64>> {
    let n = values.len();
    if n < STENCIL_MIN_POINTS {
        return Err(Error::GridTooCoarse { points: n, needed: STENCIL_MIN_POINTS });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let c0 = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let c1 = [-3.0, -10.0, 18.0, -6.0, 1.0];
    for (row, coeffs) in [(0usize, &c0), (1usize, &c1)] {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in coeffs.iter().enumerate() {
            acc += values[j] * *c;
        }
        out[row] = acc / (12.0 * h);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in coeffs.iter().enumerate() {
            acc += values[n - 1 - j] * *c;
        }
        out[n - 1 - row] = -acc / (12.0 * h);
    }
    for i in 2..n - 2 {
        out[i] = (values[i - 2] - values[i - 1] * 8.0 + values[i + 1] * 8.0 - values[i + 2])
            / (12.0 * h);
    }
    Ok(out)
}

/// Deformed derivative D_gamma f = (1 + gamma x) df/dx of a sampled state,
/// evaluated in the grid's own coordinate (where it is d/du on x_gamma grids
/// and gamma z d/dz on z grids). Requires a uniform grid.
pub(crate) fn deformed_derivative(f: &WaveFn, params: &ModelParams) -> Result<Vec<Complex64>> {
    let h = f
        .grid()
        .spacing()
        .ok_or_else(|| Error::domain("stencil derivatives require a uniform grid"))?;
    let d = derivative_uniform(f.values(), h)?;
    let g = params.gamma();
    match f.grid().coordinate() {
        Coordinate::X => {
            let out = f
                .grid()
                .points()
                .iter()
                .zip(d.iter())
                .map(|(x, df)| df * (1.0 + g * x))
                .collect();
            Ok(out)
        }
        Coordinate::XGamma => Ok(d),
        Coordinate::Z => {
            params.s()?;
            let out = f
                .grid()
                .points()
                .iter()
                .zip(d.iter())
                .map(|(z, df)| df * (g * z))
                .collect();
            Ok(out)
        }
    }
}

/// Hint describing the states a default grid must resolve: the smallest
/// power a with |state|^2 ~ z^a near z = 0 (left tail), the largest
/// Gamma-like shape parameter (right tail), and a half width in sigma0 for
/// the undeformed gamma = 0 case.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub min_z_power: f64,
    pub max_z_scale: f64,
    pub x_half_width_sigma0: f64,
}

impl GridSpec {
    /// Covers eigenstates up to level n_hi.
    pub fn for_levels(params: &ModelParams, n_hi: usize) -> Result<Self> {
        if params.gamma() == 0.0 {
            return Ok(GridSpec {
                min_z_power: 1.0,
                max_z_scale: 1.0,
                x_half_width_sigma0: 10.0 + 2.0 * (n_hi as f64 + 1.0).sqrt(),
            });
        }
        let s = params.s()?;
        let nu = 2.0 * s - 2.0 * n_hi as f64 - 1.0;
        if nu <= 0.0 {
            return Err(Error::domain(format!(
                "level {n_hi} is unbound (2s - 2n - 1 = {nu} <= 0)"
            )));
        }
        Ok(GridSpec { min_z_power: nu, max_z_scale: 2.0 * s, x_half_width_sigma0: 12.0 })
    }

    /// Covers the shape-invariant family member at level n and parameter
    /// beta, whose left tail carries z-mass with exponent 2s - 2n - beta.
    pub fn for_family(params: &ModelParams, n: usize, beta: f64) -> Result<Self> {
        if params.gamma() == 0.0 {
            return GridSpec::for_levels(params, n);
        }
        let s = params.s()?;
        let a = 2.0 * s - 2.0 * n as f64 - beta;
        if a <= 0.0 {
            return Err(Error::domain(format!(
                "family member (n = {n}, beta = {beta}) is not normalizable (2s - 2n - beta = {a})"
            )));
        }
        Ok(GridSpec { min_z_power: a, max_z_scale: 2.0 * s, x_half_width_sigma0: 12.0 })
    }

    /// Covers coherent states with the given labels.
    pub fn for_coherent(params: &ModelParams, alphas: &[Complex64]) -> Result<Self> {
        let max_re = alphas.iter().map(|a| a.re).fold(0.0f64, f64::max);
        let max_abs = alphas.iter().map(|a| a.norm()).fold(0.0f64, f64::max);
        if params.gamma() == 0.0 {
            return Ok(GridSpec {
                min_z_power: 1.0,
                max_z_scale: 1.0,
                x_half_width_sigma0: 12.0 + std::f64::consts::SQRT_2 * max_abs,
            });
        }
        let s = params.s()?;
        let g = params.gtilde();
        let mut lam_min = f64::INFINITY;
        let mut lam_max = 2.0 * s;
        for a in alphas {
            let lam = 2.0 * s * (1.0 + std::f64::consts::SQRT_2 * g * a.re) - 1.0;
            if lam <= 0.0 {
                return Err(Error::domain(format!(
                    "coherent state alpha={a} is not normalizable (lambda_cs = {lam} <= 0)"
                )));
            }
            lam_min = lam_min.min(lam);
            lam_max = lam_max.max(lam);
        }
        let _ = max_re;
        Ok(GridSpec { min_z_power: lam_min, max_z_scale: lam_max, x_half_width_sigma0: 12.0 })
    }

    pub fn merge(self, other: GridSpec) -> GridSpec {
        GridSpec {
            min_z_power: self.min_z_power.min(other.min_z_power),
            max_z_scale: self.max_z_scale.max(other.max_z_scale),
            x_half_width_sigma0: self.x_half_width_sigma0.max(other.x_half_width_sigma0),
        }
    }
}

/// Default spacing of the adaptive grid, in units of sigma0.
const DEFAULT_SPACING_SIGMA0: f64 = 0.005;

/// Uniform x_gamma grid sized so the truncated tails of every hinted state
/// carry less than ~1e-16 of probability: the left edge comes from the
/// Gamma-tail bound mass(z < z0) ~ z0^a / (a Gamma(a)), the right edge from
/// z_hi = lambda + 40 sqrt(lambda). At gamma = 0 this degenerates to a
/// symmetric grid in x. `points_override` replaces the density heuristic.
pub fn default_grid(
    params: &ModelParams,
    spec: &GridSpec,
    points_override: Option<usize>,
) -> Result<Grid> {
    let s0 = params.sigma0();
    if params.gamma() == 0.0 {
        let half = spec.x_half_width_sigma0 * s0;
        let n = grid_points(2.0 * half, s0, points_override)?;
        return Grid::uniform(Coordinate::X, -half, half, n);
    }
    let s = params.s()?;
    let g = params.gamma();
    let a = spec.min_z_power;
    if a <= 0.0 {
        return Err(Error::domain("grid hint needs a positive left-tail power"));
    }
    // Left cutoff: solve z0^a / Gamma(a+1) = 1e-16 in logs.
    let z_lo = (((1e-16f64).ln() + ln_gamma(a + 1.0)?) / a).exp();
    let u_lo = ((z_lo / (2.0 * s)).ln() / g - 2.0 * s0).min(-8.0 * s0);
    let lam = spec.max_z_scale;
    let z_hi = lam + 40.0 * lam.sqrt() + 10.0;
    let u_hi = ((z_hi / (2.0 * s)).ln() / g + s0).max(12.0 * s0);
    let n = grid_points(u_hi - u_lo, s0, points_override)?;
    Grid::uniform(Coordinate::XGamma, u_lo, u_hi, n)
}

fn grid_points(span: f64, sigma0: f64, points_override: Option<usize>) -> Result<usize> {
    let n = match points_override {
        Some(n) => n,
        None => {
            let m = (span / (DEFAULT_SPACING_SIGMA0 * sigma0)).ceil() as usize + 1;
            if m % 2 == 0 {
                m + 1
            } else {
                m
            }
        }
    };
    if n < STENCIL_MIN_POINTS {
        return Err(Error::GridTooCoarse { points: n, needed: STENCIL_MIN_POINTS });
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(Coordinate::X, vec![0.0, 1.0, 1.0]).is_err());
        assert!(Grid::new(Coordinate::X, vec![2.0, 1.0]).is_err());
        assert!(Grid::new(Coordinate::Z, vec![-1.0, 1.0]).is_err());
        assert!(Grid::new(Coordinate::X, vec![0.0]).is_err());
        let g = Grid::uniform(Coordinate::XGamma, -1.0, 1.0, 21).unwrap();
        assert_eq!(g.len(), 21);
        assert_relative_eq!(g.spacing().unwrap(), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn coordinate_maps_to_x() {
        let p = ModelParams::from_gamma_sigma0(0.5).unwrap();
        let g = Grid::new(Coordinate::XGamma, vec![0.0, 2.0f64.ln() * 2.0]).unwrap();
        let x = g.x_values(&p).unwrap();
        assert_relative_eq!(x[0], 0.0, epsilon = 1e-15);
        // u = 2 ln 2, gamma = 0.5: x = (e^{ln 2} - 1)/0.5 = 2.
        assert_relative_eq!(x[1], 2.0, max_relative = 1e-14);
        let s = p.s().unwrap();
        let gz = Grid::new(Coordinate::Z, vec![2.0 * s]).ok();
        assert!(gz.is_none(), "single-point grid must be rejected");
        let gz = Grid::new(Coordinate::Z, vec![2.0 * s, 4.0 * s]).unwrap();
        let xz = gz.x_values(&p).unwrap();
        assert_relative_eq!(xz[0], 0.0, epsilon = 1e-15);
        assert_relative_eq!(xz[1], 2.0, max_relative = 1e-14);
    }

    #[test]
    fn derivative_is_fourth_order() {
        // Worst-row error of d/dt [sin t + i cos 2t] over [0, 3.2].
        let worst = |n: usize| {
            let h = 3.2 / (n - 1) as f64;
            let vals: Vec<Complex64> = (0..n)
                .map(|i| Complex64::new((i as f64 * h).sin(), (2.0 * i as f64 * h).cos()))
                .collect();
            let d = derivative_uniform(&vals, h).unwrap();
            (0..n)
                .map(|i| {
                    let t = i as f64 * h;
                    (d[i] - Complex64::new(t.cos(), -2.0 * (2.0 * t).sin())).norm()
                })
                .fold(0.0f64, f64::max)
        };
        let coarse = worst(41);
        let fine = worst(81);
        println!("stencil errors: h {coarse:.3e}, h/2 {fine:.3e}, ratio {}", coarse / fine);
        assert!(coarse / fine > 12.0, "order ratio {}", coarse / fine);
        assert!(worst(321) < 1e-6, "fine-grid error {}", worst(321));
    }

    #[test]
    fn stencil_needs_sixteen_points() {
        let vals = vec![Complex64::new(1.0, 0.0); 15];
        assert!(matches!(
            derivative_uniform(&vals, 0.1),
            Err(Error::GridTooCoarse { points: 15, needed: 16 })
        ));
    }

    #[test]
    fn psi_and_phi_weights_agree_on_mapped_grids() {
        // The same physical density integrated in either convention.
        let p = ModelParams::from_gamma_sigma0(0.4).unwrap();
        let grid = default_grid(&p, &GridSpec::for_levels(&p, 0).unwrap(), None).unwrap();
        let x = grid.x_values(&p).unwrap();
        let s0 = p.sigma0();
        let psi_vals: Vec<f64> = x
            .iter()
            .map(|&xi| (-(xi * xi) / (2.0 * s0 * s0)).exp())
            .collect();
        let g = p.gamma();
        let phi_vals: Vec<f64> = x
            .iter()
            .zip(psi_vals.iter())
            .map(|(&xi, &v)| (1.0 + g * xi).sqrt() * v)
            .collect();
        let psi = WaveFn::from_real(grid.clone(), psi_vals, DensityConvention::Psi).unwrap();
        let phi = WaveFn::from_real(grid, phi_vals, DensityConvention::Phi).unwrap();
        let np = psi.norm(&p).unwrap();
        let nf = phi.norm(&p).unwrap();
        assert_relative_eq!(np, nf, max_relative = 1e-12);
    }

    #[test]
    fn default_grid_is_adaptive_in_gamma() {
        let p1 = ModelParams::from_gamma_sigma0(0.1).unwrap();
        let p4 = ModelParams::from_gamma_sigma0(0.4).unwrap();
        let g1 = default_grid(&p1, &GridSpec::for_levels(&p1, 5).unwrap(), None).unwrap();
        let g4 = default_grid(&p4, &GridSpec::for_levels(&p4, 5).unwrap(), None).unwrap();
        // Near-threshold states at strong deformation demand a far-left edge.
        assert!(g4.points()[0] < g1.points()[0]);
        assert!(g4.points()[0] < -40.0);
        let p0 = ModelParams::from_gamma_sigma0(0.0).unwrap();
        let g0 = default_grid(&p0, &GridSpec::for_levels(&p0, 5).unwrap(), None).unwrap();
        assert_eq!(g0.coordinate(), Coordinate::X);
    }
}
