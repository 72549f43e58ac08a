//! Supersymmetric structure of the deformed oscillator: factorization into
//! first-order operators, the partner problem, shape invariance with its
//! ladder operators, and the su(1,1) algebra they close.
//!
//! The one-parameter operator family
//!   a(beta)  = (1/sqrt(2) sigma0) [ x + (beta+1) gamma sigma0^2 / 2 + sigma0^2 D_gamma ]
//!   a+(beta) = (1/sqrt(2) sigma0) [ x + (beta-1) gamma sigma0^2 / 2 - sigma0^2 D_gamma ]
//! factorizes the Hamiltonian at beta = 1 (hbar omega0 a+ a = H - E0) and
//! realizes shape invariance: a(beta) maps the family member psi_{n,beta}
//! to psi_{n-1,beta+2} and a+(beta) maps psi_{n,beta+2} back to
//! psi_{n+1,beta}.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{deformed_derivative, default_grid, DensityConvention, Grid, GridSpec, WaveFn};
use crate::oracle::inner_product;
use crate::params::ModelParams;
use crate::special::{assoc_laguerre, ln_gamma};
use crate::spectrum::{energy, max_bound_index};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartnerSide {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderDirection {
    Up,
    Down,
}

/// Level and family parameter of a shape-invariant state, validated so the
/// normalization integral exists: 2s - 2n - beta > 0 (trivially satisfied
/// at gamma = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    pub n: usize,
    pub beta: f64,
}

impl ShapeParams {
    pub fn new(params: &ModelParams, n: usize, beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::domain("family parameter beta must be finite"));
        }
        if params.gamma() > 0.0 {
            let s = params.s()?;
            let a = 2.0 * s - 2.0 * n as f64 - beta;
            if a <= 0.0 {
                return Err(Error::domain(format!(
                    "family member (n = {n}, beta = {beta}) violates 2s - 2n - beta > 0 (got {a})"
                )));
            }
        }
        Ok(ShapeParams { n, beta })
    }
}

fn require_psi(f: &WaveFn) -> Result<()> {
    if f.convention() != DensityConvention::Psi {
        return Err(Error::domain("ladder operators act on PSI-convention states"));
    }
    Ok(())
}

/// sign = +1 applies a(beta), sign = -1 applies a+(beta).
fn apply_first_order(
    params: &ModelParams,
    beta: f64,
    f: &WaveFn,
    sign: f64,
) -> Result<WaveFn> {
    require_psi(f)?;
    if !beta.is_finite() {
        return Err(Error::domain("family parameter beta must be finite"));
    }
    let d = deformed_derivative(f, params)?;
    let x = f.grid().x_values(params)?;
    let s0 = params.sigma0();
    let shift = 0.5 * (beta + sign) * params.gamma() * s0 * s0;
    let pref = 1.0 / (std::f64::consts::SQRT_2 * s0);
    let s0sq = sign * s0 * s0;
    let values = f
        .values()
        .iter()
        .zip(d.iter())
        .zip(x.iter())
        .map(|((v, dv), xi)| (v * (xi + shift) + dv * s0sq) * pref)
        .collect();
    WaveFn::new(f.grid().clone(), values, DensityConvention::Psi)
}

/// a(beta) f, evaluated by stencils on the sampled state.
pub fn apply_annihilation(params: &ModelParams, beta: f64, f: &WaveFn) -> Result<WaveFn> {
    apply_first_order(params, beta, f, 1.0)
}

/// a+(beta) f, evaluated by stencils on the sampled state.
pub fn apply_creation(params: &ModelParams, beta: f64, f: &WaveFn) -> Result<WaveFn> {
    apply_first_order(params, beta, f, -1.0)
}

/// Partner potentials of the factorized problem:
/// V_+ = m0 omega0^2 x^2 / 2 - E0 and V_- = V_+ + hbar omega0 (1 + gamma x).
pub fn partner_potential(params: &ModelParams, side: PartnerSide, x: f64) -> Result<f64> {
    let w = 1.0 + params.gamma() * x;
    if w <= 0.0 {
        return Err(Error::domain(format!(
            "x = {x} is outside the configuration space (need 1 + gamma x > 0)"
        )));
    }
    let e0 = energy(params, 0)?;
    let v_plus = 0.5 * params.m0() * params.omega0() * params.omega0() * x * x - e0;
    Ok(match side {
        PartnerSide::Plus => v_plus,
        PartnerSide::Minus => v_plus + params.hbar() * params.omega0() * w,
    })
}

/// Partner spectra: E_n^{(+)} = E_n - E0 and E_n^{(-)} = E_{n+1}^{(+)}.
pub fn partner_energy(params: &ModelParams, n: usize, side: PartnerSide) -> Result<f64> {
    let level = match side {
        PartnerSide::Plus => n,
        PartnerSide::Minus => n + 1,
    };
    Ok(energy(params, level)? - energy(params, 0)?)
}

/// Member of the shape-invariant family at (n, beta), evaluated at x. The
/// beta = 1 member is the eigenfunction of the model itself; beta = 3 gives
/// the bound states of the minus partner. At gamma = 0 every member
/// degenerates to the harmonic eigenfunction.
pub fn si_eigenfunction(params: &ModelParams, n: usize, beta: f64, x: f64) -> Result<f64> {
    let f = family_evaluator(params, ShapeParams::new(params, n, beta)?)?;
    Ok(f(x))
}

/// The family member sampled on a grid, in the PSI convention.
pub fn si_wavefn(params: &ModelParams, n: usize, beta: f64, grid: &Grid) -> Result<WaveFn> {
    let f = family_evaluator(params, ShapeParams::new(params, n, beta)?)?;
    let values = grid
        .x_values(params)?
        .iter()
        .map(|&xi| Complex64::new(f(xi), 0.0))
        .collect();
    WaveFn::new(grid.clone(), values, DensityConvention::Psi)
}

fn family_evaluator(
    params: &ModelParams,
    sp: ShapeParams,
) -> Result<Box<dyn Fn(f64) -> f64>> {
    let n = sp.n;
    if params.gamma() == 0.0 {
        let p = *params;
        return Ok(Box::new(move |x| hermite_point(&p, n, x)));
    }
    let s = params.s()?;
    let g = params.gamma();
    // Laguerre parameter of the member: nu_n + 1 - beta = 2s - 2n - beta.
    let lag = 2.0 * s - 2.0 * n as f64 - sp.beta;
    let ln_pref = 0.5
        * (lag.ln() + g.ln() + ln_gamma(n as f64 + 1.0)? - ln_gamma(lag + n as f64 + 1.0)?)
        + 0.5 * (2.0 * s).ln();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Box::new(move |x: f64| {
        let w = 1.0 + g * x;
        if w <= 0.0 {
            return 0.0;
        }
        let z = 2.0 * s * w;
        let ln_mag = ln_pref - 0.5 * z + 0.5 * (lag - 1.0) * z.ln();
        sign * assoc_laguerre(n, lag, z) * ln_mag.exp()
    }))
}

fn hermite_point(params: &ModelParams, n: usize, x: f64) -> f64 {
    let s0 = params.sigma0();
    let ln_pref = -0.5
        * (n as f64 * std::f64::consts::LN_2
            + ln_gamma(n as f64 + 1.0).expect("positive argument")
            + 0.5 * std::f64::consts::PI.ln()
            + s0.ln());
    let y = x / s0;
    (ln_pref - 0.5 * y * y).exp() * crate::special::hermite(n, y)
}

/// Bound state n of the minus partner, psi_n^{(-)}: the (n, beta = 3)
/// family member with Laguerre parameter 2s - 2n - 3.
pub fn partner_eigenfunction_minus(params: &ModelParams, n: usize, x: f64) -> Result<f64> {
    if params.gamma() > 0.0 {
        let s = params.s()?;
        let nu_t = 2.0 * s - 2.0 * n as f64 - 3.0;
        if nu_t <= 0.0 {
            let max = match max_bound_index(params)? {
                crate::spectrum::BoundLevels::Finite(m) => m.saturating_sub(1),
                crate::spectrum::BoundLevels::Infinite => usize::MAX,
            };
            return Err(Error::BoundIndex { n, max });
        }
    }
    si_eigenfunction(params, n, 3.0, x)
}

/// Same state sampled on a grid.
pub fn partner_minus_wavefn(params: &ModelParams, n: usize, grid: &Grid) -> Result<WaveFn> {
    // Reuse the pointwise validation, then sample.
    partner_eigenfunction_minus(params, n, 0.0)?;
    si_wavefn(params, n, 3.0, grid)
}

fn scale_add(a: &WaveFn, ca: Complex64, b: &WaveFn, cb: Complex64) -> Result<WaveFn> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch("combining states needs a common grid".into()));
    }
    let values = a
        .values()
        .iter()
        .zip(b.values().iter())
        .map(|(x, y)| x * ca + y * cb)
        .collect();
    WaveFn::new(a.grid().clone(), values, a.convention())
}

/// Splits H f into the bosonic piece hbar omega0 (b+ b + 1/2) f and the
/// linear interaction piece (hbar omega0 gamma / 2) x f, where b = a(0).
pub fn bosonic_split(params: &ModelParams, f: &WaveFn) -> Result<(WaveFn, WaveFn)> {
    require_psi(f)?;
    let hw = params.hbar() * params.omega0();
    let bdb = apply_creation(params, 0.0, &apply_annihilation(params, 0.0, f)?)?;
    let h_part = scale_add(&bdb, Complex64::new(hw, 0.0), f, Complex64::new(0.5 * hw, 0.0))?;
    let x = f.grid().x_values(params)?;
    let c = 0.5 * hw * params.gamma();
    let field_values = f
        .values()
        .iter()
        .zip(x.iter())
        .map(|(v, xi)| v * (c * xi))
        .collect();
    let field_part = WaveFn::new(f.grid().clone(), field_values, DensityConvention::Psi)?;
    Ok((h_part, field_part))
}

/// Block-diagonal supersymmetric Hamiltonian acting on a two-component
/// state: (hbar omega0 b+ b f_up, hbar omega0 b b+ f_down).
pub fn susy_matrix_action(
    params: &ModelParams,
    f_up: &WaveFn,
    f_down: &WaveFn,
) -> Result<(WaveFn, WaveFn)> {
    if f_up.grid() != f_down.grid() {
        return Err(Error::GridMismatch("both components need the same grid".into()));
    }
    let hw = Complex64::new(params.hbar() * params.omega0(), 0.0);
    let upper_raw = apply_creation(params, 0.0, &apply_annihilation(params, 0.0, f_up)?)?;
    let lower_raw = apply_annihilation(params, 0.0, &apply_creation(params, 0.0, f_down)?)?;
    let zero = Complex64::new(0.0, 0.0);
    let upper = scale_add(&upper_raw, hw, f_up, zero)?;
    let lower = scale_add(&lower_raw, hw, f_down, zero)?;
    Ok((upper, lower))
}

/// Shape-invariance remainder R(beta) = hbar omega0 [1 - (gamma^2 sigma0^2 / 2)(beta + 1)]:
/// the constant by which the minus partner at beta exceeds the plus partner
/// at beta + 2.
pub fn remainder(params: &ModelParams, beta: f64) -> f64 {
    let g = params.gtilde();
    params.hbar() * params.omega0() * (1.0 - 0.5 * g * g * (beta + 1.0))
}

/// Level n energy of the beta-family plus partner:
/// E_n^{(+)}(beta) = hbar omega0 n [1 - (gamma^2 sigma0^2 / 2)(n + beta)].
pub fn si_energy(params: &ModelParams, n: usize, beta: f64) -> Result<f64> {
    ShapeParams::new(params, n, beta)?;
    let g = params.gtilde();
    Ok(params.hbar() * params.omega0() * n as f64 * (1.0 - 0.5 * g * g * (n as f64 + beta)))
}

/// Deformed factorial as the product of ladder radicands:
/// [n(beta)]! = prod_{j=1..n} E_j^{(+)}(beta) / hbar omega0.
pub fn deformed_factorial(params: &ModelParams, n: usize, beta: f64) -> Result<f64> {
    ShapeParams::new(params, n, beta)?;
    let hw = params.hbar() * params.omega0();
    let mut acc = 1.0;
    for j in 1..=n {
        acc *= si_energy(params, j, beta)? / hw;
    }
    Ok(acc)
}

/// The same quantity through the Gamma-function identity
/// [n(beta)]! = (n! / (2s)^n) Gamma(2s - beta) / Gamma(2s - beta - n),
/// evaluated through ln Gamma (or the equivalent falling product once the
/// arguments leave the range where ln Gamma keeps 12 digits).
pub fn deformed_factorial_gamma_form(params: &ModelParams, n: usize, beta: f64) -> Result<f64> {
    if params.gamma() == 0.0 {
        return Ok((ln_gamma(n as f64 + 1.0)?).exp());
    }
    ShapeParams::new(params, n, beta)?;
    let s = params.s()?;
    let a = 2.0 * s - beta;
    if a - n as f64 <= 0.0 {
        return Err(Error::domain(format!(
            "Gamma argument 2s - beta - n = {} must be positive",
            a - n as f64
        )));
    }
    if a <= 1e6 {
        let ln = ln_gamma(n as f64 + 1.0)? - n as f64 * (2.0 * s).ln() + ln_gamma(a)?
            - ln_gamma(a - n as f64)?;
        Ok(ln.exp())
    } else {
        // Huge arguments: expand the Gamma ratio as the exact falling
        // product to dodge the cancellation of two ~a ln a terms.
        let mut acc = 1.0;
        for k in 1..=n {
            acc *= (a - k as f64) * k as f64 / (2.0 * s);
        }
        Ok(acc)
    }
}

/// Coefficient produced by the ladder action within the beta family:
/// DOWN: L- psi_{n,beta} = sqrt(n [1 - (g^2/2)(n + beta)]) psi_{n-1,beta},
/// UP:   L+ psi_{n,beta} = sqrt((n+1)[1 - (g^2/2)(n + 1 + beta)]) psi_{n+1,beta}.
pub fn ladder_coefficient(
    params: &ModelParams,
    n: usize,
    beta: f64,
    dir: LadderDirection,
) -> Result<f64> {
    ShapeParams::new(params, n, beta)?;
    let g = params.gtilde();
    let (level, radicand) = match dir {
        LadderDirection::Down => {
            let nf = n as f64;
            (n.checked_sub(1), nf * (1.0 - 0.5 * g * g * (nf + beta)))
        }
        LadderDirection::Up => {
            let nf = n as f64 + 1.0;
            (Some(n + 1), nf * (1.0 - 0.5 * g * g * (nf + beta)))
        }
    };
    if radicand < 0.0 {
        return Err(Error::domain(format!(
            "ladder radicand {radicand} is negative: level beyond the shape-invariant range"
        )));
    }
    // The target state must itself be normalizable (DOWN from n = 0 has no
    // target and yields the zero coefficient).
    if dir == LadderDirection::Up {
        ShapeParams::new(params, level.expect("up always has a target"), beta)?;
    }
    Ok(radicand.sqrt())
}

/// Applies the ladder operator to the family member (n, beta), realizing
/// the beta shift explicitly: UP differentiates the (n, beta+2) member with
/// a+(beta); DOWN differentiates (n, beta) with a(beta), which lands in the
/// beta+2 family, and relabels it back by re-expanding in that family. The
/// result is sampled on an adaptive grid and should equal
/// ladder_coefficient times the target member.
pub fn apply_ladder(
    params: &ModelParams,
    n: usize,
    beta: f64,
    dir: LadderDirection,
) -> Result<WaveFn> {
    ladder_coefficient(params, n, beta, dir)?;
    if params.gamma() == 0.0 {
        let spec = GridSpec::for_levels(params, n + 1)?;
        let grid = default_grid(params, &spec, None)?;
        let src = si_wavefn(params, n, beta, &grid)?;
        return match dir {
            LadderDirection::Up => apply_creation(params, beta, &src),
            LadderDirection::Down => apply_annihilation(params, beta, &src),
        };
    }
    match dir {
        LadderDirection::Up => {
            let spec = GridSpec::for_family(params, n + 1, beta)?
                .merge(GridSpec::for_family(params, n, beta + 2.0)?);
            let grid = default_grid(params, &spec, None)?;
            let src = si_wavefn(params, n, beta + 2.0, &grid)?;
            apply_creation(params, beta, &src)
        }
        LadderDirection::Down => {
            let mut spec = GridSpec::for_family(params, n, beta)?;
            if n > 0 {
                spec = spec.merge(GridSpec::for_family(params, n - 1, beta + 2.0)?);
            }
            let grid = default_grid(params, &spec, None)?;
            let src = si_wavefn(params, n, beta, &grid)?;
            let raw = apply_annihilation(params, beta, &src)?;
            relabel_family(params, &raw, beta + 2.0, beta, n)
        }
    }
}

/// Expands `f` in the family at beta_from (levels 0..=top) and rebuilds the
/// same coefficients on the family at beta_to, realizing the pure family
/// relabeling that the formal beta-shift operator performs.
fn relabel_family(
    params: &ModelParams,
    f: &WaveFn,
    beta_from: f64,
    beta_to: f64,
    top: usize,
) -> Result<WaveFn> {
    let s = params.s()?;
    let mut out = vec![Complex64::new(0.0, 0.0); f.grid().len()];
    for m in 0..=top {
        if 2.0 * s - 2.0 * m as f64 - beta_from <= 0.0 {
            break;
        }
        let basis_from = si_wavefn(params, m, beta_from, f.grid())?;
        let c = inner_product(params, &basis_from, f)?;
        if c.norm() < 1e-300 {
            continue;
        }
        let basis_to = si_wavefn(params, m, beta_to, f.grid())?;
        for (o, b) in out.iter_mut().zip(basis_to.values()) {
            *o += c * b;
        }
    }
    WaveFn::new(f.grid().clone(), out, DensityConvention::Psi)
}

/// Residuals of the su(1,1) relations [M+, M-] = 2 M0 and [M0, M±] = ±M±
/// in the coefficient representation on the beta = 1 family, with
/// M± = sqrt(2s) L± and M0 = diag(n + 1 - s). The matrices are padded by
/// two levels and residuals are read off the interior block, so truncation
/// plays no role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11Report {
    /// True at gamma = 0, where s diverges and the algebra contracts to the
    /// oscillator one; nothing is checked in that case.
    pub skipped: bool,
    pub max_residual: f64,
    pub levels_tested: usize,
}

pub fn su11_check(params: &ModelParams, n_max_test: usize) -> Result<Su11Report> {
    if params.gamma() == 0.0 {
        return Ok(Su11Report { skipped: true, max_residual: 0.0, levels_tested: 0 });
    }
    // Padding needs valid ladder coefficients two levels past the tested block.
    ShapeParams::new(params, n_max_test + 2, 1.0)?;
    let s = params.s()?;
    let dim = n_max_test + 3;
    let root = (2.0 * s).sqrt();
    let mut mp = vec![vec![0.0f64; dim]; dim];
    let mut mm = vec![vec![0.0f64; dim]; dim];
    let mut m0 = vec![vec![0.0f64; dim]; dim];
    for n in 0..dim {
        m0[n][n] = n as f64 + 1.0 - s;
        if n + 1 < dim {
            mp[n + 1][n] = root * ladder_coefficient(params, n, 1.0, LadderDirection::Up)?;
        }
        if n > 0 {
            mm[n - 1][n] = root * ladder_coefficient(params, n, 1.0, LadderDirection::Down)?;
        }
    }
    let comm = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0f64; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = 0.0;
                for k in 0..dim {
                    acc += a[i][k] * b[k][j] - b[i][k] * a[k][j];
                }
                out[i][j] = acc;
            }
        }
        out
    };
    let r1 = comm(&mp, &mm);
    let r2 = comm(&m0, &mp);
    let r3 = comm(&m0, &mm);
    let mut worst = 0.0f64;
    for i in 0..=n_max_test {
        for j in 0..=n_max_test {
            worst = worst.max((r1[i][j] - 2.0 * m0[i][j]).abs());
            worst = worst.max((r2[i][j] - mp[i][j]).abs());
            worst = worst.max((r3[i][j] + mm[i][j]).abs());
        }
    }
    Ok(Su11Report { skipped: false, max_residual: worst, levels_tested: n_max_test })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{apply_hamiltonian, l2_distance};
    use crate::spectrum::eigenfunction;
    use approx::assert_relative_eq;

    const SQRT_084: f64 = 0.91651513899116800132;

    fn params(gs: f64) -> ModelParams {
        ModelParams::from_gamma_sigma0(gs).unwrap()
    }

    fn family_grid(p: &ModelParams, n_hi: usize, beta_hi: f64) -> Grid {
        let spec = GridSpec::for_family(p, n_hi, beta_hi).unwrap();
        default_grid(p, &spec, None).unwrap()
    }

    fn l2(p: &ModelParams, f: &WaveFn) -> f64 {
        f.norm(p).unwrap()
    }

    fn scaled(f: &WaveFn, c: f64) -> WaveFn {
        scale_add(f, Complex64::new(c, 0.0), f, Complex64::new(0.0, 0.0)).unwrap()
    }

    #[test]
    fn ground_state_is_annihilated() {
        let p = params(0.4);
        let grid = family_grid(&p, 0, 1.0);
        let psi0 = eigenfunction(&p, 0, &grid).unwrap();
        let out = apply_annihilation(&p, 1.0, &psi0).unwrap();
        let n = l2(&p, &out);
        println!("|a psi0| = {n:.3e}");
        assert!(n < 1e-7, "annihilator residual {n}");
    }

    #[test]
    fn annihilation_lands_in_the_minus_family() {
        let p = params(0.4);
        let grid = family_grid(&p, 1, 3.0);
        let psi1 = eigenfunction(&p, 1, &grid).unwrap();
        let out = apply_annihilation(&p, 1.0, &psi1).unwrap();
        let target = partner_minus_wavefn(&p, 0, &grid).unwrap();
        let d = l2_distance(&p, &out, &scaled(&target, SQRT_084)).unwrap();
        println!("|a psi1 - sqrt(0.84) psi0^(-)| = {d:.3e}");
        assert!(d < 1e-6, "distance {d}");
    }

    #[test]
    fn creation_lifts_the_minus_family_back() {
        let p = params(0.4);
        let grid = family_grid(&p, 1, 3.0);
        let minus0 = partner_minus_wavefn(&p, 0, &grid).unwrap();
        let out = apply_creation(&p, 1.0, &minus0).unwrap();
        let psi1 = eigenfunction(&p, 1, &grid).unwrap();
        let d = l2_distance(&p, &out, &scaled(&psi1, SQRT_084)).unwrap();
        assert!(d < 1e-6, "distance {d}");
    }

    #[test]
    fn undeformed_limit_raises_with_sqrt_n_plus_one() {
        let p = params(0.0);
        let spec = GridSpec::for_levels(&p, 3).unwrap();
        let grid = default_grid(&p, &spec, None).unwrap();
        let psi2 = eigenfunction(&p, 2, &grid).unwrap();
        let out = apply_creation(&p, 1.0, &psi2).unwrap();
        let psi3 = eigenfunction(&p, 3, &grid).unwrap();
        let d = l2_distance(&p, &out, &scaled(&psi3, 3.0f64.sqrt())).unwrap();
        assert!(d < 1e-7, "distance {d}");
    }

    #[test]
    fn creation_is_adjoint_to_annihilation() {
        let p = params(0.4);
        let grid = family_grid(&p, 2, 1.0);
        let x = grid.x_values(&p).unwrap();
        // Generic complex states in the operator domain: the (1 + gamma x)
        // factor makes them vanish at the wall, killing the integration-by-
        // parts boundary term that the adjoint identity requires.
        let f = WaveFn::new(
            grid.clone(),
            x.iter()
                .map(|&xi| {
                    let w = 1.0 + p.gamma() * xi;
                    Complex64::new(w * (-0.7 * (xi - 0.3) * (xi - 0.3)).exp(), 0.0)
                })
                .collect(),
            DensityConvention::Psi,
        )
        .unwrap();
        let g = WaveFn::new(
            grid.clone(),
            x.iter()
                .map(|&xi| {
                    let w = 1.0 + p.gamma() * xi;
                    Complex64::new(w * xi * (-0.5 * xi * xi).exp(), 0.1 * w * (-xi * xi).exp())
                })
                .collect(),
            DensityConvention::Psi,
        )
        .unwrap();
        let lhs = inner_product(&p, &apply_creation(&p, 1.0, &f).unwrap(), &g).unwrap();
        let rhs = inner_product(&p, &f, &apply_annihilation(&p, 1.0, &g).unwrap()).unwrap();
        println!("adjoint pairing: {lhs} vs {rhs}");
        assert!((lhs - rhs).norm() < 1e-7, "adjoint mismatch {}", (lhs - rhs).norm());
    }

    #[test]
    fn partner_potentials_differ_by_the_linear_term() {
        let p = params(0.4);
        assert_relative_eq!(
            partner_potential(&p, PartnerSide::Plus, 0.0).unwrap(),
            -0.48,
            epsilon = 1e-14
        );
        for &x in &[-1.5, 0.0, 0.4, 2.0] {
            let vp = partner_potential(&p, PartnerSide::Plus, x).unwrap();
            let vm = partner_potential(&p, PartnerSide::Minus, x).unwrap();
            assert_relative_eq!(vm - vp, 1.0 + 0.4 * x, epsilon = 1e-13);
        }
        assert!(partner_potential(&p, PartnerSide::Plus, -2.6).is_err());
    }

    #[test]
    fn partner_energies() {
        let p = params(0.4);
        assert_eq!(partner_energy(&p, 0, PartnerSide::Plus).unwrap(), 0.0);
        assert_relative_eq!(partner_energy(&p, 1, PartnerSide::Plus).unwrap(), 0.84, epsilon = 1e-14);
        assert_relative_eq!(partner_energy(&p, 0, PartnerSide::Minus).unwrap(), 0.84, epsilon = 1e-14);
        // s = 1 binds only the ground state, so the minus side is empty.
        let tight = params(1.0);
        assert!(partner_energy(&tight, 0, PartnerSide::Minus).is_err());
    }

    #[test]
    fn minus_eigenfunction_is_normalized_and_solves_its_equation() {
        let p = params(0.4);
        let grid = family_grid(&p, 0, 3.0);
        let minus0 = partner_minus_wavefn(&p, 0, &grid).unwrap();
        assert_relative_eq!(l2(&p, &minus0), 1.0, max_relative = 1e-10);
        // H_- = H - E0 + hbar omega0 (1 + gamma x), eigenvalue E_0^(-).
        let h = apply_hamiltonian(&p, &minus0).unwrap();
        let x = grid.x_values(&p).unwrap();
        let e0 = energy(&p, 0).unwrap();
        let ev = partner_energy(&p, 0, PartnerSide::Minus).unwrap();
        let resid: Vec<Complex64> = h
            .values()
            .iter()
            .zip(minus0.values())
            .zip(x.iter())
            .map(|((hv, v), xi)| hv + v * (-e0 + 1.0 + 0.4 * xi) - v * ev)
            .collect();
        let r = WaveFn::new(grid.clone(), resid, DensityConvention::Psi).unwrap();
        let rel = l2(&p, &r) / ev;
        println!("minus-partner equation residual: {rel:.3e}");
        assert!(rel < 1e-5, "residual {rel}");
        // nu-tilde at this deformation: 2s - 3 = 9.5.
        assert!(partner_eigenfunction_minus(&p, 5, 0.0).is_err());
    }

    #[test]
    fn bosonic_split_reassembles_the_hamiltonian() {
        let p = params(0.4);
        let grid = family_grid(&p, 1, 1.0);
        let f = eigenfunction(&p, 1, &grid).unwrap();
        let (h_part, field_part) = bosonic_split(&p, &f).unwrap();
        let total = scale_add(
            &h_part,
            Complex64::new(1.0, 0.0),
            &field_part,
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let href = apply_hamiltonian(&p, &f).unwrap();
        let d = l2_distance(&p, &total, &href).unwrap() / l2(&p, &href);
        println!("bosonic split vs direct H action: {d:.3e}");
        assert!(d < 1e-6, "relative distance {d}");
    }

    #[test]
    fn bosonic_split_energy_and_undeformed_limit() {
        let p = params(0.4);
        let grid = family_grid(&p, 0, 1.0);
        let psi0 = eigenfunction(&p, 0, &grid).unwrap();
        let (h_part, field_part) = bosonic_split(&p, &psi0).unwrap();
        let total = scale_add(
            &h_part,
            Complex64::new(1.0, 0.0),
            &field_part,
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let e = inner_product(&p, &psi0, &total).unwrap().re;
        assert_relative_eq!(e, 0.48, max_relative = 1e-7);

        let p0 = params(0.0);
        let grid0 = default_grid(&p0, &GridSpec::for_levels(&p0, 0).unwrap(), None).unwrap();
        let g0 = eigenfunction(&p0, 0, &grid0).unwrap();
        let (_, field0) = bosonic_split(&p0, &g0).unwrap();
        assert_eq!(l2(&p0, &field0), 0.0);
    }

    #[test]
    fn anticommutator_form_matches_hamiltonian() {
        let p = params(0.4);
        let grid = family_grid(&p, 1, 1.0);
        let f = eigenfunction(&p, 1, &grid).unwrap();
        let bdb = apply_creation(&p, 0.0, &apply_annihilation(&p, 0.0, &f).unwrap()).unwrap();
        let bbd = apply_annihilation(&p, 0.0, &apply_creation(&p, 0.0, &f).unwrap()).unwrap();
        let anti = scale_add(
            &bdb,
            Complex64::new(0.5, 0.0),
            &bbd,
            Complex64::new(0.5, 0.0),
        )
        .unwrap();
        let href = apply_hamiltonian(&p, &f).unwrap();
        let d = l2_distance(&p, &anti, &href).unwrap() / l2(&p, &href);
        assert!(d < 1e-6, "anticommutator residual {d}");
    }

    #[test]
    fn susy_matrix_action_matches_sigma_z_form() {
        let p = params(0.4);
        let grid = family_grid(&p, 2, 1.0);
        let f_up = eigenfunction(&p, 1, &grid).unwrap();
        let f_down = eigenfunction(&p, 2, &grid).unwrap();
        let (upper, lower) = susy_matrix_action(&p, &f_up, &f_down).unwrap();
        let x = grid.x_values(&p).unwrap();
        let check = |f: &WaveFn, out: &WaveFn, sign: f64| {
            let h = apply_hamiltonian(&p, f).unwrap();
            let resid: Vec<Complex64> = h
                .values()
                .iter()
                .zip(f.values())
                .zip(x.iter())
                .zip(out.values())
                .map(|(((hv, v), xi), ov)| hv - v * (sign * (0.5 + 0.2 * xi)) - ov)
                .collect();
            let r = WaveFn::new(grid.clone(), resid, DensityConvention::Psi).unwrap();
            l2(&p, &r)
        };
        let ru = check(&f_up, &upper, 1.0);
        let rl = check(&f_down, &lower, -1.0);
        println!("susy block residuals: upper {ru:.3e}, lower {rl:.3e}");
        assert!(ru < 1e-6 && rl < 1e-6, "upper {ru}, lower {rl}");
    }

    #[test]
    fn bosonic_vacuum_kills_the_upper_block() {
        let p = params(0.4);
        let grid = family_grid(&p, 0, 1.0);
        // b-vacuum in closed form: exp(-s e^{gamma u} + (s - 1/2) gamma u).
        let s = p.s().unwrap();
        let g = p.gamma();
        let vals: Vec<Complex64> = grid
            .x_values(&p)
            .unwrap()
            .iter()
            .map(|&xi| {
                let w = 1.0 + g * xi;
                if w <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                Complex64::new((-s * w + (s - 0.5) * w.ln()).exp(), 0.0)
            })
            .collect();
        let vac = WaveFn::new(grid.clone(), vals, DensityConvention::Psi)
            .unwrap()
            .normalized(&p)
            .unwrap();
        let zero = WaveFn::new(
            grid.clone(),
            vec![Complex64::new(0.0, 0.0); grid.len()],
            DensityConvention::Psi,
        )
        .unwrap();
        let (upper, _) = susy_matrix_action(&p, &vac, &zero).unwrap();
        let n = l2(&p, &upper);
        println!("|H_ss upper on b-vacuum| = {n:.3e}");
        assert!(n < 1e-6, "vacuum residual {n}");
    }

    #[test]
    fn remainder_spots_and_operator_identity() {
        let p = params(0.4);
        assert_relative_eq!(remainder(&p, 1.0), 0.84, epsilon = 1e-14);
        assert_relative_eq!(remainder(&p, 3.0), 0.68, epsilon = 1e-14);
        assert_relative_eq!(remainder(&params(0.0), 7.0), 1.0, epsilon = 1e-15);
        // hbar omega0 [a(beta) a+(beta) - a+(beta+2) a(beta+2)] f = R(beta) f.
        let beta = 1.5;
        let grid = family_grid(&p, 2, 1.0);
        let x = grid.x_values(&p).unwrap();
        let f = WaveFn::new(
            grid.clone(),
            x.iter()
                .map(|&xi| Complex64::new((1.0 + 0.3 * xi) * (-0.6 * xi * xi).exp(), 0.0))
                .collect(),
            DensityConvention::Psi,
        )
        .unwrap();
        let minus = apply_annihilation(&p, beta, &apply_creation(&p, beta, &f).unwrap()).unwrap();
        let plus = apply_creation(&p, beta + 2.0, &apply_annihilation(&p, beta + 2.0, &f).unwrap())
            .unwrap();
        let r = remainder(&p, beta);
        let resid: Vec<Complex64> = minus
            .values()
            .iter()
            .zip(plus.values())
            .zip(f.values())
            .map(|((m, pl), fv)| m - pl - fv * r)
            .collect();
        let rw = WaveFn::new(grid.clone(), resid, DensityConvention::Psi).unwrap();
        let rel = l2(&p, &rw) / l2(&p, &f);
        println!("shape-invariance operator residual: {rel:.3e}");
        assert!(rel < 1e-6, "residual {rel}");
    }

    #[test]
    fn si_energy_telescopes_remainders() {
        let p = params(0.4);
        for beta in [1.0, 1.5, 2.0] {
            for n in 0..=5 {
                if ShapeParams::new(&p, n, beta).is_err() {
                    continue;
                }
                let mut sum = 0.0;
                for j in 0..n {
                    sum += remainder(&p, beta + 2.0 * j as f64);
                }
                let e = si_energy(&p, n, beta).unwrap();
                assert!((e - sum).abs() < 1e-12, "n={n} beta={beta}: {e} vs {sum}");
            }
        }
        assert_relative_eq!(si_energy(&p, 2, 1.0).unwrap(), 1.52, epsilon = 1e-14);
        assert_relative_eq!(si_energy(&p, 1, 2.0).unwrap(), 0.76, epsilon = 1e-14);
        // beta = 1 reduces to the plus-partner spectrum.
        for n in 0..=3 {
            assert_relative_eq!(
                si_energy(&p, n, 1.0).unwrap(),
                partner_energy(&p, n, PartnerSide::Plus).unwrap(),
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn deformed_factorial_forms_agree() {
        let p = params(0.4);
        assert_eq!(deformed_factorial(&p, 0, 1.0).unwrap(), 1.0);
        assert_relative_eq!(deformed_factorial(&p, 2, 1.0).unwrap(), 1.2768, epsilon = 1e-12);
        assert_relative_eq!(deformed_factorial(&p, 3, 1.0).unwrap(), 2.604672, epsilon = 1e-12);
        for n in 0..=3 {
            for beta in [1.0, 2.0] {
                let prod = deformed_factorial(&p, n, beta).unwrap();
                let gamma_form = deformed_factorial_gamma_form(&p, n, beta).unwrap();
                assert_relative_eq!(prod, gamma_form, max_relative = 1e-10);
            }
        }
        // Near-zero deformation recovers n!.
        let tiny = params(1e-4);
        assert_relative_eq!(
            deformed_factorial_gamma_form(&tiny, 3, 1.0).unwrap(),
            6.0,
            max_relative = 1e-6
        );
        assert_relative_eq!(deformed_factorial(&tiny, 3, 1.0).unwrap(), 6.0, max_relative = 1e-6);
    }

    #[test]
    fn si_eigenfunction_reduces_to_the_spectrum_family_at_beta_one() {
        let p = params(0.4);
        let grid = family_grid(&p, 3, 1.0);
        let direct = eigenfunction(&p, 3, &grid).unwrap();
        let via_si = si_wavefn(&p, 3, 1.0, &grid).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in direct.values().iter().zip(via_si.values()) {
            worst = worst.max((a - b).norm());
        }
        println!("pointwise |psi_3 - psi_(3,1)| worst: {worst:.3e}");
        assert!(worst < 1e-10, "pointwise deviation {worst}");
    }

    #[test]
    fn si_ground_state_is_annihilated_at_every_beta() {
        let p = params(0.4);
        for beta in [1.0, 1.5, 2.5] {
            let grid = family_grid(&p, 0, beta);
            let psi = si_wavefn(&p, 0, beta, &grid).unwrap();
            assert_relative_eq!(l2(&p, &psi), 1.0, max_relative = 1e-10);
            let out = apply_annihilation(&p, beta, &psi).unwrap();
            let n = l2(&p, &out);
            assert!(n < 1e-7, "beta {beta}: residual {n}");
        }
    }

    #[test]
    fn ladder_coefficient_spots() {
        let p = params(0.4);
        assert_eq!(ladder_coefficient(&p, 0, 1.0, LadderDirection::Down).unwrap(), 0.0);
        assert_relative_eq!(
            ladder_coefficient(&p, 0, 1.0, LadderDirection::Up).unwrap(),
            SQRT_084,
            epsilon = 1e-14
        );
        let p0 = params(0.0);
        assert_relative_eq!(
            ladder_coefficient(&p0, 4, 1.0, LadderDirection::Down).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            ladder_coefficient(&p0, 3, 1.0, LadderDirection::Up).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        // Raising out of the bound family fails even with a positive radicand.
        assert!(ladder_coefficient(&p, 5, 1.0, LadderDirection::Up).is_err());
    }

    #[test]
    fn apply_ladder_matches_coefficient_times_target() {
        let p = params(0.4);
        for (n, dir, target_n) in [
            (0usize, LadderDirection::Up, 1usize),
            (1, LadderDirection::Down, 0),
            (2, LadderDirection::Up, 3),
        ] {
            let out = apply_ladder(&p, n, 1.0, dir).unwrap();
            let c = ladder_coefficient(&p, n, 1.0, dir).unwrap();
            let target = si_wavefn(&p, target_n, 1.0, out.grid()).unwrap();
            let d = l2_distance(&p, &out, &scaled(&target, c)).unwrap();
            println!("ladder n={n} {dir:?}: |out - c psi| = {d:.3e}");
            assert!(d < 1e-5, "n={n} {dir:?}: distance {d}");
        }
    }

    #[test]
    fn apply_ladder_down_annihilates_the_bottom() {
        let p = params(0.4);
        let out = apply_ladder(&p, 0, 1.0, LadderDirection::Down).unwrap();
        let n = l2(&p, &out);
        assert!(n < 1e-7, "bottom residual {n}");
    }

    #[test]
    fn apply_ladder_norm_equals_coefficient() {
        let p = params(0.2);
        let out = apply_ladder(&p, 2, 1.0, LadderDirection::Up).unwrap();
        let c = ladder_coefficient(&p, 2, 1.0, LadderDirection::Up).unwrap();
        println!("|L+ psi_2| = {} vs coefficient {c}", l2(&p, &out));
        assert_relative_eq!(l2(&p, &out), c, max_relative = 1e-5);
    }

    #[test]
    fn su11_relations_close() {
        let p = params(0.4);
        let report = su11_check(&p, 3).unwrap();
        assert!(!report.skipped);
        println!("su(1,1) max residual: {:.3e}", report.max_residual);
        assert!(report.max_residual < 1e-10, "residual {}", report.max_residual);
        // The padded block would need levels past the bound range.
        assert!(su11_check(&p, 4).is_err());
        let report0 = su11_check(&params(0.0), 3).unwrap();
        assert!(report0.skipped);
    }
}
