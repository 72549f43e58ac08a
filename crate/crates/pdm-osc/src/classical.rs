//! Classical dynamics: exact trajectories through a deformed phase, the
//! canonical map to the constant-mass Morse problem, and an RK4 integrator
//! used only as an independent cross-check.
//!
//! The Hamiltonian is H = (1 + gamma x)^2 p^2 / 2 m0 + m0 omega0^2 x^2 / 2.
//! Closed orbits exist for gamma^2 A^2 < 1; beyond that the motion is
//! unbounded and rejected here as out of regime.

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// A closed classical orbit of amplitude A released from rest at t0.
#[derive(Debug, Clone, Copy)]
pub struct Orbit {
    params: ModelParams,
    amplitude: f64,
    t0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPoint {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    pub pi_gamma: f64,
}

/// Morse-side constants produced by the canonical map: the well depth
/// W_gamma and deformation kappa_gamma of the base problem, plus the
/// shifted-well parameters the partner problem maps onto when the shifted
/// form exists (gamma^2 sigma0^2 < 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    pub w_gamma: f64,
    pub kappa_gamma: f64,
    pub shifted: Option<ShiftedMorse>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedMorse {
    pub wtilde: f64,
    pub omega_small: f64,
    pub delta: f64,
}

impl Orbit {
    pub fn new(params: ModelParams, amplitude: f64, t0: f64) -> Result<Self> {
        if !amplitude.is_finite() || amplitude == 0.0 {
            return Err(Error::domain("orbit amplitude must be finite and nonzero"));
        }
        if !t0.is_finite() {
            return Err(Error::domain("orbit release time must be finite"));
        }
        let ga = params.gamma() * amplitude;
        if ga * ga >= 1.0 {
            return Err(Error::regime(format!(
                "gamma*A = {ga} leaves the oscillatory regime (need gamma^2 A^2 < 1)"
            )));
        }
        Ok(Orbit { params, amplitude, t0 })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    /// Conserved energy, evaluated at the release point.
    pub fn energy(&self) -> f64 {
        let p = &self.params;
        0.5 * p.m0() * p.omega0() * p.omega0() * self.amplitude * self.amplitude
    }
}

/// Amplitude-dependent angular frequency Omega_gamma = omega0 sqrt(1 - gamma^2 A^2).
pub fn orbit_frequency(orbit: &Orbit) -> f64 {
    let ga = orbit.params.gamma() * orbit.amplitude;
    orbit.params.omega0() * (1.0 - ga * ga).sqrt()
}

/// Deformed phase theta_gamma(t): continuous, strictly increasing, zero at
/// t0, advancing by 2 pi per period. The position is x = A cos theta_gamma.
pub fn deformed_phase(orbit: &Orbit, t: f64) -> f64 {
    let ga = orbit.params.gamma() * orbit.amplitude;
    let kappa = ((1.0 + ga) / (1.0 - ga)).sqrt();
    let u = 0.5 * orbit_frequency(orbit) * (t - orbit.t0);
    unwrap_phase(kappa, u)
}

/// Continuous branch of 2 arctan(kappa tan u) selected by the winding index
/// k = round(u / pi), so each half-period glues onto the previous one.
pub(crate) fn unwrap_phase(kappa: f64, u: f64) -> f64 {
    let k = (u / std::f64::consts::PI).round();
    let v = u - k * std::f64::consts::PI;
    2.0 * ((kappa * v.tan()).atan() + k * std::f64::consts::PI)
}

/// Exact trajectory sampled at the given times.
pub fn trajectory(orbit: &Orbit, times: &[f64]) -> Vec<ClassicalPoint> {
    let p = &orbit.params;
    let m0w0 = p.m0() * p.omega0();
    times
        .iter()
        .map(|&t| {
            let theta = deformed_phase(orbit, t);
            let x = orbit.amplitude * theta.cos();
            let pi_gamma = -m0w0 * orbit.amplitude * theta.sin();
            let pp = pi_gamma / (1.0 + p.gamma() * x);
            ClassicalPoint { t, x, p: pp, pi_gamma }
        })
        .collect()
}

/// H(x, p) for the deformed oscillator.
pub fn classical_energy(params: &ModelParams, x: f64, p: f64) -> Result<f64> {
    let w = 1.0 + params.gamma() * x;
    if w <= 0.0 {
        return Err(Error::domain(format!(
            "x = {x} is outside the configuration space (need 1 + gamma x > 0)"
        )));
    }
    Ok(w * w * p * p / (2.0 * params.m0())
        + 0.5 * params.m0() * params.omega0() * params.omega0() * x * x)
}

/// Point map to the constant-mass side: x_gamma = ln(1 + gamma x)/gamma and
/// Pi_gamma = (1 + gamma x) p. At gamma = 0 it is the identity.
pub fn canonical_map(params: &ModelParams, x: f64, p: f64) -> Result<(f64, f64)> {
    let g = params.gamma();
    let w = 1.0 + g * x;
    if w <= 0.0 {
        return Err(Error::domain(format!(
            "x = {x} is outside the configuration space (need 1 + gamma x > 0)"
        )));
    }
    if g == 0.0 {
        Ok((x, p))
    } else {
        Ok((w.ln() / g, w * p))
    }
}

pub fn canonical_map_inverse(params: &ModelParams, x_gamma: f64, pi_gamma: f64) -> (f64, f64) {
    let g = params.gamma();
    if g == 0.0 {
        (x_gamma, pi_gamma)
    } else {
        let w = (g * x_gamma).exp();
        ((w - 1.0) / g, pi_gamma / w)
    }
}

/// Constants of the Morse problem the canonical map lands on.
pub fn morse_params(params: &ModelParams) -> Result<MorseParams> {
    let g = params.gamma();
    if g == 0.0 {
        return Err(Error::domain(
            "the Morse image exists only for gamma > 0 (at gamma = 0 the map is the identity)",
        ));
    }
    let w_gamma = params.m0() * params.omega0() * params.omega0() / (2.0 * g * g);
    let gt2 = params.gtilde() * params.gtilde();
    let shifted = (gt2 < 1.0).then(|| {
        let omega_small = params.omega0() * (1.0 - gt2);
        ShiftedMorse {
            wtilde: params.m0() * omega_small * omega_small / (2.0 * g * g),
            omega_small,
            delta: (1.0 - gt2).ln() / g,
        }
    });
    Ok(MorseParams { w_gamma, kappa_gamma: -g, shifted })
}

/// Fixed-step RK4 integration of Hamilton's equations from (x0, p0) at t = 0.
/// Returns every step including the initial state; t_end = 0 returns just
/// the initial state. This route never touches the closed-form phase.
pub fn rk4_oracle(
    params: &ModelParams,
    state0: (f64, f64),
    t_end: f64,
    n_steps: usize,
) -> Result<Vec<(f64, (f64, f64))>> {
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::domain("integration time must be finite and nonnegative"));
    }
    check_state(params, state0, 0.0)?;
    if t_end == 0.0 {
        return Ok(vec![(0.0, state0)]);
    }
    if n_steps == 0 {
        return Err(Error::domain("integration needs at least one step"));
    }
    let dt = t_end / n_steps as f64;
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push((0.0, state0));
    let mut state = state0;
    for i in 0..n_steps {
        let k1 = rhs(params, state);
        let k2 = rhs(params, advance(state, k1, 0.5 * dt));
        let k3 = rhs(params, advance(state, k2, 0.5 * dt));
        let k4 = rhs(params, advance(state, k3, dt));
        state = (
            state.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            state.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        let t_next = (i + 1) as f64 * dt;
        check_state(params, state, t_next)?;
        out.push((t_next, state));
    }
    Ok(out)
}

fn rhs(params: &ModelParams, (x, p): (f64, f64)) -> (f64, f64) {
    let g = params.gamma();
    let w = 1.0 + g * x;
    let xdot = w * w * p / params.m0();
    let pdot = -g * w * p * p / params.m0() - params.m0() * params.omega0() * params.omega0() * x;
    (xdot, pdot)
}

fn advance((x, p): (f64, f64), (dx, dp): (f64, f64), dt: f64) -> (f64, f64) {
    (x + dt * dx, p + dt * dp)
}

fn check_state(params: &ModelParams, (x, p): (f64, f64), t: f64) -> Result<()> {
    if !x.is_finite() || !p.is_finite() || 1.0 + params.gamma() * x <= 0.0 {
        return Err(Error::BlowUp { t });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(gs: f64) -> ModelParams {
        ModelParams::from_gamma_sigma0(gs).unwrap()
    }

    #[test]
    fn phase_is_zero_at_release_and_periodic() {
        let orbit = Orbit::new(params(0.4), 1.0, 0.3).unwrap();
        assert_eq!(deformed_phase(&orbit, 0.3), 0.0);
        let period = 2.0 * PI / orbit_frequency(&orbit);
        for cycles in 1..=4 {
            let th = deformed_phase(&orbit, 0.3 + cycles as f64 * period);
            assert_relative_eq!(th, 2.0 * PI * cycles as f64, epsilon = 1e-10);
        }
    }

    #[test]
    fn phase_is_monotone() {
        let orbit = Orbit::new(params(0.8), 1.1, 0.0).unwrap();
        let period = 2.0 * PI / orbit_frequency(&orbit);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=1000 {
            let th = deformed_phase(&orbit, i as f64 * 3.0 * period / 1000.0);
            assert!(th > prev, "phase must increase, got {th} after {prev}");
            prev = th;
        }
    }

    #[test]
    fn trajectory_starts_at_turning_point_and_conserves_energy() {
        let orbit = Orbit::new(params(0.4), 0.9, 0.0).unwrap();
        let period = 2.0 * PI / orbit_frequency(&orbit);
        let times: Vec<f64> = (0..=200).map(|i| i as f64 * period / 100.0).collect();
        let pts = trajectory(&orbit, &times);
        assert_relative_eq!(pts[0].x, 0.9, epsilon = 1e-15);
        assert_relative_eq!(pts[0].p, 0.0, epsilon = 1e-15);
        let e0 = orbit.energy();
        for pt in &pts {
            let e = classical_energy(orbit.params(), pt.x, pt.p).unwrap();
            assert_relative_eq!(e, e0, max_relative = 1e-12);
        }
    }

    #[test]
    fn undeformed_limit_is_the_plain_oscillator() {
        let orbit = Orbit::new(params(0.0), 1.0, 0.0).unwrap();
        assert_relative_eq!(orbit_frequency(&orbit), 1.0, epsilon = 1e-15);
        let t = 0.7;
        assert_relative_eq!(deformed_phase(&orbit, t), t, epsilon = 1e-12);
        let pts = trajectory(&orbit, &[t]);
        assert_relative_eq!(pts[0].x, t.cos(), epsilon = 1e-12);
        assert_relative_eq!(pts[0].p, -t.sin(), epsilon = 1e-12);
    }

    #[test]
    fn unbounded_regime_is_rejected() {
        let err = Orbit::new(params(0.4), 2.6, 0.0).unwrap_err();
        assert!(matches!(err, Error::Regime(_)));
        assert!(Orbit::new(params(0.4), 2.4, 0.0).is_ok());
    }

    #[test]
    fn canonical_map_round_trips() {
        let p = params(0.4);
        for &(x, mom) in &[(0.9, 0.0), (-1.2, 2.5), (0.0, -1.0), (5.0, 0.3)] {
            let (xg, pig) = canonical_map(&p, x, mom).unwrap();
            let (xb, pb) = canonical_map_inverse(&p, xg, pig);
            assert_relative_eq!(xb, x, epsilon = 1e-12);
            assert_relative_eq!(pb, mom, epsilon = 1e-12);
        }
        let p0 = params(0.0);
        assert_eq!(canonical_map(&p0, 1.5, -2.0).unwrap(), (1.5, -2.0));
        assert!(canonical_map(&p, -2.6, 0.0).is_err());
    }

    #[test]
    fn morse_constants() {
        let p = params(0.4);
        let mp = morse_params(&p).unwrap();
        // W = s hbar omega0 / 2 with s = 6.25.
        assert_relative_eq!(mp.w_gamma, 3.125, epsilon = 1e-14);
        assert_relative_eq!(mp.kappa_gamma, -0.4, epsilon = 1e-15);
        let sh = mp.shifted.unwrap();
        assert_relative_eq!(sh.omega_small, 0.84, epsilon = 1e-15);
        assert_relative_eq!(sh.wtilde, 0.84 * 0.84 / 0.32, epsilon = 1e-13);
        assert_relative_eq!(sh.delta, -0.43588346786194438175, epsilon = 1e-14);
        assert!(morse_params(&params(0.0)).is_err());
    }

    #[test]
    fn rk4_zero_time_returns_initial_state() {
        let p = params(0.4);
        let out = rk4_oracle(&p, (0.5, -0.25), 0.0, 100).unwrap();
        assert_eq!(out, vec![(0.0, (0.5, -0.25))]);
    }

    #[test]
    fn rk4_tracks_closed_form() {
        let p = params(0.4);
        let orbit = Orbit::new(p, 1.0, 0.0).unwrap();
        let tau0 = p.tau0();
        let steps = 2000;
        let out = rk4_oracle(&p, (1.0, 0.0), tau0, steps).unwrap();
        let times: Vec<f64> = out.iter().map(|(t, _)| *t).collect();
        let exact = trajectory(&orbit, &times);
        let mut worst = 0.0f64;
        for ((_, (x, _)), pt) in out.iter().zip(exact.iter()) {
            worst = worst.max((x - pt.x).abs());
        }
        println!("rk4 vs closed form, worst |dx| over one tau0: {worst:.3e}");
        assert!(worst < 1e-9, "worst deviation {worst}");
    }

    #[test]
    fn rk4_detects_domain_exit() {
        let p = params(0.4);
        // Initial states at or past the wall are rejected before stepping.
        let err = rk4_oracle(&p, (-2.6, 0.0), 1.0, 10).unwrap_err();
        assert!(matches!(err, Error::BlowUp { t } if t == 0.0));
        // A coarse step fired straight at the wall lands past it.
        let err = rk4_oracle(&p, (0.0, -100.0), 1.0, 2).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
        // The same launch, integrated finely, glides along the wall instead:
        // the exact flow never leaves the half line in finite time.
        assert!(rk4_oracle(&p, (-2.4, -40.0), 10.0, 50).is_ok());
    }
}
