//! Verification suites behind `pdm-osc verify`: each check recomputes a
//! closed form and an independent route, then compares against the stated
//! tolerance. All checks print, even after a failure, so one run gives the
//! whole picture.

use num_complex::Complex64;
use pdm_osc::classical::{self, Orbit};
use pdm_osc::coherent::{self, CoherentState, EvolutionConfig};
use pdm_osc::oracle::{self, FdConfig, MorseVariant, Observable};
use pdm_osc::spectrum;
use pdm_osc::susy::{self, PartnerSide};
use pdm_osc::{default_grid, DensityConvention, GridSpec, ModelParams, Result, WaveFn};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Classical,
    Spectrum,
    Susy,
    Coherent,
}

pub struct Check {
    pub name: &'static str,
    pub setting: String,
    pub observed: f64,
    pub tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.observed.is_finite() && self.observed <= self.tolerance
    }
}

fn params(gs: f64) -> ModelParams {
    ModelParams::from_gamma_sigma0(gs).unwrap()
}

fn scaled(f: &WaveFn, c: f64) -> Result<WaveFn> {
    let values = f.values().iter().map(|v| v * c).collect();
    WaveFn::new(f.grid().clone(), values, f.convention())
}

fn classical_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut worst_x = 0.0f64;
    let mut worst_drift = 0.0f64;
    for gs in [0.4, 0.8] {
        let p = params(gs);
        let orbit = Orbit::new(p, p.sigma0(), 0.0)?;
        let t_end = 3.0 * p.tau0();
        let steps = 6000;
        let rk4 = classical::rk4_oracle(&p, (p.sigma0(), 0.0), t_end, steps)?;
        let times: Vec<f64> = rk4.iter().map(|(t, _)| *t).collect();
        let closed = classical::trajectory(&orbit, &times);
        let e0 = orbit.energy();
        for (a, (_, (x, mom))) in closed.iter().zip(rk4.iter()) {
            worst_x = worst_x.max((a.x - x).abs() / p.sigma0());
            let e = classical::classical_energy(&p, *x, *mom)?;
            worst_drift = worst_drift.max(((e - e0) / e0).abs());
        }
    }
    out.push(Check {
        name: "closed trajectory vs rk4",
        setting: "gs in {0.4, 0.8}, A = sigma0, 3 tau0".into(),
        observed: worst_x,
        tolerance: 1e-6,
    });
    out.push(Check {
        name: "rk4 energy drift",
        setting: "same orbits".into(),
        observed: worst_drift,
        tolerance: 1e-8,
    });

    let mut worst_phase = 0.0f64;
    for gs in [0.4, 0.8] {
        let p = params(gs);
        let orbit = Orbit::new(p, p.sigma0(), 0.0)?;
        let period = 2.0 * PI / classical::orbit_frequency(&orbit);
        for k in 0..50 {
            let t = 2.0 * period * k as f64 / 50.0;
            let gap = classical::deformed_phase(&orbit, t + period)
                - classical::deformed_phase(&orbit, t)
                - 2.0 * PI;
            worst_phase = worst_phase.max(gap.abs());
        }
    }
    out.push(Check {
        name: "deformed phase periodicity",
        setting: "gs in {0.4, 0.8}, 50 times".into(),
        observed: worst_phase,
        tolerance: 1e-9,
    });
    Ok(())
}

fn spectrum_checks(out: &mut Vec<Check>, grid_points: Option<usize>) -> Result<()> {
    let mut worst_fd = 0.0f64;
    for gs in [0.1, 0.2, 0.4] {
        let p = params(gs);
        let cfg = FdConfig::reference(&p);
        let fd = oracle::solve_morse_fd_richardson(&p, MorseVariant::Base, &cfg)?;
        let top = spectrum::max_bound_index(&p)?.max_or(5).min(5);
        for n in 0..=top.min(fd.len().saturating_sub(1)) {
            let exact = spectrum::energy(&p, n)?;
            worst_fd = worst_fd.max(((fd[n].energy - exact) / exact).abs());
        }
    }
    out.push(Check {
        name: "energies vs fd oracle",
        setting: "gs in {0.1, 0.2, 0.4}, n <= 5".into(),
        observed: worst_fd,
        tolerance: 1e-6,
    });

    let mut worst_gram = 0.0f64;
    for gs in [0.2, 0.4] {
        let p = params(gs);
        let grid = default_grid(&p, &GridSpec::for_levels(&p, 5)?, grid_points)?;
        let states: Vec<WaveFn> =
            (0..=5).map(|n| spectrum::eigenfunction(&p, n, &grid)).collect::<Result<_>>()?;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let ip = oracle::inner_product(&p, a, b)?;
                let target = if i == j { 1.0 } else { 0.0 };
                worst_gram = worst_gram.max((ip.re - target).abs()).max(ip.im.abs());
            }
        }
    }
    out.push(Check {
        name: "eigenfunction orthonormality",
        setting: "gs in {0.2, 0.4}, n <= 5".into(),
        observed: worst_gram,
        tolerance: 1e-8,
    });

    let p0 = params(0.0);
    let mut worst_flat = 0.0f64;
    for n in 0..=8usize {
        let e = spectrum::energy(&p0, n)?;
        worst_flat = worst_flat.max((e - (n as f64 + 0.5)).abs());
    }
    out.push(Check {
        name: "undeformed limit spacing",
        setting: "gs = 0, n <= 8".into(),
        observed: worst_flat,
        tolerance: 1e-12,
    });
    Ok(())
}

fn susy_checks(out: &mut Vec<Check>, grid_points: Option<usize>) -> Result<()> {
    let p = params(0.4);
    let grid = default_grid(&p, &GridSpec::for_family(&p, 3, 3.0)?, grid_points)?;
    let hbar_omega = p.hbar() * p.omega0();
    let mut worst_map = 0.0f64;
    for n in 1..=3usize {
        let psi = spectrum::eigenfunction(&p, n, &grid)?;
        let coeff = (susy::partner_energy(&p, n, PartnerSide::Plus)? / hbar_omega).sqrt();
        let down = susy::apply_annihilation(&p, 1.0, &psi)?;
        let target = scaled(&susy::partner_minus_wavefn(&p, n - 1, &grid)?, coeff)?;
        worst_map = worst_map.max(oracle::l2_distance(&p, &down, &target)?);
    }
    out.push(Check {
        name: "intertwining tower map",
        setting: "gs = 0.4, n in {1, 2, 3}".into(),
        observed: worst_map,
        tolerance: 1e-6,
    });

    let mut worst_tel = 0.0f64;
    for gs in [0.2, 0.4] {
        let p = params(gs);
        for beta in [1.0, 1.5, 2.0] {
            for n in 0..=5usize {
                let closed = susy::si_energy(&p, n, beta)?;
                let sum: f64 = (0..n)
                    .map(|j| susy::remainder(&p, beta + 2.0 * j as f64))
                    .sum();
                worst_tel = worst_tel.max((closed - sum).abs());
            }
        }
    }
    out.push(Check {
        name: "shape-invariance telescoping",
        setting: "gs in {0.2, 0.4}, beta in {1, 1.5, 2}, n <= 5".into(),
        observed: worst_tel,
        tolerance: 1e-12,
    });

    let report = susy::su11_check(&p, 3)?;
    out.push(Check {
        name: "su(1,1) closure",
        setting: "gs = 0.4, n <= 3".into(),
        observed: if report.skipped { f64::NAN } else { report.max_residual },
        tolerance: 1e-10,
    });
    Ok(())
}

fn coherent_checks(out: &mut Vec<Check>, grid_points: Option<usize>) -> Result<()> {
    let p = params(0.4);
    let alpha = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let state = CoherentState::new(p, alpha)?;
    let grid = default_grid(&p, &GridSpec::for_coherent(&p, &[alpha])?, grid_points)?;
    let psi = coherent::coherent_wavefn(&state, &grid)?;
    let down = susy::apply_annihilation(&p, 1.0, &psi)?;
    let target: Vec<Complex64> = psi.values().iter().map(|v| v * alpha).collect();
    let target = WaveFn::new(grid.clone(), target, DensityConvention::Psi)?;
    out.push(Check {
        name: "coherent eigenproperty",
        setting: "gs = 0.4, alpha = 1/sqrt2".into(),
        observed: oracle::l2_distance(&p, &down, &target)?,
        tolerance: 1e-6,
    });

    let mut worst_gup = 0.0f64;
    for gs in [0.2, 0.4] {
        let pg = params(gs);
        for i in 0..5 {
            for j in 0..5 {
                let a = Complex64::new(-1.0 + 0.5 * i as f64, -1.0 + 0.5 * j as f64);
                let st = CoherentState::new(pg, a)?;
                let m = coherent::coherent_moments(&st)?;
                let lhs = (m.x_variance() * m.pi_variance()).sqrt();
                let rhs = 0.5 * pg.hbar() * (1.0 + pg.gamma() * m.x_mean);
                worst_gup = worst_gup.max(((lhs - rhs) / rhs).abs());
            }
        }
    }
    out.push(Check {
        name: "gup product identity",
        setting: "gs in {0.2, 0.4}, 5 x 5 labels".into(),
        observed: worst_gup,
        tolerance: 1e-10,
    });

    let omega = coherent::coherent_frequency(&p, FRAC_1_SQRT_2)?;
    let cfg = EvolutionConfig::new(2.0 * PI / omega, 6)?;
    let samples = coherent::evolve(&state, &cfg)?;
    let alphas: Vec<Complex64> = samples.iter().map(|s| s.state.alpha()).collect();
    let ggrid = default_grid(&p, &GridSpec::for_coherent(&p, &alphas)?, grid_points)?;
    let mut worst_mom = 0.0f64;
    for s in &samples {
        let m = coherent::coherent_moments(&s.state)?;
        let w = coherent::coherent_wavefn(&s.state, &ggrid)?;
        let qx = oracle::expectation_quadrature(&p, &w, Observable::X)?;
        let qpi = oracle::expectation_quadrature(&p, &w, Observable::Pi)?;
        worst_mom = worst_mom.max((qx - m.x_mean).abs()).max((qpi - m.pi_mean).abs());
    }
    out.push(Check {
        name: "closed moments vs quadrature",
        setting: "gs = 0.4, one period, 6 times".into(),
        observed: worst_mom,
        tolerance: 1e-6,
    });
    Ok(())
}

pub fn run(suite: Suite, grid_points: Option<usize>) -> Result<bool> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::All | Suite::Classical) {
        classical_checks(&mut checks)?;
    }
    if matches!(suite, Suite::All | Suite::Spectrum) {
        spectrum_checks(&mut checks, grid_points)?;
    }
    if matches!(suite, Suite::All | Suite::Susy) {
        susy_checks(&mut checks, grid_points)?;
    }
    if matches!(suite, Suite::All | Suite::Coherent) {
        coherent_checks(&mut checks, grid_points)?;
    }

    println!("{:<30} {:<42} {:>12} {:>10} {:>7}", "check", "setting", "observed", "tolerance", "status");
    let mut all_ok = true;
    for c in &checks {
        let ok = c.passed();
        all_ok &= ok;
        println!(
            "{:<30} {:<42} {:>12.3e} {:>10.1e} {:>7}",
            c.name,
            c.setting,
            c.observed,
            c.tolerance,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "overall: {} ({} checks)",
        if all_ok { "PASS" } else { "FAIL" },
        checks.len()
    );
    Ok(all_ok)
}
