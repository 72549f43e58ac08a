//! Command-line front end: every subcommand evaluates the closed forms from
//! the library and emits a deterministic table (CSV by default) suitable for
//! plotting, plus a `verify` battery that cross-checks the analytics against
//! the numeric oracles.

mod table;
mod verify;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use pdm_osc::classical::{self, Orbit};
use pdm_osc::coherent::{self, CoherentState, EvolutionConfig};
use pdm_osc::spectrum;
use pdm_osc::{default_grid, Coordinate, Grid, GridSpec, ModelParams};
use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;
use std::process::ExitCode;
use table::Table;

#[derive(Parser)]
#[command(
    name = "pdm-osc",
    version,
    about = "Exact classical, spectral, and coherent-state data for the \
             position-dependent-mass oscillator m(x) = m0 / (1 + gamma x)^2",
    after_help = "Units: m0 = omega0 = hbar = 1, so sigma0 = 1 and times are \
                  given in tau0 = 2 pi / omega0. Set PDM_OSC_GRID_POINTS to \
                  override the default grid density of quadrature checks."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(clap::Args)]
struct IoArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(clap::Args)]
struct AlphaArgs {
    /// Real part of the coherent label alpha.
    #[arg(long = "alpha-re", default_value_t = FRAC_1_SQRT_2)]
    alpha_re: f64,
    /// Imaginary part of the coherent label alpha.
    #[arg(long = "alpha-im", default_value_t = 0.0)]
    alpha_im: f64,
    /// Real label |alpha|; conflicts with the cartesian form.
    #[arg(long = "alpha-abs", conflicts_with_all = ["alpha_re", "alpha_im"])]
    alpha_abs: Option<f64>,
}

impl AlphaArgs {
    fn resolve(&self) -> Complex64 {
        match self.alpha_abs {
            Some(a) => Complex64::new(a, 0.0),
            None => Complex64::new(self.alpha_re, self.alpha_im),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bound-state energies E_n in units of hbar omega0.
    Spectrum {
        /// Deformation gamma sigma0 (>= 0).
        #[arg(long = "gamma-sigma0")]
        gamma_sigma0: f64,
        /// Highest level to list; defaults to every bound level (10 when undeformed).
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Normalized eigenfunction psi_n and its density on a uniform x grid.
    Eigenfunction {
        #[arg(long = "gamma-sigma0")]
        gamma_sigma0: f64,
        /// Level index.
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Number of grid points.
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Exact classical trajectory released from the turning point x = A.
    Classical {
        #[arg(long = "gamma-sigma0")]
        gamma_sigma0: f64,
        /// Release amplitude A in units of sigma0 (gamma^2 A^2 < 1).
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
        /// Trajectory length in units of tau0 = 2 pi / omega0.
        #[arg(long = "t-end", default_value_t = 3.0)]
        t_end: f64,
        /// Number of sample times.
        #[arg(long, default_value_t = 601)]
        samples: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Coherent-state expectation values along the exact label evolution.
    CoherentEvolve {
        #[arg(long = "gamma-sigma0")]
        gamma_sigma0: f64,
        #[command(flatten)]
        alpha: AlphaArgs,
        /// Evolution window in units of tau0.
        #[arg(long = "t-end", default_value_t = 2.0)]
        t_end: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// One closed <x>-<Pi> loop per deformation value.
    PhaseSpace {
        /// Deformation values, comma separated.
        #[arg(
            long = "gamma-sigma0",
            value_delimiter = ',',
            num_args = 1..,
            default_values_t = [0.0, 0.2, 0.4, 0.5]
        )]
        gamma_sigma0: Vec<f64>,
        /// Real label |alpha| setting the loop size.
        #[arg(long = "alpha-abs", default_value_t = FRAC_1_SQRT_2)]
        alpha_abs: f64,
        /// Sample times per loop.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Uncertainty product surface over the complex label square [-1,1]^2.
    GupSurface {
        #[arg(long = "gamma-sigma0", default_value_t = 0.2)]
        gamma_sigma0: f64,
        /// Grid resolution per label axis.
        #[arg(long, default_value_t = 41)]
        samples: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Delta x, Delta p, and their product along the evolution of a real label.
    UncertaintySeries {
        #[arg(long = "gamma-sigma0", default_value_t = 0.4)]
        gamma_sigma0: f64,
        /// Real label |alpha|.
        #[arg(long = "alpha-abs", default_value_t = FRAC_1_SQRT_2)]
        alpha_abs: f64,
        /// Window in units of tau0.
        #[arg(long = "t-end", default_value_t = 2.0)]
        t_end: f64,
        #[arg(long, default_value_t = 401)]
        samples: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Probability density snapshots: one frame per sample time.
    DensityMovie {
        #[arg(long = "gamma-sigma0", default_value_t = 0.4)]
        gamma_sigma0: f64,
        #[command(flatten)]
        alpha: AlphaArgs,
        /// Number of frames.
        #[arg(long, default_value_t = 9)]
        n: usize,
        /// Window in units of tau0.
        #[arg(long = "t-end", default_value_t = 1.0)]
        t_end: f64,
        /// Spatial points per frame.
        #[arg(long, default_value_t = 801)]
        samples: usize,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Cross-check the closed forms against the numeric oracles.
    Verify {
        /// Which battery to run.
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
    },
}

enum AppError {
    Usage(String),
    Domain(String),
}

impl From<pdm_osc::Error> for AppError {
    fn from(e: pdm_osc::Error) -> Self {
        AppError::Domain(e.to_string())
    }
}

type AppResult<T> = Result<T, AppError>;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn grid_override() -> AppResult<Option<usize>> {
    match std::env::var("PDM_OSC_GRID_POINTS") {
        Err(_) => Ok(None),
        Ok(s) => s.trim().parse::<usize>().map(Some).map_err(|_| {
            AppError::Usage(format!("PDM_OSC_GRID_POINTS must be a positive integer, got {s:?}"))
        }),
    }
}

fn base_meta(t: &mut Table, command: &str) -> AppResult<()> {
    t.meta_str("command", command);
    t.meta_str("units", "m0=omega0=hbar=sigma0=1");
    if let Some(n) = grid_override()? {
        t.meta_int("grid_points_override", n as i64);
    }
    Ok(())
}

fn params(gamma_sigma0: f64) -> AppResult<ModelParams> {
    Ok(ModelParams::from_gamma_sigma0(gamma_sigma0)?)
}

fn need_samples(samples: usize, least: usize) -> AppResult<()> {
    if samples < least {
        return Err(AppError::Usage(format!("--samples must be at least {least}, got {samples}")));
    }
    Ok(())
}

fn run(cli: Cli) -> AppResult<ExitCode> {
    let (table, io, svg_axes) = match cli.command {
        Command::Verify { suite } => {
            let ok = verify::run(suite, grid_override()?)?;
            return Ok(ExitCode::from(if ok { 0 } else { 1 }));
        }
        Command::Spectrum { gamma_sigma0, n, io } => {
            (spectrum_table(gamma_sigma0, n)?, io, Some((0, 1, None)))
        }
        Command::Eigenfunction { gamma_sigma0, n, samples, io } => {
            (eigenfunction_table(gamma_sigma0, n, samples)?, io, Some((0, 2, None)))
        }
        Command::Classical { gamma_sigma0, amplitude, t_end, samples, io } => {
            (classical_table(gamma_sigma0, amplitude, t_end, samples)?, io, Some((0, 1, None)))
        }
        Command::CoherentEvolve { gamma_sigma0, alpha, t_end, samples, io } => {
            (coherent_table(gamma_sigma0, alpha.resolve(), t_end, samples)?, io, Some((0, 3, None)))
        }
        Command::PhaseSpace { gamma_sigma0, alpha_abs, samples, io } => {
            (phase_space_table(&gamma_sigma0, alpha_abs, samples)?, io, Some((2, 3, Some(0))))
        }
        Command::GupSurface { gamma_sigma0, samples, io } => {
            (gup_surface_table(gamma_sigma0, samples)?, io, None)
        }
        Command::UncertaintySeries { gamma_sigma0, alpha_abs, t_end, samples, io } => {
            (uncertainty_table(gamma_sigma0, alpha_abs, t_end, samples)?, io, Some((0, 3, None)))
        }
        Command::DensityMovie { gamma_sigma0, alpha, n, t_end, samples, io } => {
            (density_table(gamma_sigma0, alpha.resolve(), n, t_end, samples)?, io, Some((2, 3, Some(0))))
        }
    };

    let rendered = match io.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
        Format::Svg => match svg_axes {
            Some((x, y, group)) => table.to_svg(x, y, group),
            None => {
                return Err(AppError::Usage(
                    "--format svg is not supported for this subcommand".into(),
                ))
            }
        },
    };

    match &io.out {
        None => print!("{rendered}"),
        Some(path) => std::fs::write(path, rendered).map_err(|e| {
            AppError::Usage(format!("cannot write {}: {e}", path.display()))
        })?,
    }
    Ok(ExitCode::SUCCESS)
}

/// Window containing everything above 1e-15 of the peak density, padded a
/// little; keeps uniform-x output grids off the far exponential tails.
fn support_window(xs: &[f64], dens: &[f64]) -> (f64, f64) {
    let peak = dens.iter().copied().fold(0.0, f64::max);
    let cut = 1e-15 * peak;
    let lo = xs.iter().zip(dens).find(|(_, &d)| d >= cut).map_or(xs[0], |(x, _)| *x);
    let hi = xs
        .iter()
        .zip(dens)
        .rev()
        .find(|(_, &d)| d >= cut)
        .map_or(xs[xs.len() - 1], |(x, _)| *x);
    let pad = 0.05 * (hi - lo);
    ((lo - pad).max(xs[0]), (hi + pad).min(xs[xs.len() - 1]))
}

fn spectrum_table(gamma_sigma0: f64, n: Option<usize>) -> AppResult<Table> {
    let p = params(gamma_sigma0)?;
    let bound = spectrum::max_bound_index(&p)?;
    let n_hi = n.unwrap_or(bound.max_or(10));
    let rows = spectrum::spectrum_table(&p, n_hi)?;
    let mut t = Table::new();
    base_meta(&mut t, "spectrum")?;
    t.meta_float("gamma_sigma0", gamma_sigma0);
    t.meta_int("n_levels", rows.len() as i64);
    let scale = p.hbar() * p.omega0();
    t.push_int("n", rows.iter().map(|r| r.n as i64).collect());
    t.push_float("energy_hbar_omega0", rows.iter().map(|r| r.energy / scale).collect());
    Ok(t)
}

fn eigenfunction_table(gamma_sigma0: f64, n: usize, samples: usize) -> AppResult<Table> {
    need_samples(samples, 2)?;
    let p = params(gamma_sigma0)?;
    let span = default_grid(&p, &GridSpec::for_levels(&p, n.max(1))?, grid_override()?)?;
    let x = span.x_values(&p)?;
    let coarse = spectrum::eigenfunction(&p, n, &span)?;
    let dens: Vec<f64> = coarse.values().iter().map(|v| v.norm_sqr()).collect();
    let (lo, hi) = support_window(&x, &dens);
    let grid = Grid::uniform(Coordinate::X, lo, hi, samples)?;
    let psi = spectrum::eigenfunction(&p, n, &grid)?;
    let mut t = Table::new();
    base_meta(&mut t, "eigenfunction")?;
    t.meta_float("gamma_sigma0", gamma_sigma0);
    t.meta_int("n", n as i64);
    t.meta_float("energy_hbar_omega0", spectrum::energy(&p, n)? / (p.hbar() * p.omega0()));
    t.push_float("x_sigma0", grid.points().to_vec());
    t.push_float("psi", psi.values().iter().map(|v| v.re).collect());
    t.push_float("density", psi.values().iter().map(|v| v.norm_sqr()).collect());
    Ok(t)
}

fn classical_table(gamma_sigma0: f64, amplitude: f64, t_end: f64, samples: usize) -> AppResult<Table> {
    need_samples(samples, 2)?;
    let p = params(gamma_sigma0)?;
    let orbit = Orbit::new(p, amplitude * p.sigma0(), 0.0)?;
    let tau0 = p.tau0();
    let times: Vec<f64> =
        (0..samples).map(|k| t_end * tau0 * k as f64 / (samples - 1) as f64).collect();
    let pts = classical::trajectory(&orbit, &times);
    let mut t = Table::new();
    base_meta(&mut t, "classical")?;
    t.meta_float("gamma_sigma0", gamma_sigma0);
    t.meta_float("amplitude_sigma0", amplitude);
    t.meta_float("t_end_tau0", t_end);
    t.meta_float("deformed_frequency_omega0", classical::orbit_frequency(&orbit) / p.omega0());
    t.push_float("t_tau0", pts.iter().map(|pt| pt.t / tau0).collect());
    t.push_float("x_sigma0", pts.iter().map(|pt| pt.x / p.sigma0()).collect());
    t.push_float("pi_gamma", pts.iter().map(|pt| pt.pi_gamma).collect());
    Ok(t)
}

fn coherent_table(gamma_sigma0: f64, alpha: Complex64, t_end: f64, samples: usize) -> AppResult<Table> {
    need_samples(samples, 2)?;
    let p = params(gamma_sigma0)?;
    let state = CoherentState::new(p, alpha)?;
    let tau0 = p.tau0();
    let cfg = EvolutionConfig::new(t_end * tau0, samples)?;
    let track = coherent::evolve(&state, &cfg)?;
    let mut t = Table::new();
    base_meta(&mut t, "coherent-evolve")?;
    t.meta_float("gamma_sigma0", gamma_sigma0);
    t.meta_float("alpha_re", alpha.re);
    t.meta_float("alpha_im", alpha.im);
    t.meta_float("t_end_tau0", t_end);
    if p.is_deformed() {
        t.meta_float("lambda_cs", state.lambda_cs()?);
    }
    t.meta_float(
        "coherent_frequency_omega0",
        coherent::coherent_frequency(&p, alpha.norm())? / p.omega0(),
    );
    let mut ts = Vec::with_capacity(track.len());
    let (mut re, mut im) = (Vec::new(), Vec::new());
    let (mut xm, mut pim) = (Vec::new(), Vec::new());
    for s in &track {
        let m = coherent::coherent_moments(&s.state)?;
        ts.push(s.t / tau0);
        re.push(s.state.alpha().re);
        im.push(s.state.alpha().im);
        xm.push(m.x_mean / p.sigma0());
        pim.push(m.pi_mean);
    }
    t.push_float("t_tau0", ts);
    t.push_float("alpha_re", re);
    t.push_float("alpha_im", im);
    t.push_float("x_mean_sigma0", xm);
    t.push_float("pi_gamma_mean", pim);
    Ok(t)
}

fn phase_space_table(gammas: &[f64], alpha_abs: f64, samples: usize) -> AppResult<Table> {
    need_samples(samples, 2)?;
    let mut t = Table::new();
    base_meta(&mut t, "phase-space")?;
    t.meta_float("alpha_abs", alpha_abs);
    t.meta_int("samples_per_loop", samples as i64);
    let (mut gcol, mut ts, mut xs, mut pis) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &gs in gammas {
        let p = params(gs)?;
        let omega = coherent::coherent_frequency(&p, alpha_abs)?;
        let period = 2.0 * std::f64::consts::PI / omega;
        for k in 0..samples {
            let time = period * k as f64 / (samples - 1) as f64;
            let pt = coherent::expected_trajectory(&p, alpha_abs, time)?;
            gcol.push(gs);
            ts.push(time / p.tau0());
            xs.push(pt.x_mean / p.sigma0());
            pis.push(pt.pi_mean);
        }
    }
    t.push_float("gamma_sigma0", gcol);
    t.push_float("t_tau0", ts);
    t.push_float("x_mean_sigma0", xs);
    t.push_float("pi_gamma_mean", pis);
    Ok(t)
}

fn gup_surface_table(gamma_sigma0: f64, samples: usize) -> AppResult<Table> {
    need_samples(samples, 2)?;
    let p = params(gamma_sigma0)?;
    let cells = coherent::gup_surface(&p, (-1.0, 1.0), (-1.0, 1.0), samples)?;
    let mut t = Table::new();
    base_meta(&mut t, "gup-surface")?;
    t.meta_float("gamma_sigma0", gamma_sigma0);
    t.meta_int("resolution", samples as i64);
    t.meta_str("label_range", "[-1,1]x[-1,1]");
    t.meta_str("invalid_cells", "nan");
    let n = cells.len();
    let (mut re, mut im) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut dx, mut dp, mut prod) = (Vec::new(), Vec::new(), Vec::new());
    for c in &cells {
        re.push(c.alpha.re);
        im.push(c.alpha.im);
        match c.values {
            Some(v) => {
                dx.push(v.dx / p.sigma0());
                dp.push(v.dp);
                prod.push(v.product / p.hbar());
            }
            None => {
                dx.push(f64::NAN);
                dp.push(f64::NAN);
                prod.push(f64::NAN);
            }
        }
    }
    t.push_float("alpha_re", re);
    t.push_float("alpha_im", im);
    t.push_float("delta_x_sigma0", dx);
    t.push_float("delta_p", dp);
    t.push_float("product_hbar", prod);
    Ok(t)
}

fn uncertainty_table(gamma_sigma0: f64, alpha_abs: f64, t_end: f64, samples: usize) -> AppResult<Table> {
    need_samples(samples, 2)?;
    let p = params(gamma_sigma0)?;
    let cfg = EvolutionConfig::new(t_end * p.tau0(), samples)?;
    let series = coherent::uncertainty_timeseries(&p, alpha_abs, &cfg)?;
    let mut t = Table::new();
    base_meta(&mut t, "uncertainty-series")?;
    t.meta_float("gamma_sigma0", gamma_sigma0);
    t.meta_float("alpha_abs", alpha_abs);
    t.meta_float("t_end_tau0", t_end);
    t.meta_float(
        "coherent_frequency_omega0",
        coherent::coherent_frequency(&p, alpha_abs)? / p.omega0(),
    );
    t.push_float("t_tau0", series.iter().map(|u| u.t / p.tau0()).collect());
    t.push_float("delta_x_sigma0", series.iter().map(|u| u.dx / p.sigma0()).collect());
    t.push_float("delta_p", series.iter().map(|u| u.dp).collect());
    t.push_float("product_hbar", series.iter().map(|u| u.dxdp / p.hbar()).collect());
    Ok(t)
}

fn density_table(
    gamma_sigma0: f64,
    alpha: Complex64,
    frames: usize,
    t_end: f64,
    samples: usize,
) -> AppResult<Table> {
    need_samples(samples, 2)?;
    if frames < 2 {
        return Err(AppError::Usage(format!("--n needs at least 2 frames, got {frames}")));
    }
    let p = params(gamma_sigma0)?;
    let state = CoherentState::new(p, alpha)?;
    let cfg = EvolutionConfig::new(t_end * p.tau0(), frames)?;
    let labels: Vec<Complex64> =
        coherent::evolve(&state, &cfg)?.iter().map(|s| s.state.alpha()).collect();
    let span = default_grid(&p, &GridSpec::for_coherent(&p, &labels)?, grid_override()?)?;
    let x = span.x_values(&p)?;
    let mut dens = vec![0.0f64; x.len()];
    for label in &labels {
        let snap = CoherentState::new(p, *label)?;
        let w = coherent::coherent_wavefn(&snap, &span)?;
        for (d, v) in dens.iter_mut().zip(w.values()) {
            *d = d.max(v.norm_sqr());
        }
    }
    let (lo, hi) = support_window(&x, &dens);
    let grid = Grid::uniform(Coordinate::X, lo, hi, samples)?;
    let snapshots = coherent::density_evolution(&state, &cfg, &grid)?;
    let mut t = Table::new();
    base_meta(&mut t, "density-movie")?;
    t.meta_float("gamma_sigma0", gamma_sigma0);
    t.meta_float("alpha_re", alpha.re);
    t.meta_float("alpha_im", alpha.im);
    t.meta_float("t_end_tau0", t_end);
    t.meta_int("frames", frames as i64);
    let times = cfg.times();
    let rows = frames * samples;
    let mut fcol = Vec::with_capacity(rows);
    let (mut ts, mut xs, mut rho) = (Vec::new(), Vec::new(), Vec::new());
    for (f, snap) in snapshots.iter().enumerate() {
        for (xi, ri) in grid.points().iter().zip(snap.iter()) {
            fcol.push(f as i64);
            ts.push(times[f] / p.tau0());
            xs.push(*xi / p.sigma0());
            rho.push(*ri * p.sigma0());
        }
    }
    t.push_int("frame", fcol);
    t.push_float("t_tau0", ts);
    t.push_float("x_sigma0", xs);
    t.push_float("density_sigma0", rho);
    Ok(t)
}
