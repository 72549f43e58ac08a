use crate::error::{Error, Result};

/// Physical constants of the model plus the derived scales used everywhere:
/// the mass profile is m(x) = m0 / (1 + gamma x)^2 on the half line
/// x > -1/gamma. sigma0 = sqrt(hbar / (m0 omega0)) is the oscillator length
/// and s = 1/(gamma sigma0)^2 counts the bound states (2s - 2n - 1 > 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    m0: f64,
    omega0: f64,
    hbar: f64,
    gamma: f64,
    sigma0: f64,
}

impl ModelParams {
    pub fn new(m0: f64, omega0: f64, hbar: f64, gamma: f64) -> Result<Self> {
        if !(m0 > 0.0) || !m0.is_finite() {
            return Err(Error::domain(format!("m0 must be positive, got {m0}")));
        }
        if !(omega0 > 0.0) || !omega0.is_finite() {
            return Err(Error::domain(format!("omega0 must be positive, got {omega0}")));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::domain(format!("hbar must be positive, got {hbar}")));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::domain(format!("gamma must be >= 0, got {gamma}")));
        }
        let sigma0 = (hbar / (m0 * omega0)).sqrt();
        Ok(ModelParams { m0, omega0, hbar, gamma, sigma0 })
    }

    /// Natural units m0 = omega0 = hbar = 1, so sigma0 = 1 and the only knob
    /// is the dimensionless deformation gamma*sigma0.
    pub fn from_gamma_sigma0(gamma_sigma0: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, gamma_sigma0)
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Oscillator length sqrt(hbar/(m0 omega0)); sigma0^2 m0 omega0 / hbar = 1
    /// by construction.
    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    /// Dimensionless deformation gamma*sigma0.
    pub fn gtilde(&self) -> f64 {
        self.gamma * self.sigma0
    }

    pub fn is_deformed(&self) -> bool {
        self.gamma > 0.0
    }

    /// s = 1/(gamma sigma0)^2; defined only for gamma > 0.
    pub fn s(&self) -> Result<f64> {
        if self.gamma == 0.0 {
            return Err(Error::domain("s = 1/(gamma sigma0)^2 undefined at gamma = 0"));
        }
        let g = self.gtilde();
        Ok(1.0 / (g * g))
    }

    /// Undeformed period 2 pi / omega0.
    pub fn tau0(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega0
    }

    /// Left end of the configuration domain (-1/gamma, or -inf at gamma = 0).
    pub fn x_min(&self) -> f64 {
        if self.gamma > 0.0 {
            -1.0 / self.gamma
        } else {
            f64::NEG_INFINITY
        }
    }

    /// z(x) = 2s (1 + gamma x), the Morse-side radial variable.
    pub fn z_of_x(&self, x: f64) -> Result<f64> {
        Ok(2.0 * self.s()? * (1.0 + self.gamma * x))
    }
}
