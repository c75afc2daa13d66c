//! Parameter records shared across the crate. Units: ħ = k_B = 1, every
//! frequency measured in a user-chosen reference frequency.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Zero-temperature Ohmic bath with a Lorentzian cutoff.
///
/// Spectral density `I(ω) = (2/π) M γ0 Λ² ω / (ω² + Λ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub gamma0: f64,
    pub lambda_cut: f64,
}

impl BathSpec {
    pub fn new(gamma0: f64, lambda_cut: f64) -> Result<Self> {
        let bath = Self { gamma0, lambda_cut };
        bath.validate()?;
        Ok(bath)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma0 > 0.0 && self.gamma0.is_finite()) {
            return Err(Error::Config(format!(
                "gamma0 must be positive, got {}",
                self.gamma0
            )));
        }
        if !(self.lambda_cut > 0.0 && self.lambda_cut.is_finite()) {
            return Err(Error::Config(format!(
                "lambda_cut must be positive, got {}",
                self.lambda_cut
            )));
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate) but also accepts `gamma0 = 0`, the
    /// uncoupled control configuration.
    pub fn validate_allowing_uncoupled(&self) -> Result<()> {
        if self.gamma0 == 0.0 {
            return Self::new(1.0, self.lambda_cut).map(|_| ());
        }
        self.validate()
    }

    /// Same bath with the coupling switched off. Only meaningful for
    /// control runs; every closed form then returns zero.
    pub fn uncoupled(lambda_cut: f64) -> Self {
        Self {
            gamma0: 0.0,
            lambda_cut,
        }
    }

    pub fn is_uncoupled(&self) -> bool {
        self.gamma0 == 0.0
    }

    pub fn spectral_density(&self, mass: f64, omega: f64) -> f64 {
        let l2 = self.lambda_cut * self.lambda_cut;
        (2.0 / std::f64::consts::PI) * mass * self.gamma0 * l2 * omega / (omega * omega + l2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Stable,
    Inverted,
}

/// The Brownian particle: mass, bare frequency and potential orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub mass: f64,
    pub omega: f64,
    pub orientation: Orientation,
}

impl SystemSpec {
    pub fn stable(mass: f64, omega: f64) -> Result<Self> {
        let sys = Self {
            mass,
            omega,
            orientation: Orientation::Stable,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn inverted(mass: f64, omega: f64) -> Result<Self> {
        let sys = Self {
            mass,
            omega,
            orientation: Orientation::Inverted,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Config(format!(
                "mass must be positive, got {}",
                self.mass
            )));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::Config(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// Checks the system against a bath: the inverted closed forms carry
    /// `Λ² − Ω²` in every denominator.
    pub fn validate_with(&self, bath: &BathSpec) -> Result<()> {
        self.validate()?;
        if bath.lambda_cut <= 0.0 || !bath.lambda_cut.is_finite() {
            return Err(Error::Config("lambda_cut must be positive".into()));
        }
        if self.orientation == Orientation::Inverted && self.omega >= bath.lambda_cut {
            return Err(Error::Config(format!(
                "inverted oscillator needs omega < lambda_cut (omega = {}, lambda = {})",
                self.omega, bath.lambda_cut
            )));
        }
        Ok(())
    }

    pub fn is_stable(&self) -> bool {
        self.orientation == Orientation::Stable
    }
}

/// True when `γ0/Ω > 0.1`, outside the weak-coupling regime the
/// coefficients are derived in.
pub fn weak_coupling_violated(sys: &SystemSpec, bath: &BathSpec) -> bool {
    bath.gamma0 / sys.omega > 0.1
}

/// Two Gaussian packets at `±(L0, P0)` with common width `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionSpec {
    pub l0: f64,
    pub p0: f64,
    pub delta: f64,
}

impl SuperpositionSpec {
    pub fn new(l0: f64, p0: f64, delta: f64) -> Result<Self> {
        let sup = Self { l0, p0, delta };
        sup.validate()?;
        Ok(sup)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.l0 >= 0.0 && self.l0.is_finite()) {
            return Err(Error::Config(format!("l0 must be >= 0, got {}", self.l0)));
        }
        if !self.p0.is_finite() {
            return Err(Error::Config(format!("p0 must be finite, got {}", self.p0)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if self.l0 == 0.0 && self.p0 == 0.0 {
            return Err(Error::Config(
                "l0 and p0 cannot both vanish: the packets coincide".into(),
            ));
        }
        Ok(())
    }

    /// Upper bound of the fringe exponent, `L0²/δ² + δ² P0²`.
    pub fn a_max(&self) -> f64 {
        self.l0 * self.l0 / (self.delta * self.delta) + self.delta * self.delta * self.p0 * self.p0
    }

    /// `Ñ² = ½ [1 + exp(−a_max)]⁻¹`; each packet's Wigner function carries
    /// weight Ñ².
    pub fn n_tilde_sq(&self) -> f64 {
        0.5 / (1.0 + (-self.a_max()).exp())
    }
}
