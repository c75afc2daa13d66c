//! Closed forms of the four time-dependent master-equation coefficients at
//! zero temperature: frequency shift δΩ²(t), dissipation γ(t), normal
//! diffusion D(t) and anomalous diffusion f(t).
//!
//! For the stable oscillator the exact expressions are available at every
//! t ≥ 0, together with their late-time (Λt > 1) simplifications and the
//! t → ∞ plateaus. The inverted oscillator (Ω → iΩ) only has the late-time
//! set. Only D carries the mass, through its `2Mγ0/π` prefactor.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::oracle::CoefficientKind;
use crate::params::{BathSpec, Orientation, SystemSpec};
use crate::specfun::{self, chi_cosh_minus_shi_sinh, shi_cosh_minus_chi_sinh};

/// Inverted-oscillator coefficients are refused below `INVERTED_T_FLOOR / Ω`,
/// where Chi(Ωt) diverges.
pub const INVERTED_T_FLOOR: f64 = 1e-12;

/// The four coefficients at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSample {
    pub t: f64,
    pub delta_omega_sq: f64,
    pub gamma: f64,
    pub d_normal: f64,
    pub f_anom: f64,
}

impl CoefficientSample {
    pub fn zero(t: f64) -> Self {
        Self {
            t,
            delta_omega_sq: 0.0,
            gamma: 0.0,
            d_normal: 0.0,
            f_anom: 0.0,
        }
    }

    pub fn get(&self, kind: CoefficientKind) -> f64 {
        match kind {
            CoefficientKind::FreqShift => self.delta_omega_sq,
            CoefficientKind::Dissipation => self.gamma,
            CoefficientKind::NormalDiff => self.d_normal,
            CoefficientKind::AnomalousDiff => self.f_anom,
        }
    }

    /// Every coefficient multiplied by `k`, time unchanged.
    pub fn scaled(self, k: f64) -> Self {
        Self {
            t: self.t,
            delta_omega_sq: self.delta_omega_sq * k,
            gamma: self.gamma * k,
            d_normal: self.d_normal * k,
            f_anom: self.f_anom * k,
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(domain("t", t, "time must be >= 0"));
    }
    Ok(())
}

fn require_stable(sys: &SystemSpec) -> Result<()> {
    match sys.orientation {
        Orientation::Stable => Ok(()),
        Orientation::Inverted => Err(Error::Config(
            "this closed form exists for the stable oscillator only".into(),
        )),
    }
}

struct Ratios {
    lambda: f64,
    omega: f64,
    /// `Λ² / (Λ² + Ω²)` for the stable branch, `Λ² / (Λ² − Ω²)` when inverted.
    weight: f64,
}

fn ratios(sys: &SystemSpec, bath: &BathSpec) -> Ratios {
    let l2 = bath.lambda_cut * bath.lambda_cut;
    let w2 = sys.omega * sys.omega;
    let weight = match sys.orientation {
        Orientation::Stable => l2 / (l2 + w2),
        Orientation::Inverted => l2 / (l2 - w2),
    };
    Ratios {
        lambda: bath.lambda_cut,
        omega: sys.omega,
        weight,
    }
}

/// Frequency shift `−2γ0 Λ³/(Λ²+Ω²) · [1 − e^{−Λt}(cos Ωt − (Ω/Λ) sin Ωt)]`.
pub fn delta_omega_sq(t: f64, sys: &SystemSpec, bath: &BathSpec) -> Result<f64> {
    check_time(t)?;
    require_stable(sys)?;
    let r = ratios(sys, bath);
    let (s, c) = (r.omega * t).sin_cos();
    let bracket = 1.0 - (-r.lambda * t).exp() * (c - r.omega / r.lambda * s);
    Ok(-2.0 * bath.gamma0 * r.lambda * r.weight * bracket)
}

/// Dissipation `γ0 Λ²/(Λ²+Ω²) · [1 − e^{−Λt}(cos Ωt + (Λ/Ω) sin Ωt)]`.
pub fn gamma_t(t: f64, sys: &SystemSpec, bath: &BathSpec) -> Result<f64> {
    check_time(t)?;
    require_stable(sys)?;
    let r = ratios(sys, bath);
    let (s, c) = (r.omega * t).sin_cos();
    let bracket = 1.0 - (-r.lambda * t).exp() * (c + r.lambda / r.omega * s);
    Ok(bath.gamma0 * r.weight * bracket)
}

/// Normal diffusion, exact at every t ≥ 0.
///
/// The textbook form combines `Shi(Λt)` and `Chi(Λt)` with `cosh Λt`, `sinh Λt`;
/// regrouped it reads
/// `K [ (Λ/Ω) cos Ωt · P(Λt) − sin Ωt · Q(Λt) + Si(Ωt) ]`
/// with `K = (2Mγ0/π) Λ²Ω/(Λ²+Ω²)`, `P = Shi·cosh − Chi·sinh` and
/// `Q = Chi·cosh − Shi·sinh`. P and Q stay O(1/x) where the individual
/// products overflow, so no cutoff on Λt is needed.
pub fn d_normal(t: f64, sys: &SystemSpec, bath: &BathSpec) -> Result<f64> {
    check_time(t)?;
    require_stable(sys)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let r = ratios(sys, bath);
    let k = 2.0 * sys.mass * bath.gamma0 / PI * r.weight * r.omega;
    let x = r.lambda * t;
    let (s, c) = (r.omega * t).sin_cos();
    let bracket = r.lambda / r.omega * c * shi_cosh_minus_chi_sinh(x)?
        - s * chi_cosh_minus_shi_sinh(x)?
        + specfun::si(r.omega * t)?;
    Ok(k * bracket)
}

/// Anomalous diffusion, exact at every t ≥ 0:
/// `F [ (Λ/Ω) sin Ωt · P(Λt) + cos Ωt · Q(Λt) − Ci(Ωt) − ln(Λ/Ω) ]`,
/// `F = 2γ0 Λ²/(Λ²+Ω²)`, with P, Q as in [`d_normal`].
pub fn f_anom(t: f64, sys: &SystemSpec, bath: &BathSpec) -> Result<f64> {
    check_time(t)?;
    require_stable(sys)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let r = ratios(sys, bath);
    let f = 2.0 * bath.gamma0 * r.weight;
    let x = r.lambda * t;
    let (s, c) = (r.omega * t).sin_cos();
    let bracket = r.lambda / r.omega * s * shi_cosh_minus_chi_sinh(x)?
        + c * chi_cosh_minus_shi_sinh(x)?
        - specfun::ci(r.omega * t)?
        - (r.lambda / r.omega).ln();
    Ok(f * bracket)
}

/// Late-time normal diffusion `K Si(Ωt)` (stable) or
/// `(2Mγ0/π) ΩΛ²/(Λ²−Ω²) Shi(Ωt)` (inverted).
pub fn d_normal_late(t: f64, sys: &SystemSpec, bath: &BathSpec) -> Result<f64> {
    check_time(t)?;
    let r = ratios(sys, bath);
    let k = 2.0 * sys.mass * bath.gamma0 / PI * r.weight * r.omega;
    let special = match sys.orientation {
        Orientation::Stable => specfun::si(r.omega * t)?,
        Orientation::Inverted => specfun::shi(r.omega * t)?,
    };
    Ok(k * special)
}

/// Late-time anomalous diffusion `−F (Ci(Ωt) + ln(Λ/Ω))` (stable) or
/// `−2γ0Λ²/(Λ²−Ω²) (Chi(Ωt) + ln(Λ/Ω))` (inverted). Log-divergent at t = 0.
pub fn f_anom_late(t: f64, sys: &SystemSpec, bath: &BathSpec) -> Result<f64> {
    check_time(t)?;
    let r = ratios(sys, bath);
    let f = 2.0 * bath.gamma0 * r.weight;
    let x = r.omega * t;
    if x < INVERTED_T_FLOOR {
        return Err(domain(
            "t",
            t,
            "late-time anomalous diffusion diverges logarithmically as t -> 0",
        ));
    }
    let special = match sys.orientation {
        Orientation::Stable => specfun::ci(x)?,
        Orientation::Inverted => specfun::chi(x)?,
    };
    Ok(-f * (special + (r.lambda / r.omega).ln()))
}

/// Frequency-shift and dissipation plateaus (reached once Λt ≫ 1).
fn plateaus(sys: &SystemSpec, bath: &BathSpec) -> (f64, f64) {
    let r = ratios(sys, bath);
    (
        -2.0 * bath.gamma0 * r.lambda * r.weight,
        bath.gamma0 * r.weight,
    )
}

/// All four coefficients at `t`.
///
/// Stable: the exact closed forms. Inverted: the late-time set with constant
/// δΩ² and γ, refused below `t = INVERTED_T_FLOOR/Ω`.
pub fn coefficients_at(t: f64, sys: &SystemSpec, bath: &BathSpec) -> Result<CoefficientSample> {
    check_time(t)?;
    sys.validate_with(bath)?;
    match sys.orientation {
        Orientation::Stable => Ok(CoefficientSample {
            t,
            delta_omega_sq: delta_omega_sq(t, sys, bath)?,
            gamma: gamma_t(t, sys, bath)?,
            d_normal: d_normal(t, sys, bath)?,
            f_anom: f_anom(t, sys, bath)?,
        }),
        Orientation::Inverted => late_time_coefficients(t, sys, bath),
    }
}

/// The late-time (Λt > 1) coefficient set: plateau δΩ² and γ with the
/// Si/Ci (stable) or Shi/Chi (inverted) forms of D and f.
pub fn late_time_coefficients(
    t: f64,
    sys: &SystemSpec,
    bath: &BathSpec,
) -> Result<CoefficientSample> {
    check_time(t)?;
    sys.validate_with(bath)?;
    if sys.orientation == Orientation::Inverted && sys.omega * t < INVERTED_T_FLOOR {
        return Err(domain(
            "t",
            t,
            "inverted coefficients are not evaluated at t -> 0 (Chi diverges)",
        ));
    }
    let (delta_omega_sq, gamma) = plateaus(sys, bath);
    Ok(CoefficientSample {
        t,
        delta_omega_sq,
        gamma,
        d_normal: d_normal_late(t, sys, bath)?,
        f_anom: f_anom_late(t, sys, bath)?,
    })
}

/// The t → ∞ values: δΩ² and γ plateaus, `D∞ = Mγ0Λ²Ω/(Λ²+Ω²)` and
/// `f∞ = −2γ0 Λ²/(Λ²+Ω²) ln(Λ/Ω)`. The `t` field is `+∞`.
pub fn asymptotic_coefficients(sys: &SystemSpec, bath: &BathSpec) -> Result<CoefficientSample> {
    sys.validate()?;
    if sys.orientation == Orientation::Inverted {
        return Err(Error::Config(
            "inverted oscillator has no plateau: D and f grow without bound".into(),
        ));
    }
    let r = ratios(sys, bath);
    let (delta_omega_sq, gamma) = plateaus(sys, bath);
    Ok(CoefficientSample {
        t: f64::INFINITY,
        delta_omega_sq,
        gamma,
        d_normal: sys.mass * bath.gamma0 * r.weight * r.omega,
        f_anom: -2.0 * bath.gamma0 * r.weight * (r.lambda / r.omega).ln(),
    })
}

/// Which closed forms a [`CoefficientSource`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientModel {
    /// Exact expressions, memory transient included (stable only; the
    /// inverted oscillator falls back to its late-time set).
    Exact,
    /// Λt > 1 forms, the initial transient dropped.
    #[default]
    LateTime,
}

/// Treatment of `t < 1/Λ`, where the late-time forms are not meant to be
/// used (f diverges logarithmically as t → 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Warmup {
    /// Evaluate the chosen forms as they are.
    Raw,
    /// Ramp linearly from 0 at t = 0 to the value at t = 1/Λ.
    #[default]
    Ramp,
    /// All coefficients zero before t = 1/Λ.
    ZeroBeforeMemoryTime,
}

/// Coefficient provider used by the decoherence and Gaussian-evolution
/// modules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSource {
    pub sys: SystemSpec,
    pub bath: BathSpec,
    pub model: CoefficientModel,
    pub warmup: Warmup,
}

impl CoefficientSource {
    pub fn new(sys: SystemSpec, bath: BathSpec) -> Result<Self> {
        bath.validate_allowing_uncoupled()?;
        sys.validate_with(&bath)?;
        Ok(Self {
            sys,
            bath,
            model: CoefficientModel::default(),
            warmup: Warmup::default(),
        })
    }

    pub fn with_model(mut self, model: CoefficientModel) -> Self {
        self.model = model;
        self
    }

    pub fn with_warmup(mut self, warmup: Warmup) -> Self {
        self.warmup = warmup;
        self
    }

    pub fn memory_time(&self) -> f64 {
        1.0 / self.bath.lambda_cut
    }

    fn raw(&self, t: f64) -> Result<CoefficientSample> {
        if self.bath.is_uncoupled() {
            return Ok(CoefficientSample::zero(t));
        }
        match (self.model, self.sys.orientation) {
            (CoefficientModel::Exact, Orientation::Stable) => {
                coefficients_at(t, &self.sys, &self.bath)
            }
            _ => late_time_coefficients(t, &self.sys, &self.bath),
        }
    }

    pub fn sample(&self, t: f64) -> Result<CoefficientSample> {
        check_time(t)?;
        let tm = self.memory_time();
        match self.warmup {
            Warmup::Raw => self.raw(t),
            _ if t >= tm => self.raw(t),
            Warmup::Ramp => Ok(CoefficientSample {
                t,
                ..self.raw(tm)?.scaled(t / tm)
            }),
            Warmup::ZeroBeforeMemoryTime => Ok(CoefficientSample::zero(t)),
        }
    }
}
