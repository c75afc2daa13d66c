//! Gaussian-ansatz evolution of the upside-down oscillator in the
//! zero-temperature bath.
//!
//! The reduced density matrix is kept in the form
//! `ρ(Σ, Δ) = N exp[−(2a − C)Δ² − (2a + C)Σ² − 4ibΣΔ]`, `Σ = (x+x')/2`,
//! `Δ = (x−x')/2`, and its parameters follow
//!
//! ```text
//! ȧ = 4ab − γ(2a − C) + D + 2bf
//! ḃ = −2(a² − 2b² − C²/2) − ½(Ω² + δΩ²) − 2bγ − (2a − C)f
//! Ċ = 4Cb + 2(2a − C)γ − 2D − 4bf
//! Ṅ = 2Nb
//! ```
//!
//! with `Ω²` the bare (positive) squared frequency: the `−½Ω²` term is the
//! inverted potential. `2a − C` measures the surviving coherence. Units have
//! `M = 1`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::coeffs::{CoefficientSample, CoefficientSource, Warmup};
use crate::error::{domain, Error, Result};
use crate::ode::{self, OdeConfig, OdeStats};
use crate::params::{BathSpec, Orientation, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: f64,
}

impl GaussianState {
    /// Pure minimum-uncertainty packet of width `delta`: `a = 1/(2δ²)`,
    /// `b = C = 0`, and `N` normalizing the diagonal `ρ(x, x)`.
    pub fn minimum_uncertainty(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(domain("delta", delta, "width must be positive"));
        }
        let a = 0.5 / (delta * delta);
        Ok(Self {
            t: 0.0,
            a,
            b: 0.0,
            c: 0.0,
            n: (2.0 * a / PI).sqrt(),
        })
    }

    /// `2a − C`, the coherence width.
    pub fn width(&self) -> f64 {
        2.0 * self.a - self.c
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.t, self.a, self.b, self.c, self.n];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invariant {
                t: self.t,
                reason: format!("non-finite state {self:?}"),
            });
        }
        let (minus, plus) = (2.0 * self.a - self.c, 2.0 * self.a + self.c);
        if !(minus > 0.0 && plus > 0.0) {
            return Err(Error::Invariant {
                t: self.t,
                reason: format!("lost positivity: 2a - C = {minus}, 2a + C = {plus}"),
            });
        }
        Ok(())
    }

    fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.n]
    }

    fn from_array(t: f64, y: &[f64; 4]) -> Self {
        Self {
            t,
            a: y[0],
            b: y[1],
            c: y[2],
            n: y[3],
        }
    }
}

/// Time derivative of the ansatz parameters for given coefficients and bare
/// frequency `omega`. `coeff.t` is ignored.
pub fn ansatz_rhs_with(state: &GaussianState, omega: f64, coeff: &CoefficientSample) -> [f64; 4] {
    let GaussianState { a, b, c, n, .. } = *state;
    let CoefficientSample {
        delta_omega_sq: dw2,
        gamma: g,
        d_normal: d,
        f_anom: f,
        ..
    } = *coeff;
    let minus = 2.0 * a - c;
    [
        4.0 * a * b - g * minus + d + 2.0 * b * f,
        -2.0 * (a * a - 2.0 * b * b - 0.5 * c * c)
            - 0.5 * (omega * omega + dw2)
            - 2.0 * b * g
            - minus * f,
        4.0 * c * b + 2.0 * minus * g - 2.0 * d - 4.0 * b * f,
        2.0 * n * b,
    ]
}

fn require_inverted_unit_mass(sys: &SystemSpec, bath: &BathSpec) -> Result<()> {
    if sys.orientation != Orientation::Inverted {
        return Err(Error::Config(
            "Gaussian evolution is for the inverted oscillator".into(),
        ));
    }
    if sys.mass != 1.0 {
        return Err(Error::Config(format!(
            "the ansatz equations are written for M = 1 (got mass = {})",
            sys.mass
        )));
    }
    bath.validate_allowing_uncoupled()?;
    sys.validate_with(bath)
}

/// Ansatz right-hand side with the coefficients of `source` at `state.t`.
pub fn ansatz_rhs(state: &GaussianState, source: &CoefficientSource) -> Result<[f64; 4]> {
    state.validate()?;
    let coeff = source.sample(state.t)?;
    Ok(ansatz_rhs_with(state, source.sys.omega, &coeff))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub t_end: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: 0.05,
            t_end: 30.0,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config(
                "integrator tolerances must be positive".into(),
            ));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::Config("max_step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<GaussianState>,
    #[serde(skip)]
    pub stats: OdeStats,
}

impl Trajectory {
    /// `(t, 2a − C)` at every grid point.
    pub fn width_series(&self) -> Vec<(f64, f64)> {
        self.states.iter().map(|s| (s.t, s.width())).collect()
    }
}

/// Evolves `state0` and samples the solution at `grid` (sorted, within
/// `[state0.t, cfg.t_end]`). Positivity is checked on every accepted step.
pub fn evolve(
    state0: &GaussianState,
    source: &CoefficientSource,
    cfg: &IntegratorConfig,
    grid: &[f64],
) -> Result<Trajectory> {
    cfg.validate()?;
    require_inverted_unit_mass(&source.sys, &source.bath)?;
    state0.validate()?;
    let omega = source.sys.omega;
    let mut stops = Vec::new();
    if source.warmup != Warmup::Raw {
        stops.push(source.memory_time());
    }
    let ode_cfg = OdeConfig {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        max_step: cfg.max_step,
        ..Default::default()
    };
    let sol = ode::integrate(
        |t, y| {
            let coeff = source.sample(t)?;
            Ok(ansatz_rhs_with(
                &GaussianState::from_array(t, y),
                omega,
                &coeff,
            ))
        },
        state0.t,
        state0.to_array(),
        cfg.t_end,
        grid,
        &stops,
        &ode_cfg,
        |t, y| GaussianState::from_array(t, y).validate(),
    )?;
    Ok(Trajectory {
        states: sol
            .times
            .iter()
            .zip(&sol.states)
            .map(|(&t, y)| GaussianState::from_array(t, y))
            .collect(),
        stats: sol.stats,
    })
}

/// `n + 1` uniform times on `[0, t_end]`.
pub fn uniform_grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| t_end * i as f64 / n.max(1) as f64)
        .collect()
}

/// Wigner function of the ansatz state,
/// `(1/π) √((2a+C)/(2a−C)) exp[−(2a+C)x²] exp[−(p − 2bx)²/(2a−C)]`.
pub fn wigner_of_state(state: &GaussianState, x: f64, p: f64) -> Result<f64> {
    state.validate()?;
    let plus = 2.0 * state.a + state.c;
    let minus = 2.0 * state.a - state.c;
    let q = p - 2.0 * state.b * x;
    Ok((plus / minus).sqrt() / PI * (-plus * x * x - q * q / minus).exp())
}

/// Late-time settling of the width over the final `fraction` of a
/// trajectory: the mean of `2a − C` and the largest `|d(2a − C)/dt|`.
pub fn settling(traj: &Trajectory, fraction: f64) -> Option<(f64, f64)> {
    let series = traj.width_series();
    let t_last = series.last()?.0;
    let t_from = t_last * (1.0 - fraction);
    let tail: Vec<(f64, f64)> = series.into_iter().filter(|&(t, _)| t >= t_from).collect();
    if tail.len() < 2 {
        return None;
    }
    let mean = tail.iter().map(|&(_, w)| w).sum::<f64>() / tail.len() as f64;
    let slope = tail
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
        .fold(0.0, f64::max);
    Some((mean, slope))
}
