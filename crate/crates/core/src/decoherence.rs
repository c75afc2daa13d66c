//! Fringe-visibility exponent of a two-packet superposition and the
//! decoherence time defined by `A_int(t_D) = 1`.
//!
//! The exponent obeys `dA/dt = 4 D k_p² − 4 f k_p (k_x − β k_p)`; with the
//! frozen fringes `k_p = L0`, `k_x = 1/(2 L0)`, `β = 0` this is
//! `4 L0² D − 2 f`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::coeffs::{asymptotic_coefficients, CoefficientSource};
use crate::error::{domain, Error, Result};
use crate::params::{BathSpec, SuperpositionSpec, SystemSpec};
use crate::quadrature::{integrate_with_breaks, Tolerance};
use crate::roots::bisect_secant;
use crate::specfun::EULER_GAMMA;

/// Relative accuracy of the refined decoherence time.
pub const ROOT_REL_TOL: f64 = 1e-6;
const SCAN_POINTS: usize = 400;

/// Supplies `(D(t), f(t))` to the visibility rate.
pub trait DiffusionSource {
    fn diffusion(&self, t: f64) -> Result<(f64, f64)>;

    /// Times where the coefficients have a kink; used as quadrature breaks.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `1/γ0`, where the visibility saturates; infinite when uncoupled.
    fn saturation_time(&self) -> f64;
}

impl DiffusionSource for CoefficientSource {
    fn diffusion(&self, t: f64) -> Result<(f64, f64)> {
        let c = self.sample(t)?;
        Ok((c.d_normal, c.f_anom))
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.memory_time()]
    }

    fn saturation_time(&self) -> f64 {
        if self.bath.is_uncoupled() {
            f64::INFINITY
        } else {
            1.0 / self.bath.gamma0
        }
    }
}

/// Time-independent `D` and `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantDiffusion {
    pub d_normal: f64,
    pub f_anom: f64,
    pub saturation_time: f64,
}

impl ConstantDiffusion {
    /// `D = D∞`, `f = 0`.
    pub fn d_plateau_only(sys: &SystemSpec, bath: &BathSpec) -> Result<Self> {
        let a = asymptotic_coefficients(sys, bath)?;
        Ok(Self {
            d_normal: a.d_normal,
            f_anom: 0.0,
            saturation_time: 1.0 / bath.gamma0,
        })
    }
}

impl DiffusionSource for ConstantDiffusion {
    fn diffusion(&self, _t: f64) -> Result<(f64, f64)> {
        Ok((self.d_normal, self.f_anom))
    }

    fn saturation_time(&self) -> f64 {
        self.saturation_time
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeConfig {
    pub k_p: f64,
    pub k_x: f64,
    pub beta: f64,
}

impl FringeConfig {
    /// Fringes frozen at their initial values: `k_p = L0`, `k_x = 1/(2 L0)`,
    /// `β = 0`.
    pub fn frozen(sup: &SuperpositionSpec) -> Result<Self> {
        if sup.l0 <= 0.0 {
            return Err(Error::Config(
                "frozen fringes need l0 > 0 (k_x = 1/(2 l0))".into(),
            ));
        }
        Ok(Self {
            k_p: sup.l0,
            k_x: 0.5 / sup.l0,
            beta: 0.0,
        })
    }
}

/// `dA_int/dt` at time `t`.
pub fn a_int_rate<S: DiffusionSource + ?Sized>(
    t: f64,
    fringe: &FringeConfig,
    source: &S,
) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(domain("t", t, "time must be >= 0"));
    }
    let (d, f) = source.diffusion(t)?;
    let kp = fringe.k_p;
    Ok(4.0 * d * kp * kp - 4.0 * f * kp * (fringe.k_x - fringe.beta * kp))
}

fn quad_tolerance() -> Tolerance {
    Tolerance {
        rel: 1e-10,
        abs: 1e-14,
        max_subdivisions: 10_000,
    }
}

/// `∫_a^b dA/dt`, split at the source's kinks.
fn a_int_increment<S: DiffusionSource + ?Sized>(
    a: f64,
    b: f64,
    fringe: &FringeConfig,
    source: &S,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut points = vec![a];
    points.extend(source.breakpoints().into_iter().filter(|&p| p > a && p < b));
    points.push(b);
    let mut failure = None;
    let est = integrate_with_breaks(
        |t| match a_int_rate(t, fringe, source) {
            Ok(r) => r,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &points,
        &quad_tolerance(),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est?.value)
}

/// `A_int` on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityTrajectory {
    pub times: Vec<f64>,
    pub a_int: Vec<f64>,
    pub a_max: f64,
    pub saturation_time: f64,
    /// First grid time at which `A_int ≥ a_max`; `A_int` itself is not clipped.
    pub a_max_crossing: Option<f64>,
}

/// Integrates the visibility rate on `grid_points` uniform times in `[0, t_end]`.
pub fn evolve_a_int<S: DiffusionSource + ?Sized>(
    t_end: f64,
    grid_points: usize,
    fringe: &FringeConfig,
    source: &S,
    sup: &SuperpositionSpec,
) -> Result<VisibilityTrajectory> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(domain("t_end", t_end, "must be positive and finite"));
    }
    if grid_points < 2 {
        return Err(Error::Config("grid_points must be >= 2".into()));
    }
    sup.validate()?;
    let times: Vec<f64> = (0..grid_points)
        .map(|i| t_end * i as f64 / (grid_points - 1) as f64)
        .collect();
    let mut a_int = Vec::with_capacity(grid_points);
    a_int.push(0.0);
    let a_max = sup.a_max();
    let mut a_max_crossing = None;
    for w in times.windows(2) {
        let next =
            a_int.last().copied().unwrap_or(0.0) + a_int_increment(w[0], w[1], fringe, source)?;
        if a_max_crossing.is_none() && next >= a_max {
            a_max_crossing = Some(w[1]);
        }
        a_int.push(next);
    }
    Ok(VisibilityTrajectory {
        times,
        a_int,
        a_max,
        saturation_time: source.saturation_time(),
        a_max_crossing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DecoherenceOutcome {
    Decohered {
        t_d: f64,
    },
    /// The threshold was not reached before `horizon = min(t_max, 1/γ0)`.
    NoDecoherence {
        horizon: f64,
        a_int: f64,
    },
}

impl DecoherenceOutcome {
    pub fn time(&self) -> Option<f64> {
        match *self {
            DecoherenceOutcome::Decohered { t_d } => Some(t_d),
            DecoherenceOutcome::NoDecoherence { .. } => None,
        }
    }
}

/// Smallest t with `A_int(t) = threshold`.
///
/// The cumulative integral is scanned on a grid that is geometric near 0 and
/// uniform later; the first bracketing interval is refined by bisection and
/// secant steps to [`ROOT_REL_TOL`].
pub fn decoherence_time_with_threshold<S: DiffusionSource + ?Sized>(
    fringe: &FringeConfig,
    source: &S,
    t_max: f64,
    threshold: f64,
) -> Result<DecoherenceOutcome> {
    if !(t_max > 0.0) {
        return Err(domain("t_max", t_max, "must be positive"));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(domain("threshold", threshold, "must be positive"));
    }
    let horizon = t_max.min(source.saturation_time());
    let grid = scan_grid(horizon);
    let mut a_prev = 0.0;
    for w in grid.windows(2) {
        let a_next = a_prev + a_int_increment(w[0], w[1], fringe, source)?;
        if a_next >= threshold {
            let (lo, a_lo) = (w[0], a_prev);
            let t_d = bisect_secant(
                |t| Ok(a_lo + a_int_increment(lo, t, fringe, source)? - threshold),
                lo,
                w[1],
                ROOT_REL_TOL,
            )?;
            return Ok(DecoherenceOutcome::Decohered { t_d });
        }
        a_prev = a_next;
    }
    Ok(DecoherenceOutcome::NoDecoherence {
        horizon,
        a_int: a_prev,
    })
}

/// [`decoherence_time_with_threshold`] at the default threshold `A_int = 1`.
pub fn decoherence_time<S: DiffusionSource + ?Sized>(
    fringe: &FringeConfig,
    source: &S,
    t_max: f64,
) -> Result<DecoherenceOutcome> {
    decoherence_time_with_threshold(fringe, source, t_max, 1.0)
}

/// `horizon·1e-6` growing geometrically until the step reaches
/// `horizon/SCAN_POINTS`, then uniform.
fn scan_grid(horizon: f64) -> Vec<f64> {
    let uniform = horizon / SCAN_POINTS as f64;
    let mut grid = vec![0.0];
    let mut h = horizon * 1e-6;
    let mut t = 0.0;
    while t < horizon {
        t = (t + h.min(uniform)).min(horizon);
        grid.push(t);
        h *= 1.25;
    }
    grid
}

/// A regime estimate and whether its validity condition holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeEstimate {
    pub value: f64,
    pub in_regime: bool,
}

/// `1/(2 M L0² γ0 Λ)`, valid for Ω ~ Λ while `M L0² γ0 ≤ 1`.
pub fn td_high_frequency(
    sys: &SystemSpec,
    bath: &BathSpec,
    sup: &SuperpositionSpec,
) -> RegimeEstimate {
    let p = sys.mass * sup.l0 * sup.l0 * bath.gamma0;
    RegimeEstimate {
        value: 1.0 / (2.0 * p * bath.lambda_cut),
        in_regime: p <= 1.0,
    }
}

/// `1/(8 γ0)`, the bound for very underdamped systems.
pub fn td_underdamped_bound(bath: &BathSpec) -> f64 {
    1.0 / (8.0 * bath.gamma0)
}

/// How much the D term must dominate the f term for the macroscopic
/// estimate to be tagged in-regime.
pub const MACROSCOPIC_DOMINANCE: f64 = 1.0;

/// `(1/(2 L0 Ω)) √(π/(M γ0))`, when the D term of the intermediate-time
/// expansion dominates.
pub fn td_macroscopic(
    sys: &SystemSpec,
    bath: &BathSpec,
    sup: &SuperpositionSpec,
) -> RegimeEstimate {
    let value = (PI / (sys.mass * bath.gamma0)).sqrt() / (2.0 * sup.l0 * sys.omega);
    let d_term = sys.mass * sup.l0 * sup.l0 / (2.0 * PI) * (sys.omega * value).powi(2);
    let f_term = value * ((bath.lambda_cut * value).ln() + EULER_GAMMA - 1.0);
    RegimeEstimate {
        value,
        in_regime: d_term >= MACROSCOPIC_DOMINANCE * f_term.abs(),
    }
}

/// Intermediate-time (`1/Λ < t < 1/Ω`) expansion of `A_int` with frozen
/// fringes, from `Si(x) ≈ x` and `Ci(x) ≈ ln x + Γ`:
/// `(4/π) M L0² γ0 w (Ωt)² + 4 w γ0 t (ln Λt + Γ − 1)`, `w = Λ²/(Λ²+Ω²)`.
pub fn a_int_intermediate(
    t: f64,
    sys: &SystemSpec,
    bath: &BathSpec,
    sup: &SuperpositionSpec,
) -> f64 {
    let l2 = bath.lambda_cut * bath.lambda_cut;
    let w = l2 / (l2 + sys.omega * sys.omega);
    let d_part = 4.0 / PI * sys.mass * sup.l0 * sup.l0 * bath.gamma0 * w * (sys.omega * t).powi(2);
    let f_part = 4.0 * w * bath.gamma0 * t * ((bath.lambda_cut * t).ln() + EULER_GAMMA - 1.0);
    d_part + f_part
}
