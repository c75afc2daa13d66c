//! Brute-force evaluation of the defining double integrals
//!
//! ```text
//! δΩ²(t) = −(2/M)   ∫₀ᵗ ds c(Ωs) η(s)        η(s) = ∫₀^∞ dω I(ω) sin ωs
//! γ(t)   =  1/(MΩ)  ∫₀ᵗ ds s(Ωs) η(s)        ν(s) = ∫₀^∞ dω I(ω) cos ωs
//! D(t)   =          ∫₀ᵗ ds c(Ωs) ν(s)
//! f(t)   =  π/(MΩ)  ∫₀ᵗ ds s(Ωs) ν(s)
//! ```
//!
//! with `c, s = cos, sin` for the stable oscillator and `cosh, sinh` for the
//! inverted one. The `π` on f matches the normalization of the closed form.
//!
//! Two integration orders are available. [`IntegrationOrder::KernelFirst`]
//! computes the kernel at every s node by an ω quadrature (nested);
//! [`IntegrationOrder::TimeFirst`] does the s integral analytically per ω and
//! leaves a single oscillatory ω quadrature. In both, the ω range is cut at
//! `omega_upper` and the remainder is summed over half periods with Euler
//! acceleration.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Error, Result};
use crate::params::{BathSpec, Orientation, SystemSpec};
use crate::quadrature::{
    euler_alternating_sum, integrate, integrate_with_breaks, Estimate, QuadError, Tolerance,
};

/// Default ω cut as a multiple of Λ.
pub const DEFAULT_OMEGA_UPPER_FACTOR: f64 = 50.0;
const EULER_MAX_TERMS: usize = 200;
/// Relative rounding floor added to every reported error bound.
const ROUNDING_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegrationOrder {
    /// Closed-form η for the frequency shift and dissipation, time-first for
    /// the diffusion coefficients.
    #[default]
    Auto,
    KernelFirst,
    TimeFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// ω truncation; `None` means `50 Λ`.
    pub omega_upper: Option<f64>,
    pub order: IntegrationOrder,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 10_000,
            omega_upper: None,
            order: IntegrationOrder::Auto,
        }
    }
}

impl QuadratureConfig {
    pub fn with_order(mut self, order: IntegrationOrder) -> Self {
        self.order = order;
        self
    }

    pub fn omega_upper_for(&self, bath: &BathSpec) -> f64 {
        self.omega_upper
            .unwrap_or(DEFAULT_OMEGA_UPPER_FACTOR * bath.lambda_cut)
    }

    pub fn validate(&self, bath: &BathSpec) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("rel_tol and abs_tol must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be positive".into()));
        }
        let w = self.omega_upper_for(bath);
        if !(w > bath.lambda_cut && w.is_finite()) {
            return Err(Error::Config(format!(
                "omega_upper must exceed lambda_cut (got {w}, lambda = {})",
                bath.lambda_cut
            )));
        }
        Ok(())
    }

    fn tolerance(&self, tighten: f64) -> Tolerance {
        Tolerance {
            rel: self.rel_tol * tighten,
            abs: self.abs_tol * tighten,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientKind {
    FreqShift,
    Dissipation,
    NormalDiff,
    AnomalousDiff,
}

impl CoefficientKind {
    pub const ALL: [CoefficientKind; 4] = [
        CoefficientKind::FreqShift,
        CoefficientKind::Dissipation,
        CoefficientKind::NormalDiff,
        CoefficientKind::AnomalousDiff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CoefficientKind::FreqShift => "delta_omega_sq",
            CoefficientKind::Dissipation => "gamma",
            CoefficientKind::NormalDiff => "d_normal",
            CoefficientKind::AnomalousDiff => "f_anom",
        }
    }

    fn uses_eta(self) -> bool {
        matches!(
            self,
            CoefficientKind::FreqShift | CoefficientKind::Dissipation
        )
    }

    /// True when the time weight is `sin`/`sinh`, false for `cos`/`cosh`.
    fn sine_weight(self) -> bool {
        matches!(
            self,
            CoefficientKind::Dissipation | CoefficientKind::AnomalousDiff
        )
    }

    /// Constant in front of the s integral.
    fn prefactor(self, sys: &SystemSpec) -> f64 {
        match self {
            CoefficientKind::FreqShift => -2.0 / sys.mass,
            CoefficientKind::Dissipation => 1.0 / (sys.mass * sys.omega),
            CoefficientKind::NormalDiff => 1.0,
            CoefficientKind::AnomalousDiff => PI / (sys.mass * sys.omega),
        }
    }
}

impl std::str::FromStr for CoefficientKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta_omega_sq" | "freq-shift" => Ok(CoefficientKind::FreqShift),
            "gamma" | "dissipation" => Ok(CoefficientKind::Dissipation),
            "d_normal" | "normal-diff" => Ok(CoefficientKind::NormalDiff),
            "f_anom" | "anomalous-diff" => Ok(CoefficientKind::AnomalousDiff),
            other => Err(Error::Config(format!("unknown coefficient kind '{other}'"))),
        }
    }
}

fn with_floor(est: Estimate) -> Estimate {
    Estimate::new(est.value, est.error + ROUNDING_FLOOR * est.value.abs())
}

/// `(2/π) M γ0 Λ²`, the spectral-density prefactor.
fn density_scale(mass: f64, bath: &BathSpec) -> f64 {
    2.0 / PI * mass * bath.gamma0 * bath.lambda_cut * bath.lambda_cut
}

/// `∫₀^∞ u w(u) / (u² + a²) du` with `w = sin` or `cos`, cut at `u_cut` and
/// the remainder summed over half periods.
fn dimensionless_kernel(
    a: f64,
    sine: bool,
    u_cut: f64,
    cfg: &QuadratureConfig,
    tighten: f64,
) -> std::result::Result<Estimate, QuadError> {
    let tol = cfg.tolerance(tighten);
    let w = |u: f64| if sine { u.sin() } else { u.cos() };
    let g = |u: f64| u * w(u) / (u * u + a * a);
    // zeros of the weight: kπ for sin, π/2 + kπ for cos
    let offset = if sine { 0.0 } else { FRAC_PI_2 };
    let zero = |k: f64| offset + k * PI;
    let k_cut = ((u_cut - offset) / PI).ceil().max(0.0);
    let head_end = zero(k_cut);

    let mut points = vec![0.0];
    if a < head_end {
        points.push(a);
    }
    let mut k = 0.0;
    while zero(k) < head_end {
        if zero(k) > 0.0 {
            points.push(zero(k));
        }
        k += 1.0;
    }
    points.push(head_end);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let head = integrate_with_breaks(g, &points, &tol)?;

    let target = tol.abs.max(tol.rel * head.value.abs());
    let tail = euler_alternating_sum(
        |j| {
            let lo = zero(k_cut + j as f64);
            integrate(g, lo, lo + PI, &tol)
        },
        target,
        EULER_MAX_TERMS,
    )?;
    Ok(head + tail)
}

fn check_s(s: f64) -> Result<()> {
    if s.is_nan() || s < 0.0 {
        return Err(domain("s", s, "kernel argument must be >= 0"));
    }
    Ok(())
}

fn eta_by_quadrature(
    s: f64,
    mass: f64,
    bath: &BathSpec,
    cfg: &QuadratureConfig,
    tighten: f64,
) -> std::result::Result<Estimate, QuadError> {
    if s == 0.0 {
        return Ok(Estimate::new(0.0, 0.0));
    }
    let w_up = cfg.omega_upper_for(bath);
    let est = dimensionless_kernel(bath.lambda_cut * s, true, w_up * s, cfg, tighten)?;
    Ok(est.scale(density_scale(mass, bath)))
}

fn nu_by_quadrature(
    s: f64,
    mass: f64,
    bath: &BathSpec,
    cfg: &QuadratureConfig,
    tighten: f64,
) -> std::result::Result<Estimate, QuadError> {
    let w_up = cfg.omega_upper_for(bath);
    let est = dimensionless_kernel(bath.lambda_cut * s, false, w_up * s, cfg, tighten)?;
    Ok(est.scale(density_scale(mass, bath)))
}

/// Dissipation kernel `η(s) = ∫₀^∞ I(ω) sin ωs dω` by quadrature. The exact
/// value is `M γ0 Λ² e^{−Λs}`.
pub fn kernel_eta(s: f64, mass: f64, bath: &BathSpec, cfg: &QuadratureConfig) -> Result<Estimate> {
    check_s(s)?;
    bath.validate()?;
    cfg.validate(bath)?;
    Ok(with_floor(eta_by_quadrature(s, mass, bath, cfg, 1.0)?))
}

/// Zero-temperature noise kernel `ν(s) = ∫₀^∞ I(ω) cos ωs dω` by quadrature.
///
/// At `s = 0` the integral diverges like `ln ω_upper`; the truncated value is
/// returned inside [`Error::CutoffDependent`].
pub fn kernel_nu(s: f64, mass: f64, bath: &BathSpec, cfg: &QuadratureConfig) -> Result<Estimate> {
    check_s(s)?;
    bath.validate()?;
    cfg.validate(bath)?;
    if s == 0.0 {
        let w_up = cfg.omega_upper_for(bath);
        let r = w_up / bath.lambda_cut;
        let value = density_scale(mass, bath) * 0.5 * (r * r).ln_1p();
        return Err(Error::CutoffDependent {
            omega_upper: w_up,
            estimate: Estimate::new(value, 0.0),
        });
    }
    Ok(with_floor(nu_by_quadrature(s, mass, bath, cfg, 1.0)?))
}

/// One of the four coefficients at time `t` from its defining integral.
pub fn coefficient_by_quadrature(
    kind: CoefficientKind,
    t: f64,
    sys: &SystemSpec,
    bath: &BathSpec,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    if t.is_nan() || t < 0.0 {
        return Err(domain("t", t, "time must be >= 0"));
    }
    bath.validate()?;
    sys.validate_with(bath)?;
    cfg.validate(bath)?;
    if t == 0.0 {
        return Ok(Estimate::new(0.0, 0.0));
    }
    let raw = match (cfg.order, kind.uses_eta()) {
        (IntegrationOrder::Auto, true) => eta_closed_form(kind, t, sys, bath, cfg)?,
        (IntegrationOrder::Auto, false) | (IntegrationOrder::TimeFirst, _) => {
            time_first(kind, t, sys, bath, cfg)?
        }
        (IntegrationOrder::KernelFirst, _) => kernel_first(kind, t, sys, bath, cfg)?,
    };
    Ok(with_floor(raw.scale(kind.prefactor(sys))))
}

fn time_weight(sine: bool, orientation: Orientation, x: f64) -> f64 {
    match (sine, orientation) {
        (false, Orientation::Stable) => x.cos(),
        (true, Orientation::Stable) => x.sin(),
        (false, Orientation::Inverted) => x.cosh(),
        (true, Orientation::Inverted) => x.sinh(),
    }
}

/// s-integration points: 0, the memory time and every quarter period of Ω.
fn time_breaks(t: f64, sys: &SystemSpec, bath: &BathSpec) -> Vec<f64> {
    let mut points = vec![0.0, t];
    let tm = 1.0 / bath.lambda_cut;
    if tm < t {
        points.push(tm);
    }
    let quarter = FRAC_PI_2 / sys.omega;
    let mut s = quarter;
    while s < t {
        points.push(s);
        s += quarter;
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

fn eta_closed_form(
    kind: CoefficientKind,
    t: f64,
    sys: &SystemSpec,
    bath: &BathSpec,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let scale = sys.mass * bath.gamma0 * bath.lambda_cut * bath.lambda_cut;
    let sine = kind.sine_weight();
    let f = |s: f64| {
        scale * (-bath.lambda_cut * s).exp() * time_weight(sine, sys.orientation, sys.omega * s)
    };
    Ok(integrate_with_breaks(
        f,
        &time_breaks(t, sys, bath),
        &cfg.tolerance(1.0),
    )?)
}

fn kernel_first(
    kind: CoefficientKind,
    t: f64,
    sys: &SystemSpec,
    bath: &BathSpec,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    const INNER_TIGHTEN: f64 = 0.1;
    let sine = kind.sine_weight();
    let mut failure: Option<QuadError> = None;
    let mut inner_error = 0.0_f64;
    let integrand = |s: f64| {
        if failure.is_some() {
            return 0.0;
        }
        let kernel = if kind.uses_eta() {
            eta_by_quadrature(s, sys.mass, bath, cfg, INNER_TIGHTEN)
        } else {
            nu_by_quadrature(s, sys.mass, bath, cfg, INNER_TIGHTEN)
        };
        match kernel {
            Ok(k) => {
                let w = time_weight(sine, sys.orientation, sys.omega * s);
                inner_error = inner_error.max((k.error * w).abs());
                k.value * w
            }
            Err(e) => {
                failure = Some(e);
                0.0
            }
        }
    };
    let outer = integrate_with_breaks(integrand, &time_breaks(t, sys, bath), &cfg.tolerance(1.0));
    if let Some(e) = failure {
        return Err(e.into());
    }
    let outer = outer?;
    Ok(Estimate::new(outer.value, outer.error + t * inner_error))
}

/// `sin(x t)/x`, finite at `x = 0`.
fn sin_over(x: f64, t: f64) -> f64 {
    let y = x * t;
    if y.abs() < 1e-4 {
        t * (1.0 - y * y / 6.0)
    } else {
        y.sin() / x
    }
}

/// `(1 − cos(x t))/x = 2 sin²(xt/2)/x`, finite at `x = 0`.
fn versine_over(x: f64, t: f64) -> f64 {
    let y = 0.5 * x * t;
    if y.abs() < 1e-4 {
        0.5 * x * t * t * (1.0 - y * y / 3.0)
    } else {
        2.0 * y.sin().powi(2) / x
    }
}

/// `∫₀ᵗ k(ωs) w(Ωs) ds`, with `k = sin` (η) or `cos` (ν) and `w` the time
/// weight, split into a part without oscillation in ω and an oscillating
/// part. Returns `(full, steady, oscillating)`; the split is only used well
/// past every pole (`ω ≫ Ω`).
fn time_integral(
    kind: CoefficientKind,
    orientation: Orientation,
    omega_sys: f64,
    w: f64,
    t: f64,
) -> (f64, f64, f64) {
    let om = omega_sys;
    let sine_kernel = kind.uses_eta();
    let sine_weight = kind.sine_weight();
    match orientation {
        Orientation::Stable => match (sine_kernel, sine_weight) {
            (false, false) => {
                let full = 0.5 * (sin_over(w - om, t) + sin_over(w + om, t));
                (full, 0.0, full)
            }
            (true, true) => {
                let full = 0.5 * (sin_over(w - om, t) - sin_over(w + om, t));
                (full, 0.0, full)
            }
            (false, true) => {
                // cos ωs sin Ωs
                let full = 0.5 * (versine_over(om + w, t) + versine_over(om - w, t));
                let steady = 0.5 * (1.0 / (om + w) + 1.0 / (om - w));
                let osc =
                    -0.5 * (((om + w) * t).cos() / (om + w) + ((om - w) * t).cos() / (om - w));
                (full, steady, osc)
            }
            (true, false) => {
                // sin ωs cos Ωs
                let full = 0.5 * (versine_over(w + om, t) + versine_over(w - om, t));
                let steady = 0.5 * (1.0 / (w + om) + 1.0 / (w - om));
                let osc =
                    -0.5 * (((w + om) * t).cos() / (w + om) + ((w - om) * t).cos() / (w - om));
                (full, steady, osc)
            }
        },
        Orientation::Inverted => {
            let d = w * w + om * om;
            let (sw, cw) = (w * t).sin_cos();
            let (sh, ch) = ((om * t).sinh(), (om * t).cosh());
            let (steady, osc) = match (sine_kernel, sine_weight) {
                (false, false) => (0.0, (w * sw * ch + om * cw * sh) / d),
                (false, true) => (-om / d, (w * sw * sh + om * cw * ch) / d),
                (true, false) => (w / d, (-w * cw * ch + om * sw * sh) / d),
                (true, true) => (0.0, (-w * cw * sh + om * sw * ch) / d),
            };
            (steady + osc, steady, osc)
        }
    }
}

fn time_first(
    kind: CoefficientKind,
    t: f64,
    sys: &SystemSpec,
    bath: &BathSpec,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let tol = cfg.tolerance(1.0);
    let om = sys.omega;
    let density = |w: f64| bath.spectral_density(sys.mass, w);
    let cut = cfg.omega_upper_for(bath).max(4.0 * om);
    let half = PI / t;

    let mut points = vec![0.0, cut];
    for p in [
        0.5 * om,
        om,
        2.0 * om,
        0.1 * bath.lambda_cut,
        bath.lambda_cut,
        10.0 * bath.lambda_cut,
    ] {
        if p < cut {
            points.push(p);
        }
    }
    let mut w = half;
    while w < cut {
        points.push(w);
        w += half;
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let head = integrate_with_breaks(
        |w| density(w) * time_integral(kind, sys.orientation, om, w, t).0,
        &points,
        &tol,
    )?;

    // ∫_cut^∞ of the non-oscillating part, with ω = cut / x
    let steady = integrate(
        |x| {
            if x == 0.0 {
                return 0.0;
            }
            let w = cut / x;
            density(w) * time_integral(kind, sys.orientation, om, w, t).1 * cut / (x * x)
        },
        0.0,
        1.0,
        &tol,
    )?;

    let target = tol.abs.max(tol.rel * head.value.abs());
    let oscillating = euler_alternating_sum(
        |j| {
            let lo = cut + j as f64 * half;
            integrate(
                |w| density(w) * time_integral(kind, sys.orientation, om, w, t).2,
                lo,
                lo + half,
                &tol,
            )
        },
        target,
        EULER_MAX_TERMS,
    )?;
    Ok(head + steady + oscillating)
}
