//! Sine, cosine and hyperbolic integrals, and the exponential integrals
//! used to evaluate them far from the origin.
//!
//! Conventions: `ci(x) = Γ + ln x + ∫₀ˣ (cos u − 1)/u du` and
//! `chi(x) = Γ + ln x + ∫₀ˣ (cosh u − 1)/u du`, with Γ the Euler–Mascheroni
//! constant. Si and Shi are odd; Ci and Chi are defined for x > 0 only.
//!
//! For `|x| ≤ SERIES_LIMIT` every function is summed from its Taylor series.
//! Beyond that Si/Ci come from the continued fraction for E1(ix) and
//! Shi/Chi from `(Ei ± E1)/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

/// Euler–Mascheroni constant, 0.57721566490153286061.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Switchover between Taylor series and the far-field evaluation.
pub const SERIES_LIMIT: f64 = 12.0;

/// Largest |x| accepted by the functions whose value grows like e^|x|.
pub const OVERFLOW_LIMIT: f64 = 700.0;

/// Below this, Ei is summed from its power series; above, asymptotically.
const EI_ASYMPTOTIC_FROM: f64 = 40.0;

const CF_MAX_ITER: usize = 10_000;
const FPMIN: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{func}({x}): argument outside the domain")]
    Domain { func: &'static str, x: f64 },
    #[error("{func}({x}): result is not representable")]
    Range { func: &'static str, x: f64 },
    #[error("{func}({x}): no convergence after {terms} terms")]
    NoConvergence {
        func: &'static str,
        x: f64,
        terms: usize,
    },
    #[error("invalid accuracy settings: {0}")]
    InvalidAccuracy(String),
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// Stopping rule for the power series.
///
/// A series stops once a term drops below `abs_tol · max(1, |partial sum|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for Accuracy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_terms: 200,
        }
    }
}

impl Accuracy {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        let acc = Self { abs_tol, max_terms };
        acc.validate()?;
        Ok(acc)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(SpecFunError::InvalidAccuracy(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(SpecFunError::InvalidAccuracy(
                "max_terms must be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn done(&self, term: f64, sum: f64) -> bool {
        term.abs() <= self.abs_tol * sum.abs().max(1.0)
    }
}

fn require_finite(func: &'static str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(SpecFunError::Domain { func, x })
    }
}

fn require_positive(func: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(SpecFunError::Domain { func, x })
    }
}

/// Sums `Σ_{k≥0} sign^k x^{2k+1} / ((2k+1)(2k+1)!)` (odd part) or
/// `Σ_{k≥1} sign^k x^{2k} / ((2k)(2k)!)` (even part).
fn trig_series(
    func: &'static str,
    x: f64,
    odd: bool,
    alternating: bool,
    acc: &Accuracy,
) -> Result<f64> {
    acc.validate()?;
    let x2 = x * x;
    let sign = if alternating { -1.0 } else { 1.0 };
    // `power` carries sign^k x^n / n!
    let (mut power, mut n, mut sum) = if odd { (x, 1.0, x) } else { (1.0, 0.0, 0.0) };
    for _ in 0..acc.max_terms {
        power *= sign * x2 / ((n + 1.0) * (n + 2.0));
        n += 2.0;
        let term = power / n;
        sum += term;
        if acc.done(term, sum) {
            return Ok(sum);
        }
    }
    Err(SpecFunError::NoConvergence {
        func,
        x,
        terms: acc.max_terms,
    })
}

/// Returns `(ci(x), si(x))` for x > 0 from the continued fraction of E1(ix).
fn cisi_continued_fraction(x: f64) -> Result<(f64, f64)> {
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / FPMIN, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 2..CF_MAX_ITER {
        let a = -(((i - 1) * (i - 1)) as f64);
        b += 2.0;
        d = one / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < f64::EPSILON {
            let h = Complex64::new(x.cos(), -x.sin()) * h;
            return Ok((-h.re, FRAC_PI_2 + h.im));
        }
    }
    Err(SpecFunError::NoConvergence {
        func: "cisi",
        x,
        terms: CF_MAX_ITER,
    })
}

/// Sine integral `∫₀ˣ sin(u)/u du`.
pub fn si(x: f64) -> Result<f64> {
    si_with(x, &Accuracy::default())
}

pub fn si_with(x: f64, acc: &Accuracy) -> Result<f64> {
    require_finite("si", x)?;
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT {
        trig_series("si", ax, true, true, acc)?
    } else {
        cisi_continued_fraction(ax)?.1
    };
    Ok(if x.is_sign_negative() { -v } else { v })
}

/// Cosine integral, `Γ + ln x + ∫₀ˣ (cos u − 1)/u du`, for x > 0.
pub fn ci(x: f64) -> Result<f64> {
    ci_with(x, &Accuracy::default())
}

pub fn ci_with(x: f64, acc: &Accuracy) -> Result<f64> {
    require_positive("ci", x)?;
    if x <= SERIES_LIMIT {
        Ok(EULER_GAMMA + x.ln() + trig_series("ci", x, false, true, acc)?)
    } else {
        Ok(cisi_continued_fraction(x)?.0)
    }
}

/// Hyperbolic sine integral `∫₀ˣ sinh(u)/u du`.
pub fn shi(x: f64) -> Result<f64> {
    shi_with(x, &Accuracy::default())
}

pub fn shi_with(x: f64, acc: &Accuracy) -> Result<f64> {
    require_finite("shi", x)?;
    let ax = x.abs();
    if ax > OVERFLOW_LIMIT {
        return Err(SpecFunError::Range { func: "shi", x });
    }
    let v = if ax <= SERIES_LIMIT {
        trig_series("shi", ax, true, false, acc)?
    } else {
        0.5 * (ei(ax)? + e1(ax)?)
    };
    Ok(if x.is_sign_negative() { -v } else { v })
}

/// Hyperbolic cosine integral, `Γ + ln x + ∫₀ˣ (cosh u − 1)/u du`, for x > 0.
pub fn chi(x: f64) -> Result<f64> {
    chi_with(x, &Accuracy::default())
}

pub fn chi_with(x: f64, acc: &Accuracy) -> Result<f64> {
    require_positive("chi", x)?;
    if x > OVERFLOW_LIMIT {
        return Err(SpecFunError::Range { func: "chi", x });
    }
    if x <= SERIES_LIMIT {
        Ok(EULER_GAMMA + x.ln() + trig_series("chi", x, false, false, acc)?)
    } else {
        Ok(0.5 * (ei(x)? - e1(x)?))
    }
}

/// `E1(x) = ∫ₓ^∞ e^{−u}/u du` for x > 0.
pub fn e1(x: f64) -> Result<f64> {
    require_positive("e1", x)?;
    if x <= 1.0 {
        e1_series(x)
    } else {
        Ok(e1_continued_fraction(x)? * (-x).exp())
    }
}

/// `e^x E1(x)`, finite and O(1/x) for large x.
pub fn e1_scaled(x: f64) -> Result<f64> {
    require_positive("e1_scaled", x)?;
    if x <= 1.0 {
        Ok(e1_series(x)? * x.exp())
    } else {
        e1_continued_fraction(x)
    }
}

fn e1_series(x: f64) -> Result<f64> {
    // E1(x) = −Γ − ln x − Σ_{k≥1} (−x)^k / (k·k!)
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 1..CF_MAX_ITER {
        fact *= -x / k as f64;
        let term = fact / k as f64;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON {
            return Ok(-EULER_GAMMA - x.ln() - sum);
        }
    }
    Err(SpecFunError::NoConvergence {
        func: "e1",
        x,
        terms: CF_MAX_ITER,
    })
}

/// Modified Lentz evaluation of the E1 continued fraction; returns e^x E1(x).
fn e1_continued_fraction(x: f64) -> Result<f64> {
    let mut b = x + 1.0;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..CF_MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(SpecFunError::NoConvergence {
        func: "e1",
        x,
        terms: CF_MAX_ITER,
    })
}

/// Exponential integral `Ei(x) = −PV∫_{−x}^∞ e^{−u}/u du` for x > 0.
pub fn ei(x: f64) -> Result<f64> {
    require_positive("ei", x)?;
    if x > OVERFLOW_LIMIT {
        return Err(SpecFunError::Range { func: "ei", x });
    }
    if x <= EI_ASYMPTOTIC_FROM {
        ei_series(x)
    } else {
        Ok(ei_asymptotic_scaled(x)? * x.exp())
    }
}

/// `e^{−x} Ei(x)`, finite and O(1/x) for large x.
pub fn ei_scaled(x: f64) -> Result<f64> {
    require_positive("ei_scaled", x)?;
    if x <= EI_ASYMPTOTIC_FROM {
        Ok(ei_series(x)? * (-x).exp())
    } else {
        ei_asymptotic_scaled(x)
    }
}

fn ei_series(x: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 1..CF_MAX_ITER {
        fact *= x / k as f64;
        let term = fact / k as f64;
        sum += term;
        if term < f64::EPSILON * sum {
            return Ok(EULER_GAMMA + x.ln() + sum);
        }
    }
    Err(SpecFunError::NoConvergence {
        func: "ei",
        x,
        terms: CF_MAX_ITER,
    })
}

fn ei_asymptotic_scaled(x: f64) -> Result<f64> {
    // e^{−x} Ei(x) ~ (1/x) Σ k!/x^k, truncated at the smallest term
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 1..CF_MAX_ITER {
        let prev = term;
        term *= k as f64 / x;
        if term < f64::EPSILON {
            return Ok((sum + term) / x);
        }
        if term >= prev {
            return Ok(sum / x);
        }
        sum += term;
    }
    Err(SpecFunError::NoConvergence {
        func: "ei",
        x,
        terms: CF_MAX_ITER,
    })
}

/// `Shi(x)·cosh(x) − Chi(x)·sinh(x)`, for x ≥ 0.
///
/// Each product grows like e^{2x}/x while the difference decays like 1/x, so
/// above x = 1 this is evaluated as `(e^{−x}Ei(x) + e^{x}E1(x))/2`.
pub fn shi_cosh_minus_chi_sinh(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    require_positive("shi_cosh_minus_chi_sinh", x)?;
    if x <= 1.0 {
        Ok(shi(x)? * x.cosh() - chi(x)? * x.sinh())
    } else {
        Ok(0.5 * (ei_scaled(x)? + e1_scaled(x)?))
    }
}

/// `Chi(x)·cosh(x) − Shi(x)·sinh(x)`, for x > 0.
///
/// Log-divergent at 0, O(1/x²) for large x; above x = 1 evaluated as
/// `(e^{−x}Ei(x) − e^{x}E1(x))/2`.
pub fn chi_cosh_minus_shi_sinh(x: f64) -> Result<f64> {
    require_positive("chi_cosh_minus_shi_sinh", x)?;
    if x <= 1.0 {
        Ok(chi(x)? * x.cosh() - shi(x)? * x.sinh())
    } else {
        Ok(0.5 * (ei_scaled(x)? - e1_scaled(x)?))
    }
}
