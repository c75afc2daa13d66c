//! Dormand–Prince 5(4) with step-size control and the standard fourth-order
//! dense output.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// First trial step; `None` picks one from the initial slope.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: f64::INFINITY,
            initial_step: None,
            max_steps: 1_000_000,
        }
    }
}

impl OdeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("ODE tolerances must be positive".into()));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::Config("max_step must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_calls: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub stats: OdeStats,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

fn combine<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrates `y' = rhs(t, y)` from `(t0, y0)` and reports the solution at
/// every time in `output_times` (sorted, inside `[t0, t_end]`) through the
/// dense output.
///
/// Steps land exactly on each of `stops` so that kinks in the right-hand
/// side are never straddled. `check` runs on every accepted step and can
/// abort the integration.
#[allow(clippy::too_many_arguments)]
pub fn integrate<const N: usize, F, G>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    output_times: &[f64],
    stops: &[f64],
    cfg: &OdeConfig,
    mut check: G,
) -> Result<OdeSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    G: FnMut(f64, &[f64; N]) -> Result<()>,
{
    cfg.validate()?;
    if !(t_end > t0) {
        return Err(Error::Config(format!(
            "t_end ({t_end}) must exceed t0 ({t0})"
        )));
    }
    if output_times.windows(2).any(|w| w[1] < w[0])
        || output_times.iter().any(|&t| t < t0 || t > t_end)
    {
        return Err(Error::Config(
            "output times must be sorted inside [t0, t_end]".into(),
        ));
    }
    let mut stops: Vec<f64> = stops
        .iter()
        .copied()
        .filter(|&s| s > t0 && s < t_end)
        .collect();
    stops.push(t_end);
    stops.sort_by(f64::total_cmp);

    let mut stats = OdeStats::default();
    let mut times = Vec::with_capacity(output_times.len());
    let mut states = Vec::with_capacity(output_times.len());
    let mut next_out = 0;
    while next_out < output_times.len() && output_times[next_out] == t0 {
        times.push(t0);
        states.push(y0);
        next_out += 1;
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y)?;
    stats.rhs_calls += 1;
    let mut h = cfg
        .initial_step
        .unwrap_or_else(|| initial_step(&y, &k1, cfg, t_end - t0))
        .min(cfg.max_step);
    let mut stop_idx = 0;

    while t < t_end {
        if stats.accepted + stats.rejected >= cfg.max_steps {
            return Err(Error::Config(format!(
                "step budget of {} exhausted at t = {t}",
                cfg.max_steps
            )));
        }
        while stops[stop_idx] <= t {
            stop_idx += 1;
        }
        let stop = stops[stop_idx];
        let mut landing = false;
        if t + h >= stop || t + 1.01 * h >= stop {
            h = stop - t;
            landing = true;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(1e-300) {
            return Err(Error::StepUnderflow { t, h });
        }

        let k2 = rhs(t + C2 * h, &combine(&y, h, &[(A21, &k1)]))?;
        let k3 = rhs(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = rhs(
            t + C4 * h,
            &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        )?;
        let k5 = rhs(
            t + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let k6 = rhs(
            t + h,
            &combine(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        )?;
        let y_new = combine(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let t_new = if landing { stop } else { t + h };
        let k7 = rhs(t_new, &y_new)?;
        stats.rhs_calls += 6;

        let mut err_sq = 0.0;
        for i in 0..N {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();
        if !err.is_finite() {
            stats.rejected += 1;
            h *= MIN_FACTOR;
            continue;
        }
        let factor = if err == 0.0 {
            MAX_FACTOR
        } else {
            (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
        };
        if err > 1.0 {
            stats.rejected += 1;
            h *= factor.min(1.0);
            continue;
        }

        check(t_new, &y_new)?;
        stats.accepted += 1;
        // dense output on (t, t_new]
        while next_out < output_times.len() && output_times[next_out] <= t_new {
            let theta = (output_times[next_out] - t) / h;
            let mut yo = [0.0; N];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                let r4 = ydiff - h * k7[i] - bspl;
                let r5 = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                yo[i] = y[i]
                    + theta * (ydiff + (1.0 - theta) * (bspl + theta * (r4 + (1.0 - theta) * r5)));
            }
            if output_times[next_out] == t_new {
                yo = y_new;
            }
            times.push(output_times[next_out]);
            states.push(yo);
            next_out += 1;
        }
        t = t_new;
        y = y_new;
        k1 = k7;
        h = (h * factor).min(cfg.max_step);
    }
    Ok(OdeSolution {
        times,
        states,
        stats,
    })
}

/// Hairer–Nørsett–Wanner starting-step heuristic (first-order part).
fn initial_step<const N: usize>(y: &[f64; N], f: &[f64; N], cfg: &OdeConfig, span: f64) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (f[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(span)
}
