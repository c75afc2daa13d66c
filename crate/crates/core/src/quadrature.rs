//! Numerical integration used by the quadrature oracle and the decoherence
//! integrals: adaptive Gauss–Kronrod (21-point), tensor Gauss–Legendre, and
//! Euler acceleration of alternating series of half-period integrals.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

/// An integral value together with an a-posteriori error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub fn new(value: f64, error: f64) -> Self {
        Self { value, error }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.value * factor, self.error * factor.abs())
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate::new(self.value + rhs.value, self.error + rhs.error)
    }
}

impl std::iter::Sum for Estimate {
    fn sum<I: Iterator<Item = Estimate>>(iter: I) -> Estimate {
        iter.fold(Estimate::new(0.0, 0.0), |a, b| a + b)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (best estimate {} ± {})", estimate.value, estimate.error
    )]
    NotConverged {
        estimate: Estimate,
        subdivisions: usize,
    },
    #[error("integrand returned a non-finite value at {at}")]
    NonFinite { at: f64 },
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-14,
            max_subdivisions: 10_000,
        }
    }
}

impl Tolerance {
    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

// Kronrod abscissae and weights for the 21-point rule, plus the embedded
// 10-point Gauss weights (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_211_183,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One application of the 21-point Gauss–Kronrod rule on `[a, b]`.
pub fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Estimate, QuadError>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let fc = checked(f, center)?;
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let err = rescale_error((res_k - res_g) * half, res_abs, res_asc);
    Ok(Estimate::new(value, err))
}

fn checked<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64, QuadError> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(QuadError::NonFinite { at: x })
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

struct Segment {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Globally adaptive integration over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Estimate, QuadError>
where
    F: FnMut(f64) -> f64,
{
    integrate_with_breaks(f, &[a, b], tol)
}

/// Like [`integrate`], with the initial partition given by `points`
/// (sorted, first and last are the limits).
pub fn integrate_with_breaks<F>(
    mut f: F,
    points: &[f64],
    tol: &Tolerance,
) -> Result<Estimate, QuadError>
where
    F: FnMut(f64) -> f64,
{
    let mut heap = BinaryHeap::new();
    let mut total = Estimate::new(0.0, 0.0);
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let est = gauss_kronrod(&mut f, w[0], w[1])?;
        total = total + est;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            est,
        });
    }
    let mut subdivisions = heap.len();
    while total.error > tol.target(total.value) {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval at machine resolution; keep it and stop refining
            heap.push(worst);
            break;
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(QuadError::NotConverged {
                estimate: total,
                subdivisions,
            });
        }
        let left = gauss_kronrod(&mut f, worst.a, mid)?;
        let right = gauss_kronrod(&mut f, mid, worst.b)?;
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            est: right,
        });
        subdivisions += 1;
    }
    // re-sum to shed accumulated rounding from the incremental updates
    let value: f64 = heap.iter().map(|s| s.est.value).sum();
    let error: f64 = heap.iter().map(|s| s.est.error).sum();
    Ok(Estimate::new(value, error))
}

/// Sums `Σ_{k≥0} term(k)` for an alternating series of smooth terms by
/// Euler–Knopp repeated averaging of the partial sums.
///
/// `term` returns each term with its own error bound; those bounds are added
/// to the reported error. Stops when two successive accelerated values agree
/// within `target`, or after `max_terms` terms.
pub fn euler_alternating_sum<F>(
    mut term: F,
    target: f64,
    max_terms: usize,
) -> Result<Estimate, QuadError>
where
    F: FnMut(usize) -> Result<Estimate, QuadError>,
{
    let mut partial = Vec::with_capacity(max_terms);
    let mut running = 0.0;
    let mut term_error = 0.0;
    let mut previous: Option<f64> = None;
    let mut last_change = f64::INFINITY;
    for k in 0..max_terms {
        let t = term(k)?;
        running += t.value;
        term_error += t.error;
        partial.push(running);
        if partial.len() < 4 {
            continue;
        }
        let accel = repeated_average(&partial);
        if let Some(prev) = previous {
            last_change = (accel - prev).abs();
            if last_change <= target.max(f64::EPSILON * accel.abs()) {
                return Ok(Estimate::new(accel, last_change + term_error));
            }
        }
        previous = Some(accel);
    }
    let value = previous.unwrap_or(running);
    Err(QuadError::NotConverged {
        estimate: Estimate::new(value, last_change + term_error),
        subdivisions: max_terms,
    })
}

fn repeated_average(partial: &[f64]) -> f64 {
    let mut row = partial.to_vec();
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
    }
    row[0]
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_is_exact_for_polynomials() {
        for deg in 0..=31 {
            let est = gauss_kronrod(&mut |x: f64| x.powi(deg), 0.0, 1.0).unwrap();
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((est.value - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn adaptive_handles_log_singularity() {
        let est = integrate(|x: f64| x.ln(), 0.0, 1.0, &Tolerance::default()).unwrap();
        assert!((est.value + 1.0).abs() < 1e-10);
        assert!(est.error >= (est.value + 1.0).abs());
    }

    #[test]
    fn breakpoints_partition() {
        let est = integrate_with_breaks(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], &Tolerance::default())
            .unwrap();
        assert!((est.value - 2.5).abs() < 1e-14);
    }

    #[test]
    fn subdivision_limit_reports_best_estimate() {
        let tol = Tolerance {
            rel: 1e-15,
            abs: 0.0,
            max_subdivisions: 3,
        };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-4, 1.0, &tol).unwrap_err();
        assert!(matches!(err, QuadError::NotConverged { .. }));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate(|_| f64::NAN, 0.0, 1.0, &Tolerance::default()).unwrap_err();
        assert!(matches!(err, QuadError::NonFinite { .. }));
    }

    #[test]
    fn euler_sum_of_alternating_harmonic_series() {
        let est = euler_alternating_sum(
            |k| {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                Ok(Estimate::new(s / (k as f64 + 1.0), 0.0))
            },
            1e-13,
            80,
        )
        .unwrap();
        assert!((est.value - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_weights_and_exactness() {
        for n in [1, 2, 5, 20, 400] {
            let gl = GaussLegendre::new(n);
            let wsum: f64 = gl.mapped(-1.0, 1.0).map(|(_, w)| w).sum();
            assert!((wsum - 2.0).abs() < 1e-12, "n = {n}");
        }
        let gl = GaussLegendre::new(10);
        let v = gl.integrate(|x| x.powi(19) + x.powi(18), -1.0, 1.0);
        assert!((v - 2.0 / 19.0).abs() < 1e-14);
        let v = GaussLegendre::new(400).integrate(|x| (-x * x).exp(), -8.0, 8.0);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }
}
