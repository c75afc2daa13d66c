//! Test-side reference computations, written without the library's own
//! special functions or quadrature.
#![allow(dead_code)]

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Adaptive bisection with a 15-point Gauss–Legendre rule on each half.
pub struct RefQuad {
    rule: Vec<(f64, f64)>,
    pub rel: f64,
    pub abs: f64,
}

impl Default for RefQuad {
    fn default() -> Self {
        Self {
            rule: gauss_legendre(15),
            rel: 1e-13,
            abs: 1e-15,
        }
    }
}

impl RefQuad {
    fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.rule
            .iter()
            .map(|&(x, w)| w * f(m + h * x))
            .sum::<f64>()
            * h
    }

    fn refine<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (l, r) = (self.panel(f, a, m), self.panel(f, m, b));
        let both = l + r;
        if depth == 0 || (both - whole).abs() <= (self.rel * both.abs()).max(self.abs) {
            return both;
        }
        self.refine(f, a, m, l, depth - 1) + self.refine(f, m, b, r, depth - 1)
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        // unit-length pieces keep oscillatory integrands resolved
        let pieces = ((b - a).abs().ceil() as usize).max(1);
        let h = (b - a) / pieces as f64;
        (0..pieces)
            .map(|i| {
                let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
                self.refine(&f, x0, x1, self.panel(&f, x0, x1), 40)
            })
            .sum()
    }
}

/// `sin(u)/u` and friends with their removable singularities filled in.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.sin() / u
    }
}

pub fn sinhc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.sinh() / u
    }
}

/// `(cos u − 1)/u`, accurate near 0.
pub fn cosm1_over(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        -u / 2.0 + u * u * u / 24.0
    } else {
        -2.0 * (u / 2.0).sin().powi(2) / u
    }
}

/// `(cosh u − 1)/u`, accurate near 0.
pub fn coshm1_over(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        u / 2.0 + u * u * u / 24.0
    } else {
        2.0 * (u / 2.0).sinh().powi(2) / u
    }
}

pub fn si_ref(x: f64) -> f64 {
    RefQuad::default().integrate(sinc, 0.0, x)
}

pub fn ci_ref(x: f64) -> f64 {
    EULER_GAMMA + x.ln() + RefQuad::default().integrate(cosm1_over, 0.0, x)
}

pub fn shi_ref(x: f64) -> f64 {
    RefQuad::default().integrate(sinhc, 0.0, x)
}

pub fn chi_ref(x: f64) -> f64 {
    EULER_GAMMA + x.ln() + RefQuad::default().integrate(coshm1_over, 0.0, x)
}

/// `Ei(x) = Γ + ln x + Σ x^k/(k·k!)`, x > 0. All terms positive, so no
/// cancellation; fine up to x ≈ 40.
pub fn ei_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..500 {
        term *= x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add < 1e-17 * sum {
            break;
        }
    }
    EULER_GAMMA + x.ln() + sum
}

/// `E1(x) = ∫₀¹ e^{−x/u}/u du` for x > 0.
pub fn e1_ref(x: f64) -> f64 {
    RefQuad::default().integrate(
        |u| if u == 0.0 { 0.0 } else { (-x / u).exp() / u },
        0.0,
        1.0,
    )
}

/// Taylor series value, summed with `term` generating the k-th term.
pub fn series(mut term: impl FnMut(usize) -> f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..200 {
        let t = term(k);
        sum += t;
        if t.abs() < 1e-18 * sum.abs().max(1e-300) && k > 2 {
            break;
        }
    }
    sum
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `n` log-spaced points on `[a, b]`.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `|a − b| ≤ rel·|b| + abs`.
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * b.abs() + abs
}

/// `sin(x t)/x`, finite at x = 0.
fn sin_over(x: f64, t: f64) -> f64 {
    t * sinc(x * t)
}

/// `(1 − cos(x t))/x`, finite at x = 0.
fn versine_over(x: f64, t: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        2.0 * (0.5 * x * t).sin().powi(2) / x
    }
}

/// Bath parameters for the spectral references below.
#[derive(Clone, Copy)]
pub struct Bath {
    pub mass: f64,
    pub omega: f64,
    pub gamma0: f64,
    pub lambda: f64,
}

/// Upper frequency of the spectral references; the 1/ω² tail beyond it is
/// added from its leading asymptotic term.
const W_MAX: f64 = 4e4;

fn spectral<F: Fn(f64) -> f64>(inner: F) -> f64 {
    let q = RefQuad {
        rel: 1e-12,
        abs: 1e-16,
        ..Default::default()
    };
    q.integrate(inner, 0.0, W_MAX)
}

/// `D(t) = (2Mγ0/π) Λ² ∫₀^∞ dω ω/(ω²+Λ²) ∫₀ᵗ cos ωs · c(Ωs) ds` with the s
/// integral done by hand; `c` is cos (stable) or cosh (inverted).
pub fn d_reference(t: f64, b: Bath, inverted: bool) -> f64 {
    let (w, l) = (b.omega, b.lambda);
    let pre = 2.0 * b.mass * b.gamma0 / std::f64::consts::PI * l * l;
    let body = |om: f64| {
        let s_int = if inverted {
            (w * (w * t).sinh() * (om * t).cos() + om * (w * t).cosh() * (om * t).sin())
                / (om * om + w * w)
        } else {
            0.5 * (sin_over(om - w, t) + sin_over(om + w, t))
        };
        om / (om * om + l * l) * s_int
    };
    // ∫_W^∞ sin(ωt) c(Ωt)/ω² dω ≈ c(Ωt) cos(Wt)/(W² t)
    let c = if inverted {
        (w * t).cosh()
    } else {
        (w * t).cos()
    };
    let tail = c * (W_MAX * t).cos() / (W_MAX * W_MAX * t);
    pre * (spectral(body) + tail)
}

/// `f(t) = (2γ0Λ²/Ω) ∫₀^∞ dω ω/(ω²+Λ²) ∫₀ᵗ cos ωs · s(Ωs) ds`, with `s` sin
/// or sinh.
pub fn f_reference(t: f64, b: Bath, inverted: bool) -> f64 {
    let (w, l) = (b.omega, b.lambda);
    let pre = 2.0 * b.gamma0 * l * l / w;
    let body = |om: f64| {
        let s_int = if inverted {
            (w * (w * t).cosh() * (om * t).cos() + om * (w * t).sinh() * (om * t).sin() - w)
                / (om * om + w * w)
        } else {
            0.5 * (versine_over(w + om, t) + versine_over(w - om, t))
        };
        om / (om * om + l * l) * s_int
    };
    // large ω the integrand is ≈ s(Ωt) sin(ωt)/ω² − Ω/ω³ in both cases
    let s = if inverted {
        (w * t).sinh()
    } else {
        (w * t).sin()
    };
    let w2 = W_MAX * W_MAX;
    let tail = s * (W_MAX * t).cos() / (w2 * t) - w / (2.0 * w2);
    pre * (spectral(body) + tail)
}
