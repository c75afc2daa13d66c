//! Wigner function of the initial two-packet superposition and the
//! peak-ratio definition of the fringe exponent,
//! `exp(−A_int) = ½ W_int|peak / √(W1|peak W2|peak)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::decoherence::FringeConfig;
use crate::error::{Error, Result};
use crate::params::SuperpositionSpec;
use crate::quadrature::GaussLegendre;

/// Nodes per axis of the normalization quadrature.
pub const NORMALIZATION_NODES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerCat {
    pub sup: SuperpositionSpec,
    pub x_c: f64,
    pub p_c: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub fringe: FringeConfig,
}

impl WignerCat {
    /// The t = 0 parameterization: `δ1 = δ2 = δ`, `x_c = k_p = L0`,
    /// `p_c = k_x = P0`, `β = 0`.
    pub fn initial(sup: &SuperpositionSpec) -> Result<Self> {
        sup.validate()?;
        Ok(Self {
            sup: *sup,
            x_c: sup.l0,
            p_c: sup.p0,
            delta1: sup.delta,
            delta2: sup.delta,
            fringe: FringeConfig {
                k_p: sup.l0,
                k_x: sup.p0,
                beta: 0.0,
            },
        })
    }

    fn prefactor(&self) -> f64 {
        self.sup.n_tilde_sq() / PI * self.delta1 / self.delta2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerComponents {
    pub w1: f64,
    pub w2: f64,
    pub w_int: f64,
}

impl WignerComponents {
    pub fn total(&self) -> f64 {
        self.w1 + self.w2 + self.w_int
    }
}

/// The two packet terms and the interference term at `(x, p)`.
///
/// `W_int = (2Ñ²/π)(δ1/δ2) e^{−x²/δ1²} e^{−δ2²(p − βx)²} cos(2k_p p + 2(k_x − βk_p)x)`.
pub fn wigner_components(x: f64, p: f64, cat: &WignerCat) -> WignerComponents {
    let pre = cat.prefactor();
    let beta = cat.fringe.beta;
    let (d1, d2) = (cat.delta1, cat.delta2);
    let packet = |sign: f64| {
        let dx = x - sign * cat.x_c;
        let dp = p - sign * cat.p_c - beta * dx;
        pre * (-dx * dx / (d1 * d1) - d2 * d2 * dp * dp).exp()
    };
    let q = p - beta * x;
    let phase = 2.0 * cat.fringe.k_p * p + 2.0 * (cat.fringe.k_x - beta * cat.fringe.k_p) * x;
    WignerComponents {
        w1: packet(1.0),
        w2: packet(-1.0),
        w_int: 2.0 * pre * (-x * x / (d1 * d1) - d2 * d2 * q * q).exp() * phase.cos(),
    }
}

/// Half-widths of the phase-space box used for quadrature and peak search.
pub fn phase_space_box(sup: &SuperpositionSpec) -> (f64, f64) {
    (sup.l0 + 8.0 * sup.delta, sup.p0.abs() + 8.0 / sup.delta)
}

/// `∫∫ W dx dp` by a tensor Gauss–Legendre rule with `nodes` per axis.
pub fn normalization(cat: &WignerCat, nodes: usize) -> f64 {
    let (xb, pb) = phase_space_box(&cat.sup);
    let rule = GaussLegendre::new(nodes);
    let p_nodes: Vec<(f64, f64)> = rule.mapped(-pb, pb).collect();
    rule.mapped(-xb, xb)
        .map(|(x, wx)| {
            wx * p_nodes
                .iter()
                .map(|&(p, wp)| wp * wigner_components(x, p, cat).total())
                .sum::<f64>()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakRatio {
    pub a_int: f64,
    pub a_max: f64,
    pub w1_peak: f64,
    pub w2_peak: f64,
    pub w_int_peak: f64,
}

/// Maximizes `g` over the box by a coarse grid followed by repeated zooms
/// around the best node.
fn grid_maximum<F: Fn(f64, f64) -> f64>(g: F, xb: f64, pb: f64) -> f64 {
    const NODES: usize = 81;
    const ZOOMS: usize = 12;
    let (mut cx, mut cp) = (0.0, 0.0);
    let (mut hx, mut hp) = (xb, pb);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..=ZOOMS {
        let (mut bx, mut bp) = (cx, cp);
        for i in 0..NODES {
            let x = cx - hx + 2.0 * hx * i as f64 / (NODES - 1) as f64;
            for j in 0..NODES {
                let p = cp - hp + 2.0 * hp * j as f64 / (NODES - 1) as f64;
                let v = g(x, p);
                if v > best {
                    best = v;
                    bx = x;
                    bp = p;
                }
            }
        }
        cx = bx;
        cp = bp;
        hx *= 4.0 / (NODES - 1) as f64;
        hp *= 4.0 / (NODES - 1) as f64;
    }
    best
}

/// `A_int` from the numerically located peaks of `W1`, `W2` and `|W_int|`.
pub fn a_int_from_peaks(cat: &WignerCat) -> Result<PeakRatio> {
    let a_max = cat.sup.a_max();
    if !(a_max > 0.0) {
        return Err(Error::Config("degenerate superposition: a_max = 0".into()));
    }
    let (xb, pb) = phase_space_box(&cat.sup);
    let w1_peak = grid_maximum(|x, p| wigner_components(x, p, cat).w1, xb, pb);
    let w2_peak = grid_maximum(|x, p| wigner_components(x, p, cat).w2, xb, pb);
    let w_int_peak = grid_maximum(|x, p| wigner_components(x, p, cat).w_int.abs(), xb, pb);
    let ratio = 0.5 * w_int_peak / (w1_peak * w2_peak).sqrt();
    Ok(PeakRatio {
        a_int: -ratio.ln(),
        a_max,
        w1_peak,
        w2_peak,
        w_int_peak,
    })
}
