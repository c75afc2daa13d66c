mod support;

use proptest::prelude::*;
use qbm_core::gaussian::{
    a_int_from_peaks, normalization, phase_space_box, wigner_components, NORMALIZATION_NODES,
};
use qbm_core::{SuperpositionSpec, WignerCat};
use support::*;

/// Tensor Gauss–Legendre integral of each component over the box.
fn component_integrals(cat: &WignerCat) -> [f64; 3] {
    let (xb, pb) = phase_space_box(&cat.sup);
    let rule = gauss_legendre(160);
    let mut out = [0.0; 3];
    for &(u, wu) in &rule {
        for &(v, wv) in &rule {
            let w = wigner_components(xb * u, pb * v, cat);
            let weight = wu * wv * xb * pb;
            out[0] += weight * w.w1;
            out[1] += weight * w.w2;
            out[2] += weight * w.w_int;
        }
    }
    out
}

#[test]
fn component_weights() {
    for (l0, p0, d) in [(1.0, 0.0, 1.0), (2.0, 0.7, 1.3), (0.3, -1.5, 0.6)] {
        let sup = SuperpositionSpec::new(l0, p0, d).unwrap();
        let cat = WignerCat::initial(&sup).unwrap();
        let a_max = l0 * l0 / (d * d) + d * d * p0 * p0;
        let n2 = 0.5 / (1.0 + (-a_max).exp());
        let [w1, w2, wi] = component_integrals(&cat);
        assert!((w1 - n2).abs() < 1e-10, "{w1} vs {n2}");
        assert!((w2 - n2).abs() < 1e-10);
        assert!((wi - 2.0 * n2 * (-a_max).exp()).abs() < 1e-10, "{wi}");
        assert!((normalization(&cat, NORMALIZATION_NODES) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn packets_sit_at_the_centres() {
    let sup = SuperpositionSpec::new(2.0, 0.5, 1.0).unwrap();
    let cat = WignerCat::initial(&sup).unwrap();
    let peak = wigner_components(2.0, 0.5, &cat).w1;
    for (dx, dp) in [(0.01, 0.0), (-0.01, 0.0), (0.0, 0.01), (0.0, -0.01)] {
        assert!(wigner_components(2.0 + dx, 0.5 + dp, &cat).w1 < peak);
    }
    let w = wigner_components(-2.0, -0.5, &cat);
    assert!((w.w2 - peak).abs() < 1e-15);
}

#[test]
fn bound_values() {
    let r = a_int_from_peaks(
        &WignerCat::initial(&SuperpositionSpec::new(1.0, 0.0, 1.0).unwrap()).unwrap(),
    )
    .unwrap();
    assert_eq!(r.a_max, 1.0);
    assert!(r.a_int.abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn initial_exponent_is_zero(l0 in 0.05f64..5.0, p0 in -3.0f64..3.0, d in 0.3f64..3.0) {
        let sup = SuperpositionSpec::new(l0, p0, d).unwrap();
        let r = a_int_from_peaks(&WignerCat::initial(&sup).unwrap()).unwrap();
        prop_assert!(r.a_int.abs() < 1e-6, "{:?}", r);
        prop_assert!(r.w_int_peak <= 2.0 * (r.w1_peak * r.w2_peak).sqrt() * (1.0 + 1e-12));
        prop_assert!(r.a_int <= r.a_max);
    }

    #[test]
    fn normalized(l0 in 0.05f64..4.0, p0 in -2.0f64..2.0, d in 0.5f64..2.0) {
        let sup = SuperpositionSpec::new(l0, p0, d).unwrap();
        let n = normalization(&WignerCat::initial(&sup).unwrap(), NORMALIZATION_NODES);
        prop_assert!((n - 1.0).abs() < 1e-8, "{}", n);
    }
}
