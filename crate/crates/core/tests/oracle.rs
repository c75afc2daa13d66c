mod support;

use proptest::prelude::*;
use qbm_core::coeffs::coefficients_at;
use qbm_core::oracle::{coefficient_by_quadrature, kernel_eta, kernel_nu};
use qbm_core::{BathSpec, CoefficientKind, Error, IntegrationOrder, QuadratureConfig, SystemSpec};
use support::*;

fn fig1() -> (SystemSpec, BathSpec) {
    (
        SystemSpec::stable(1.0, 1.0).unwrap(),
        BathSpec::new(0.05, 100.0).unwrap(),
    )
}

fn tolerance(v: f64) -> f64 {
    1e-8_f64.max(1e-6 * v.abs())
}

#[test]
fn eta_is_exponential() {
    let (_, bath) = fig1();
    let cfg = QuadratureConfig::default();
    for s in [1e-3, 0.01, 0.03, 0.1] {
        let e = kernel_eta(s, 2.0, &bath, &cfg).unwrap();
        let want = 2.0 * 0.05 * 1e4 * (-100.0 * s).exp();
        assert!(
            (e.value - want).abs() <= e.error.max(1e-9 * want.abs()) + 1e-12,
            "{s}"
        );
    }
    assert_eq!(kernel_eta(0.0, 1.0, &bath, &cfg).unwrap().value, 0.0);
}

#[test]
fn nu_against_exponential_integrals() {
    let (_, bath) = fig1();
    let cfg = QuadratureConfig::default();
    for s in [0.002_f64, 0.01, 0.05, 0.2] {
        let x = 100.0 * s;
        let want = -2.0 / std::f64::consts::PI
            * 0.05
            * 1e4
            * 0.5
            * ((-x).exp() * ei_series(x) - x.exp() * e1_ref(x));
        let got = kernel_nu(s, 1.0, &bath, &cfg).unwrap();
        assert!(
            close(got.value, want, 1e-8, 1e-9),
            "ν({s}) = {} vs {want}",
            got.value
        );
    }
}

#[test]
fn nu_at_zero_depends_on_cutoff() {
    let (_, bath) = fig1();
    let value_at = |w: f64| {
        let cfg = QuadratureConfig {
            omega_upper: Some(w),
            ..Default::default()
        };
        match kernel_nu(0.0, 1.0, &bath, &cfg) {
            Err(Error::CutoffDependent {
                omega_upper,
                estimate,
            }) => {
                assert_eq!(omega_upper, w);
                estimate.value
            }
            other => panic!("expected a cutoff-dependent result, got {other:?}"),
        }
    };
    let (a, b) = (value_at(1e3), value_at(1e5));
    // ∫ ω/(ω²+Λ²) from 10Λ to 1000Λ
    let scale = 2.0 / std::f64::consts::PI * 0.05 * 1e4;
    assert!(close(
        b - a,
        scale * 0.5 * (1000001.0f64 / 101.0).ln(),
        1e-12,
        0.0
    ));
}

#[test]
fn matches_closed_forms_on_log_grid() {
    let (sys, bath) = fig1();
    let cfg = QuadratureConfig::default();
    for t in log_space(1e-3, 30.0, 12) {
        let exact = coefficients_at(t, &sys, &bath).unwrap();
        for kind in CoefficientKind::ALL {
            let v = exact.get(kind);
            let est = coefficient_by_quadrature(kind, t, &sys, &bath, &cfg).unwrap();
            assert!(
                (est.value - v).abs() <= tolerance(v),
                "{} at t = {t}: {} vs {v}",
                kind.name(),
                est.value
            );
        }
    }
}

#[test]
fn orders_agree_within_error_bounds() {
    let (sys, bath) = fig1();
    let cfg = QuadratureConfig::default();
    for t in [0.004, 0.3, 2.5] {
        for kind in CoefficientKind::ALL {
            let [a, b, c] = [
                IntegrationOrder::Auto,
                IntegrationOrder::KernelFirst,
                IntegrationOrder::TimeFirst,
            ]
            .map(|o| coefficient_by_quadrature(kind, t, &sys, &bath, &cfg.with_order(o)).unwrap());
            for (x, y) in [(a, b), (a, c), (b, c)] {
                assert!(
                    (x.value - y.value).abs() <= x.error + y.error + 1e-12,
                    "{} at {t}: {x:?} vs {y:?}",
                    kind.name()
                );
            }
        }
    }
}

#[test]
fn agrees_with_test_side_spectral_integrals() {
    let b = Bath {
        mass: 1.0,
        omega: 1.0,
        gamma0: 0.01,
        lambda: 100.0,
    };
    let bath = BathSpec::new(0.01, 100.0).unwrap();
    let cfg = QuadratureConfig::default();
    for inverted in [false, true] {
        let sys = if inverted {
            SystemSpec::inverted(1.0, 1.0).unwrap()
        } else {
            SystemSpec::stable(1.0, 1.0).unwrap()
        };
        for t in [0.02, 0.7, 4.0] {
            let d = coefficient_by_quadrature(CoefficientKind::NormalDiff, t, &sys, &bath, &cfg)
                .unwrap();
            let f = coefficient_by_quadrature(CoefficientKind::AnomalousDiff, t, &sys, &bath, &cfg)
                .unwrap();
            let (dr, fr) = (d_reference(t, b, inverted), f_reference(t, b, inverted));
            assert!(
                close(d.value, dr, 1e-6, 1e-9),
                "D {inverted} {t}: {} vs {dr}",
                d.value
            );
            assert!(
                close(f.value, fr, 1e-6, 1e-9),
                "f {inverted} {t}: {} vs {fr}",
                f.value
            );
        }
    }
}

#[test]
fn rejects_bad_input() {
    let (sys, bath) = fig1();
    let cfg = QuadratureConfig::default();
    let k = CoefficientKind::NormalDiff;
    assert!(coefficient_by_quadrature(k, -1.0, &sys, &bath, &cfg).is_err());
    assert!(coefficient_by_quadrature(k, f64::NAN, &sys, &bath, &cfg).is_err());
    let low = QuadratureConfig {
        omega_upper: Some(50.0),
        ..Default::default()
    };
    assert!(coefficient_by_quadrature(k, 1.0, &sys, &bath, &low).is_err());
    assert_eq!(
        coefficient_by_quadrature(k, 0.0, &sys, &bath, &cfg)
            .unwrap()
            .value,
        0.0
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// The reported error bound covers the distance to the closed form.
    #[test]
    fn error_bound_is_honest(lt in (1e-3f64).ln()..(30f64).ln(), k in 0usize..4, gamma0 in 1e-3f64..0.1) {
        let t = lt.exp();
        let sys = SystemSpec::stable(1.0, 1.0).unwrap();
        let bath = BathSpec::new(gamma0, 100.0).unwrap();
        let kind = CoefficientKind::ALL[k];
        let v = coefficients_at(t, &sys, &bath).unwrap().get(kind);
        let est = coefficient_by_quadrature(kind, t, &sys, &bath, &QuadratureConfig::default()).unwrap();
        prop_assert!((est.value - v).abs() <= est.error + 1e-12 * v.abs().max(1.0),
            "{} at {}: {:?} vs {}", kind.name(), t, est, v);
    }
}
