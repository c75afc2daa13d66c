use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use qbm_core::coeffs::{coefficients_at, CoefficientSource};
use qbm_core::decoherence::{
    decoherence_time_with_threshold, evolve_a_int, td_high_frequency, td_macroscopic,
    td_underdamped_bound,
};
use qbm_core::gaussian::{
    a_int_from_peaks, normalization, phase_space_box, wigner_components, NORMALIZATION_NODES,
};
use qbm_core::inverted::{evolve, settling};
use qbm_core::oracle::coefficient_by_quadrature;
use qbm_core::{
    BathSpec, CoefficientKind, CoefficientModel, DecoherenceOutcome, Error, Estimate, FringeConfig,
    GaussianState, IntegratorConfig, QuadratureConfig, SuperpositionSpec, SystemSpec, Warmup,
    WignerCat,
};

use crate::config::{Panel, Settings};
use crate::output::{Cell, Document, Table};
use crate::{CliError, IntegrationOrderArg};

/// A document to write, plus the error to report once it is written.
pub struct Outcome {
    pub doc: Document,
    pub failure: Option<CliError>,
}

impl From<Document> for Outcome {
    fn from(doc: Document) -> Self {
        Self { doc, failure: None }
    }
}

/// `n` uniform points on `[0, t_end]`; a single point is `t = 0`.
pub fn grid_points(t_end: f64, n: usize) -> Vec<f64> {
    match n {
        0 | 1 => vec![0.0],
        _ => (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect(),
    }
}

fn stable_bath(s: &Settings) -> Result<(SystemSpec, BathSpec), CliError> {
    let bath = BathSpec::new(s.gamma0, s.lambda_cut)?;
    let sys = SystemSpec::stable(s.mass, s.omega)?;
    sys.validate_with(&bath)?;
    Ok((sys, bath))
}

fn params(s: &Settings, extra: Value) -> Value {
    let mut v = serde_json::to_value(s).expect("serializable settings");
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
        m.extend(e);
    }
    v
}

/// Quadrature estimates for `kinds` at the sample's time, and the largest
/// deviation from the sample.
fn oracle_row(
    sample: &qbm_core::CoefficientSample,
    sys: &SystemSpec,
    bath: &BathSpec,
    kinds: &[CoefficientKind],
) -> Result<(Vec<Estimate>, f64), CliError> {
    let cfg = QuadratureConfig::default();
    let mut out = Vec::with_capacity(kinds.len());
    let mut diff: f64 = 0.0;
    for &k in kinds {
        let est = coefficient_by_quadrature(k, sample.t, sys, bath, &cfg)?;
        diff = diff.max((sample.get(k) - est.value).abs());
        out.push(est);
    }
    Ok((out, diff))
}

pub fn coefficients(
    s: &Settings,
    model: CoefficientModel,
    warmup: Warmup,
    with_oracle: bool,
) -> Result<Outcome, CliError> {
    let (sys, bath) = stable_bath(s)?;
    let source = CoefficientSource::new(sys, bath)?
        .with_model(model)
        .with_warmup(warmup);
    let n = s.grid.unwrap_or(if s.panel == Some(Panel::Fig1) {
        501
    } else {
        201
    });

    // (panel label, coefficient, times)
    let mut jobs: Vec<(Option<&str>, Option<CoefficientKind>, f64)> = Vec::new();
    let mut columns: Vec<String>;
    if s.panel == Some(Panel::Fig1) {
        let short = 10.0 / bath.lambda_cut;
        let long = s.t_end.unwrap_or(100.0);
        let panels = [
            ("a", CoefficientKind::FreqShift, short),
            ("b", CoefficientKind::Dissipation, short),
            ("c", CoefficientKind::NormalDiff, short),
            ("d", CoefficientKind::AnomalousDiff, short),
            ("e", CoefficientKind::NormalDiff, long),
            ("f", CoefficientKind::AnomalousDiff, long),
        ];
        for (label, kind, t_end) in panels {
            jobs.extend(
                grid_points(t_end, n)
                    .into_iter()
                    .map(|t| (Some(label), Some(kind), t)),
            );
        }
        columns = ["panel", "coefficient", "t", "value"]
            .map(String::from)
            .to_vec();
        if with_oracle {
            columns.extend(["oracle", "oracle_error", "abs_diff"].map(String::from));
        }
    } else {
        let t_end = s.t_end.unwrap_or(10.0);
        jobs.extend(grid_points(t_end, n).into_iter().map(|t| (None, None, t)));
        columns = std::iter::once("t")
            .chain(CoefficientKind::ALL.iter().map(|k| k.name()))
            .map(String::from)
            .collect();
        if with_oracle {
            columns.extend(
                CoefficientKind::ALL
                    .iter()
                    .map(|k| format!("oracle_{}", k.name())),
            );
            columns.extend(["oracle_error_max", "max_abs_diff"].map(String::from));
        }
    }

    let rows: Vec<(Vec<Cell>, f64)> = jobs
        .par_iter()
        .map(|&(label, kind, t)| -> Result<(Vec<Cell>, f64), CliError> {
            let sample = source.sample(t)?;
            let kinds: Vec<CoefficientKind> =
                kind.map_or(CoefficientKind::ALL.to_vec(), |k| vec![k]);
            let mut row: Vec<Cell> = match (label, kind) {
                (Some(l), Some(k)) => {
                    vec![l.into(), k.name().into(), t.into(), sample.get(k).into()]
                }
                _ => std::iter::once(t)
                    .chain(kinds.iter().map(|&k| sample.get(k)))
                    .map(Cell::from)
                    .collect(),
            };
            let mut diff = 0.0;
            if with_oracle {
                let (est, d) = oracle_row(&sample, &sys, &bath, &kinds)?;
                let err_max = est.iter().map(|e| e.error).fold(0.0, f64::max);
                row.extend(est.iter().map(|e| Cell::Num(e.value)));
                row.push(err_max.into());
                row.push(d.into());
                diff = d;
            }
            Ok((row, diff))
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new(columns);
    let mut max_diff: f64 = 0.0;
    for (row, d) in rows {
        max_diff = max_diff.max(d);
        table.push(row);
    }
    let mut doc = Document::new(
        "coefficients",
        params(s, json!({"model": model, "warmup": warmup})),
        table,
    );
    if with_oracle {
        info!("max |closed - oracle| = {max_diff:e}");
        doc.extra.insert("max_abs_diff".into(), json!(max_diff));
    }
    Ok(doc.into())
}

pub fn decoherence_time(
    s: &Settings,
    sweep: &[f64],
    threshold: f64,
    model: CoefficientModel,
    warmup: Warmup,
) -> Result<Outcome, CliError> {
    let gammas: Vec<f64> = if sweep.is_empty() {
        vec![s.gamma0]
    } else {
        sweep.to_vec()
    };
    let sup = SuperpositionSpec::new(s.l0, s.p0, s.delta)?;
    let fringe = FringeConfig::frozen(&sup)?;
    let sys = SystemSpec::stable(s.mass, s.omega)?;
    let curve_points = s.grid.unwrap_or(101).max(2);

    let records: Vec<(Vec<Cell>, Value)> = gammas
        .par_iter()
        .map(|&g| -> Result<(Vec<Cell>, Value), CliError> {
            let bath = BathSpec {
                gamma0: g,
                lambda_cut: s.lambda_cut,
            };
            let source = CoefficientSource::new(sys, bath)?
                .with_model(model)
                .with_warmup(warmup);
            let t_max = s.t_end.unwrap_or(f64::INFINITY);
            let outcome = if bath.is_uncoupled() {
                DecoherenceOutcome::NoDecoherence {
                    horizon: t_max,
                    a_int: 0.0,
                }
            } else {
                decoherence_time_with_threshold(&fringe, &source, t_max, threshold)?
            };
            let hf = td_high_frequency(&sys, &bath, &sup);
            let ud = td_underdamped_bound(&bath);
            let mac = td_macroscopic(&sys, &bath, &sup);
            let mut tags = Vec::new();
            if qbm_core::params::weak_coupling_violated(&sys, &bath) {
                tags.push("weak-coupling-violated");
            }
            if !hf.in_regime {
                tags.push("high-frequency-out-of-regime");
            }
            if !mac.in_regime {
                tags.push("macroscopic-out-of-regime");
            }
            let (name, t_d, horizon, a_h) = match outcome {
                DecoherenceOutcome::Decohered { t_d } => ("decohered", t_d, f64::NAN, f64::NAN),
                DecoherenceOutcome::NoDecoherence { horizon, a_int } => {
                    tags.push("no-decoherence-before-horizon");
                    ("no-decoherence", f64::NAN, horizon, a_int)
                }
            };
            let curve_end = match outcome {
                DecoherenceOutcome::Decohered { t_d } => 2.0 * t_d,
                DecoherenceOutcome::NoDecoherence { horizon, .. } => horizon,
            };
            let curve = if curve_end.is_finite() && curve_end > 0.0 {
                let v = evolve_a_int(curve_end, curve_points, &fringe, &source, &sup)?;
                json!({"t": v.times, "a_int": v.a_int, "a_max": v.a_max, "a_max_crossing": v.a_max_crossing})
            } else {
                Value::Null
            };
            info!("gamma0 = {g}: {name}");
            let row = vec![
                g.into(),
                s.lambda_cut.into(),
                s.omega.into(),
                s.mass.into(),
                s.l0.into(),
                name.into(),
                t_d.into(),
                horizon.into(),
                a_h.into(),
                hf.value.into(),
                hf.in_regime.into(),
                ud.into(),
                mac.value.into(),
                mac.in_regime.into(),
            ];
            let record = json!({
                "params": {"gamma0": g, "lambda_cut": s.lambda_cut, "omega": s.omega,
                           "mass": s.mass, "l0": s.l0, "p0": s.p0, "delta": s.delta},
                "outcome": name,
                "t_d": finite(t_d),
                "horizon": finite(horizon),
                "a_int_at_horizon": finite(a_h),
                "regime_estimates": {
                    "high_freq": hf,
                    "underdamped_bound": {"value": ud, "in_regime": g <= 1e-2 * s.omega && s.lambda_cut >= 50.0 * s.omega},
                    "macroscopic": mac,
                },
                "validity_tags": tags,
                "a_int_curve": curve,
            });
            Ok((row, record))
        })
        .collect::<Result<_, _>>()?;

    let mut table = Table::new([
        "gamma0",
        "lambda_cut",
        "omega",
        "mass",
        "l0",
        "outcome",
        "t_d",
        "horizon",
        "a_int_at_horizon",
        "high_freq",
        "high_freq_in_regime",
        "underdamped_bound",
        "macroscopic",
        "macroscopic_in_regime",
    ]);
    let mut recs = Vec::new();
    for (row, rec) in records {
        table.push(row);
        recs.push(rec);
    }
    let mut doc = Document::new(
        "decoherence-time",
        params(
            s,
            json!({"threshold": threshold, "model": model, "warmup": warmup, "sweep_gamma0": sweep}),
        ),
        table,
    );
    doc.extra.insert("records".into(), Value::Array(recs));
    Ok(doc.into())
}

fn finite(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn state_row(st: &GaussianState) -> Vec<Cell> {
    vec![
        st.t.into(),
        st.a.into(),
        st.b.into(),
        st.c.into(),
        st.n.into(),
        st.width().into(),
    ]
}

pub fn evolve_inverted(s: &Settings, warmup: Warmup) -> Result<Outcome, CliError> {
    let bath = BathSpec {
        gamma0: s.gamma0,
        lambda_cut: s.lambda_cut,
    };
    let sys = SystemSpec::inverted(s.mass, s.omega)?;
    let source = CoefficientSource::new(sys, bath)?.with_warmup(warmup);
    let state0 = GaussianState::minimum_uncertainty(s.delta)?;
    let t_end = s.t_end.unwrap_or(30.0);
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(CliError::Config(format!("t_end must be >= 0, got {t_end}")));
    }
    let times = grid_points(t_end, s.grid.unwrap_or(301));
    let cfg = IntegratorConfig {
        rel_tol: s.rel_tol,
        abs_tol: s.abs_tol,
        max_step: s.max_step,
        t_end,
    };
    let mut table = Table::new(["t", "a", "b", "c", "n", "width_2a_minus_c"]);
    let mut doc_extra = serde_json::Map::new();
    let mut failure = None;

    if t_end == 0.0 {
        table.push(state_row(&state0));
    } else {
        match evolve(&state0, &source, &cfg, &times) {
            Ok(traj) => {
                for st in &traj.states {
                    table.push(state_row(st));
                }
                if let Some((mean, slope)) = settling(&traj, 0.2) {
                    doc_extra.insert(
                        "settling".into(),
                        json!({"fraction": 0.2, "mean_width": mean, "max_abs_slope": slope}),
                    );
                }
            }
            Err(e @ (Error::Invariant { t, .. } | Error::StepUnderflow { t, .. })) => {
                info!("integration stopped at t = {t}, writing the rows before it");
                let before: Vec<f64> = times.iter().copied().filter(|&x| x < t).collect();
                match before.last() {
                    Some(&last) if last > 0.0 => {
                        let partial = IntegratorConfig { t_end: last, ..cfg };
                        for st in &evolve(&state0, &source, &partial, &before)?.states {
                            table.push(state_row(st));
                        }
                    }
                    _ => table.push(state_row(&state0)),
                }
                doc_extra.insert(
                    "error".into(),
                    json!({"kind": "integrator", "t": t, "message": e.to_string()}),
                );
                failure = Some(CliError::Core(e));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut doc = Document::new(
        "evolve-inverted",
        params(s, json!({"warmup": warmup, "orientation": "inverted"})),
        table,
    );
    doc.extra = doc_extra;
    Ok(Outcome { doc, failure })
}

pub fn oracle(
    s: &Settings,
    kind: Option<CoefficientKind>,
    t: f64,
    samples: Option<usize>,
    seed: u64,
    order: IntegrationOrderArg,
) -> Result<Outcome, CliError> {
    let (sys, bath) = stable_bath(s)?;
    let cfg = QuadratureConfig::default().with_order(order.into());
    let cases: Vec<(CoefficientKind, f64)> = match samples {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| {
                    let k = kind.unwrap_or(CoefficientKind::ALL[rng.gen_range(0..4)]);
                    let t = 10f64.powf(rng.gen_range(-3.0..30f64.log10()));
                    (k, t)
                })
                .collect()
        }
        None => match kind {
            Some(k) => vec![(k, t)],
            None => CoefficientKind::ALL.iter().map(|&k| (k, t)).collect(),
        },
    };
    let rows: Vec<(f64, f64, f64, f64)> = cases
        .par_iter()
        .map(|&(k, t)| -> Result<_, CliError> {
            let closed = coefficients_at(t, &sys, &bath)?.get(k);
            let est = coefficient_by_quadrature(k, t, &sys, &bath, &cfg)?;
            Ok((closed, est.value, est.error, (closed - est.value).abs()))
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new([
        "kind",
        "t",
        "closed_form",
        "oracle",
        "oracle_error",
        "abs_diff",
        "rel_diff",
        "within_tolerance",
    ]);
    let (mut max_abs, mut max_rel, mut all_ok) = (0.0f64, 0.0f64, true);
    for (&(k, t), &(closed, value, error, diff)) in cases.iter().zip(&rows) {
        let rel = if diff == 0.0 { 0.0 } else { diff / value.abs() };
        let ok = diff <= (1e-6 * value.abs()).max(1e-8);
        max_abs = max_abs.max(diff);
        max_rel = max_rel.max(rel);
        all_ok &= ok;
        table.push(vec![
            k.name().into(),
            t.into(),
            closed.into(),
            value.into(),
            error.into(),
            diff.into(),
            rel.into(),
            ok.into(),
        ]);
    }
    let mut doc = Document::new(
        "oracle",
        params(
            s,
            json!({"order": cfg.order, "samples": samples, "seed": seed}),
        ),
        table,
    );
    doc.extra.insert(
        "summary".into(),
        json!({"max_abs_diff": max_abs, "max_rel_diff": max_rel, "all_within_tolerance": all_ok}),
    );
    Ok(doc.into())
}

pub fn wigner(s: &Settings) -> Result<Outcome, CliError> {
    let sup = SuperpositionSpec::new(s.l0, s.p0, s.delta)?;
    let cat = WignerCat::initial(&sup)?;
    let (xb, pb) = phase_space_box(&sup);
    let n = s.grid.unwrap_or(101).max(2);
    let xs = grid_points(2.0 * xb, n);
    let ps = grid_points(2.0 * pb, n);
    let rows: Vec<Vec<Vec<Cell>>> = xs
        .par_iter()
        .map(|&u| {
            let x = u - xb;
            ps.iter()
                .map(|&v| {
                    let p = v - pb;
                    let w = wigner_components(x, p, &cat);
                    vec![
                        x.into(),
                        p.into(),
                        w.w1.into(),
                        w.w2.into(),
                        w.w_int.into(),
                        w.total().into(),
                    ]
                })
                .collect()
        })
        .collect();
    let mut table = Table::new(["x", "p", "w1", "w2", "w_int", "w"]);
    for row in rows.into_iter().flatten() {
        table.push(row);
    }
    let peaks = a_int_from_peaks(&cat)?;
    let mut doc = Document::new("wigner", params(s, json!({"time": 0.0})), table);
    doc.extra.insert(
        "summary".into(),
        json!({
            "normalization": normalization(&cat, NORMALIZATION_NODES),
            "a_int": peaks.a_int,
            "a_max": peaks.a_max,
        }),
    );
    Ok(doc.into())
}
