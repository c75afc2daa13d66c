//! Run configuration: built-in presets, an optional TOML file and command
//! line flags, merged in that order of increasing priority.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Panel {
    /// Coefficient transients and plateaus, γ0 = 0.05, Λ = 100, Ω = 1.
    Fig1,
    /// Inverted-oscillator width, γ0 = 0.01, Λ = 100, Ω = 1, t_end = 30.
    Fig3,
    /// Ω = Λ = 100, γ0 = 0.05.
    HighFrequency,
    /// γ0 = 1e-3, Ω = 1, Λ = 100.
    Underdamped,
    /// L0 = 10, γ0 = 0.05, Ω = 1, Λ = 100.
    Macroscopic,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemLayer {
    pub mass: Option<f64>,
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathLayer {
    pub gamma0: Option<f64>,
    pub lambda_cut: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperpositionLayer {
    pub l0: Option<f64>,
    pub p0: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorLayer {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_step: Option<f64>,
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunLayer {
    pub panel: Option<Panel>,
    pub grid: Option<usize>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputLayer {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
    pub no_meta: Option<bool>,
}

/// One configuration layer; every field optional so layers can be stacked.
/// The TOML file has exactly this shape.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Layer {
    #[serde(default)]
    pub system: SystemLayer,
    #[serde(default)]
    pub bath: BathLayer,
    #[serde(default)]
    pub superposition: SuperpositionLayer,
    #[serde(default)]
    pub integrator: IntegratorLayer,
    #[serde(default)]
    pub run: RunLayer,
    #[serde(default)]
    pub output: OutputLayer,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($field:ident),+) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field.clone(); } )+
    };
}

impl Layer {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_owned(),
            source: e,
        })?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, top: &Layer) {
        overlay!(self.system, top.system, mass, omega);
        overlay!(self.bath, top.bath, gamma0, lambda_cut);
        overlay!(self.superposition, top.superposition, l0, p0, delta);
        overlay!(
            self.integrator,
            top.integrator,
            rel_tol,
            abs_tol,
            max_step,
            t_end
        );
        overlay!(self.run, top.run, panel, grid, jobs);
        overlay!(self.output, top.output, path, format, no_meta);
    }

    pub fn preset(panel: Panel) -> Self {
        let mut l = Layer::default();
        l.run.panel = Some(panel);
        l.system.mass = Some(1.0);
        l.bath.lambda_cut = Some(100.0);
        match panel {
            Panel::Fig1 => {
                l.bath.gamma0 = Some(0.05);
                l.system.omega = Some(1.0);
            }
            Panel::Fig3 => {
                l.bath.gamma0 = Some(0.01);
                l.system.omega = Some(1.0);
                l.superposition.delta = Some(1.0);
                l.integrator.t_end = Some(30.0);
                l.run.grid = Some(600);
            }
            Panel::HighFrequency => {
                l.bath.gamma0 = Some(0.05);
                l.system.omega = Some(100.0);
                l.superposition.l0 = Some(1.0);
            }
            Panel::Underdamped => {
                l.bath.gamma0 = Some(1e-3);
                l.system.omega = Some(1.0);
                l.superposition.l0 = Some(1.0);
            }
            Panel::Macroscopic => {
                l.bath.gamma0 = Some(0.05);
                l.system.omega = Some(1.0);
                l.superposition.l0 = Some(10.0);
            }
        }
        l
    }
}

/// Fully resolved parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub mass: f64,
    pub omega: f64,
    pub gamma0: f64,
    pub lambda_cut: f64,
    pub l0: f64,
    pub p0: f64,
    pub delta: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// `None` lets each command pick its own horizon.
    pub t_end: Option<f64>,
    pub grid: Option<usize>,
    #[serde(skip)]
    pub panel: Option<Panel>,
    #[serde(skip)]
    pub jobs: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub no_meta: bool,
}

/// Stacks preset, file and flags. The panel may come from either of the
/// upper two layers.
pub fn resolve(file: Option<&Path>, flags: &Layer) -> Result<Settings, CliError> {
    let file_layer = file.map(Layer::read).transpose()?;
    let panel = flags
        .run
        .panel
        .or_else(|| file_layer.as_ref().and_then(|l| l.run.panel));
    let mut l = panel.map(Layer::preset).unwrap_or_default();
    if let Some(f) = &file_layer {
        l.apply(f);
    }
    l.apply(flags);
    let integ = qbm_core::IntegratorConfig::default();
    Ok(Settings {
        mass: l.system.mass.unwrap_or(1.0),
        omega: l.system.omega.unwrap_or(1.0),
        gamma0: l.bath.gamma0.unwrap_or(0.05),
        lambda_cut: l.bath.lambda_cut.unwrap_or(100.0),
        l0: l.superposition.l0.unwrap_or(1.0),
        p0: l.superposition.p0.unwrap_or(0.0),
        delta: l.superposition.delta.unwrap_or(1.0),
        rel_tol: l.integrator.rel_tol.unwrap_or(integ.rel_tol),
        abs_tol: l.integrator.abs_tol.unwrap_or(integ.abs_tol),
        max_step: l.integrator.max_step.unwrap_or(integ.max_step),
        t_end: l.integrator.t_end,
        grid: l.run.grid,
        panel: l.run.panel,
        jobs: l.run.jobs,
        out: l.output.path,
        format: l.output.format.unwrap_or_default(),
        no_meta: l.output.no_meta.unwrap_or(false),
    })
}
