//! `qbm`: datasets for zero-temperature quantum Brownian motion.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qbm_core::{CoefficientKind, CoefficientModel, IntegrationOrder, Warmup};

use config::{Format, Layer, Panel};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Core(qbm_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl From<qbm_core::Error> for CliError {
    fn from(e: qbm_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// 1 configuration, 2 I/O, 3 integrator, 4 quadrature.
    pub fn exit_code(&self) -> u8 {
        use qbm_core::Error as E;
        match self {
            CliError::Io { .. } => 2,
            CliError::Core(E::Invariant { .. } | E::StepUnderflow { .. }) => 3,
            CliError::Core(E::Quadrature { .. } | E::CutoffDependent { .. }) => 4,
            CliError::Config(_) | CliError::Core(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qbm",
    version,
    about = "Zero-temperature quantum Brownian motion datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Coupling strength γ0.
    #[arg(long, global = true)]
    gamma0: Option<f64>,
    /// Bath cutoff Λ.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Oscillator frequency Ω.
    #[arg(long, global = true)]
    omega: Option<f64>,
    #[arg(long, global = true)]
    mass: Option<f64>,
    /// Half-separation of the two packets.
    #[arg(long, global = true)]
    l0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    p0: Option<f64>,
    /// Packet width.
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true)]
    t_end: Option<f64>,
    /// Number of output points (per axis for `wigner`).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for sweeps; 0 or absent uses all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Omit the metadata header (timestamp), making output reproducible.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Add quadrature-oracle columns.
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true, value_enum)]
    panel: Option<Panel>,
}

impl Common {
    fn layer(&self) -> Layer {
        let mut l = Layer::default();
        l.system.mass = self.mass;
        l.system.omega = self.omega;
        l.bath.gamma0 = self.gamma0;
        l.bath.lambda_cut = self.lambda;
        l.superposition.l0 = self.l0;
        l.superposition.p0 = self.p0;
        l.superposition.delta = self.delta;
        l.integrator.t_end = self.t_end;
        l.run.grid = self.grid;
        l.run.jobs = self.jobs;
        l.run.panel = self.panel;
        l.output.path = self.out.clone();
        l.output.format = self.format;
        l.output.no_meta = self.no_meta.then_some(true);
        l
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Exact,
    LateTime,
}

impl From<ModelArg> for CoefficientModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Exact => CoefficientModel::Exact,
            ModelArg::LateTime => CoefficientModel::LateTime,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WarmupArg {
    Raw,
    Ramp,
    ZeroBeforeMemoryTime,
}

impl From<WarmupArg> for Warmup {
    fn from(w: WarmupArg) -> Self {
        match w {
            WarmupArg::Raw => Warmup::Raw,
            WarmupArg::Ramp => Warmup::Ramp,
            WarmupArg::ZeroBeforeMemoryTime => Warmup::ZeroBeforeMemoryTime,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    DeltaOmegaSq,
    Gamma,
    DNormal,
    FAnom,
}

impl From<KindArg> for CoefficientKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::DeltaOmegaSq => CoefficientKind::FreqShift,
            KindArg::Gamma => CoefficientKind::Dissipation,
            KindArg::DNormal => CoefficientKind::NormalDiff,
            KindArg::FAnom => CoefficientKind::AnomalousDiff,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum IntegrationOrderArg {
    #[default]
    Auto,
    KernelFirst,
    TimeFirst,
}

impl From<IntegrationOrderArg> for IntegrationOrder {
    fn from(o: IntegrationOrderArg) -> Self {
        match o {
            IntegrationOrderArg::Auto => IntegrationOrder::Auto,
            IntegrationOrderArg::KernelFirst => IntegrationOrder::KernelFirst,
            IntegrationOrderArg::TimeFirst => IntegrationOrder::TimeFirst,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// δΩ², γ, D and f of the stable oscillator on a time grid.
    Coefficients {
        /// Default: exact.
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Default: raw.
        #[arg(long, value_enum)]
        warmup: Option<WarmupArg>,
    },
    /// Time at which the fringe exponent reaches the threshold.
    DecoherenceTime {
        /// Comma-separated γ0 values, one record each.
        #[arg(long, value_delimiter = ',')]
        sweep_gamma0: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        threshold: f64,
        /// Default: late-time.
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Default: ramp.
        #[arg(long, value_enum)]
        warmup: Option<WarmupArg>,
    },
    /// Gaussian-ansatz evolution of the inverted oscillator.
    EvolveInverted {
        #[arg(long, value_enum, default_value = "ramp")]
        warmup: WarmupArg,
        #[arg(long)]
        rel_tol: Option<f64>,
        #[arg(long)]
        abs_tol: Option<f64>,
        #[arg(long)]
        max_step: Option<f64>,
    },
    /// Closed form against quadrature of the defining integrals.
    Oracle {
        /// All four when omitted.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Random audit: log-uniform t in [1e-3, 30].
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "auto")]
        order: IntegrationOrderArg,
    },
    /// Wigner function of the initial two-packet state on a grid.
    Wigner,
}

fn run(cli: Cli) -> Result<Option<CliError>, CliError> {
    let mut flags = cli.common.layer();
    if let Command::EvolveInverted {
        rel_tol,
        abs_tol,
        max_step,
        ..
    } = &cli.command
    {
        flags.integrator.rel_tol = *rel_tol;
        flags.integrator.abs_tol = *abs_tol;
        flags.integrator.max_step = *max_step;
    }
    let settings = config::resolve(cli.common.config.as_deref(), &flags)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let outcome = pool.install(|| match cli.command {
        Command::Coefficients { model, warmup } => commands::coefficients(
            &settings,
            model.map_or(CoefficientModel::Exact, Into::into),
            warmup.map_or(Warmup::Raw, Into::into),
            cli.common.oracle,
        ),
        Command::DecoherenceTime {
            sweep_gamma0,
            threshold,
            model,
            warmup,
        } => commands::decoherence_time(
            &settings,
            &sweep_gamma0,
            threshold,
            model.map_or(CoefficientModel::LateTime, Into::into),
            warmup.map_or(Warmup::Ramp, Into::into),
        ),
        Command::EvolveInverted { warmup, .. } => {
            commands::evolve_inverted(&settings, warmup.into())
        }
        Command::Oracle {
            kind,
            t,
            samples,
            seed,
            order,
        } => commands::oracle(&settings, kind.map(Into::into), t, samples, seed, order),
        Command::Wigner => commands::wigner(&settings),
    })?;
    let text = outcome.doc.render(settings.format, !settings.no_meta);
    output::emit(&text, settings.out.as_deref())?;
    Ok(outcome.failure)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("QBM_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(e)) | Err(e) => {
            eprintln!("qbm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
