//! Zero-temperature quantum Brownian motion of a particle in a harmonic
//! (stable or inverted) potential, coupled to an Ohmic bath with a
//! Lorentzian cutoff.
//!
//! * [`coeffs`]: closed forms of the master-equation coefficients.
//! * [`oracle`]: the same coefficients from their defining integrals.
//! * [`decoherence`]: fringe-visibility exponent and decoherence times.
//! * [`gaussian`]: Wigner function of the initial two-packet state.
//! * [`inverted`]: Gaussian-ansatz evolution of the upside-down oscillator.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod decoherence;
pub mod error;
pub mod gaussian;
pub mod inverted;
pub mod ode;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod roots;
pub mod specfun;

pub use coeffs::{CoefficientModel, CoefficientSample, CoefficientSource, Warmup};
pub use decoherence::{DecoherenceOutcome, FringeConfig, RegimeEstimate, VisibilityTrajectory};
pub use error::{Error, Result};
pub use gaussian::WignerCat;
pub use inverted::{GaussianState, IntegratorConfig, Trajectory};
pub use oracle::{CoefficientKind, IntegrationOrder, QuadratureConfig};
pub use params::{BathSpec, Orientation, SuperpositionSpec, SystemSpec};
pub use quadrature::Estimate;
