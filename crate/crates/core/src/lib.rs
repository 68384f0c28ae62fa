//! Invariants of finite metric measure spaces.
//!
//! The crate works with finite (possibly extended) mm-spaces: a finite point
//! set carrying a distance matrix and a strictly positive probability vector.
//! On top of that it computes
//!
//! * partial and observable diameters ([`measure`], [`invariants::obs_diam`]),
//! * separation distances ([`invariants::sep`]),
//! * Prokhorov, `me` and box distances plus sampled measurement estimators
//!   ([`metrics`]),
//! * the Lipschitz order between small spaces ([`order`]),
//! * trend detectors over parametrized families ([`asymptotics`]).
//!
//! Every solver is a pure function of its inputs. Randomized routines take an
//! explicit seed and are reproducible bit-for-bit.

pub mod asymptotics;
pub mod error;
pub mod invariants;
pub mod kappa;
pub mod lipschitz;
pub mod measure;
pub mod metrics;
pub mod order;
pub mod space;

pub(crate) mod rng;

pub use error::{Error, Result};
pub use kappa::KappaGrid;
pub use lipschitz::LipschitzFunction;
pub use measure::RealMeasure;
pub use space::{FiniteMMSpace, ValidationReport, Violation};

/// Absolute tolerance used for every comparison between masses.
pub const MASS_TOL: f64 = 1e-12;
