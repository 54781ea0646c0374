//! Contracting germs in two variables, their invariant plurisubharmonic
//! functions, and numerical checks of the identities those functions obey.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod germs;
pub mod invariant;
pub mod kcone;
pub mod matrix;
pub mod potential;
pub mod scaled;
pub mod verification;

pub use error::{Error, Result, Violation};
pub use germs::{validate, Germ, GermSpec, IHWord, Polynomial};
pub use invariant::InvariantFunction;
pub use kcone::PeriodicFunction;
pub use matrix::{eigen_data, trace_dichotomy, EigenData, IntMatrix2, TraceClass};
pub use potential::{AddWSquare, Calibration, Potential};
pub use scaled::{ScaledComplex, ScaledPoint};
pub use verification::VerificationReport;
