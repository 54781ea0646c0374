//! Numerical verification suites.

pub mod containment;
pub mod invariance;
pub mod lelong;
pub mod levi;
pub mod report;
pub mod sampling;

pub use containment::{
    compute_c1, enoki_containment, enoki_containment_at, ih_box_check, ih_box_check_at, intermediate_containment,
    intermediate_containment_at,
};
pub use invariance::invariance_residual;
pub use lelong::{lelong_estimate, lelong_report, LelongEstimate};
pub use levi::{foliation_check, levi_form, levi_psd_check, LeviForm};
pub use report::{Statistic, VerificationReport};
pub use sampling::{SamplingMargins, DEFAULT_SEED};
