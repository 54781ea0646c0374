use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Which comparison decides `pass`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// pass iff `value <= tolerance`
    MaxResidual,
    /// pass iff `value >= -tolerance`
    MinValue,
    /// pass iff `value >= 0` (the tolerance is reported but unused)
    WorstMargin,
}

/// Outcome of one numerical check. Deterministic given the check, its
/// inputs and the seed; `runtime_ms` is kept out of the JSON form so that
/// serialized reports are byte-identical across runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub germ: String,
    pub n_samples: usize,
    pub seed: Option<u64>,
    pub statistic: Statistic,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(skip)]
    pub runtime_ms: f64,
}

impl VerificationReport {
    pub fn max_residual(
        check: &str,
        germ: String,
        n_samples: usize,
        seed: Option<u64>,
        value: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check: check.to_string(),
            germ,
            n_samples,
            seed,
            statistic: Statistic::MaxResidual,
            value,
            tolerance,
            pass: value <= tolerance,
            details: BTreeMap::new(),
            runtime_ms: 0.0,
        }
    }

    pub fn min_value(
        check: &str,
        germ: String,
        n_samples: usize,
        seed: Option<u64>,
        value: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            statistic: Statistic::MinValue,
            pass: value >= -tolerance,
            ..Self::max_residual(check, germ, n_samples, seed, value, tolerance)
        }
    }

    pub fn worst_margin(check: &str, germ: String, n_samples: usize, seed: Option<u64>, value: f64) -> Self {
        Self {
            statistic: Statistic::WorstMargin,
            pass: value >= 0.0,
            ..Self::max_residual(check, germ, n_samples, seed, value, 0.0)
        }
    }

    pub fn with_detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    /// Forces a failing outcome, e.g. when a secondary condition fails.
    pub fn and_pass(mut self, ok: bool) -> Self {
        self.pass &= ok;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{} {} [{}] {:?}={:e} tol={:e} n={}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.germ,
            self.statistic,
            self.value,
            self.tolerance,
            self.n_samples
        )
    }
}
