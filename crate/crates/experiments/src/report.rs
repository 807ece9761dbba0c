//! Experiment outcome container.
//!
//! A report stores everything needed to re-derive its verdict: named scalar
//! results, the tolerance attached to each gated scalar, and the sampled
//! series behind them. [`evaluate_verdict`] is the single source of truth,
//! so a verdict can always be recomputed from the stored numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcome of one experiment run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every gated scalar is within its tolerance.
    Pass,
    /// At least one gated scalar exceeds its tolerance.
    Fail,
    /// The experiment measures without gating; nothing to pass or fail.
    Informative,
}

/// One sampled time series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl Series {
    pub fn new(name: impl Into<String>, times: Vec<f64>, values: Vec<f64>) -> Self {
        let series = Self {
            name: name.into(),
            times,
            values,
        };
        assert_eq!(
            series.times.len(),
            series.values.len(),
            "series '{}' times/values must align",
            series.name
        );
        series
    }
}

/// Full record of one experiment run.
///
/// `tolerances` is keyed by scalar name: the verdict passes when every keyed
/// scalar exists and sits strictly below its tolerance. An empty tolerance
/// map marks the experiment informative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub scalars: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub series: Vec<Series>,
    pub verdict: Verdict,
}

impl ExperimentReport {
    pub fn new(
        name: impl Into<String>,
        parameters: BTreeMap<String, String>,
        scalars: BTreeMap<String, f64>,
        tolerances: BTreeMap<String, f64>,
        series: Vec<Series>,
    ) -> Self {
        let verdict = evaluate_verdict(&scalars, &tolerances);
        Self {
            name: name.into(),
            parameters,
            scalars,
            tolerances,
            series,
            verdict,
        }
    }

    /// Recomputes the verdict from the stored scalars and tolerances.
    pub fn reevaluate(&self) -> Verdict {
        evaluate_verdict(&self.scalars, &self.tolerances)
    }
}

/// Pass iff every gated scalar exists and is strictly below its tolerance;
/// informative iff nothing is gated.
pub fn evaluate_verdict(
    scalars: &BTreeMap<String, f64>,
    tolerances: &BTreeMap<String, f64>,
) -> Verdict {
    if tolerances.is_empty() {
        return Verdict::Informative;
    }
    for (key, &tol) in tolerances {
        match scalars.get(key) {
            Some(&value) if value.is_finite() && value < tol => {}
            _ => return Verdict::Fail,
        }
    }
    Verdict::Pass
}
