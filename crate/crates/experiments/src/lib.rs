//! Reference numerical experiments over the rhodyn dynamics library.
//!
//! Each experiment is a pure function from a typed configuration to an
//! [`ExperimentReport`]: named scalars, the sampled series behind them, the
//! tolerances gating any of the scalars, and a verdict recomputable from the
//! stored numbers alone. Experiments run at reference precision (f64).
//!
//! Gated experiments (pass/fail):
//! - [`pure_state_condition`]: nonlinear vs linear motion of a pure state;
//! - [`no_signaling`]: local reductions of composite dynamics must ignore
//!   remote preparations.
//!
//! Informative experiments (measurement only):
//! - [`mixture_defect`]: elementary-mixture vs member-wise evolution;
//! - [`linearity_criterion`]: probe dynamics vs its linear twin;
//! - [`decomposition_divergence`]: two decompositions, member-wise, against
//!   the elementary trajectory.

mod common;
mod decomposition;
mod linearity;
mod mixture_defect;
mod no_signaling;
mod pure_state;
mod report;

pub use decomposition::{
    decomposition_divergence, DecompositionDivergenceConfig, DECOMPOSITION_DIVERGENCE,
};
pub use linearity::{linearity_criterion, LinearityCriterionConfig, LINEARITY_CRITERION};
pub use mixture_defect::{mixture_defect, MixtureDefectConfig, MIXTURE_DEFECT};
pub use no_signaling::{no_signaling, NoSignalingConfig, NO_SIGNALING};
pub use pure_state::{pure_state_condition, PureStateConditionConfig, PURE_STATE_CONDITION};
pub use report::{evaluate_verdict, ExperimentReport, Series, Verdict};

/// Names of all experiments, in catalog order.
pub const EXPERIMENT_NAMES: [&str; 5] = [
    PURE_STATE_CONDITION,
    MIXTURE_DEFECT,
    NO_SIGNALING,
    LINEARITY_CRITERION,
    DECOMPOSITION_DIVERGENCE,
];
