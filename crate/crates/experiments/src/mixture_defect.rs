//! Mixture-defect experiment.
//!
//! Two ways to evolve an ensemble: (a) assemble the elementary density
//! operator first and integrate it as one state, or (b) integrate each
//! member individually and re-mix at every sample. Under linear dynamics the
//! two agree identically. A nonlinear generator sees the mixed state's
//! spectrum, so route (a) feels the mixture while route (b) never does, and
//! the trace distance between the routes measures how strongly the dynamics
//! distinguishes a mixture from its members.
//!
//! Informative: the defect is the observable of interest, not a gate.

use std::collections::BTreeMap;

use rhodyn_core::{
    density_from_mixture, evolve, ComplexMatrix64, EnsembleMixture64, GeneratorKind,
    IntegratorConfig64, Result,
};

use crate::common::{
    fmt_param, generator_params, integrator_params, matrix_distance, max_with_time,
    member_wise_remix, observable_series, single_dynamics,
};
use crate::report::{ExperimentReport, Series};

#[derive(Debug, Clone)]
pub struct MixtureDefectConfig {
    pub hamiltonian: ComplexMatrix64,
    pub mixture: EnsembleMixture64,
    pub kind: GeneratorKind<f64>,
    pub integrator: IntegratorConfig64,
}

pub const MIXTURE_DEFECT: &str = "mixture_defect";

pub fn mixture_defect(config: &MixtureDefectConfig) -> Result<ExperimentReport> {
    let dynamics = single_dynamics(config.hamiltonian.clone(), &config.kind)?;
    let elementary0 = density_from_mixture(&config.mixture);

    let elementary = evolve(&dynamics, &elementary0, &config.integrator)?;
    let (times, remixed) = member_wise_remix(&config.mixture, &dynamics, &config.integrator)?;
    crate::common::check_aligned(&elementary.times, &times)?;

    let defect: Vec<f64> = elementary
        .states
        .iter()
        .zip(&remixed)
        .map(|(e, r)| matrix_distance(e.matrix(), r))
        .collect::<Result<_>>()?;
    let (max_d, t_max) = max_with_time(&times, &defect);

    let mut parameters = BTreeMap::new();
    generator_params(&mut parameters, &config.kind);
    parameters.insert("dim".into(), fmt_param(config.mixture.dim()));
    parameters.insert("n_members".into(), fmt_param(config.mixture.members().len()));
    integrator_params(&mut parameters, &config.integrator);

    let mut scalars = BTreeMap::new();
    scalars.insert("max_defect".into(), max_d);
    scalars.insert(
        "final_defect".into(),
        *defect.last().expect("at least one sample"),
    );
    scalars.insert("time_of_max".into(), t_max);

    let mut series = vec![Series::new("mixture_defect", times, defect)];
    series.extend(observable_series(&elementary));

    Ok(ExperimentReport::new(
        MIXTURE_DEFECT,
        parameters,
        scalars,
        BTreeMap::new(),
        series,
    ))
}
