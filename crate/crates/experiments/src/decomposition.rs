//! Decomposition-divergence experiment.
//!
//! A mixed state admits infinitely many pure-state decompositions. The
//! experiment takes two of them, evolves every member individually under the
//! nonlinear dynamics, re-mixes each ensemble at every sample, and compares
//! three trajectories: re-mixed A, re-mixed B, and the elementary density
//! operator integrated as a single state.
//!
//! Because pure members individually follow plain unitary motion, the two
//! re-mixed trajectories track the linear flow of the assembled state and
//! therefore stay together no matter how different the decompositions are;
//! the physically meaningful divergence is between either re-mix and the
//! elementary trajectory, which alone feels the mixture's spectrum.
//!
//! Informative: the divergence curves are the measurement.

use std::collections::BTreeMap;

use rhodyn_core::{
    density_from_mixture, evolve, ComplexMatrix64, DensityMatrix64, EnsembleMixture64, Error,
    GeneratorKind, IntegratorConfig64, Result,
};

use crate::common::{
    fmt_param, generator_params, integrator_params, matrix_distance, max_with_time,
    member_wise_remix, observable_series, single_dynamics,
};
use crate::report::{ExperimentReport, Series};

#[derive(Debug, Clone)]
pub struct DecompositionDivergenceConfig {
    pub hamiltonian: ComplexMatrix64,
    pub kind: GeneratorKind<f64>,
    pub state: DensityMatrix64,
    pub decomposition_a: EnsembleMixture64,
    pub decomposition_b: EnsembleMixture64,
    pub integrator: IntegratorConfig64,
}

pub const DECOMPOSITION_DIVERGENCE: &str = "decomposition_divergence";

pub fn decomposition_divergence(
    config: &DecompositionDivergenceConfig,
) -> Result<ExperimentReport> {
    for (context, mixture) in [
        (
            "decomposition A must reassemble the elementary state",
            &config.decomposition_a,
        ),
        (
            "decomposition B must reassemble the elementary state",
            &config.decomposition_b,
        ),
    ] {
        let assembled = density_from_mixture(mixture);
        let gap = assembled.trace_distance(&config.state)?;
        if gap > 1e-10 {
            return Err(Error::IncompatibleStates {
                context,
                deviation: gap,
            });
        }
    }

    let dynamics = single_dynamics(config.hamiltonian.clone(), &config.kind)?;
    let elementary = evolve(&dynamics, &config.state, &config.integrator)?;
    let (times_a, remix_a) =
        member_wise_remix(&config.decomposition_a, &dynamics, &config.integrator)?;
    let (times_b, remix_b) =
        member_wise_remix(&config.decomposition_b, &dynamics, &config.integrator)?;
    crate::common::check_aligned(&elementary.times, &times_a)?;
    crate::common::check_aligned(&elementary.times, &times_b)?;

    let pairwise = |xs: &[ComplexMatrix64], ys: &[ComplexMatrix64]| -> Result<Vec<f64>> {
        xs.iter()
            .zip(ys)
            .map(|(x, y)| matrix_distance(x, y))
            .collect()
    };
    let d_ab = pairwise(&remix_a, &remix_b)?;
    let elem: Vec<ComplexMatrix64> = elementary
        .states
        .iter()
        .map(|s| s.matrix().clone())
        .collect();
    let d_a_elem = pairwise(&remix_a, &elem)?;
    let d_b_elem = pairwise(&remix_b, &elem)?;

    let mut parameters = BTreeMap::new();
    generator_params(&mut parameters, &config.kind);
    parameters.insert("dim".into(), fmt_param(config.state.dim()));
    parameters.insert(
        "n_members_a".into(),
        fmt_param(config.decomposition_a.members().len()),
    );
    parameters.insert(
        "n_members_b".into(),
        fmt_param(config.decomposition_b.members().len()),
    );
    integrator_params(&mut parameters, &config.integrator);

    let mut scalars = BTreeMap::new();
    scalars.insert(
        "max_divergence_ab".into(),
        max_with_time(&times_a, &d_ab).0,
    );
    scalars.insert(
        "max_divergence_a_elementary".into(),
        max_with_time(&times_a, &d_a_elem).0,
    );
    scalars.insert(
        "max_divergence_b_elementary".into(),
        max_with_time(&times_a, &d_b_elem).0,
    );
    scalars.insert(
        "final_divergence_a_elementary".into(),
        *d_a_elem.last().expect("at least one sample"),
    );

    let mut series = vec![
        Series::new("divergence_ab", times_a.clone(), d_ab),
        Series::new("divergence_a_elementary", times_a.clone(), d_a_elem),
        Series::new("divergence_b_elementary", times_a, d_b_elem),
    ];
    series.extend(observable_series(&elementary));

    Ok(ExperimentReport::new(
        DECOMPOSITION_DIVERGENCE,
        parameters,
        scalars,
        BTreeMap::new(),
        series,
    ))
}
