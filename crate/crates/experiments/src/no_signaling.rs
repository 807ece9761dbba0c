//! No-signaling check for composite dynamics.
//!
//! Each part of a composite system evolves under a generator evaluated on
//! its own reduced state, so the motion of subsystem A can depend on the
//! global state only through Tr_B(rho). The check takes several global
//! extensions sharing the same watched reduction, integrates each under the
//! composite dynamics, and gates two quantities:
//!
//! - the worst pairwise trace distance between the watched reductions
//!   (different remote preparations must be locally indistinguishable), and
//! - the worst distance between any watched reduction and the standalone
//!   evolution of the initial reduced state under the local dynamics alone
//!   (the reduction must obey its own autonomous equation).

use std::collections::BTreeMap;

use rhodyn_core::{
    evolve, DensityMatrix64, Dynamics64, Error, GeneratorSpec64, IntegratorConfig64, Result,
    Trajectory64,
};

use crate::common::{fmt_param, integrator_params, max_with_time, observable_series};
use crate::report::{ExperimentReport, Series};

#[derive(Debug, Clone)]
pub struct NoSignalingConfig {
    /// One local generator per tensor factor.
    pub parts: Vec<GeneratorSpec64>,
    pub dims: Vec<usize>,
    /// Global states sharing the watched subsystem's reduction; at least two.
    pub extensions: Vec<DensityMatrix64>,
    /// Index of the watched subsystem.
    pub watch: usize,
    pub integrator: IntegratorConfig64,
    /// Gate on both worst-case distances.
    pub tolerance: f64,
}

pub const NO_SIGNALING: &str = "no_signaling";

pub fn no_signaling(config: &NoSignalingConfig) -> Result<ExperimentReport> {
    if config.extensions.len() < 2 {
        return Err(Error::ParameterOutOfRange {
            name: "extensions",
            value: config.extensions.len() as f64,
            constraint: "at least two global extensions",
        });
    }
    if config.watch >= config.dims.len() {
        return Err(Error::SubsystemOutOfRange {
            index: config.watch,
            count: config.dims.len(),
        });
    }
    let dynamics = Dynamics64::composite(config.parts.clone(), config.dims.clone())?;

    // stamp the composite structure and check the extensions actually share
    // the watched reduction before integrating anything
    let extensions: Vec<DensityMatrix64> = config
        .extensions
        .iter()
        .map(|e| e.clone().with_structure(config.dims.clone()))
        .collect::<Result<_>>()?;
    let reductions0: Vec<DensityMatrix64> = extensions
        .iter()
        .map(|e| e.reduce(config.watch))
        .collect::<Result<_>>()?;
    for other in &reductions0[1..] {
        let gap = reductions0[0].trace_distance(other)?;
        if gap > 1e-10 {
            return Err(Error::IncompatibleStates {
                context: "no-signaling extensions must share the watched reduction",
                deviation: gap,
            });
        }
    }

    let trajectories: Vec<Trajectory64> = extensions
        .iter()
        .map(|e| evolve(&dynamics, e, &config.integrator))
        .collect::<Result<_>>()?;
    let times = trajectories[0].times.clone();
    let reduced: Vec<Vec<DensityMatrix64>> = trajectories
        .iter()
        .map(|traj| {
            crate::common::check_aligned(&times, &traj.times)?;
            traj.states.iter().map(|s| s.reduce(config.watch)).collect()
        })
        .collect::<Result<_>>()?;

    // standalone: the initial reduction under the local dynamics alone
    let local = Dynamics64::Single(config.parts[config.watch].clone());
    let standalone = evolve(&local, &reductions0[0], &config.integrator)?;
    crate::common::check_aligned(&times, &standalone.times)?;

    let mut series = Vec::new();
    let mut max_pairwise = 0.0f64;
    for i in 0..reduced.len() {
        for j in (i + 1)..reduced.len() {
            let d: Vec<f64> = reduced[i]
                .iter()
                .zip(&reduced[j])
                .map(|(a, b)| a.trace_distance(b))
                .collect::<Result<_>>()?;
            max_pairwise = max_pairwise.max(max_with_time(&times, &d).0);
            series.push(Series::new(
                format!("reduced_distance_{i}_{j}"),
                times.clone(),
                d,
            ));
        }
    }
    let mut max_standalone = 0.0f64;
    for (i, track) in reduced.iter().enumerate() {
        let d: Vec<f64> = track
            .iter()
            .zip(&standalone.states)
            .map(|(a, b)| a.trace_distance(b))
            .collect::<Result<_>>()?;
        max_standalone = max_standalone.max(max_with_time(&times, &d).0);
        series.push(Series::new(
            format!("standalone_distance_{i}"),
            times.clone(),
            d,
        ));
    }
    series.extend(observable_series(&trajectories[0]));

    let mut parameters = BTreeMap::new();
    parameters.insert(
        "dims".into(),
        config
            .dims
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("x"),
    );
    parameters.insert("watch".into(), fmt_param(config.watch));
    parameters.insert("n_extensions".into(), fmt_param(extensions.len()));
    integrator_params(&mut parameters, &config.integrator);

    let mut scalars = BTreeMap::new();
    scalars.insert("max_pairwise_distance".into(), max_pairwise);
    scalars.insert("max_standalone_distance".into(), max_standalone);

    let mut tolerances = BTreeMap::new();
    tolerances.insert("max_pairwise_distance".into(), config.tolerance);
    tolerances.insert("max_standalone_distance".into(), config.tolerance);

    Ok(ExperimentReport::new(
        NO_SIGNALING,
        parameters,
        scalars,
        tolerances,
        series,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;
    use rhodyn_core::{
        gates, named_state, tensor_product, ComplexMatrix64, DensityMatrix64, GeneratorSpec,
    };

    #[test]
    fn bell_and_product_extensions_are_locally_identical() {
        // both extensions reduce to I/2 on side A; side B differs maximally
        let bell = named_state::<f64>("bell_phi_plus", &[], 4)
            .unwrap()
            .into_density();
        let product = DensityMatrix64::new(
            tensor_product(
                &ComplexMatrix64::identity(2).scale_re(0.5),
                &ComplexMatrix64::diagonal(&[1.0, 0.0]),
            ),
            Some(vec![2, 2]),
        )
        .unwrap();
        let config = NoSignalingConfig {
            parts: vec![
                GeneratorSpec::nonlinear(gates::pauli_x::<f64>(), 1.0).unwrap(),
                GeneratorSpec::nonlinear(gates::pauli_z::<f64>(), 1.0).unwrap(),
            ],
            dims: vec![2, 2],
            extensions: vec![bell, product],
            watch: 0,
            integrator: IntegratorConfig64::new(1e-3, 1.0).with_sample_every(100),
            tolerance: 1e-9,
        };
        let report = no_signaling(&config).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.scalars["max_pairwise_distance"] < 1e-12);
        assert!(report.scalars["max_standalone_distance"] < 1e-12);
    }

    #[test]
    fn mismatched_reductions_are_rejected() {
        let bell = named_state::<f64>("bell_phi_plus", &[], 4)
            .unwrap()
            .into_density();
        let skewed = DensityMatrix64::new(
            tensor_product(
                &ComplexMatrix64::diagonal(&[0.9, 0.1]),
                &ComplexMatrix64::diagonal(&[1.0, 0.0]),
            ),
            Some(vec![2, 2]),
        )
        .unwrap();
        let config = NoSignalingConfig {
            parts: vec![
                GeneratorSpec::nonlinear(gates::pauli_x::<f64>(), 1.0).unwrap(),
                GeneratorSpec::nonlinear(gates::pauli_z::<f64>(), 1.0).unwrap(),
            ],
            dims: vec![2, 2],
            extensions: vec![bell, skewed],
            watch: 0,
            integrator: IntegratorConfig64::new(1e-3, 0.1),
            tolerance: 1e-9,
        };
        assert!(matches!(
            no_signaling(&config),
            Err(Error::IncompatibleStates { .. })
        ));
    }

    #[test]
    fn single_extension_is_rejected() {
        let bell = named_state::<f64>("bell_phi_plus", &[], 4)
            .unwrap()
            .into_density();
        let config = NoSignalingConfig {
            parts: vec![
                GeneratorSpec::nonlinear(gates::pauli_x::<f64>(), 1.0).unwrap(),
                GeneratorSpec::nonlinear(gates::pauli_z::<f64>(), 1.0).unwrap(),
            ],
            dims: vec![2, 2],
            extensions: vec![bell],
            watch: 0,
            integrator: IntegratorConfig64::new(1e-3, 0.1),
            tolerance: 1e-9,
        };
        assert!(matches!(
            no_signaling(&config),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }
}
