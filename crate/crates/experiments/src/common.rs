//! Shared plumbing for the experiment implementations.

use std::collections::BTreeMap;

use rhodyn_core::{
    trace_norm_distance, ComplexMatrix64, Dynamics64, EnsembleMixture64, Error, GeneratorKind,
    GeneratorSpec, GeneratorSpec64, IntegratorConfig64, Result, SchemeKind, Trajectory64,
};

use crate::report::Series;

/// Formats a value for the parameter map with round-trip precision.
pub fn fmt_param<T: std::fmt::Display>(v: T) -> String {
    format!("{v}")
}

/// Common integrator entries every report's parameter map carries.
pub fn integrator_params(map: &mut BTreeMap<String, String>, config: &IntegratorConfig64) {
    map.insert("dt".into(), fmt_param(config.dt));
    map.insert("t_final".into(), fmt_param(config.t_final));
    map.insert("hbar".into(), fmt_param(config.hbar));
    map.insert("sample_every".into(), fmt_param(config.sample_every));
    map.insert(
        "scheme".into(),
        match config.scheme {
            SchemeKind::MidpointUnitary => "midpoint-unitary".into(),
            SchemeKind::Rk4Direct => "rk4".into(),
        },
    );
}

/// Single-system dynamics from a Hamiltonian and a generator family choice.
pub fn single_dynamics(
    hamiltonian: ComplexMatrix64,
    kind: &GeneratorKind<f64>,
) -> Result<Dynamics64> {
    match kind {
        GeneratorKind::Linear => Dynamics64::single_linear(hamiltonian),
        GeneratorKind::Nonlinear { q } => Dynamics64::single_nonlinear(hamiltonian, *q),
    }
}

/// Report-parameter entries describing a generator family.
pub fn generator_params(map: &mut BTreeMap<String, String>, kind: &GeneratorKind<f64>) {
    match kind {
        GeneratorKind::Linear => {
            map.insert("generator".into(), "linear".into());
        }
        GeneratorKind::Nonlinear { q } => {
            map.insert("generator".into(), "nonlinear".into());
            map.insert("q".into(), fmt_param(*q));
        }
    }
}

/// Observable tracks of a trajectory as named series.
pub fn observable_series(traj: &Trajectory64) -> Vec<Series> {
    vec![
        Series::new("energy", traj.times.clone(), traj.energy.clone()),
        Series::new("purity", traj.times.clone(), traj.purity.clone()),
        Series::new("entropy", traj.times.clone(), traj.entropy.clone()),
        Series::new("trace", traj.times.clone(), traj.trace.clone()),
    ]
}

/// Per-sample trace distance between two trajectories on the same grid.
pub fn trajectory_distance(a: &Trajectory64, b: &Trajectory64) -> Result<Vec<f64>> {
    check_aligned(&a.times, &b.times)?;
    a.states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| x.trace_distance(y))
        .collect()
}

pub fn check_aligned(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            context: "trajectory sample grids",
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// Largest value and the time it occurs at.
pub fn max_with_time(times: &[f64], values: &[f64]) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.0);
    for (&t, &v) in times.iter().zip(values) {
        if v > best.0 {
            best = (v, t);
        }
    }
    best
}

/// Evolves every mixture member individually under `dynamics` and re-mixes
/// the ensemble at each sample: `sigma(t) = sum_i w_i rho_i(t)`.
pub fn member_wise_remix(
    mixture: &EnsembleMixture64,
    dynamics: &Dynamics64,
    config: &IntegratorConfig64,
) -> Result<(Vec<f64>, Vec<ComplexMatrix64>)> {
    let mut times: Option<Vec<f64>> = None;
    let mut remixed: Vec<ComplexMatrix64> = Vec::new();
    for (w, psi) in mixture.members() {
        let rho0 = rhodyn_core::density_from_pure(psi);
        let traj = rhodyn_core::evolve(dynamics, &rho0, config)?;
        match &times {
            None => {
                times = Some(traj.times.clone());
                remixed = traj
                    .states
                    .iter()
                    .map(|s| s.matrix().scale_re(*w))
                    .collect();
            }
            Some(t) => {
                check_aligned(t, &traj.times)?;
                for (acc, s) in remixed.iter_mut().zip(&traj.states) {
                    *acc = &*acc + &s.matrix().scale_re(*w);
                }
            }
        }
    }
    let times = times.ok_or(Error::InvalidWeights { sum: 0.0 })?;
    let remixed = remixed.into_iter().map(|m| m.symmetrize()).collect();
    Ok((times, remixed))
}

/// The linear twin of a dynamics: same Hamiltonians and composite layout,
/// every generator replaced by its `Linear` counterpart.
pub fn linearize(dynamics: &Dynamics64) -> Result<Dynamics64> {
    match dynamics {
        Dynamics64::Single(spec) => Dynamics64::single_linear(spec.hamiltonian().clone()),
        Dynamics64::Composite { parts, dims } => {
            let linear_parts: Result<Vec<GeneratorSpec64>> = parts
                .iter()
                .map(|p| GeneratorSpec::linear(p.hamiltonian().clone()))
                .collect();
            Dynamics64::composite(linear_parts?, dims.clone())
        }
    }
}

/// Trace distance between raw matrices, for re-mixed ensemble snapshots.
pub fn matrix_distance(a: &ComplexMatrix64, b: &ComplexMatrix64) -> Result<f64> {
    trace_norm_distance(a, b)
}
