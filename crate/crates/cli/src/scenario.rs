//! Scenario file schema and experiment construction.
//!
//! Scenarios are TOML documents (`schema_version = 1`) describing one
//! experiment run: the subsystem layout, one Hamiltonian per subsystem
//! (as a Pauli-string expression or an explicit complex matrix), the initial
//! state, the integration grid, and experiment-specific parameters. Unknown
//! keys are rejected so typos fail loudly instead of silently running a
//! different experiment than intended.

use serde::{Deserialize, Serialize};

use rhodyn_core::{
    gates, named_state, tensor_product, ComplexMatrix64, DensityMatrix64, Dynamics64,
    EnsembleMixture64, GeneratorKind, GeneratorSpec, GeneratorSpec64, IntegratorConfig64,
    SchemeKind, StateValue, StateVector64,
};
use rhodyn_experiments::{
    DecompositionDivergenceConfig, LinearityCriterionConfig, MixtureDefectConfig,
    NoSignalingConfig, PureStateConditionConfig, DECOMPOSITION_DIVERGENCE, LINEARITY_CRITERION,
    MIXTURE_DEFECT, NO_SIGNALING, PURE_STATE_CONDITION,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Errors raised while reading or interpreting a scenario. These are always
/// caller mistakes (usage exit code), never runtime failures.
#[derive(Debug)]
pub struct ScenarioError(pub String);

impl std::fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ScenarioError {}

type BuildResult<T> = Result<T, ScenarioError>;

fn err<T>(msg: impl Into<String>) -> BuildResult<T> {
    Err(ScenarioError(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    pub experiment: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Base seed for any randomized construction; `--seed` overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub system: SystemSpec,
    pub hamiltonians: Vec<HamiltonianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<StateSpec>,
    /// Global extensions for the no-signaling experiment.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extensions: Vec<StateSpec>,
    /// Integration grid; omitted fields fall back to dt = 1e-3, t_final = 10.
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default)]
    pub params: ParamsSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    /// Subsystem dimensions; their product is the total dimension.
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    /// Pauli-string expression, e.g. `"1.0*Z"` or `"0.5*XX - 0.25*ZI"`.
    /// Single-qubit terms also accept `sigma_x`, `sigma_y`, `sigma_z`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pauli: Option<String>,
    /// Explicit row-major complex matrix: rows of `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    /// Catalog name (`bell_phi_plus`, `partially_entangled`, `werner`,
    /// `basis`, `plus`), with `params` as needed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    /// Pure state amplitudes as `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    /// Density matrix rows of `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    /// Weighted pure-state ensemble.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixture: Option<Vec<MixtureMemberSpec>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureMemberSpec {
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    /// Step size; defaults to 1e-3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Final time; defaults to 10.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    /// `"midpoint-unitary"` (default) or `"rk4"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_every: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    /// Nonlinearity exponent; defaults to 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Evolve each route under the linear commutator generator instead of
    /// the nonlinear one (mixture_defect and decomposition_divergence only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<bool>,
    /// Number of random probe states for pure_state_condition; defaults to 10.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Gate tolerance for the pass/fail experiments.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Watched subsystem for no-signaling; defaults to 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub watch: Option<usize>,
    /// Member counts for the two random decompositions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members_a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members_b: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// File stem for written outputs; defaults to the scenario name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
}

/// A scenario resolved into a runnable experiment configuration.
#[derive(Debug)]
pub enum BuiltExperiment {
    PureState(PureStateConditionConfig),
    MixtureDefect(MixtureDefectConfig),
    NoSignaling(NoSignalingConfig),
    Linearity(LinearityCriterionConfig),
    Decomposition(DecompositionDivergenceConfig),
}

impl BuiltExperiment {
    pub fn run(&self) -> rhodyn_core::Result<rhodyn_experiments::ExperimentReport> {
        match self {
            BuiltExperiment::PureState(c) => rhodyn_experiments::pure_state_condition(c),
            BuiltExperiment::MixtureDefect(c) => rhodyn_experiments::mixture_defect(c),
            BuiltExperiment::NoSignaling(c) => rhodyn_experiments::no_signaling(c),
            BuiltExperiment::Linearity(c) => rhodyn_experiments::linearity_criterion(c),
            BuiltExperiment::Decomposition(c) => rhodyn_experiments::decomposition_divergence(c),
        }
    }
}

impl Scenario {
    pub fn parse(text: &str) -> BuildResult<Scenario> {
        let scenario: Scenario =
            toml::from_str(text).map_err(|e| ScenarioError(format!("scenario parse error: {e}")))?;
        if scenario.schema_version != SCHEMA_VERSION {
            return err(format!(
                "unsupported schema_version {} (this build reads {})",
                scenario.schema_version, SCHEMA_VERSION
            ));
        }
        Ok(scenario)
    }

    pub fn output_base(&self) -> &str {
        self.output
            .as_ref()
            .and_then(|o| o.base.as_deref())
            .unwrap_or(&self.name)
    }

    /// The seed the run will use: override, else scenario seed, else 0.
    pub fn effective_seed(&self, seed_override: Option<u64>) -> u64 {
        seed_override.or(self.seed).unwrap_or(0)
    }

    /// Resolves the scenario into a runnable configuration.
    pub fn build(&self, seed_override: Option<u64>) -> BuildResult<BuiltExperiment> {
        let dims = &self.system.dims;
        if dims.is_empty() || dims.contains(&0) {
            return err("system.dims must be a nonempty list of positive dimensions");
        }
        let total_dim: usize = dims.iter().product();
        if self.hamiltonians.len() != dims.len() {
            return err(format!(
                "need one [[hamiltonians]] entry per subsystem: {} subsystems, {} Hamiltonians",
                dims.len(),
                self.hamiltonians.len()
            ));
        }
        let hamiltonians: Vec<ComplexMatrix64> = self
            .hamiltonians
            .iter()
            .zip(dims)
            .enumerate()
            .map(|(k, (spec, &dim))| {
                build_hamiltonian(spec, dim)
                    .map_err(|e| ScenarioError(format!("hamiltonians[{k}]: {}", e.0)))
            })
            .collect::<BuildResult<_>>()?;
        let integrator = build_integrator(&self.integrator)?;
        let q = self.params.q.unwrap_or(1.0);
        if !(q.is_finite() && q > 0.0) {
            return err(format!("params.q = {q} is invalid: q must be > 0"));
        }
        let kind = if self.params.linear.unwrap_or(false) {
            GeneratorKind::Linear
        } else {
            GeneratorKind::Nonlinear { q }
        };
        let seed = self.effective_seed(seed_override);

        let single_system = |experiment: &str| -> BuildResult<ComplexMatrix64> {
            if dims.len() != 1 {
                return err(format!(
                    "{experiment} runs on a single system; use system.dims = [n]"
                ));
            }
            Ok(hamiltonians[0].clone())
        };
        let want_initial = |experiment: &str| -> BuildResult<&StateSpec> {
            self.initial_state.as_ref().ok_or_else(|| {
                ScenarioError(format!("{experiment} needs an [initial_state] table"))
            })
        };
        let no_extensions = |experiment: &str| -> BuildResult<()> {
            if self.extensions.is_empty() {
                Ok(())
            } else {
                err(format!(
                    "[[extensions]] is only meaningful for {NO_SIGNALING}, not {experiment}"
                ))
            }
        };
        let check_params = |experiment: &str| -> BuildResult<()> {
            if self.params.linear.is_some()
                && experiment != MIXTURE_DEFECT
                && experiment != DECOMPOSITION_DIVERGENCE
            {
                return err(format!(
                    "params.linear only applies to {MIXTURE_DEFECT} and \
                     {DECOMPOSITION_DIVERGENCE}, not {experiment}"
                ));
            }
            if self.params.trials.is_some() && experiment != PURE_STATE_CONDITION {
                return err(format!(
                    "params.trials only applies to {PURE_STATE_CONDITION}, not {experiment}"
                ));
            }
            Ok(())
        };

        match self.experiment.as_str() {
            PURE_STATE_CONDITION => {
                no_extensions(PURE_STATE_CONDITION)?;
                check_params(PURE_STATE_CONDITION)?;
                let hamiltonian = single_system(PURE_STATE_CONDITION)?;
                // With [initial_state] the experiment probes that one state;
                // without it the run draws `trials` random pure states.
                let initial = match &self.initial_state {
                    Some(spec) => Some(build_pure_state(spec, total_dim)?),
                    None => None,
                };
                Ok(BuiltExperiment::PureState(PureStateConditionConfig {
                    hamiltonian,
                    q,
                    trials: self.params.trials.unwrap_or(10),
                    seed,
                    initial,
                    integrator,
                    tolerance: self.params.tolerance.unwrap_or(1e-8),
                }))
            }
            MIXTURE_DEFECT => {
                no_extensions(MIXTURE_DEFECT)?;
                check_params(MIXTURE_DEFECT)?;
                let hamiltonian = single_system(MIXTURE_DEFECT)?;
                let spec = want_initial(MIXTURE_DEFECT)?;
                let mixture = build_mixture(spec, total_dim)?;
                Ok(BuiltExperiment::MixtureDefect(MixtureDefectConfig {
                    hamiltonian,
                    mixture,
                    kind,
                    integrator,
                }))
            }
            NO_SIGNALING => {
                check_params(NO_SIGNALING)?;
                if dims.len() < 2 {
                    return err(format!(
                        "{NO_SIGNALING} needs a composite system; use system.dims = [a, b, ...]"
                    ));
                }
                if self.initial_state.is_some() {
                    return err(format!(
                        "{NO_SIGNALING} scenarios list [[extensions]], not [initial_state]"
                    ));
                }
                if self.extensions.len() < 2 {
                    return err(format!(
                        "{NO_SIGNALING} needs at least two [[extensions]] entries"
                    ));
                }
                let extensions: Vec<DensityMatrix64> = self
                    .extensions
                    .iter()
                    .enumerate()
                    .map(|(k, spec)| {
                        build_density(spec, total_dim)
                            .map_err(|e| ScenarioError(format!("extensions[{k}]: {}", e.0)))
                    })
                    .collect::<BuildResult<_>>()?;
                let parts = nonlinear_parts(&hamiltonians, q)?;
                Ok(BuiltExperiment::NoSignaling(NoSignalingConfig {
                    parts,
                    dims: dims.clone(),
                    extensions,
                    watch: self.params.watch.unwrap_or(0),
                    integrator,
                    tolerance: self.params.tolerance.unwrap_or(1e-9),
                }))
            }
            LINEARITY_CRITERION => {
                no_extensions(LINEARITY_CRITERION)?;
                check_params(LINEARITY_CRITERION)?;
                let spec = want_initial(LINEARITY_CRITERION)?;
                let initial = build_density(spec, total_dim)?;
                let (dynamics, initial) = if dims.len() == 1 {
                    (
                        Dynamics64::single_nonlinear(hamiltonians[0].clone(), q)
                            .map_err(core_to_scenario)?,
                        initial,
                    )
                } else {
                    let parts = nonlinear_parts(&hamiltonians, q)?;
                    let tagged = initial
                        .with_structure(dims.clone())
                        .map_err(core_to_scenario)?;
                    (
                        Dynamics64::composite(parts, dims.clone()).map_err(core_to_scenario)?,
                        tagged,
                    )
                };
                Ok(BuiltExperiment::Linearity(LinearityCriterionConfig {
                    dynamics,
                    initial,
                    integrator,
                }))
            }
            DECOMPOSITION_DIVERGENCE => {
                no_extensions(DECOMPOSITION_DIVERGENCE)?;
                check_params(DECOMPOSITION_DIVERGENCE)?;
                let hamiltonian = single_system(DECOMPOSITION_DIVERGENCE)?;
                let spec = want_initial(DECOMPOSITION_DIVERGENCE)?;
                let state = build_density(spec, total_dim)?;
                let members_a = self.params.members_a.unwrap_or(2);
                let members_b = self.params.members_b.unwrap_or(3);
                // decomposition A draws from the base seed, B from seed + 1
                let decomposition_a =
                    rhodyn_core::random_decomposition(&state, members_a, seed)
                        .map_err(core_to_scenario)?;
                let decomposition_b =
                    rhodyn_core::random_decomposition(&state, members_b, seed.wrapping_add(1))
                        .map_err(core_to_scenario)?;
                Ok(BuiltExperiment::Decomposition(
                    DecompositionDivergenceConfig {
                        hamiltonian,
                        kind,
                        state,
                        decomposition_a,
                        decomposition_b,
                        integrator,
                    },
                ))
            }
            other => err(format!(
                "unknown experiment '{other}'; known: {}",
                rhodyn_experiments::EXPERIMENT_NAMES.join(", ")
            )),
        }
    }
}

fn core_to_scenario(e: rhodyn_core::Error) -> ScenarioError {
    ScenarioError(e.to_string())
}

fn nonlinear_parts(
    hamiltonians: &[ComplexMatrix64],
    q: f64,
) -> BuildResult<Vec<GeneratorSpec64>> {
    hamiltonians
        .iter()
        .map(|h| GeneratorSpec::nonlinear(h.clone(), q).map_err(core_to_scenario))
        .collect()
}

fn build_integrator(spec: &IntegratorSpec) -> BuildResult<IntegratorConfig64> {
    let scheme = match spec.scheme.as_deref() {
        None | Some("midpoint-unitary") => SchemeKind::MidpointUnitary,
        Some("rk4") => SchemeKind::Rk4Direct,
        Some(other) => {
            return err(format!(
                "unknown integrator.scheme '{other}'; use 'midpoint-unitary' or 'rk4'"
            ))
        }
    };
    Ok(IntegratorConfig64::new(
        spec.dt.unwrap_or(1e-3),
        spec.t_final.unwrap_or(10.0),
    )
    .with_scheme(scheme)
    .with_sample_every(spec.sample_every.unwrap_or(1))
    .with_hbar(spec.hbar.unwrap_or(1.0)))
}

fn build_hamiltonian(spec: &HamiltonianSpec, dim: usize) -> BuildResult<ComplexMatrix64> {
    match (&spec.pauli, &spec.matrix) {
        (Some(expr), None) => parse_pauli_expression(expr, dim),
        (None, Some(rows)) => {
            let m = matrix_from_rows(rows)?;
            if m.rows() != dim {
                return err(format!(
                    "Hamiltonian matrix is {}x{} but the subsystem dimension is {dim}",
                    m.rows(),
                    m.cols()
                ));
            }
            Ok(m)
        }
        _ => err("give exactly one of 'pauli' or 'matrix'"),
    }
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> BuildResult<ComplexMatrix64> {
    let n = rows.len();
    if n == 0 {
        return err("matrix must have at least one row");
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return err(format!(
                "matrix row {i} has {} entries, expected {n} (square, row-major)",
                row.len()
            ));
        }
        entries.extend(row.iter().map(|&[re, im]| (re, im)));
    }
    Ok(ComplexMatrix64::from_real_im(n, n, &entries))
}

/// Parses expressions like `"1.0*Z"`, `"0.5*XX - 0.25*ZI"`, `"Z + X"`.
/// Each term is an optional real coefficient, `*`, and a string of Pauli
/// letters (I, X, Y, Z) whose length fixes the qubit count; the single-qubit
/// spellings `sigma_x`, `sigma_y`, `sigma_z` are accepted as term aliases.
fn parse_pauli_expression(expr: &str, dim: usize) -> BuildResult<ComplexMatrix64> {
    let mut total: Option<ComplexMatrix64> = None;
    for (sign, term) in split_terms(expr)? {
        let term = term.trim();
        if term.is_empty() {
            return err(format!("empty term in Pauli expression '{expr}'"));
        }
        let (coeff, letters) = match term.split_once('*') {
            Some((c, l)) => {
                let coeff: f64 = c.trim().parse().map_err(|_| {
                    ScenarioError(format!("bad coefficient '{}' in '{expr}'", c.trim()))
                })?;
                (coeff, l.trim())
            }
            None => (1.0, term),
        };
        let letters = match letters {
            "sigma_x" => "X",
            "sigma_y" => "Y",
            "sigma_z" => "Z",
            other => other,
        };
        let mut m = ComplexMatrix64::identity(1);
        for ch in letters.chars() {
            let p = gates::pauli_by_letter::<f64>(ch).ok_or_else(|| {
                ScenarioError(format!("'{ch}' is not a Pauli letter (I, X, Y, Z)"))
            })?;
            m = tensor_product(&m, &p);
        }
        if m.rows() != dim {
            return err(format!(
                "term '{letters}' acts on dimension {} but the subsystem has dimension {dim}",
                m.rows()
            ));
        }
        let m = m.scale_re(sign * coeff);
        total = Some(match total {
            None => m,
            Some(t) => &t + &m,
        });
    }
    total.ok_or_else(|| ScenarioError(format!("empty Pauli expression '{expr}'")))
}

/// Splits on top-level `+`/`-`, keeping signs; a sign directly after `e`/`E`
/// belongs to a coefficient exponent and is kept inside the term.
fn split_terms(expr: &str) -> BuildResult<Vec<(f64, &str)>> {
    let mut terms = Vec::new();
    let mut start = 0;
    let mut sign = 1.0;
    let mut prev: Option<char> = None;
    for (i, ch) in expr.char_indices() {
        if (ch == '+' || ch == '-') && !matches!(prev, Some('e') | Some('E')) {
            let chunk = expr[start..i].trim();
            if chunk.is_empty() {
                // only a leading sign may have nothing before it
                if !(terms.is_empty() && expr[..i].trim().is_empty()) {
                    return err(format!("malformed Pauli expression '{expr}'"));
                }
                sign = if ch == '-' { -1.0 } else { 1.0 };
            } else {
                terms.push((sign, chunk));
                sign = if ch == '-' { -1.0 } else { 1.0 };
            }
            start = i + 1;
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    let chunk = expr[start..].trim();
    if chunk.is_empty() {
        return err(format!("malformed Pauli expression '{expr}'"));
    }
    terms.push((sign, chunk));
    Ok(terms)
}

fn build_state_value(spec: &StateSpec, dim: usize) -> BuildResult<StateValue<f64>> {
    let chosen = [
        spec.name.is_some(),
        spec.amplitudes.is_some(),
        spec.matrix.is_some(),
        spec.mixture.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if chosen != 1 {
        return err("state needs exactly one of: name, amplitudes, matrix, mixture");
    }
    if spec.params.is_some() && spec.name.is_none() {
        return err("state 'params' only accompany a named state");
    }
    if let Some(name) = &spec.name {
        let params = spec.params.clone().unwrap_or_default();
        return named_state::<f64>(name, &params, dim).map_err(core_to_scenario);
    }
    if let Some(amps) = &spec.amplitudes {
        if amps.len() != dim {
            return err(format!(
                "state has {} amplitudes but the system dimension is {dim}",
                amps.len()
            ));
        }
        let pairs: Vec<(f64, f64)> = amps.iter().map(|&[re, im]| (re, im)).collect();
        return StateVector64::from_real_im(&pairs)
            .map(StateValue::Pure)
            .map_err(core_to_scenario);
    }
    if let Some(rows) = &spec.matrix {
        let m = matrix_from_rows(rows)?;
        if m.rows() != dim {
            return err(format!(
                "state matrix is {}x{} but the system dimension is {dim}",
                m.rows(),
                m.cols()
            ));
        }
        return DensityMatrix64::new(m, None)
            .map(StateValue::Mixed)
            .map_err(core_to_scenario);
    }
    let members = spec.mixture.as_ref().expect("mixture chosen");
    build_mixture_members(members, dim).map(|mix| StateValue::Mixed(mix.density()))
}

fn build_pure_state(spec: &StateSpec, dim: usize) -> BuildResult<StateVector64> {
    match build_state_value(spec, dim)? {
        StateValue::Pure(psi) => Ok(psi),
        StateValue::Mixed(_) => err("this experiment needs a pure initial state"),
    }
}

fn build_mixture(spec: &StateSpec, dim: usize) -> BuildResult<EnsembleMixture64> {
    match &spec.mixture {
        Some(members) => {
            let others = spec.name.is_some() || spec.amplitudes.is_some() || spec.matrix.is_some();
            if others {
                return err("a mixture state takes only the 'mixture' member list");
            }
            build_mixture_members(members, dim)
        }
        None => err("this experiment needs an initial_state.mixture member list"),
    }
}

fn build_mixture_members(
    members: &[MixtureMemberSpec],
    dim: usize,
) -> BuildResult<EnsembleMixture64> {
    let mut built = Vec::with_capacity(members.len());
    for (k, member) in members.iter().enumerate() {
        let spec = StateSpec {
            name: member.name.clone(),
            params: member.params.clone(),
            amplitudes: member.amplitudes.clone(),
            matrix: None,
            mixture: None,
        };
        let psi = build_pure_state(&spec, dim)
            .map_err(|e| ScenarioError(format!("mixture member {k}: {}", e.0)))?;
        built.push((member.weight, psi));
    }
    EnsembleMixture64::new(built).map_err(core_to_scenario)
}

fn build_density(spec: &StateSpec, dim: usize) -> BuildResult<DensityMatrix64> {
    build_state_value(spec, dim).map(StateValue::into_density)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_expressions_parse() {
        let z = parse_pauli_expression("Z", 2).unwrap();
        assert!(z.max_abs_diff(&gates::pauli_z::<f64>()) < 1e-15);

        let m = parse_pauli_expression("0.5*X - 0.25*Z", 2).unwrap();
        assert!((m.get(0, 0).re + 0.25).abs() < 1e-15);
        assert!((m.get(0, 1).re - 0.5).abs() < 1e-15);

        let zz = parse_pauli_expression("1e-1*ZI + ZI", 4).unwrap();
        let want = tensor_product(&gates::pauli_z::<f64>(), &ComplexMatrix64::identity(2))
            .scale_re(1.1);
        assert!(zz.max_abs_diff(&want) < 1e-15);

        assert!(parse_pauli_expression("Q", 2).is_err());
        assert!(parse_pauli_expression("Z", 4).is_err());
        assert!(parse_pauli_expression("", 2).is_err());
        assert!(parse_pauli_expression("0.5*", 2).is_err());
    }

    #[test]
    fn exponent_signs_stay_inside_coefficients() {
        let m = parse_pauli_expression("1e-2*X", 2).unwrap();
        assert!((m.get(0, 1).re - 0.01).abs() < 1e-18);
        let m = parse_pauli_expression("2.5E+1*Z - 1e-3*X", 2).unwrap();
        assert!((m.get(0, 0).re - 25.0).abs() < 1e-12);
        assert!((m.get(0, 1).re + 1e-3).abs() < 1e-18);
    }

    #[test]
    fn leading_minus_negates_first_term() {
        let m = parse_pauli_expression("-Z", 2).unwrap();
        assert!((m.get(0, 0).re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn state_spec_requires_exactly_one_form() {
        let empty = StateSpec {
            name: None,
            params: None,
            amplitudes: None,
            matrix: None,
            mixture: None,
        };
        assert!(build_state_value(&empty, 2).is_err());
        let both = StateSpec {
            name: Some("plus".into()),
            params: None,
            amplitudes: Some(vec![[1.0, 0.0], [0.0, 0.0]]),
            matrix: None,
            mixture: None,
        };
        assert!(build_state_value(&both, 2).is_err());
    }

    #[test]
    fn scenario_round_trips_from_toml() {
        let text = r#"
schema_version = 1
name = "demo"
experiment = "pure_state_condition"

[system]
dims = [2]

[[hamiltonians]]
pauli = "1.0*Z"

[initial_state]
name = "plus"

[integrator]
dt = 1e-3
t_final = 0.1
"#;
        let scenario = Scenario::parse(text).unwrap();
        assert_eq!(scenario.name, "demo");
        let built = scenario.build(None).unwrap();
        assert!(matches!(built, BuiltExperiment::PureState(_)));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"
schema_version = 1
name = "demo"
experiment = "pure_state_condition"
typo_field = 3

[system]
dims = [2]

[[hamiltonians]]
pauli = "Z"

[initial_state]
name = "plus"

[integrator]
dt = 1e-3
t_final = 0.1
"#;
        assert!(Scenario::parse(text).is_err());
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text = r#"
schema_version = 2
name = "demo"
experiment = "pure_state_condition"

[system]
dims = [2]

[[hamiltonians]]
pauli = "Z"

[integrator]
dt = 1e-3
t_final = 0.1
"#;
        assert!(Scenario::parse(text).is_err());
    }

    #[test]
    fn minimal_document_fills_defaults() {
        let text = r#"
schema_version = 1
name = "minimal"
experiment = "pure_state_condition"

[system]
dims = [2]

[[hamiltonians]]
pauli = "sigma_z"

[params]
q = 1.0
"#;
        let scenario = Scenario::parse(text).unwrap();
        let built = scenario.build(None).unwrap();
        let BuiltExperiment::PureState(config) = built else {
            panic!("expected a pure-state build");
        };
        assert_eq!(config.integrator.dt, 1e-3);
        assert_eq!(config.integrator.t_final, 10.0);
        assert_eq!(config.trials, 10);
        assert_eq!(config.seed, 0);
        assert!(config.initial.is_none());
        assert!(config.hamiltonian.max_abs_diff(&gates::pauli_z::<f64>()) < 1e-15);
    }

    #[test]
    fn canonical_emit_reparses_equal() {
        let text = r#"
schema_version = 1
name = "demo"
experiment = "mixture_defect"
seed = 7

[system]
dims = [2]

[[hamiltonians]]
pauli = "Z"

[initial_state]
mixture = [
  { weight = 0.5, name = "basis", params = [0] },
  { weight = 0.5, name = "plus" },
]

[integrator]
dt = 1e-3
t_final = 2.0
scheme = "rk4"

[params]
q = 2.0
"#;
        let scenario = Scenario::parse(text).unwrap();
        let emitted = toml::to_string(&scenario).unwrap();
        let reparsed = Scenario::parse(&emitted).unwrap();
        assert_eq!(scenario, reparsed);
    }

    #[test]
    fn nonpositive_q_is_rejected_by_name() {
        let text = r#"
schema_version = 1
name = "demo"
experiment = "mixture_defect"

[system]
dims = [2]

[[hamiltonians]]
pauli = "Z"

[initial_state]
mixture = [
  { weight = 0.5, name = "basis", params = [0] },
  { weight = 0.5, name = "plus" },
]

[params]
q = -1.0
"#;
        let e = Scenario::parse(text).unwrap().build(None).unwrap_err();
        assert!(e.0.contains("q"), "{e}");
        assert!(e.0.contains("must be > 0"), "{e}");
    }

    #[test]
    fn linear_switch_is_gated_to_route_experiments() {
        let text = r#"
schema_version = 1
name = "demo"
experiment = "pure_state_condition"

[system]
dims = [2]

[[hamiltonians]]
pauli = "Z"

[params]
linear = true
"#;
        let e = Scenario::parse(text).unwrap().build(None).unwrap_err();
        assert!(e.0.contains("params.linear"), "{e}");
    }
}
