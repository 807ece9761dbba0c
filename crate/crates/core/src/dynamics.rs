//! Generators and integrators for trace-normalized density-matrix dynamics.
//!
//! The evolution law is `i hbar d(rho)/dt = [G(rho), rho]`. A linear
//! generator is a fixed Hamiltonian, `G = H`; the nonlinear family is
//! `G(rho) = H p + p H` with `p = (rho / Tr rho)^q` for a real exponent
//! `q > 0`. On pure states `p` is again the projector for every `q`, so the
//! nonlinear flow coincides with ordinary unitary motion there; genuine
//! nonlinearity shows up only on mixed states.
//!
//! Composite systems evolve under a sum of local generators, each evaluated
//! on the corresponding reduced state and embedded back into the full space:
//! subsystem dynamics then depends on the other parts only through their
//! reduced states, which keeps remote preparations invisible locally.

use num_complex::Complex;

use crate::eig::{hermitian_eig, hermitian_power, hermitian_power_lenient, unitary_exponential};
use crate::error::{Error, Result};
use crate::matrix::{embed, partial_trace, ComplexMatrix};
use crate::scalar::Scalar;
use crate::states::DensityMatrix;

/// Generator family for a single system.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind<T: Scalar> {
    /// `G(rho) = H`: standard unitary motion.
    Linear,
    /// `G(rho) = H p + p H`, `p = (rho / Tr rho)^q`.
    Nonlinear { q: T },
}

/// A Hamiltonian together with the generator family built on it.
#[derive(Debug, Clone)]
pub struct GeneratorSpec<T: Scalar> {
    kind: GeneratorKind<T>,
    hamiltonian: ComplexMatrix<T>,
}

impl<T: Scalar> GeneratorSpec<T> {
    pub fn linear(hamiltonian: ComplexMatrix<T>) -> Result<Self> {
        hamiltonian.dim()?;
        hamiltonian.require_hermitian(T::hermiticity_tol())?;
        Ok(Self {
            kind: GeneratorKind::Linear,
            hamiltonian,
        })
    }

    pub fn nonlinear(hamiltonian: ComplexMatrix<T>, q: T) -> Result<Self> {
        hamiltonian.dim()?;
        hamiltonian.require_hermitian(T::hermiticity_tol())?;
        if !q.is_finite() || q <= T::zero() {
            return Err(Error::ParameterOutOfRange {
                name: "q",
                value: q.to_f64().unwrap_or(f64::NAN),
                constraint: "finite and positive",
            });
        }
        Ok(Self {
            kind: GeneratorKind::Nonlinear { q },
            hamiltonian,
        })
    }

    pub fn kind(&self) -> &GeneratorKind<T> {
        &self.kind
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix<T> {
        &self.hamiltonian
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    fn generator_matrix(&self, rho: &ComplexMatrix<T>, lenient: bool) -> Result<ComplexMatrix<T>> {
        match self.kind {
            GeneratorKind::Linear => Ok(self.hamiltonian.clone()),
            GeneratorKind::Nonlinear { q } => {
                let tr = rho.trace().re;
                let normalized = rho.scale_re(T::one() / tr);
                let p = if lenient {
                    hermitian_power_lenient(&normalized, q)?
                } else {
                    hermitian_power(&normalized, q)?
                };
                let h = &self.hamiltonian;
                Ok(&h.matmul(&p) + &p.matmul(h))
            }
        }
    }
}

/// Full dynamics: a single system, or independent parts of a composite whose
/// generators each see only their own reduced state.
#[derive(Debug, Clone)]
pub enum Dynamics<T: Scalar> {
    Single(GeneratorSpec<T>),
    Composite {
        parts: Vec<GeneratorSpec<T>>,
        dims: Vec<usize>,
    },
}

impl<T: Scalar> Dynamics<T> {
    pub fn single_linear(hamiltonian: ComplexMatrix<T>) -> Result<Self> {
        Ok(Dynamics::Single(GeneratorSpec::linear(hamiltonian)?))
    }

    pub fn single_nonlinear(hamiltonian: ComplexMatrix<T>, q: T) -> Result<Self> {
        Ok(Dynamics::Single(GeneratorSpec::nonlinear(hamiltonian, q)?))
    }

    /// One generator per tensor factor; `dims[k]` must match part k's
    /// Hamiltonian dimension.
    pub fn composite(parts: Vec<GeneratorSpec<T>>, dims: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.len() != dims.len() {
            return Err(Error::DimensionMismatch {
                context: "composite parts vs dims",
                expected: dims.len(),
                found: parts.len(),
            });
        }
        for (part, &d) in parts.iter().zip(&dims) {
            if part.dim() != d {
                return Err(Error::DimensionMismatch {
                    context: "composite part Hamiltonian dimension",
                    expected: d,
                    found: part.dim(),
                });
            }
        }
        Ok(Dynamics::Composite { parts, dims })
    }

    pub fn dim(&self) -> usize {
        match self {
            Dynamics::Single(spec) => spec.dim(),
            Dynamics::Composite { dims, .. } => dims.iter().product(),
        }
    }

    /// The instantaneous generator `G(rho)`.
    pub fn generator(&self, rho: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        self.generator_mode(rho, false)
    }

    fn generator_mode(&self, rho: &ComplexMatrix<T>, lenient: bool) -> Result<ComplexMatrix<T>> {
        match self {
            Dynamics::Single(spec) => spec.generator_matrix(rho, lenient),
            Dynamics::Composite { parts, dims } => {
                let n = self.dim();
                let mut total = ComplexMatrix::zeros(n, n);
                for (k, part) in parts.iter().enumerate() {
                    let reduced = partial_trace(rho, dims, k)?.symmetrize();
                    let local = part.generator_matrix(&reduced, lenient)?;
                    total = &total + &embed(&local, dims, k)?;
                }
                Ok(total)
            }
        }
    }

    /// `H` for a single system, the sum of embedded part Hamiltonians for a
    /// composite; the conserved energy observable in both cases.
    pub fn total_hamiltonian(&self) -> Result<ComplexMatrix<T>> {
        match self {
            Dynamics::Single(spec) => Ok(spec.hamiltonian.clone()),
            Dynamics::Composite { parts, dims } => {
                let n = self.dim();
                let mut total = ComplexMatrix::zeros(n, n);
                for (k, part) in parts.iter().enumerate() {
                    total = &total + &embed(&part.hamiltonian, dims, k)?;
                }
                Ok(total)
            }
        }
    }
}

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// Exactly-unitary midpoint propagator: a half-step predictor evaluates
    /// the generator, then `rho -> U rho U^dag` with
    /// `U = exp(-i G(rho_mid) dt / hbar)`. Second order; preserves trace and
    /// spectrum to roundoff by construction.
    MidpointUnitary,
    /// Classical fourth-order Runge-Kutta directly on
    /// `d(rho)/dt = -i [G(rho), rho] / hbar`, with symmetrization and trace
    /// renormalization after each step. Fourth order; spectrum preserved only
    /// to truncation order, so each step is gated by a positivity check.
    Rk4Direct,
}

/// Time grid and scheme selection for [`evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig<T: Scalar> {
    pub dt: T,
    pub t_final: T,
    /// Record every k-th step (step 0 and the final step always recorded).
    pub sample_every: usize,
    pub hbar: T,
    pub scheme: SchemeKind,
}

impl<T: Scalar> IntegratorConfig<T> {
    pub fn new(dt: T, t_final: T) -> Self {
        Self {
            dt,
            t_final,
            sample_every: 1,
            hbar: T::one(),
            scheme: SchemeKind::MidpointUnitary,
        }
    }

    pub fn with_scheme(mut self, scheme: SchemeKind) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_sample_every(mut self, k: usize) -> Self {
        self.sample_every = k;
        self
    }

    pub fn with_hbar(mut self, hbar: T) -> Self {
        self.hbar = hbar;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= T::zero() {
            return Err(Error::ParameterOutOfRange {
                name: "dt",
                value: self.dt.to_f64().unwrap_or(f64::NAN),
                constraint: "finite and positive",
            });
        }
        if !self.t_final.is_finite() || self.t_final < T::zero() {
            return Err(Error::ParameterOutOfRange {
                name: "t_final",
                value: self.t_final.to_f64().unwrap_or(f64::NAN),
                constraint: "finite and nonnegative",
            });
        }
        if self.sample_every == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "sample_every",
                value: 0.0,
                constraint: "at least 1",
            });
        }
        if !self.hbar.is_finite() || self.hbar <= T::zero() {
            return Err(Error::ParameterOutOfRange {
                name: "hbar",
                value: self.hbar.to_f64().unwrap_or(f64::NAN),
                constraint: "finite and positive",
            });
        }
        Ok(())
    }

    /// Number of steps: `round(t_final / dt)`; sample `n` sits at `n * dt`.
    pub fn n_steps(&self) -> usize {
        let ratio = (self.t_final / self.dt).to_f64().unwrap_or(0.0);
        ratio.round() as usize
    }
}

/// Sampled evolution record. `times[i]` pairs with `states[i]` and with entry
/// `i` of each observable track.
#[derive(Debug, Clone)]
pub struct Trajectory<T: Scalar> {
    pub times: Vec<T>,
    pub states: Vec<DensityMatrix<T>>,
    pub trace: Vec<T>,
    pub purity: Vec<T>,
    pub energy: Vec<T>,
    pub entropy: Vec<T>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &DensityMatrix<T> {
        self.states.last().expect("trajectory has at least one sample")
    }
}

/// Integrates the initial state under `dynamics` over the configured grid.
///
/// The subsystem structure tag of the initial state is carried onto every
/// sample. Step failures are wrapped with the time at which they occurred.
pub fn evolve<T: Scalar>(
    dynamics: &Dynamics<T>,
    initial: &DensityMatrix<T>,
    config: &IntegratorConfig<T>,
) -> Result<Trajectory<T>> {
    config.validate()?;
    if dynamics.dim() != initial.dim() {
        return Err(Error::DimensionMismatch {
            context: "dynamics vs initial state",
            expected: dynamics.dim(),
            found: initial.dim(),
        });
    }
    let h_total = dynamics.total_hamiltonian()?;
    let structure: Option<Vec<usize>> = initial.structure().map(|s| s.to_vec());
    let n_steps = config.n_steps();

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        trace: Vec::new(),
        purity: Vec::new(),
        energy: Vec::new(),
        entropy: Vec::new(),
    };
    let mut record = |t: T, m: &ComplexMatrix<T>| -> Result<()> {
        traj.times.push(t);
        traj.trace.push(m.trace().re);
        let f = m.frobenius_norm();
        traj.purity.push(f * f);
        traj.energy.push(h_total.matmul(m).trace().re);
        let eig = hermitian_eig(m)?;
        traj.entropy.push(
            eig.eigenvalues
                .iter()
                .filter(|&&w| w > T::zero())
                .map(|&w| -w * w.ln())
                .sum(),
        );
        traj.states
            .push(DensityMatrix::from_parts_unchecked(m.clone(), structure.clone()));
        Ok(())
    };

    let mut state = initial.matrix().clone();
    record(T::zero(), &state)?;
    for n in 0..n_steps {
        let t_next = T::from_usize(n + 1).expect("step count fits scalar") * config.dt;
        state = match config.scheme {
            SchemeKind::MidpointUnitary => step_midpoint(dynamics, &state, config.dt, config.hbar),
            SchemeKind::Rk4Direct => step_rk4(dynamics, &state, config.dt, config.hbar),
        }
        .map_err(|e| e.at_time(t_next.to_f64().unwrap_or(f64::NAN)))?;
        if (n + 1) % config.sample_every == 0 || n + 1 == n_steps {
            record(t_next, &state)?;
        }
    }
    Ok(traj)
}

/// One exactly-unitary midpoint step.
pub fn step_midpoint<T: Scalar>(
    dynamics: &Dynamics<T>,
    rho: &ComplexMatrix<T>,
    dt: T,
    hbar: T,
) -> Result<ComplexMatrix<T>> {
    let half = dt / (T::real(2.0) * hbar);
    let g0 = dynamics.generator_mode(rho, false)?;
    let u_half = unitary_exponential(&g0, half)?;
    let rho_mid = rho.conjugate_by(&u_half).symmetrize();
    let g_mid = dynamics.generator_mode(&rho_mid, false)?;
    let u = unitary_exponential(&g_mid, dt / hbar)?;
    Ok(rho.conjugate_by(&u).symmetrize())
}

/// One direct RK4 step, then symmetrize, renormalize the trace, and reject
/// the step if positivity broke beyond roundoff (step size too large).
pub fn step_rk4<T: Scalar>(
    dynamics: &Dynamics<T>,
    rho: &ComplexMatrix<T>,
    dt: T,
    hbar: T,
) -> Result<ComplexMatrix<T>> {
    let deriv = |m: &ComplexMatrix<T>| -> Result<ComplexMatrix<T>> {
        let g = dynamics.generator_mode(m, true)?;
        // -i/hbar [G, rho]: Hermitian because the commutator is anti-Hermitian
        Ok(g.commutator(m).scale(Complex::new(T::zero(), -T::one() / hbar)))
    };
    let half = T::real(0.5);
    let k1 = deriv(rho)?;
    let k2 = deriv(&(rho + &k1.scale_re(dt * half)))?;
    let k3 = deriv(&(rho + &k2.scale_re(dt * half)))?;
    let k4 = deriv(&(rho + &k3.scale_re(dt)))?;

    let sixth = dt / T::real(6.0);
    let two = T::real(2.0);
    let sum = &(&k1 + &k2.scale_re(two)) + &(&k3.scale_re(two) + &k4);
    let raw = (rho + &sum.scale_re(sixth)).symmetrize();
    let tr = raw.trace().re;
    let renormalized = raw.scale_re(T::one() / tr);

    let eig = hermitian_eig(&renormalized)?;
    if let Some(&min) = eig
        .eigenvalues
        .iter()
        .min_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"))
    {
        if min < -T::psd_clip_tol() {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(renormalized)
}
