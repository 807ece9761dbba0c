//! Dense complex linear algebra and trace-normalized nonlinear
//! density-matrix dynamics.
//!
//! The crate is generic over the real scalar type through [`Scalar`]
//! (implemented for `f64` and `f32`); the `f64` instantiations re-exported at
//! the crate root are the reference configuration every numerical tolerance
//! is calibrated for.
//!
//! Layering, bottom up:
//! - [`matrix`]: dense complex matrices, tensor products, partial traces,
//!   subsystem embeddings;
//! - [`eig`]: Hermitian eigendecomposition (complex Jacobi) and the matrix
//!   functions built on it: fractional powers, unitary exponentials,
//!   trace-norm distance;
//! - [`states`]: validated pure states, density matrices, ensembles, and
//!   information metrics;
//! - [`random`]: seeded random states, Hamiltonians, unitaries,
//!   decompositions, purifications;
//! - [`dynamics`]: linear and nonlinear generators, composite systems, the
//!   exactly-unitary midpoint propagator, and direct RK4 integration.

pub mod dynamics;
pub mod eig;
pub mod error;
pub mod gates;
pub mod matrix;
pub mod random;
pub mod scalar;
pub mod states;

pub use dynamics::{
    evolve, step_midpoint, step_rk4, Dynamics, GeneratorKind, GeneratorSpec, IntegratorConfig,
    SchemeKind, Trajectory,
};
pub use eig::{hermitian_eig, hermitian_power, trace_norm_distance, unitary_exponential, EigDecomposition};
pub use error::{Error, Result};
pub use matrix::{embed, partial_trace, tensor_product, ComplexMatrix};
pub use random::{
    haar_unitary, purification, random_decomposition, random_density, random_hermitian,
    random_pure_state,
};
pub use scalar::Scalar;
pub use states::{
    density_from_mixture, density_from_pure, fidelity, named_state, purity, von_neumann_entropy,
    DensityMatrix, EnsembleMixture, StateValue, StateVector,
};

/// Reference-precision (f64) instantiations.
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type StateVector64 = StateVector<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type EnsembleMixture64 = EnsembleMixture<f64>;
pub type Dynamics64 = Dynamics<f64>;
pub type GeneratorSpec64 = GeneratorSpec<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type IntegratorConfig64 = IntegratorConfig<f64>;

/// Single-precision instantiations; looser validation tolerances apply.
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type StateVector32 = StateVector<f32>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type EnsembleMixture32 = EnsembleMixture<f32>;
pub type Dynamics32 = Dynamics<f32>;
pub type Trajectory32 = Trajectory<f32>;
pub type IntegratorConfig32 = IntegratorConfig<f32>;
