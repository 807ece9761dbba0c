//! Floating-point scalar abstraction.
//!
//! All numeric kernels are generic over [`Scalar`]; `f64` is the reference
//! configuration and the one the validation tolerances are calibrated for.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Real scalar type underlying complex matrices and states.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssignOps + Sum<Self> + Debug + Display + Send + Sync + 'static
{
    /// Max-abs defect allowed by Hermiticity checks.
    fn hermiticity_tol() -> Self;

    /// Eigenvalues of a positive semidefinite matrix in `[-psd_clip_tol, 0)`
    /// are clipped to zero; anything below is a hard error.
    fn psd_clip_tol() -> Self;

    /// Allowed deviation of a density-matrix trace from one.
    fn trace_tol() -> Self;

    /// Allowed deviation of a state-vector norm from one.
    fn norm_tol() -> Self;

    /// Allowed deviation of mixture weights from summing to one.
    fn weight_tol() -> Self;

    /// Lossy conversion from an `f64` constant; panics only for values no
    /// float type can represent, which does not occur for tolerances.
    fn real(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable in scalar type")
    }
}

impl Scalar for f64 {
    fn hermiticity_tol() -> Self {
        1e-10
    }
    fn psd_clip_tol() -> Self {
        1e-12
    }
    fn trace_tol() -> Self {
        1e-10
    }
    fn norm_tol() -> Self {
        1e-12
    }
    fn weight_tol() -> Self {
        1e-12
    }
}

// Single-precision gets proportionally looser validation; it exists to keep
// the kernels honest about genericity, not as a tested production target.
impl Scalar for f32 {
    fn hermiticity_tol() -> Self {
        1e-4
    }
    fn psd_clip_tol() -> Self {
        1e-5
    }
    fn trace_tol() -> Self {
        1e-4
    }
    fn norm_tol() -> Self {
        1e-5
    }
    fn weight_tol() -> Self {
        1e-5
    }
}
