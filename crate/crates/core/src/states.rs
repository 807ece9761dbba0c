//! Quantum state containers and information metrics.
//!
//! `DensityMatrix` is the central invariant-carrying type: Hermitian within
//! tolerance, positive semidefinite up to a roundoff clip, unit trace, and
//! optionally tagged with a tensor-product structure for composite systems.

use num_complex::Complex;

use crate::eig::{hermitian_eig, hermitian_power, trace_norm_distance};
use crate::error::{Error, Result};
use crate::matrix::{partial_trace, ComplexMatrix};
use crate::scalar::Scalar;

/// Pure state: unit-norm complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// Validates that the amplitudes already have unit norm.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = Self::norm_of(&amplitudes);
        if (norm - T::one()).abs() > T::norm_tol() {
            return Err(Error::NotNormalized {
                norm: norm.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { amplitudes })
    }

    /// Builds and validates a state from `(re, im)` amplitude pairs.
    pub fn from_real_im(pairs: &[(T, T)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex::new(re, im)).collect())
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = Self::norm_of(&amplitudes);
        if norm <= T::zero() {
            return Err(Error::NotNormalized { norm: 0.0 });
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a.unscale(norm)).collect(),
        })
    }

    fn norm_of(v: &[Complex<T>]) -> T {
        v.iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// Projector `|psi><psi|`.
    pub fn outer(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.amplitudes[i] * self.amplitudes[j].conj());
            }
        }
        m
    }

    /// Product state `self tensor other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            for &b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }

    pub fn overlap(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim(), "overlap dimension mismatch");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * *b
            })
    }
}

/// Mixed state with validated invariants and optional subsystem structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Scalar> {
    matrix: ComplexMatrix<T>,
    structure: Option<Vec<usize>>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Full validation: square, Hermitian, unit trace, PSD up to the clip
    /// tolerance, and structure (if given) factoring the dimension.
    pub fn new(matrix: ComplexMatrix<T>, structure: Option<Vec<usize>>) -> Result<Self> {
        let n = matrix.dim()?;
        matrix.require_hermitian(T::hermiticity_tol())?;
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::trace_tol() || tr.im.abs() > T::trace_tol() {
            return Err(Error::InvalidTrace {
                expected: 1.0,
                found: tr.re.to_f64().unwrap_or(f64::NAN),
            });
        }
        let eig = hermitian_eig(&matrix)?;
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
        if let Some(ref dims) = structure {
            let prod: usize = dims.iter().product();
            if prod != n || dims.contains(&0) {
                return Err(Error::StructureMismatch {
                    structure: dims.clone(),
                    dim: n,
                });
            }
        }
        Ok(Self { matrix, structure })
    }

    /// Wraps a matrix known valid by construction (unitary conjugation of a
    /// valid state, partial trace, convex mixing). Hermiticity and trace are
    /// still asserted cheaply in debug builds.
    pub(crate) fn from_parts_unchecked(
        matrix: ComplexMatrix<T>,
        structure: Option<Vec<usize>>,
    ) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix, structure }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn structure(&self) -> Option<&[usize]> {
        self.structure.as_deref()
    }

    /// Re-tags the subsystem structure, validating that it factors the
    /// dimension.
    pub fn with_structure(mut self, dims: Vec<usize>) -> Result<Self> {
        let prod: usize = dims.iter().product();
        if prod != self.dim() || dims.contains(&0) {
            return Err(Error::StructureMismatch {
                structure: dims,
                dim: self.dim(),
            });
        }
        self.structure = Some(dims);
        Ok(self)
    }

    /// Reduced state of subsystem `keep`; requires a structure tag.
    pub fn reduce(&self, keep: usize) -> Result<DensityMatrix<T>> {
        let dims = self.structure.as_ref().ok_or(Error::StructureMismatch {
            structure: vec![],
            dim: self.dim(),
        })?;
        let reduced = partial_trace(&self.matrix, dims, keep)?;
        Ok(DensityMatrix::from_parts_unchecked(
            reduced.symmetrize(),
            None,
        ))
    }

    pub fn trace_distance(&self, other: &DensityMatrix<T>) -> Result<T> {
        trace_norm_distance(&self.matrix, &other.matrix)
    }

    /// Eigendecomposition read as an orthogonal ensemble; eigenvalues at or
    /// below the PSD clip are dropped and weights renormalized to sum to one.
    pub fn eigen_mixture(&self) -> Result<EnsembleMixture<T>> {
        let eig = hermitian_eig(&self.matrix)?;
        let n = self.dim();
        let kept: Vec<(T, usize)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|&(_, &w)| w > T::psd_clip_tol())
            .map(|(k, &w)| (w, k))
            .collect();
        let total: T = kept.iter().map(|&(w, _)| w).sum();
        let mut members = Vec::with_capacity(kept.len());
        for (w, k) in kept {
            let column: Vec<Complex<T>> = (0..n).map(|i| eig.eigenvectors.get(i, k)).collect();
            members.push((w / total, StateVector::normalized(column)?));
        }
        EnsembleMixture::new(members)
    }
}

/// Probabilistic ensemble of pure states.
#[derive(Debug, Clone)]
pub struct EnsembleMixture<T: Scalar> {
    members: Vec<(T, StateVector<T>)>,
}

impl<T: Scalar> EnsembleMixture<T> {
    /// Weights must be nonnegative and sum to one; members must share a
    /// dimension.
    pub fn new(members: Vec<(T, StateVector<T>)>) -> Result<Self> {
        let sum: T = members.iter().map(|&(w, _)| w).sum();
        if members.iter().any(|&(w, _)| w < T::zero())
            || (sum - T::one()).abs() > T::weight_tol()
        {
            return Err(Error::InvalidWeights {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        if let Some(first) = members.first().map(|(_, s)| s.dim()) {
            for (_, s) in &members {
                if s.dim() != first {
                    return Err(Error::DimensionMismatch {
                        context: "mixture member dimensions",
                        expected: first,
                        found: s.dim(),
                    });
                }
            }
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(T, StateVector<T>)] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members.first().map(|(_, s)| s.dim()).unwrap_or(0)
    }

    /// Elementary density operator `sum_i w_i |psi_i><psi_i|`.
    pub fn density(&self) -> DensityMatrix<T> {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (w, psi) in &self.members {
            m = &m + &psi.outer().scale_re(*w);
        }
        DensityMatrix::from_parts_unchecked(m.symmetrize(), None)
    }
}

/// `|psi><psi|` as a validated density operator.
pub fn density_from_pure<T: Scalar>(psi: &StateVector<T>) -> DensityMatrix<T> {
    DensityMatrix::from_parts_unchecked(psi.outer(), None)
}

/// Elementary mixture density `sum_i w_i |psi_i><psi_i|`.
pub fn density_from_mixture<T: Scalar>(mixture: &EnsembleMixture<T>) -> DensityMatrix<T> {
    mixture.density()
}

/// `Tr(rho^2)`; equals the squared Frobenius norm for Hermitian input.
pub fn purity<T: Scalar>(rho: &DensityMatrix<T>) -> T {
    let f = rho.matrix().frobenius_norm();
    f * f
}

/// Von Neumann entropy `-sum w ln w` in nats; zero eigenvalues contribute
/// nothing (x ln x -> 0).
pub fn von_neumann_entropy<T: Scalar>(rho: &DensityMatrix<T>) -> Result<T> {
    let eig = hermitian_eig(rho.matrix())?;
    Ok(eig
        .eigenvalues
        .iter()
        .filter(|&&w| w > T::zero())
        .map(|&w| -w * w.ln())
        .sum())
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(a) b sqrt(a)))^2`; symmetric in its
/// arguments up to roundoff.
pub fn fidelity<T: Scalar>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity operands",
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let ra = hermitian_power(a.matrix(), T::real(0.5))?;
    let inner = ra.matmul(b.matrix()).matmul(&ra).symmetrize();
    let eig = hermitian_eig(&inner)?;
    let root_sum: T = eig
        .eigenvalues
        .iter()
        .map(|&w| if w > T::zero() { w.sqrt() } else { T::zero() })
        .sum();
    Ok(root_sum * root_sum)
}

/// Pure or mixed result of the named-state catalog.
#[derive(Debug, Clone)]
pub enum StateValue<T: Scalar> {
    Pure(StateVector<T>),
    Mixed(DensityMatrix<T>),
}

impl<T: Scalar> StateValue<T> {
    pub fn into_density(self) -> DensityMatrix<T> {
        match self {
            StateValue::Pure(psi) => density_from_pure(&psi),
            StateValue::Mixed(rho) => rho,
        }
    }

    pub fn as_pure(&self) -> Option<&StateVector<T>> {
        match self {
            StateValue::Pure(psi) => Some(psi),
            StateValue::Mixed(_) => None,
        }
    }
}

/// Named state catalog.
///
/// `dim` is the expected total Hilbert-space dimension; families with a
/// fixed dimension reject anything else, `basis(k)` uses it directly.
/// Two-qubit families: `bell_phi_plus`, `partially_entangled(p)` with
/// `sqrt(p)|00> + sqrt(1-p)|11>`, and the mixed `werner(p)`.
pub fn named_state<T: Scalar>(name: &str, params: &[T], dim: usize) -> Result<StateValue<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let expect_dim = |required: usize| -> Result<()> {
        if dim == required {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                context: "named state dimension",
                expected: required,
                found: dim,
            })
        }
    };
    let expect_params = |required: usize| -> Result<()> {
        if params.len() == required {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                context: "named state parameter count",
                expected: required,
                found: params.len(),
            })
        }
    };

    match name {
        "bell_phi_plus" => {
            expect_dim(4)?;
            expect_params(0)?;
            let r = Complex::new(T::one() / T::real(2.0).sqrt(), T::zero());
            Ok(StateValue::Pure(StateVector::new(vec![r, zero, zero, r])?))
        }
        "partially_entangled" => {
            expect_dim(4)?;
            expect_params(1)?;
            let p = params[0];
            if p < T::zero() || p > T::one() {
                return Err(Error::ParameterOutOfRange {
                    name: "p",
                    value: p.to_f64().unwrap_or(f64::NAN),
                    constraint: "0 <= p <= 1",
                });
            }
            let a = Complex::new(p.sqrt(), T::zero());
            let b = Complex::new((T::one() - p).sqrt(), T::zero());
            Ok(StateValue::Pure(StateVector::new(vec![a, zero, zero, b])?))
        }
        "werner" => {
            expect_dim(4)?;
            expect_params(1)?;
            let p = params[0];
            if p < T::zero() || p > T::one() {
                return Err(Error::ParameterOutOfRange {
                    name: "p",
                    value: p.to_f64().unwrap_or(f64::NAN),
                    constraint: "0 <= p <= 1",
                });
            }
            let bell = match named_state::<T>("bell_phi_plus", &[], 4)? {
                StateValue::Pure(psi) => psi.outer(),
                StateValue::Mixed(_) => unreachable!(),
            };
            let iso = ComplexMatrix::identity(4).scale_re((T::one() - p) / T::real(4.0));
            let m = &bell.scale_re(p) + &iso;
            Ok(StateValue::Mixed(DensityMatrix::new(m, Some(vec![2, 2]))?))
        }
        "basis" => {
            expect_params(1)?;
            let kf = params[0];
            let k = kf.to_usize().filter(|&k| {
                T::from_usize(k).map(|back| back == kf).unwrap_or(false) && k < dim
            });
            let k = k.ok_or(Error::ParameterOutOfRange {
                name: "k",
                value: kf.to_f64().unwrap_or(f64::NAN),
                constraint: "integer basis index below the dimension",
            })?;
            let mut amplitudes = vec![zero; dim];
            amplitudes[k] = Complex::new(T::one(), T::zero());
            Ok(StateValue::Pure(StateVector::new(amplitudes)?))
        }
        "plus" => {
            expect_dim(2)?;
            expect_params(0)?;
            let r = Complex::new(T::one() / T::real(2.0).sqrt(), T::zero());
            Ok(StateValue::Pure(StateVector::new(vec![r, r])?))
        }
        other => Err(Error::UnknownState {
            name: other.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mixed_qubit() -> DensityMatrix<f64> {
        DensityMatrix::new(
            M::from_real_im(2, 2, &[(0.75, 0.0), (0.25, 0.0), (0.25, 0.0), (0.25, 0.0)]),
            None,
        )
        .unwrap()
    }

    #[test]
    fn state_vector_validates_norm() {
        assert!(StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).is_ok());
        assert!(matches!(
            StateVector::new(vec![c(1.0, 0.0), c(0.5, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn density_from_partially_entangled_has_expected_corners() {
        let psi = named_state::<f64>("partially_entangled", &[0.75], 4)
            .unwrap()
            .as_pure()
            .cloned()
            .unwrap();
        let rho = density_from_pure(&psi);
        let m = rho.matrix();
        assert!((m.get(0, 0).re - 0.75).abs() < 1e-14);
        assert!((m.get(3, 3).re - 0.25).abs() < 1e-14);
        assert!((m.get(0, 3).re - 0.1875f64.sqrt()).abs() < 1e-14);
        assert!(m.get(0, 3).im.abs() < 1e-15);
    }

    #[test]
    fn reduced_partially_entangled_is_diagonal() {
        let rho = named_state::<f64>("partially_entangled", &[0.75], 4)
            .unwrap()
            .into_density()
            .with_structure(vec![2, 2])
            .unwrap();
        let ra = rho.reduce(0).unwrap();
        assert!(ra.matrix().max_abs_diff(&M::diagonal(&[0.75, 0.25])) < 1e-14);
        let rb = rho.reduce(1).unwrap();
        assert!(rb.matrix().max_abs_diff(&M::diagonal(&[0.75, 0.25])) < 1e-14);
    }

    #[test]
    fn documented_mixture_density() {
        // {(1/2)|0>, (1/2)|+>} assembles to [[0.75, 0.25], [0.25, 0.25]]
        let zero_state = StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let plus = StateVector::new(vec![c(1.0 / 2.0f64.sqrt(), 0.0); 2]).unwrap();
        let mix = EnsembleMixture::new(vec![(0.5, zero_state), (0.5, plus)]).unwrap();
        let rho = density_from_mixture(&mix);
        assert!(rho.matrix().max_abs_diff(mixed_qubit().matrix()) < 1e-15);
    }

    #[test]
    fn mixture_rejects_bad_weights_and_dims() {
        let zero_state = StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(
            EnsembleMixture::new(vec![(0.6, zero_state.clone()), (0.6, zero_state.clone())]),
            Err(Error::InvalidWeights { .. })
        ));
        let q3 = StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(
            EnsembleMixture::new(vec![(0.5, zero_state), (0.5, q3)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn purity_of_documented_mixture() {
        assert!((purity(&mixed_qubit()) - 0.75).abs() < 1e-14);
    }

    #[test]
    fn entropy_of_diagonal_mixture() {
        let rho = DensityMatrix::new(M::diagonal(&[0.75, 0.25]), None).unwrap();
        let want = -(0.75f64.ln() * 0.75 + 0.25f64.ln() * 0.25);
        assert!((von_neumann_entropy(&rho).unwrap() - want).abs() < 1e-12);
        assert!((want - 0.562335144619).abs() < 1e-9);
    }

    #[test]
    fn entropy_of_pure_state_is_zero() {
        let psi = StateVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let s = von_neumann_entropy(&density_from_pure(&psi)).unwrap();
        assert!(s.abs() < 1e-12);
    }

    #[test]
    fn fidelity_basis_vs_maximally_mixed() {
        let zero_proj = DensityMatrix::new(M::diagonal(&[1.0, 0.0]), None).unwrap();
        let mixed = DensityMatrix::new(M::identity(2).scale_re(0.5), None).unwrap();
        let f = fidelity(&zero_proj, &mixed).unwrap();
        assert!((f - 0.5).abs() < 1e-12);
        let g = fidelity(&mixed, &zero_proj).unwrap();
        assert!((f - g).abs() < 1e-12);
    }

    #[test]
    fn density_validation_rejects_invalid_input() {
        let not_trace_one = M::diagonal(&[0.9, 0.2]);
        assert!(matches!(
            DensityMatrix::new(not_trace_one, None),
            Err(Error::InvalidTrace { .. })
        ));
        let not_psd = M::diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(not_psd, None),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
        let not_herm = M::from_real_im(2, 2, &[(0.5, 0.0), (0.5, 0.0), (0.0, 0.0), (0.5, 0.0)]);
        assert!(matches!(
            DensityMatrix::new(not_herm, None),
            Err(Error::NotHermitian { .. })
        ));
        let bad_structure = DensityMatrix::new(M::identity(4).scale_re(0.25), Some(vec![3, 2]));
        assert!(matches!(bad_structure, Err(Error::StructureMismatch { .. })));
    }

    #[test]
    fn eigen_mixture_reassembles_state() {
        let rho = mixed_qubit();
        let mix = rho.eigen_mixture().unwrap();
        assert_eq!(mix.members().len(), 2);
        let back = mix.density();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-13);
    }

    #[test]
    fn named_states_resolve() {
        let bell = named_state::<f64>("bell_phi_plus", &[], 4).unwrap();
        let rho = bell.into_density();
        assert!((rho.matrix().get(0, 3).re - 0.5).abs() < 1e-15);

        let w = named_state::<f64>("werner", &[1.0], 4).unwrap().into_density();
        assert!((w.matrix().get(0, 3).re - 0.5).abs() < 1e-15);
        let w0 = named_state::<f64>("werner", &[0.0], 4).unwrap().into_density();
        assert!(w0.matrix().max_abs_diff(&M::identity(4).scale_re(0.25)) < 1e-15);

        let b2 = named_state::<f64>("basis", &[2.0], 3).unwrap();
        assert_eq!(b2.as_pure().unwrap().amplitudes()[2], c(1.0, 0.0));

        assert!(matches!(
            named_state::<f64>("basis", &[3.0], 3),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(matches!(
            named_state::<f64>("nope", &[], 2),
            Err(Error::UnknownState { .. })
        ));
        assert!(matches!(
            named_state::<f64>("plus", &[], 4),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            named_state::<f64>("werner", &[1.5], 4),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }
}
