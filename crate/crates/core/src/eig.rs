//! Hermitian eigendecomposition and matrix functions derived from it.
//!
//! The solver is a cyclic complex Jacobi iteration: each off-diagonal entry
//! is phased to a real value and annihilated by a 2x2 Givens rotation. At the
//! target sizes (n <= 64) this is simple, accurate to near machine precision,
//! and has no external dependencies. Inputs are Hermiticity-checked against
//! [`Scalar::hermiticity_tol`] and then symmetrized, so roundoff-level
//! asymmetry never propagates into results.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 64;

/// Eigensystem of a Hermitian matrix: `m = V diag(eigenvalues) V^dag` with
/// unitary `V` (column k is the eigenvector for `eigenvalues[k]`), sorted
/// ascending.
#[derive(Debug, Clone)]
pub struct EigDecomposition<T: Scalar> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Scalar> EigDecomposition<T> {
    /// Reassembles `V f(diag) V^dag` for a real function of the eigenvalues.
    pub fn apply_real(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        self.recompose(|w| Complex::new(f(w), T::zero()))
    }

    /// Reassembles `V f(diag) V^dag` for a complex function of the eigenvalues.
    pub fn recompose(&self, f: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk.norm_sqr() == T::zero() {
                continue;
            }
            for i in 0..n {
                let vik = v.get(i, k) * fk;
                for j in 0..n {
                    let val = out.get(i, j) + vik * v.get(j, k).conj();
                    out.set(i, j, val);
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Errors if `m` is not square or departs from Hermiticity by more than the
/// scalar's tolerance; the iteration itself always converges for Hermitian
/// input (off-diagonal mass strictly decreases).
pub fn hermitian_eig<T: Scalar>(m: &ComplexMatrix<T>) -> Result<EigDecomposition<T>> {
    m.require_hermitian(T::hermiticity_tol())?;
    let n = m.dim()?;
    let mut a = m.symmetrize();
    let mut v = ComplexMatrix::identity(n);

    if n == 1 {
        return Ok(EigDecomposition {
            eigenvalues: vec![a.get(0, 0).re],
            eigenvectors: v,
        });
    }

    let scale = a.frobenius_norm().max(T::min_positive_value());
    let target = scale * T::epsilon();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        let two = T::real(2.0);
        if (two * off).sqrt() <= target {
            converged = true;
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, target);
            }
        }
    }
    if !converged {
        // one final check: the loop may have converged on its last sweep
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if (T::real(2.0) * off).sqrt() > target * T::real(100.0) {
            return Err(Error::EigConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let eigenvalues: Vec<T> = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors.set(i, dst, v.get(i, src));
        }
    }
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Annihilates `a[p][q]` with the unitary `J = P(phi) R(theta)` and applies
/// the same rotation to the eigenvector accumulator.
fn rotate<T: Scalar>(
    a: &mut ComplexMatrix<T>,
    v: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    threshold: T,
) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r <= threshold * T::real(1e-3) {
        return;
    }
    // phase e^{i phi} = a_pq / |a_pq| maps the block to a real symmetric one
    let phase = apq.unscale(r);
    let alpha = a.get(p, p).re;
    let gamma = a.get(q, q).re;

    let tau = (gamma - alpha) / (T::real(2.0) * r);
    let t = {
        let s = if tau >= T::zero() { T::one() } else { -T::one() };
        s / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    let n = a.rows();
    // rows: row_p' = c row_p - s e^{i phi} row_q ; row_q' = s row_p + c e^{i phi} row_q
    let phase_s = phase.scale(s);
    let phase_c = phase.scale(c);
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj.scale(c) - phase_s * aqj);
        a.set(q, j, apj.scale(s) + phase_c * aqj);
    }
    // cols: col_p' = c col_p - s e^{-i phi} col_q ; col_q' = s col_p + c e^{-i phi} col_q
    let phase_conj_s = phase.conj().scale(s);
    let phase_conj_c = phase.conj().scale(c);
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip.scale(c) - phase_conj_s * aiq);
        a.set(i, q, aip.scale(s) + phase_conj_c * aiq);
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip.scale(c) - phase_conj_s * viq);
        v.set(i, q, vip.scale(s) + phase_conj_c * viq);
    }
    // the rotation zeroes the pivot exactly; clear roundoff residue
    a.set(p, q, Complex::new(T::zero(), T::zero()));
    a.set(q, p, Complex::new(T::zero(), T::zero()));
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    a.set(p, p, Complex::new(app.re, T::zero()));
    a.set(q, q, Complex::new(aqq.re, T::zero()));
}

/// Fractional (or any real) power of a Hermitian PSD matrix via its
/// eigensystem, with the convention `0^q = 0`.
///
/// Eigenvalues in `[-psd_clip_tol, 0)` are clipped to zero; anything more
/// negative is rejected as a corrupted state.
pub fn hermitian_power<T: Scalar>(m: &ComplexMatrix<T>, q: T) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eig(m)?;
    let clip = T::psd_clip_tol();
    let mut clipped = Vec::with_capacity(eig.eigenvalues.len());
    for &w in &eig.eigenvalues {
        if w < -clip {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: w.to_f64().unwrap_or(f64::NAN),
            });
        }
        clipped.push(if w < T::zero() { T::zero() } else { w });
    }
    let dec = EigDecomposition {
        eigenvalues: clipped,
        eigenvectors: eig.eigenvectors,
    };
    Ok(dec.apply_real(|w| if w == T::zero() { T::zero() } else { w.powf(q) }))
}

/// Like [`hermitian_power`] but tolerant of slightly indefinite input.
/// Internal stage states of multi-stage integrators sit slightly off the
/// physical manifold; their powers must be regularized, not refused.
///
/// Integer exponents use plain repeated multiplication: the polynomial
/// extension is smooth through zero, whereas projecting roundoff-negative
/// eigenvalues onto the cone would inject O(|lambda_min|) noise into the
/// right-hand side of every stage. Fractional exponents have no smooth
/// extension, so there the negative part is clipped away.
pub(crate) fn hermitian_power_lenient<T: Scalar>(
    m: &ComplexMatrix<T>,
    q: T,
) -> Result<ComplexMatrix<T>> {
    let rounded = q.round();
    if (q - rounded).abs() < T::real(1e-12) && rounded >= T::one() && rounded <= T::real(16.0) {
        let n = rounded.to_f64().unwrap_or(1.0) as u32;
        let mut out = m.clone();
        for _ in 1..n {
            out = out.matmul(m);
        }
        return Ok(out);
    }
    let eig = hermitian_eig(m)?;
    Ok(eig.apply_real(|w| if w <= T::zero() { T::zero() } else { w.powf(q) }))
}

/// `exp(-i s g)` for Hermitian `g`; exactly unitary up to roundoff because it
/// is assembled from an orthonormal eigenbasis with unit-modulus weights.
pub fn unitary_exponential<T: Scalar>(g: &ComplexMatrix<T>, s: T) -> Result<ComplexMatrix<T>> {
    let eig = hermitian_eig(g)?;
    Ok(eig.recompose(|w| Complex::from_polar(T::one(), -s * w)))
}

/// Trace-norm distance `(1/2) sum |lambda_i(a - b)|` between Hermitian
/// operators.
pub fn trace_norm_distance<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    let na = a.dim()?;
    let nb = b.dim()?;
    if na != nb {
        return Err(Error::DimensionMismatch {
            context: "trace_norm_distance operands",
            expected: na,
            found: nb,
        });
    }
    a.require_hermitian(T::hermiticity_tol())?;
    b.require_hermitian(T::hermiticity_tol())?;
    let eig = hermitian_eig(&(a - b))?;
    let half = T::real(0.5);
    Ok(eig.eigenvalues.iter().map(|w| w.abs()).sum::<T>() * half)
}
