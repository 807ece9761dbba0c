//! Seeded random states and operators.
//!
//! Every generator takes an explicit `u64` seed and builds its own ChaCha
//! stream, so outputs are reproducible across runs and platforms. Sampling
//! happens in f64 and is converted to the target scalar afterwards, keeping
//! f32 and f64 draws bitwise-aligned up to rounding.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::states::{DensityMatrix, EnsembleMixture, StateVector};

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn complex_normal<T: Scalar>(rng: &mut ChaCha12Rng) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::real(re), T::real(im))
}

/// Haar-uniform pure state: normalized complex Gaussian amplitudes.
pub fn random_pure_state<T: Scalar>(dim: usize, seed: u64) -> StateVector<T> {
    let mut r = rng(seed);
    let amplitudes: Vec<Complex<T>> = (0..dim).map(|_| complex_normal(&mut r)).collect();
    StateVector::normalized(amplitudes).expect("Gaussian draw is nonzero")
}

/// Random Hermitian operator `(B + B^dag)/2` from a complex Gaussian `B`,
/// rescaled to unit Frobenius norm so magnitudes are comparable across
/// dimensions.
pub fn random_hermitian<T: Scalar>(dim: usize, seed: u64) -> ComplexMatrix<T> {
    let mut r = rng(seed);
    let mut b = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            b.set(i, j, complex_normal(&mut r));
        }
    }
    let h = b.symmetrize();
    let norm = h.frobenius_norm();
    h.scale_re(T::one() / norm)
}

/// Haar-distributed unitary: modified Gram-Schmidt on a complex Ginibre
/// matrix. MGS yields the unique QR factor with positive diagonal R, which
/// makes Q exactly Haar.
pub fn haar_unitary<T: Scalar>(dim: usize, seed: u64) -> ComplexMatrix<T> {
    let mut r = rng(seed);
    let mut cols: Vec<Vec<Complex<T>>> = (0..dim)
        .map(|_| (0..dim).map(|_| complex_normal(&mut r)).collect())
        .collect();
    for j in 0..dim {
        let (done, rest) = cols.split_at_mut(j);
        let col_j = &mut rest[0];
        for col_i in done.iter() {
            let proj = col_i
                .iter()
                .zip(col_j.iter())
                .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                    acc + a.conj() * *b
                });
            for (x, c) in col_j.iter_mut().zip(col_i) {
                *x -= proj * *c;
            }
        }
        let norm = col_j
            .iter()
            .map(|a| a.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        for x in col_j.iter_mut() {
            *x = x.unscale(norm);
        }
    }
    let mut q = ComplexMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (k, &v) in col.iter().enumerate() {
            q.set(k, j, v);
        }
    }
    q
}

/// Random full-structure density operator `G G^dag / Tr(G G^dag)` from a
/// `dim x rank` Ginibre block.
pub fn random_density<T: Scalar>(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix<T>> {
    if rank == 0 || rank > dim {
        return Err(Error::ParameterOutOfRange {
            name: "rank",
            value: rank as f64,
            constraint: "1 <= rank <= dim",
        });
    }
    let mut r = rng(seed);
    let mut g = ComplexMatrix::zeros(dim, rank);
    for i in 0..dim {
        for j in 0..rank {
            g.set(i, j, complex_normal(&mut r));
        }
    }
    let w = g.matmul(&g.adjoint()).symmetrize();
    let tr = w.trace().re;
    DensityMatrix::new(w.scale_re(T::one() / tr), None)
}

/// Random pure-state decomposition of `rho` with `n_members` members.
///
/// Columns of a Haar unitary mix the eigen-ensemble: member j is the
/// normalization of `sum_i U[j,i] sqrt(w_i) |e_i>`, weighted by its squared
/// norm. Column orthonormality makes the ensemble reassemble `rho` exactly,
/// and `n_members` must be at least the rank.
pub fn random_decomposition<T: Scalar>(
    rho: &DensityMatrix<T>,
    n_members: usize,
    seed: u64,
) -> Result<EnsembleMixture<T>> {
    let eigen = rho.eigen_mixture()?;
    let rank = eigen.members().len();
    if n_members < rank {
        return Err(Error::ParameterOutOfRange {
            name: "n_members",
            value: n_members as f64,
            constraint: "at least the state's rank",
        });
    }
    let u = haar_unitary::<T>(n_members, seed);
    let dim = rho.dim();
    let mut members = Vec::with_capacity(n_members);
    let mut total = T::zero();
    for j in 0..n_members {
        let mut phi = vec![Complex::new(T::zero(), T::zero()); dim];
        for (i, (w, psi)) in eigen.members().iter().enumerate() {
            let coeff = u.get(j, i) * Complex::new(w.sqrt(), T::zero());
            for (slot, amp) in phi.iter_mut().zip(psi.amplitudes()) {
                *slot += coeff * *amp;
            }
        }
        let weight = phi.iter().map(|a| a.norm_sqr()).fold(T::zero(), |a, b| a + b);
        if weight > T::real(1e-30) {
            total += weight;
            members.push((weight, StateVector::normalized(phi)?));
        }
    }
    let members = members
        .into_iter()
        .map(|(w, psi)| (w / total, psi))
        .collect();
    EnsembleMixture::new(members)
}

/// Pure bipartite state on `dim x ancilla_dim` whose first reduced state is
/// `rho`. A Haar unitary seeded by `seed` scrambles the ancilla, so distinct
/// seeds give genuinely different extensions with the same reduction.
pub fn purification<T: Scalar>(
    rho: &DensityMatrix<T>,
    ancilla_dim: usize,
    seed: u64,
) -> Result<StateVector<T>> {
    let eigen = rho.eigen_mixture()?;
    let rank = eigen.members().len();
    if ancilla_dim < rank {
        return Err(Error::ParameterOutOfRange {
            name: "ancilla_dim",
            value: ancilla_dim as f64,
            constraint: "at least the state's rank",
        });
    }
    let v = haar_unitary::<T>(ancilla_dim, seed);
    let dim = rho.dim();
    let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim * ancilla_dim];
    for (i, (w, psi)) in eigen.members().iter().enumerate() {
        let root = Complex::new(w.sqrt(), T::zero());
        for (a, amp) in psi.amplitudes().iter().enumerate() {
            for b in 0..ancilla_dim {
                // ancilla ket V|i>, entry b, tensor slot (a, b)
                amplitudes[a * ancilla_dim + b] += root * *amp * v.get(b, i);
            }
        }
    }
    StateVector::normalized(amplitudes)
}
