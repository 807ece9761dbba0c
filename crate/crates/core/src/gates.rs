//! Standard single-qubit operators.

use num_complex::Complex;

use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;

pub fn pauli_x<T: Scalar>() -> ComplexMatrix<T> {
    let (z, o) = (T::zero(), T::one());
    ComplexMatrix::from_real_im(2, 2, &[(z, z), (o, z), (o, z), (z, z)])
}

pub fn pauli_y<T: Scalar>() -> ComplexMatrix<T> {
    let (z, o) = (T::zero(), T::one());
    ComplexMatrix::from_real_im(2, 2, &[(z, z), (z, -o), (z, o), (z, z)])
}

pub fn pauli_z<T: Scalar>() -> ComplexMatrix<T> {
    let (z, o) = (T::zero(), T::one());
    ComplexMatrix::from_real_im(2, 2, &[(o, z), (z, z), (z, z), (-o, z)])
}

pub fn hadamard<T: Scalar>() -> ComplexMatrix<T> {
    let s = T::one() / T::real(2.0).sqrt();
    let z = T::zero();
    ComplexMatrix::from_real_im(2, 2, &[(s, z), (s, z), (s, z), (-s, z)])
}

/// One-qubit operator by letter; `I`, `X`, `Y`, `Z` (case-insensitive).
pub fn pauli_by_letter<T: Scalar>(letter: char) -> Option<ComplexMatrix<T>> {
    match letter.to_ascii_uppercase() {
        'I' => Some(ComplexMatrix::identity(2)),
        'X' => Some(pauli_x()),
        'Y' => Some(pauli_y()),
        'Z' => Some(pauli_z()),
        _ => None,
    }
}

/// `|k><k|` projector in the computational basis of the given dimension.
pub fn basis_projector<T: Scalar>(dim: usize, k: usize) -> ComplexMatrix<T> {
    assert!(k < dim, "basis index out of range");
    let mut m = ComplexMatrix::zeros(dim, dim);
    m.set(k, k, Complex::new(T::one(), T::zero()));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paulis_are_hermitian_and_unitary() {
        for m in [pauli_x::<f64>(), pauli_y(), pauli_z(), hadamard()] {
            assert!(m.is_hermitian(1e-15));
            assert!(m.is_unitary(1e-15));
        }
    }

    #[test]
    fn letters_resolve() {
        assert!(pauli_by_letter::<f64>('x').unwrap().max_abs_diff(&pauli_x()) < 1e-15);
        assert!(pauli_by_letter::<f64>('Q').is_none());
    }
}
