//! Dense complex matrices in row-major layout.
//!
//! Sized for desk-scale quantum systems (total dimension <= 64); everything
//! is O(n^3) dense arithmetic with no sparsity or blocking.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Scalar> {
    data: Vec<Complex<T>>,
    rows: usize,
    cols: usize,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Builds a matrix from row-major data. Panics if the element count does
    /// not match `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "row-major data length must be rows*cols"
        );
        Self { data, rows, cols }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
            rows,
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    /// Square matrix with the given real diagonal.
    pub fn diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex::new(d, T::zero()));
        }
        m
    }

    /// Builds from rows of `(re, im)` pairs; panics on ragged input.
    pub fn from_real_im(rows: usize, cols: usize, entries: &[(T, T)]) -> Self {
        let data = entries.iter().map(|&(re, im)| Complex::new(re, im)).collect();
        Self::new(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix; errors otherwise.
    pub fn dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> Complex<T> {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).fold(Complex::new(T::zero(), T::zero()), |acc, i| {
            acc + self.get(i, i)
        })
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Hermitian part `(m + m^dag)/2`.
    pub fn symmetrize(&self) -> Self {
        assert!(self.is_square(), "symmetrize requires a square matrix");
        let half = T::real(0.5);
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = (self.get(i, j) + self.get(j, i).conj()).scale(half);
                out.set(i, j, v);
            }
        }
        out
    }

    /// Max-abs difference from the adjoint; zero for exactly Hermitian input.
    pub fn hermiticity_defect(&self) -> T {
        assert!(self.is_square(), "hermiticity defect requires a square matrix");
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol
    }

    /// Errors with the measured defect unless Hermitian within `tol`.
    pub fn require_hermitian(&self, tol: T) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                defect: defect.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul dimension mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                    acc + self.get(i, j) * v[j]
                })
            })
            .collect()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let data = self.data.iter().map(|&v| v * s).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale_re(&self, s: T) -> Self {
        let data = self.data.iter().map(|&v| v.scale(s)).collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|v| v.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut worst = T::zero();
        for (a, b) in self.data.iter().zip(&other.data) {
            let d = (*a - *b).norm();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// Conjugation `u * self * u^dag`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.matmul(self).matmul(&u.adjoint())
    }

    /// Checks `u^dag u = I` within `tol` (max-abs).
    pub fn is_unitary(&self, tol: T) -> bool {
        if !self.is_square() {
            return false;
        }
        let prod = self.adjoint().matmul(self);
        prod.max_abs_diff(&Self::identity(self.rows)) <= tol
    }
}

/// Kronecker product in row-major convention:
/// `(a tensor b)[i*rb + k, j*cb + l] = a[i,j] * b[k,l]`.
pub fn tensor_product<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a.get(i, j);
            if aij.norm_sqr() == T::zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out.set(i * rb + k, j * cb + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Partial trace keeping subsystem `keep` of a state on `dims` subsystems.
///
/// `m` must be square with side `prod(dims)`. The result has side
/// `dims[keep]` and satisfies `R[a,b] = sum_rest m[(a,rest),(b,rest)]`.
pub fn partial_trace<T: Scalar>(
    m: &ComplexMatrix<T>,
    dims: &[usize],
    keep: usize,
) -> Result<ComplexMatrix<T>> {
    let n = m.dim()?;
    let total: usize = dims.iter().product();
    if total != n || dims.contains(&0) {
        return Err(Error::StructureMismatch {
            structure: dims.to_vec(),
            dim: n,
        });
    }
    if keep >= dims.len() {
        return Err(Error::SubsystemOutOfRange {
            index: keep,
            count: dims.len(),
        });
    }

    let dk = dims[keep];
    // stride of the kept slot, and the row strides of all other slots
    let mut strides = vec![0usize; dims.len()];
    let mut acc = 1usize;
    for (s, &d) in strides.iter_mut().zip(dims.iter()).rev() {
        *s = acc;
        acc *= d;
    }
    let keep_stride = strides[keep];
    let rest: Vec<(usize, usize)> = dims
        .iter()
        .zip(&strides)
        .enumerate()
        .filter(|&(slot, _)| slot != keep)
        .map(|(_, (&d, &s))| (d, s))
        .collect();
    let rest_count: usize = rest.iter().map(|&(d, _)| d).product();

    let mut out = ComplexMatrix::zeros(dk, dk);
    for r in 0..rest_count {
        // decode r into a base offset over the traced-out slots
        let mut base = 0usize;
        let mut rem = r;
        for &(d, s) in rest.iter().rev() {
            base += (rem % d) * s;
            rem /= d;
        }
        for a in 0..dk {
            let row = base + a * keep_stride;
            for b in 0..dk {
                let col = base + b * keep_stride;
                let v = out.get(a, b) + m.get(row, col);
                out.set(a, b, v);
            }
        }
    }
    Ok(out)
}

/// Places `op` on subsystem `slot` of a system with the given dims,
/// tensoring identities on every other slot.
pub fn embed<T: Scalar>(
    op: &ComplexMatrix<T>,
    dims: &[usize],
    slot: usize,
) -> Result<ComplexMatrix<T>> {
    if slot >= dims.len() {
        return Err(Error::SubsystemOutOfRange {
            index: slot,
            count: dims.len(),
        });
    }
    let d = op.dim()?;
    if d != dims[slot] {
        return Err(Error::DimensionMismatch {
            context: "embed operator vs slot dimension",
            expected: dims[slot],
            found: d,
        });
    }
    let left: usize = dims[..slot].iter().product();
    let right: usize = dims[slot + 1..].iter().product();
    let mut out = tensor_product(&ComplexMatrix::identity(left), op);
    if right > 1 {
        out = tensor_product(&out, &ComplexMatrix::identity(right));
    }
    Ok(out)
}

impl<T: Scalar> std::ops::Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

impl<T: Scalar> std::ops::Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

impl<T: Scalar> std::ops::Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}
