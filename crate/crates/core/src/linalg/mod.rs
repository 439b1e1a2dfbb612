//! Dense complex linear algebra used by every exact computation.
//!
//! Matrices are stored densely as [`nalgebra::DMatrix`] over `Complex64`.
//! Hermitian generators are exponentiated through their spectral
//! decomposition, and operator norms come either from the eigenvalues of
//! `X†X` (small dimensions) or from a Lanczos iteration on `X†X`.

mod lanczos;

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use lanczos::{top_singular_value, LANCZOS_TOLERANCE};

/// Largest dimension handled by the dense `X†X` eigenvalue route in
/// [`operator_norm`]; larger matrices go through Lanczos.
pub const DENSE_NORM_MAX_DIM: usize = 64;

/// Relative Hermiticity tolerance: `max |M - M†| <= 1e-10 (1 + max |M|)`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

const EIG_MAX_ITERATIONS: usize = 10_000;

/// Anything that can act on a dense complex vector, together with its adjoint.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `out = self * x`; `out` is overwritten.
    fn apply_into(&self, x: &[Complex64], out: &mut [Complex64]);

    /// `out = self† * x`; `out` is overwritten.
    fn apply_adjoint_into(&self, x: &[Complex64], out: &mut [Complex64]);

    fn apply(&self, x: &StateVector) -> StateVector {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        self.apply_into(x.as_slice(), &mut out);
        StateVector::from_vec(out)
    }
}

/// Square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Wraps a dense matrix, rejecting non-square or non-finite input.
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = inner.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::Empty);
        }
        for c in 0..cols {
            for r in 0..rows {
                let z = inner[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Builds a matrix from row-major nested vectors.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(dim, dim, |r, c| rows[r][c]))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            inner: &self.inner * factor,
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// `max |M - M†|` over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut defect = 0.0_f64;
        for c in 0..d {
            for r in 0..=c {
                defect = defect.max((self.inner[(r, c)] - self.inner[(c, r)].conj()).norm());
            }
        }
        defect
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            inner: &self.inner * &other.inner,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            inner: &self.inner - &other.inner,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        ensure_same_dim(self.dim(), other.dim())?;
        Ok(Self {
            inner: &self.inner + &other.inner,
        })
    }

    pub fn mul_vector(&self, v: &StateVector) -> Result<StateVector> {
        ensure_same_dim(self.dim(), v.dim())?;
        Ok(StateVector {
            inner: &self.inner * &v.inner,
        })
    }

    /// Operator-norm distance from unitarity, `‖U†U − I‖`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.inner.adjoint() * &self.inner;
        let defect = Self {
            inner: gram - DMatrix::identity(self.dim(), self.dim()),
        };
        operator_norm(&defect)
    }
}

fn ensure_same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on dimension mismatch; use [`ComplexMatrix::checked_mul`] for fallible code.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.checked_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl LinearOperator for ComplexMatrix {
    fn dim(&self) -> usize {
        self.inner.nrows()
    }

    fn apply_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim();
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        // column-major storage: accumulate column by column
        for (c, &xc) in x.iter().enumerate().take(d) {
            if xc == Complex64::new(0.0, 0.0) {
                continue;
            }
            let column = self.inner.column(c);
            for (o, m) in out.iter_mut().zip(column.iter()) {
                *o += m * xc;
            }
        }
    }

    fn apply_adjoint_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (c, o) in out.iter_mut().enumerate() {
            let column = self.inner.column(c);
            *o = column.iter().zip(x).map(|(m, xi)| m.conj() * xi).sum();
        }
    }
}

/// Dense complex state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    inner: DVector<Complex64>,
}

impl StateVector {
    pub fn from_vec(amplitudes: Vec<Complex64>) -> Self {
        Self {
            inner: DVector::from_vec(amplitudes),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DVector::zeros(dim),
        }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.inner[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.inner.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.inner.as_slice()
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        self.inner.as_mut_slice()
    }

    pub fn as_dvector(&self) -> &DVector<Complex64> {
        &self.inner
    }

    pub fn norm(&self) -> f64 {
        self.inner.norm()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.inner.dotc(&other.inner)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self {
            inner: &self.inner / Complex64::new(n, 0.0),
        })
    }

    /// Checks `|‖v‖ − 1| <= 1e-12`.
    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() <= 1e-12 {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm: n })
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            inner: &self.inner * factor,
        }
    }

    pub fn axpy(&mut self, alpha: Complex64, x: &Self) {
        self.inner.axpy(alpha, &x.inner, Complex64::new(1.0, 0.0));
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            inner: &self.inner - &other.inner,
        }
    }

    pub fn get(&self, index: usize) -> Complex64 {
        self.inner[index]
    }
}

/// Hermitian matrix, validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    /// Rejects (never symmetrizes) matrices whose Hermiticity defect exceeds
    /// [`HERMITICITY_TOLERANCE`]` * (1 + max |entry|)`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        let tolerance = HERMITICITY_TOLERANCE * (1.0 + matrix.max_abs());
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        Ok(Self {
            matrix,
            hermiticity_defect: defect,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Self::new(self.matrix.checked_add(&other.matrix)?)
    }

    /// Hermitian eigendecomposition, see [`hermitian_eig`].
    pub fn eig(&self) -> Result<SpectralDecomposition> {
        hermitian_eig(self)
    }

    /// `e^{-itH}`, see [`evolve`].
    pub fn evolve(&self, t: f64) -> Result<ComplexMatrix> {
        evolve(self, t)
    }
}

impl LinearOperator for HermitianOperator {
    fn dim(&self) -> usize {
        self.matrix.dim()
    }

    fn apply_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        self.matrix.apply_into(x, out)
    }

    fn apply_adjoint_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        self.matrix.apply_into(x, out)
    }
}

/// Eigenvalues (ascending) with orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    values: Vec<f64>,
    vectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, index: usize) -> StateVector {
        StateVector {
            inner: self.vectors.column(index).into_owned(),
        }
    }

    pub fn vectors(&self) -> Vec<StateVector> {
        (0..self.dim()).map(|i| self.vector(i)).collect()
    }

    /// Largest eigenvalue modulus, i.e. the operator norm of the decomposed matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `V diag(e^{-itλ}) V†`; exactly the identity at `t = 0`.
    pub fn evolve(&self, t: f64) -> ComplexMatrix {
        if t == 0.0 {
            return ComplexMatrix::identity(self.vectors.nrows());
        }
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -t * lambda);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
        ComplexMatrix {
            inner: scaled * self.vectors.adjoint(),
        }
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending; ties keep
/// the solver's original index order.
pub fn hermitian_eig(op: &HermitianOperator) -> Result<SpectralDecomposition> {
    let eig = SymmetricEigen::try_new(op.matrix.inner.clone(), f64::EPSILON, EIG_MAX_ITERATIONS)
        .ok_or(Error::EigenConvergence {
            iterations: EIG_MAX_ITERATIONS,
        })?;
    let mut order: Vec<usize> = (0..op.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(op.dim(), op.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralDecomposition { values, vectors })
}

/// `e^{-itH}` through the spectral decomposition of `H`.
pub fn evolve(op: &HermitianOperator, t: f64) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(op)?.evolve(t))
}

/// `XY − YX`.
pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    ensure_same_dim(x.dim(), y.dim())?;
    let xy = &x.inner * &y.inner;
    let yx = &y.inner * &x.inner;
    Ok(ComplexMatrix { inner: xy - yx })
}

/// Largest singular value.
///
/// Dimensions up to [`DENSE_NORM_MAX_DIM`] use the eigenvalues of `X†X`;
/// above that a Lanczos iteration on `X†X` is used.
pub fn operator_norm(x: &ComplexMatrix) -> f64 {
    if x.dim() <= DENSE_NORM_MAX_DIM {
        let gram = x.inner.adjoint() * &x.inner;
        // gram is Hermitian by construction; the symmetric solver only reads
        // the lower triangle
        let eig = SymmetricEigen::new(gram);
        let top = eig.eigenvalues.iter().fold(0.0_f64, |m, &v| m.max(v));
        top.sqrt()
    } else {
        top_singular_value(x).expect("Lanczos iteration on a finite matrix")
    }
}

/// `sqrt(tr(X†X))`.
pub fn frobenius_norm(x: &ComplexMatrix) -> f64 {
    x.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
