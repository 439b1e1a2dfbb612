//! Product formulas and the exact error metrics.
//!
//! For a splitting `H = A + B` the first-order formula is
//! `T_n(t) = (e^{-i(t/n)A} e^{-i(t/n)B})^n` and the symmetric second-order
//! formula is `(e^{-i(t/2n)A} e^{-i(t/n)B} e^{-i(t/2n)A})^n`. The norm error
//! is `b_n(t) = ‖T_n(t) − e^{-itH}‖` and the error on an eigenstate
//! `Hφ = hφ` is `ξ_n(t; φ) = ‖T_n(t)φ − e^{-ith}φ‖`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    commutator, operator_norm, ComplexMatrix, HermitianOperator, LinearOperator,
    SpectralDecomposition, StateVector,
};

/// Relative eigenpair residual tolerance, `‖Hφ − hφ‖ <= 1e-8 (1 + ‖H‖)`.
pub const EIGENPAIR_TOLERANCE: f64 = 1e-8;

/// A Hamiltonian `H = A + B` split into two Hermitian parts.
///
/// Spectral decompositions of `A`, `B` and `H` are computed once at
/// construction so that every exponential afterwards is a pair of matrix
/// products.
#[derive(Clone, Debug)]
pub struct Splitting {
    a: HermitianOperator,
    b: HermitianOperator,
    h: HermitianOperator,
    spectrum_a: SpectralDecomposition,
    spectrum_b: SpectralDecomposition,
    spectrum_h: SpectralDecomposition,
}

impl Splitting {
    pub fn new(a: HermitianOperator, b: HermitianOperator) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: b.dim(),
            });
        }
        let h = a.checked_add(&b)?;
        Ok(Self {
            spectrum_a: a.eig()?,
            spectrum_b: b.eig()?,
            spectrum_h: h.eig()?,
            a,
            b,
            h,
        })
    }

    pub fn a(&self) -> &HermitianOperator {
        &self.a
    }

    pub fn b(&self) -> &HermitianOperator {
        &self.b
    }

    pub fn h(&self) -> &HermitianOperator {
        &self.h
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Eigenvalues of `H`, ascending.
    pub fn energies(&self) -> &[f64] {
        self.spectrum_h.values()
    }

    pub fn spectrum_h(&self) -> &SpectralDecomposition {
        &self.spectrum_h
    }

    /// `‖H‖`, read off the cached spectrum.
    pub fn h_norm(&self) -> f64 {
        self.spectrum_h.spectral_radius()
    }

    /// `‖A‖`, read off the cached spectrum.
    pub fn a_norm(&self) -> f64 {
        self.spectrum_a.spectral_radius()
    }

    /// `[A, B]`.
    pub fn commutator_ab(&self) -> ComplexMatrix {
        commutator(self.a.matrix(), self.b.matrix()).expect("equal dimensions")
    }

    /// The `index`-th eigenpair of `H` (ascending energy order).
    pub fn eigenpair(&self, index: usize) -> EigenPair {
        EigenPair {
            vector: self.spectrum_h.vector(index),
            value: self.spectrum_h.values()[index],
        }
    }

    /// Validates a user-supplied eigenpair of `H`.
    pub fn check_eigenpair(&self, vector: StateVector, value: f64) -> Result<EigenPair> {
        EigenPair::new(&self.h, self.h_norm(), vector, value)
    }

    /// `e^{-itH}`.
    pub fn exact_evolution(&self, t: f64) -> ComplexMatrix {
        self.spectrum_h.evolve(t)
    }

    /// `e^{-itA}`.
    pub fn evolve_a(&self, t: f64) -> ComplexMatrix {
        self.spectrum_a.evolve(t)
    }

    /// `e^{-itB}`.
    pub fn evolve_b(&self, t: f64) -> ComplexMatrix {
        self.spectrum_b.evolve(t)
    }

    /// First-order product `(e^{-i(t/n)A} e^{-i(t/n)B})^n`.
    pub fn trotter1(&self, t: f64, n: usize) -> Result<ComplexMatrix> {
        let tau = step_time(t, n)?;
        let step = &self.evolve_a(tau) * &self.evolve_b(tau);
        Ok(power(&step, n))
    }

    /// Second-order product `(e^{-i(t/2n)A} e^{-i(t/n)B} e^{-i(t/2n)A})^n`.
    pub fn trotter2(&self, t: f64, n: usize) -> Result<ComplexMatrix> {
        let tau = step_time(t, n)?;
        let half = self.evolve_a(tau / 2.0);
        let step = &(&half * &self.evolve_b(tau)) * &half;
        Ok(power(&step, n))
    }

    /// `b_n(t) = ‖T_n(t) − e^{-itH}‖`.
    pub fn norm_error(&self, t: f64, n: usize) -> Result<f64> {
        Ok(self.errors(t, n, None)?.norm)
    }

    /// `ξ_n(t; φ) = ‖T_n(t)φ − e^{-ith}φ‖`, applied vector-wise.
    pub fn state_error(&self, phi: &EigenPair, t: f64, n: usize) -> Result<f64> {
        let tau = step_time(t, n)?;
        self.ensure_eigenpair(phi)?;
        let (ea, eb) = (self.evolve_a(tau), self.evolve_b(tau));
        let mut v = phi.vector.clone();
        for _ in 0..n {
            v = ea.mul_vector(&eb.mul_vector(&v)?)?;
        }
        let target = phi.vector.scale(Complex64::from_polar(1.0, -t * phi.value));
        Ok(v.sub(&target).norm())
    }

    /// Both error metrics from one product, plus the unitarity defect of the
    /// product for provenance.
    pub fn errors(&self, t: f64, n: usize, phi: Option<&EigenPair>) -> Result<TrotterErrors> {
        if let Some(phi) = phi {
            self.ensure_eigenpair(phi)?;
        }
        let product = self.trotter1(t, n)?;
        let diff = &product - &self.exact_evolution(t);
        let state = match phi {
            Some(phi) => Some(diff.mul_vector(&phi.vector)?.norm()),
            None => None,
        };
        Ok(TrotterErrors {
            norm: operator_norm(&diff),
            state,
            unitarity_defect: product.unitarity_defect(),
        })
    }

    fn ensure_eigenpair(&self, phi: &EigenPair) -> Result<()> {
        if phi.vector.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: phi.vector.dim(),
            });
        }
        let residual = eigen_residual(&self.h, &phi.vector, phi.value);
        let tolerance = EIGENPAIR_TOLERANCE * (1.0 + self.h_norm());
        if residual > tolerance {
            return Err(Error::EigenpairResidual {
                residual,
                tolerance,
            });
        }
        Ok(())
    }
}

/// Error metrics at one `(t, n)` point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrotterErrors {
    pub norm: f64,
    pub state: Option<f64>,
    /// `‖T_n†T_n − I‖` of the computed product.
    pub unitarity_defect: f64,
}

/// Normalized eigenvector with its energy.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub vector: StateVector,
    pub value: f64,
}

impl EigenPair {
    /// Validates normalization and `‖Hφ − hφ‖ <= 1e-8 (1 + ‖H‖)` against any
    /// operator representation of `H`.
    pub fn new<Op: LinearOperator + ?Sized>(
        h: &Op,
        h_norm: f64,
        vector: StateVector,
        value: f64,
    ) -> Result<Self> {
        vector.ensure_normalized()?;
        if vector.dim() != h.dim() {
            return Err(Error::DimensionMismatch {
                left: h.dim(),
                right: vector.dim(),
            });
        }
        let residual = eigen_residual(h, &vector, value);
        let tolerance = EIGENPAIR_TOLERANCE * (1.0 + h_norm);
        if residual > tolerance {
            return Err(Error::EigenpairResidual {
                residual,
                tolerance,
            });
        }
        Ok(Self { vector, value })
    }
}

/// `‖Hv − λv‖`.
pub fn eigen_residual<Op: LinearOperator + ?Sized>(h: &Op, v: &StateVector, value: f64) -> f64 {
    h.apply(v).sub(&v.scale(Complex64::new(value, 0.0))).norm()
}

fn step_time(t: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSteps);
    }
    Ok(t / n as f64)
}

/// `step^n` by sequential multiplication.
fn power(step: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let mut product = step.clone();
    for _ in 1..n {
        product = &product * step;
    }
    product
}
