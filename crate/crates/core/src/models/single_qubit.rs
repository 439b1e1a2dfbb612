use num_complex::Complex64;

use crate::bounds::{GapData, NormSet};
use crate::linalg::{ComplexMatrix, HermitianOperator, StateVector};
use crate::trotter::{EigenPair, Splitting};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Constants of the `A = X`, `B = Z` splitting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitConstants {
    /// Ground and excited energies `h`, `κ`.
    pub energies: [f64; 2],
    pub lambda: f64,
    pub overlap: f64,
    /// `min_g ‖(A − h + g)²φ‖`.
    pub a: f64,
    pub g_star: f64,
    pub comm_ab: f64,
    pub comm_a_ab: f64,
    pub comm_b_ba: f64,
    pub comm_h_ab: f64,
    pub a_norm: f64,
    pub h_sq_norm: f64,
}

impl SingleQubitConstants {
    /// Reference values of the analytic treatment.
    pub fn reference() -> Self {
        Self {
            energies: [-SQRT2, SQRT2],
            lambda: 2.0 * SQRT2,
            overlap: 1.0 / SQRT2,
            a: 0.788903,
            g_star: -1.12859,
            comm_ab: 2.0,
            comm_a_ab: 4.0,
            comm_b_ba: 4.0,
            comm_h_ab: 4.0 * SQRT2,
            a_norm: 1.0,
            h_sq_norm: 2.0,
        }
    }
}

/// The splitting `A = X`, `B = Z` with its two eigenstates.
#[derive(Clone, Debug)]
pub struct SingleQubitModel {
    splitting: Splitting,
    ground: EigenPair,
    excited: EigenPair,
}

impl SingleQubitModel {
    pub fn build() -> Self {
        let c = |re: f64| Complex64::new(re, 0.0);
        let x =
            ComplexMatrix::from_rows(&[vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]).expect("2x2");
        let z =
            ComplexMatrix::from_rows(&[vec![c(1.0), c(0.0)], vec![c(0.0), c(-1.0)]]).expect("2x2");
        let splitting = Splitting::new(
            HermitianOperator::new(x).expect("Pauli X is Hermitian"),
            HermitianOperator::new(z).expect("Pauli Z is Hermitian"),
        )
        .expect("equal dimensions");
        let ground = splitting.eigenpair(0);
        let excited = splitting.eigenpair(1);
        Self {
            splitting,
            ground,
            excited,
        }
    }

    pub fn splitting(&self) -> &Splitting {
        &self.splitting
    }

    /// `φ` with `h = −√2`.
    pub fn ground(&self) -> &EigenPair {
        &self.ground
    }

    /// `ψ` with `κ = +√2`.
    pub fn excited(&self) -> &EigenPair {
        &self.excited
    }

    /// Basis-independent closed form of the ground state, for cross-checks.
    pub fn ground_closed_form() -> StateVector {
        StateVector::from_vec(vec![
            Complex64::new(1.0 - SQRT2, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .normalized()
        .expect("nonzero")
    }

    pub fn norms(&self) -> NormSet {
        NormSet::exact(&self.splitting)
    }

    pub fn gap(&self) -> GapData {
        GapData::from_eigenpairs(self.splitting.a(), &self.ground, &self.excited)
            .expect("gap 2√2 is nondegenerate")
            .with_label(1)
    }

    /// Every constant recomputed densely.
    pub fn constants(&self) -> SingleQubitConstants {
        let norms = self.norms();
        let gap = self.gap();
        SingleQubitConstants {
            energies: [self.ground.value, self.excited.value],
            lambda: gap.lambda,
            overlap: gap.overlap,
            a: gap.a2,
            g_star: gap.g_star,
            comm_ab: norms.comm_ab,
            comm_a_ab: norms.comm_a_ab,
            comm_b_ba: norms.comm_b_ba,
            comm_h_ab: norms.comm_h_ab,
            a_norm: norms.a_norm,
            h_sq_norm: norms.h_sq_norm,
        }
    }
}

impl Default for SingleQubitModel {
    fn default() -> Self {
        Self::build()
    }
}
