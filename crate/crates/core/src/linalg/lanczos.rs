use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LinearOperator;
use crate::error::{Error, Result};

/// Relative convergence tolerance on the Rayleigh quotient of `X†X`.
pub const LANCZOS_TOLERANCE: f64 = 1e-11;

const KRYLOV_MAX: usize = 80;
const MAX_RESTARTS: usize = 200;
const START_SEED: u64 = 0x05ee_d1a2_c705;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value of `op` by restarted Lanczos on `op† op` with full
/// reorthogonalization.
///
/// The start vector is drawn from a fixed-seed generator so every symmetry
/// sector is populated and results are reproducible.
pub fn top_singular_value<Op: LinearOperator + ?Sized>(op: &Op) -> Result<f64> {
    let dim = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut start: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let krylov_max = dim.min(KRYLOV_MAX);
    let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
    let mut previous = f64::NAN;

    for _ in 0..MAX_RESTARTS {
        let n0 = norm(&start);
        start.iter_mut().for_each(|z| *z /= n0);
        let mut basis: Vec<Vec<Complex64>> = vec![start.clone()];
        let mut alpha: Vec<f64> = Vec::with_capacity(krylov_max);
        let mut beta: Vec<f64> = Vec::with_capacity(krylov_max);
        let mut ritz = (0.0, Vec::new());

        for j in 0..krylov_max {
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            op.apply_into(&basis[j], &mut scratch);
            op.apply_adjoint_into(&scratch, &mut w);
            let a = dot(&basis[j], &w).re;
            alpha.push(a);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for q in &basis {
                    let proj = dot(q, &w);
                    w.iter_mut().zip(q).for_each(|(wi, qi)| *wi -= proj * qi);
                }
            }
            let b = norm(&w);
            ritz = top_ritz_pair(&alpha, &beta);
            let (theta, ref s) = ritz;
            let residual = b * s[j].abs();
            let exhausted = j + 1 == dim;
            if residual <= LANCZOS_TOLERANCE * theta.abs()
                || b <= f64::EPSILON * theta.abs()
                || exhausted
            {
                return Ok(theta.max(0.0).sqrt());
            }
            if j + 1 == krylov_max {
                break;
            }
            beta.push(b);
            w.iter_mut().for_each(|z| *z /= b);
            basis.push(w);
        }

        let (theta, coeffs) = ritz;
        if previous.is_finite()
            && (theta - previous).abs() <= LANCZOS_TOLERANCE * theta.abs() * 1e-2
        {
            return Ok(theta.max(0.0).sqrt());
        }
        previous = theta;
        start = vec![Complex64::new(0.0, 0.0); dim];
        for (q, &s) in basis.iter().zip(&coeffs) {
            start.iter_mut().zip(q).for_each(|(x, qi)| *x += qi * s);
        }
    }
    Err(Error::EigenConvergence {
        iterations: MAX_RESTARTS * krylov_max,
    })
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, together with its eigenvector.
fn top_ritz_pair(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alpha[r]
        } else if r + 1 == c {
            beta[r]
        } else if c + 1 == r {
            beta[c]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (
        theta,
        eig.eigenvectors.column(idx).iter().copied().collect(),
    )
}
