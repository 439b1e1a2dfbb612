use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bounds::{
    minimize_upper_shift, BoundKind, BoundParams, BoundReport, Branch, GapData, NormMode, NormSet,
    ShiftMinimum, GAP_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::linalg::{HermitianOperator, StateVector};
use crate::pauli::{periodic_bond_sum, Pauli, PauliSum};
use crate::trotter::{EigenPair, Splitting};

pub const MIN_LEN: usize = 5;
pub const MAX_LEN: usize = 12;

/// Periodic chain `A = (J/4) Σ X_j X_{j+1}`, `B = (J/4) Σ Y_j Y_{j+1}`.
///
/// Site 0 is the least significant bit of a basis index and bit value 0 is
/// `|↓⟩`, the `+1` eigenstate of `Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct XXChainModel {
    len: usize,
    coupling: f64,
    a: PauliSum,
    b: PauliSum,
}

/// Everything the generic bounds need for one chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainBoundInputs {
    pub norms: NormSet,
    /// One entry per usable `k`, labelled by `k`.
    pub gaps: Vec<GapData>,
    /// Shift minimum for the upper state bound on the vacuum.
    pub upper_shift: ShiftMinimum,
}

impl XXChainModel {
    pub fn build(len: usize, coupling: f64) -> Result<Self> {
        if !(MIN_LEN..=MAX_LEN).contains(&len) {
            return Err(Error::LengthOutOfRange {
                len,
                min: MIN_LEN,
                max: MAX_LEN,
            });
        }
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "coupling must be positive, got {coupling}"
            )));
        }
        Ok(Self {
            len,
            coupling,
            a: periodic_bond_sum(len, coupling / 4.0, Pauli::X)?,
            b: periodic_bond_sum(len, coupling / 4.0, Pauli::Y)?,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn dim(&self) -> usize {
        1 << self.len
    }

    pub fn a(&self) -> &PauliSum {
        &self.a
    }

    pub fn b(&self) -> &PauliSum {
        &self.b
    }

    pub fn h(&self) -> PauliSum {
        self.a.add(&self.b).expect("equal lengths")
    }

    /// Dense splitting; cost grows as `4^L`.
    pub fn dense_splitting(&self) -> Result<Splitting> {
        Splitting::new(
            HermitianOperator::new(self.a.to_dense()?)?,
            HermitianOperator::new(self.b.to_dense()?)?,
        )
    }

    /// `|↓⋯↓⟩` with energy 0.
    pub fn vacuum(&self) -> EigenPair {
        EigenPair {
            vector: StateVector::basis(self.dim(), 0),
            value: 0.0,
        }
    }

    /// `2π(k + ½)/L`.
    pub fn momentum(&self, k: usize) -> f64 {
        2.0 * PI * (k as f64 + 0.5) / self.len as f64
    }

    /// `ĉ†_{k1} ĉ†_{k2} |↓⋯↓⟩` with energy `J[cos q1 + cos q2]`.
    pub fn two_excitation_state(&self, k1: usize, k2: usize) -> Result<EigenPair> {
        for k in [k1, k2] {
            if k >= self.len {
                return Err(Error::InvalidArgument(format!(
                    "mode index {k} out of range for L = {}",
                    self.len
                )));
            }
        }
        if k1 == k2 {
            return Err(Error::InvalidArgument(
                "a mode cannot be occupied twice".into(),
            ));
        }
        let vacuum = StateVector::basis(self.dim(), 0);
        let state = self
            .create_mode(k1, &self.create_mode(k2, &vacuum))
            .normalized()?;
        let value = self.coupling * (self.momentum(k1).cos() + self.momentum(k2).cos());
        let h = self.h();
        EigenPair::new(&h, h.triangle_norm_bound(), state, value)
    }

    /// `ĉ†_k = L^{-1/2} Σ_j e^{iqj} c†_j` applied to `v`.
    fn create_mode(&self, k: usize, v: &StateVector) -> StateVector {
        let q = self.momentum(k);
        let norm = (self.len as f64).sqrt();
        let mut out = StateVector::zeros(self.dim());
        for j in 0..self.len {
            let phase = Complex64::from_polar(1.0 / norm, q * j as f64);
            out.axpy(phase, &create_site(j, v));
        }
        out
    }

    /// Mode indices `k` whose partner `L − 1 − k` gives a valid state with
    /// a nonzero gap.
    pub fn usable_modes(&self) -> Vec<usize> {
        (0..self.len)
            .filter(|&k| {
                let gap = 2.0 * self.coupling * self.momentum(k).cos().abs();
                2 * k + 1 != self.len && gap > GAP_TOLERANCE * self.coupling
            })
            .collect()
    }

    /// Closed-form gap data for `Ψ(k, L−1−k)` at `g = 0`.
    pub fn analytic_gap(&self, k: usize) -> Result<GapData> {
        let q = self.momentum(k);
        let (j, l) = (self.coupling, self.len as f64);
        let lambda = 2.0 * j * q.cos().abs();
        if lambda <= GAP_TOLERANCE * j {
            return Err(Error::DegenerateGap);
        }
        Ok(GapData::new(
            lambda,
            0.5 * j * q.sin().abs(),
            j * j / 16.0 * (l * (3.0 * l - 2.0)).sqrt(),
            0.0,
        )?
        .with_label(k))
    }

    /// Closed-form norm certificates.
    pub fn analytic_norms(&self) -> NormSet {
        let (j, l) = (self.coupling, self.len as f64);
        NormSet {
            mode: NormMode::Certificate,
            comm_ab: j * j / 4.0 * (l / 2.0).sqrt(),
            comm_ab_upper: j * j / 4.0 * l,
            comm_a_ab: j.powi(3) / 4.0 * l,
            comm_b_ba: j.powi(3) / 4.0 * l,
            comm_h_ab: j.powi(3) / 2.0 * l,
            a_norm: j / 4.0 * l,
            h_sq_norm: (j / 2.0 * l).powi(2),
        }
    }

    /// `‖A²φ‖ = (J²/16)√(L(3L−2))` on the vacuum.
    pub fn analytic_a_squared_vacuum(&self) -> f64 {
        let (j, l) = (self.coupling, self.len as f64);
        j * j / 16.0 * (l * (3.0 * l - 2.0)).sqrt()
    }

    /// Gap data and norms for the generic bounds.
    ///
    /// `Exact` uses Lanczos norms and optimized shifts on the actual
    /// two-excitation states; `Certificate` uses the closed forms with `g = 0`.
    pub fn bound_inputs(&self, mode: NormMode) -> Result<ChainBoundInputs> {
        match mode {
            NormMode::Exact => {
                let vacuum = self.vacuum();
                let gaps = self
                    .usable_modes()
                    .into_iter()
                    .map(|k| {
                        let psi = self.two_excitation_state(k, self.len - 1 - k)?;
                        Ok(GapData::from_eigenpairs(&self.a, &vacuum, &psi)?.with_label(k))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let radius = self.a.triangle_norm_bound() + self.b.triangle_norm_bound();
                let upper_shift =
                    minimize_upper_shift(&self.a, &self.b, 0.0, &vacuum.vector, radius)?;
                Ok(ChainBoundInputs {
                    norms: NormSet::exact_pauli(&self.a, &self.b)?,
                    gaps,
                    upper_shift,
                })
            }
            NormMode::Certificate => {
                let gaps = self
                    .usable_modes()
                    .into_iter()
                    .map(|k| self.analytic_gap(k))
                    .collect::<Result<_>>()?;
                let value = 2.0 * self.analytic_a_squared_vacuum();
                Ok(ChainBoundInputs {
                    norms: self.analytic_norms(),
                    gaps,
                    upper_shift: ShiftMinimum { g: 0.0, value },
                })
            }
        }
    }

    /// Closed-form state lower bound for one `k`, before clamping.
    fn chain_state_raw(&self, t: f64, n: usize, k: usize) -> f64 {
        let (j, l, nf) = (self.coupling, self.len as f64, n as f64);
        let q = self.momentum(k);
        (j * t * q.cos()).sin().abs()
            * (j * t / (2.0 * nf) * q.sin().abs()
                - j * j * t * t / (64.0 * nf * nf) * (l * (3.0 * l - 2.0)).sqrt())
            - j.powi(3) * t.powi(3) / (32.0 * nf * nf) * l
    }

    fn best_chain_state(&self, t: f64, n: usize, k: Option<usize>) -> Result<(f64, usize)> {
        match k {
            Some(k) if k >= self.len => {
                Err(Error::InvalidArgument(format!("k = {k} out of range")))
            }
            Some(k) => Ok((self.chain_state_raw(t, n, k), k)),
            None => Ok((0..self.len)
                .map(|k| (self.chain_state_raw(t, n, k), k))
                .fold(
                    (f64::NEG_INFINITY, 0),
                    |best, x| if x.0 > best.0 { x } else { best },
                )),
        }
    }

    /// Closed-form lower bound on `ξ_n(t; |↓⋯↓⟩)`; `k = None` takes the
    /// supremum over all modes.
    pub fn chain_state_bound(&self, t: f64, n: usize, k: Option<usize>) -> Result<BoundReport> {
        check(t, n)?;
        let (raw, k) = self.best_chain_state(t, n, k)?;
        Ok(BoundReport {
            kind: BoundKind::LowerState,
            value: raw.max(0.0),
            raw,
            valid: true,
            params: BoundParams {
                t,
                n,
                g_star: Some(0.0),
                k: Some(k),
                branch: Some(Branch::State(k)),
            },
            mode: NormMode::Certificate,
        })
    }

    /// `ξ_n(t; |↓⋯↓⟩) <= (J²t²/16n)√(L(3L−2))`.
    pub fn chain_state_upper(&self, t: f64, n: usize) -> Result<f64> {
        check(t, n)?;
        let (j, l) = (self.coupling, self.len as f64);
        Ok(j * j * t * t / (16.0 * n as f64) * (l * (3.0 * l - 2.0)).sqrt())
    }

    /// Closed-form lower bound on `b_n(t)` for `Jt <= 8n/L`; zero and invalid
    /// beyond.
    pub fn chain_norm_bound(&self, t: f64, n: usize, k: Option<usize>) -> Result<BoundReport> {
        check(t, n)?;
        let (j, l, nf) = (self.coupling, self.len as f64, n as f64);
        let jt = j * t;
        let valid = jt <= 8.0 * nf / l;
        let inner = (l / 2.0).sqrt() - jt * l;
        let norm_raw = j * j * t * t / (8.0 * nf) * inner
            - j.powi(3) * t.powi(3) / (64.0 * nf * nf) * l * inner.min(2.0 + jt / 4.0 * l.powi(3))
            - j.powi(3) * t.powi(3) / (32.0 * nf * nf) * l;
        let (state_raw, k) = self.best_chain_state(t, n, k)?;
        let (raw, branch, k) = if state_raw > norm_raw {
            (state_raw, Branch::State(k), Some(k))
        } else {
            (norm_raw, Branch::Windowed, None)
        };
        Ok(BoundReport {
            kind: BoundKind::LowerNormRefined,
            value: if valid { raw.max(0.0) } else { 0.0 },
            raw,
            valid,
            params: BoundParams {
                t,
                n,
                g_star: Some(0.0),
                k,
                branch: Some(branch),
            },
            mode: NormMode::Certificate,
        })
    }

    /// `b_n(t) <= (J²t²/8n) L`.
    pub fn chain_norm_upper(&self, t: f64, n: usize) -> Result<f64> {
        check(t, n)?;
        let (j, l) = (self.coupling, self.len as f64);
        Ok(j * j * t * t / (8.0 * n as f64) * l)
    }

    /// `‖Hv − λv‖` through the symbolic Hamiltonian.
    pub fn residual(&self, pair: &EigenPair) -> f64 {
        crate::trotter::eigen_residual(&self.h(), &pair.vector, pair.value)
    }
}

fn check(t: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroSteps);
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bounds need a finite t >= 0, got {t}"
        )));
    }
    Ok(())
}

/// Jordan-Wigner creation `c†_j = (Π_{i<j} Z_i) σ⁺_j`, with `σ⁺ = |1⟩⟨0|`.
fn create_site(j: usize, v: &StateVector) -> StateVector {
    let below = (1usize << j) - 1;
    let mut out = StateVector::zeros(v.dim());
    let src = v.as_slice();
    let dst = out.as_mut_slice();
    for (s, amp) in src.iter().enumerate() {
        if s >> j & 1 == 1 || *amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let sign = if (s & below).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        dst[s | 1 << j] += amp * sign;
    }
    out
}
