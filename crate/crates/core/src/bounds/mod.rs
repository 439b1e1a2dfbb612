//! Upper and lower bounds on both Trotter error metrics.
//!
//! Every bound is a closed-form expression in `t`, `n` and a handful of
//! operator norms. The norms are gathered once in a [`NormSet`], either
//! exactly or as certificates from the symbolic Pauli algebra, and the
//! state-dependent data for an eigenpair pair lives in [`GapData`].

mod shift;

use std::fmt;

pub use shift::{
    grid_golden_minimize, minimize_shift_quartic, minimize_upper_shift, ShiftMinimum, ShiftQuartic,
    SHIFT_GRID_POINTS, SHIFT_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::linalg::{commutator, operator_norm, top_singular_value, LinearOperator};
use crate::pauli::PauliSum;
use crate::trotter::{EigenPair, Splitting};

/// Relative size below which a gap counts as zero.
pub const GAP_TOLERANCE: f64 = 1e-9;
/// `|sin(λt/2)|` below which the state threshold is reported as resonant.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;

/// How the operator norms entering a bound were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormMode {
    /// Operator norms of the actual matrices.
    Exact,
    /// Frobenius lower bound for `‖[A,B]‖`, triangle upper bounds elsewhere.
    Certificate,
}

impl NormMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NormMode::Exact => "exact",
            NormMode::Certificate => "certificate",
        }
    }
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NormMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(NormMode::Exact),
            "certificate" => Ok(NormMode::Certificate),
            other => Err(Error::Parse(format!("unknown norm mode `{other}`"))),
        }
    }
}

/// Operator norms used by the bounds.
///
/// `comm_ab` enters the lower bounds and `comm_ab_upper` the upper norm
/// bound; they coincide in exact mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSet {
    pub mode: NormMode,
    /// `‖[A,B]‖`, lower estimate.
    pub comm_ab: f64,
    /// `‖[A,B]‖`, upper estimate.
    pub comm_ab_upper: f64,
    /// `‖[A,[A,B]]‖`.
    pub comm_a_ab: f64,
    /// `‖[B,[B,A]]‖`.
    pub comm_b_ba: f64,
    /// `‖[A+B,[A,B]]‖`.
    pub comm_h_ab: f64,
    /// `‖A‖`.
    pub a_norm: f64,
    /// `‖(A+B)²‖`.
    pub h_sq_norm: f64,
}

impl NormSet {
    /// Exact norms from dense matrices.
    pub fn exact(s: &Splitting) -> Self {
        let (a, b, h) = (s.a().matrix(), s.b().matrix(), s.h().matrix());
        let ab = s.commutator_ab();
        let ba = ab.scale(num_complex::Complex64::new(-1.0, 0.0));
        let comm_ab = operator_norm(&ab);
        Self {
            mode: NormMode::Exact,
            comm_ab,
            comm_ab_upper: comm_ab,
            comm_a_ab: operator_norm(&commutator(a, &ab).expect("equal dimensions")),
            comm_b_ba: operator_norm(&commutator(b, &ba).expect("equal dimensions")),
            comm_h_ab: operator_norm(&commutator(h, &ab).expect("equal dimensions")),
            a_norm: s.a_norm(),
            h_sq_norm: s.h_norm().powi(2),
        }
    }

    /// Exact norms of symbolic operators, by Lanczos on the Pauli action.
    pub fn exact_pauli(a: &PauliSum, b: &PauliSum) -> Result<Self> {
        let c = NestedCommutators::new(a, b)?;
        let comm_ab = top_singular_value(&c.ab)?;
        let h_norm = top_singular_value(&c.h)?;
        Ok(Self {
            mode: NormMode::Exact,
            comm_ab,
            comm_ab_upper: comm_ab,
            comm_a_ab: top_singular_value(&c.a_ab)?,
            comm_b_ba: top_singular_value(&c.b_ba)?,
            comm_h_ab: top_singular_value(&c.h_ab)?,
            a_norm: top_singular_value(a)?,
            h_sq_norm: h_norm * h_norm,
        })
    }

    /// Certificates: Frobenius lower bound on `‖[A,B]‖` and triangle upper
    /// bounds on every other norm.
    pub fn certificate(a: &PauliSum, b: &PauliSum) -> Result<Self> {
        let c = NestedCommutators::new(a, b)?;
        Ok(Self {
            mode: NormMode::Certificate,
            comm_ab: c.ab.frobenius_lower_bound(),
            comm_ab_upper: c.ab.triangle_norm_bound(),
            comm_a_ab: c.a_ab.triangle_norm_bound(),
            comm_b_ba: c.b_ba.triangle_norm_bound(),
            comm_h_ab: c.h_ab.triangle_norm_bound(),
            a_norm: a.triangle_norm_bound(),
            h_sq_norm: c.h.triangle_norm_bound().powi(2),
        })
    }

    /// `(t³/24n²)‖[A,[A,B]]‖ + (t³/12n²)‖[B,[B,A]]‖`.
    pub fn remainder(&self, t: f64, n: usize) -> f64 {
        let nn = (n * n) as f64;
        t.powi(3) / (24.0 * nn) * self.comm_a_ab + t.powi(3) / (12.0 * nn) * self.comm_b_ba
    }

    /// Upper end `2n/‖A‖` of the window of the windowed norm bounds.
    pub fn window(&self, n: usize) -> f64 {
        if self.a_norm > 0.0 {
            2.0 * n as f64 / self.a_norm
        } else {
            f64::INFINITY
        }
    }

    /// `Z₁(t) = ‖[A,B]‖ − t min{½‖[A+B,[A,B]]‖, ‖A‖‖(A+B)²‖}`.
    pub fn z1(&self, t: f64) -> f64 {
        self.comm_ab - t * (0.5 * self.comm_h_ab).min(self.a_norm * self.h_sq_norm)
    }

    /// `‖A‖ Z₂(t) = ½‖[A,[A,B]]‖ + t‖A‖²‖(A+B)²‖`.
    pub fn a_norm_z2(&self, t: f64) -> f64 {
        0.5 * self.comm_a_ab + t * self.a_norm * self.a_norm * self.h_sq_norm
    }
}

/// `[A,B]`, `[A,[A,B]]`, `[B,[B,A]]`, `[A+B,[A,B]]` and `A+B` as Pauli sums.
#[derive(Clone, Debug, PartialEq)]
pub struct NestedCommutators {
    pub h: PauliSum,
    pub ab: PauliSum,
    pub a_ab: PauliSum,
    pub b_ba: PauliSum,
    pub h_ab: PauliSum,
}

impl NestedCommutators {
    pub fn new(a: &PauliSum, b: &PauliSum) -> Result<Self> {
        let ab = a.commutator(b)?;
        let ba = ab.scale(num_complex::Complex64::new(-1.0, 0.0));
        let h = a.add(b)?;
        Ok(Self {
            a_ab: a.commutator(&ab)?,
            b_ba: b.commutator(&ba)?,
            h_ab: h.commutator(&ab)?,
            h,
            ab,
        })
    }
}

/// Which bound a [`BoundReport`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    UpperState,
    UpperNorm,
    LowerState,
    LowerNormMain,
    LowerNormTight,
    LowerNormRefined,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::UpperState => "upper_state",
            BoundKind::UpperNorm => "upper_norm",
            BoundKind::LowerState => "lower_state",
            BoundKind::LowerNormMain => "lower_norm_main",
            BoundKind::LowerNormTight => "lower_norm_tight",
            BoundKind::LowerNormRefined => "lower_norm_refined",
        }
    }

    /// Short formula tag used in provenance records.
    pub fn formula(self) -> &'static str {
        match self {
            BoundKind::UpperState => "t^2/2n min_g(|(A-h+g)^2 phi| + |(B-g)^2 phi|)",
            BoundKind::UpperNorm => "t^2/2n |[A,B]|",
            BoundKind::LowerState => "|sin(lambda t/2)| (t/n |<psi|A phi>| - t^2/4n^2 a2) - R",
            BoundKind::LowerNormMain => "t^2/2n (1 - t|A|/2n)(|[A,B]| - t/2 |[A+B,[A,B]]|) - R",
            BoundKind::LowerNormTight => {
                "max(t^2/2n (1 - t|A|/2n) Z1, t^2/2n (Z1 - t|A|Z2/2n)) - R"
            }
            BoundKind::LowerNormRefined => "max(0, tight branches - R, state bounds)",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which term attains the maximum in a multi-branch lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `(t²/2n)(1 − t‖A‖/2n) Z₁`, inside the window only.
    Windowed,
    /// `(t²/2n)(Z₁ − (t/2n)‖A‖Z₂)`.
    Unwindowed,
    /// State bound for the candidate with this index.
    State(usize),
}

/// Parameters behind one evaluated bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub t: f64,
    pub n: usize,
    pub g_star: Option<f64>,
    /// Label of the winning eigenpair candidate, if a state bound is involved.
    pub k: Option<usize>,
    pub branch: Option<Branch>,
}

/// One evaluated bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// Clamped at zero for lower bounds; zero outside the window.
    pub value: f64,
    /// Expression before clamping.
    pub raw: f64,
    /// Whether `t` lies inside the bound's window.
    pub valid: bool,
    pub params: BoundParams,
    pub mode: NormMode,
}

impl BoundReport {
    fn lower(kind: BoundKind, raw: f64, valid: bool, params: BoundParams, mode: NormMode) -> Self {
        let value = if valid { raw.max(0.0) } else { 0.0 };
        Self {
            kind,
            value,
            raw,
            valid,
            params,
            mode,
        }
    }

    /// One-line provenance record.
    pub fn provenance(&self) -> String {
        let mut out = format!("{} [{}] mode={}", self.kind, self.kind.formula(), self.mode);
        if let Some(g) = self.params.g_star {
            out.push_str(&format!(" g*={g:.9}"));
        }
        if let Some(k) = self.params.k {
            out.push_str(&format!(" k={k}"));
        }
        if !self.valid {
            out.push_str(" outside-window");
        }
        out
    }
}

/// Gap, overlap and optimized shift for an eigenpair pair `(φ, ψ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapData {
    /// `λ = |h − κ|`.
    pub lambda: f64,
    /// `|⟨ψ|Aφ⟩|`.
    pub overlap: f64,
    /// `min_g ‖(A − h + g)²φ‖`, or the value at a fixed `g`.
    pub a2: f64,
    pub g_star: f64,
    /// Caller's label for this candidate.
    pub k: Option<usize>,
}

impl GapData {
    pub fn new(lambda: f64, overlap: f64, a2: f64, g_star: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::DegenerateGap);
        }
        if !(overlap >= 0.0 && a2 >= 0.0 && g_star.is_finite()) {
            return Err(Error::InvalidArgument(
                "gap data must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            lambda,
            overlap,
            a2,
            g_star,
            k: None,
        })
    }

    /// Gap data with the shift optimized exactly.
    pub fn from_eigenpairs<Op: LinearOperator + ?Sized>(
        a: &Op,
        phi: &EigenPair,
        psi: &EigenPair,
    ) -> Result<Self> {
        let lambda = (phi.value - psi.value).abs();
        if lambda <= GAP_TOLERANCE * (1.0 + phi.value.abs() + psi.value.abs()) {
            return Err(Error::DegenerateGap);
        }
        let overlap = psi.vector.inner(&a.apply(&phi.vector)).norm();
        let shift = minimize_shift_quartic(a, phi.value, &phi.vector)?;
        Self::new(lambda, overlap, shift.value, shift.g)
    }

    pub fn with_label(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    /// `|sin(λt/2)| [(t/n)|⟨ψ|Aφ⟩| − (t²/4n²) a2]`, before the remainder.
    fn leading(&self, t: f64, n: usize) -> f64 {
        let n = n as f64;
        (0.5 * self.lambda * t).sin().abs()
            * (t / n * self.overlap - t * t / (4.0 * n * n) * self.a2)
    }
}

fn check_point(t: f64, n: usize) -> Result<()> {
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

fn params(t: f64, n: usize) -> BoundParams {
    BoundParams {
        t,
        n,
        g_star: None,
        k: None,
        branch: None,
    }
}

/// `ξ_n(t;φ) <= (t²/2n) min_g(‖(A−h+g)²φ‖ + ‖(B−g)²φ‖)`.
pub fn upper_state_bound(
    t: f64,
    n: usize,
    shift: &ShiftMinimum,
    mode: NormMode,
) -> Result<BoundReport> {
    check_point(t, n)?;
    let value = t * t / (2.0 * n as f64) * shift.value;
    Ok(BoundReport {
        kind: BoundKind::UpperState,
        value,
        raw: value,
        valid: true,
        params: BoundParams {
            g_star: Some(shift.g),
            ..params(t, n)
        },
        mode,
    })
}

/// `b_n(t) <= (t²/2n)‖[A,B]‖`.
pub fn upper_norm_bound(t: f64, n: usize, norms: &NormSet) -> Result<BoundReport> {
    check_point(t, n)?;
    let value = t * t / (2.0 * n as f64) * norms.comm_ab_upper;
    Ok(BoundReport {
        kind: BoundKind::UpperNorm,
        value,
        raw: value,
        valid: true,
        params: params(t, n),
        mode: norms.mode,
    })
}

/// Lower bound on `ξ_n(t;φ)` from a second eigenstate `ψ`, clamped at 0.
pub fn lower_state_bound(t: f64, n: usize, gap: &GapData, norms: &NormSet) -> Result<BoundReport> {
    check_point(t, n)?;
    let raw = gap.leading(t, n) - norms.remainder(t, n);
    Ok(BoundReport::lower(
        BoundKind::LowerState,
        raw,
        true,
        BoundParams {
            g_star: Some(gap.g_star),
            k: gap.k,
            ..params(t, n)
        },
        norms.mode,
    ))
}

/// Best lower state bound over a list of candidates; `None` if empty.
pub fn best_lower_state_bound(
    t: f64,
    n: usize,
    gaps: &[GapData],
    norms: &NormSet,
) -> Result<Option<BoundReport>> {
    let mut best: Option<BoundReport> = None;
    for gap in gaps {
        let report = lower_state_bound(t, n, gap, norms)?;
        if best.is_none_or(|b| report.raw > b.raw) {
            best = Some(report);
        }
    }
    Ok(best)
}

/// The windowed lower bound on `b_n(t)` with the plain
/// `‖[A,B]‖ − (t/2)‖[A+B,[A,B]]‖` factor; zero and invalid for
/// `t > 2n/‖A‖`.
pub fn lower_norm_bound_main(t: f64, n: usize, norms: &NormSet) -> Result<BoundReport> {
    check_point(t, n)?;
    let valid = t <= norms.window(n);
    let nf = n as f64;
    let raw = t * t / (2.0 * nf)
        * (1.0 - t * norms.a_norm / (2.0 * nf))
        * (norms.comm_ab - 0.5 * t * norms.comm_h_ab)
        - norms.remainder(t, n);
    Ok(BoundReport::lower(
        BoundKind::LowerNormMain,
        raw,
        valid,
        params(t, n),
        norms.mode,
    ))
}

/// The two branches `(windowed, unwindowed)` of the tight norm bound,
/// without the remainder. The windowed branch is `None` outside `t <= 2n/‖A‖`.
pub fn tight_branches(t: f64, n: usize, norms: &NormSet) -> (Option<f64>, f64) {
    let nf = n as f64;
    let pre = t * t / (2.0 * nf);
    let z1 = norms.z1(t);
    let windowed = (t <= norms.window(n)).then(|| pre * (1.0 - t * norms.a_norm / (2.0 * nf)) * z1);
    let unwindowed = pre * (z1 - t / (2.0 * nf) * norms.a_norm_z2(t));
    (windowed, unwindowed)
}

/// Maximum of the two `Z₁`/`Z₂` branches minus the remainder, clamped at 0.
///
/// The second branch holds for every `t >= 0`, so the report is always
/// valid; the first branch only competes inside the window.
pub fn lower_norm_bound_tight(t: f64, n: usize, norms: &NormSet) -> Result<BoundReport> {
    check_point(t, n)?;
    let (windowed, unwindowed) = tight_branches(t, n, norms);
    let (lead, branch) = match windowed {
        Some(w) if w >= unwindowed => (w, Branch::Windowed),
        _ => (unwindowed, Branch::Unwindowed),
    };
    let raw = lead - norms.remainder(t, n);
    Ok(BoundReport::lower(
        BoundKind::LowerNormTight,
        raw,
        true,
        BoundParams {
            branch: Some(branch),
            ..params(t, n)
        },
        norms.mode,
    ))
}

/// Pointwise maximum of the tight norm bound and the state bounds over
/// every candidate, clamped at 0. The winning candidate is re-chosen at
/// every `t`.
pub fn lower_norm_bound_refined(
    t: f64,
    n: usize,
    norms: &NormSet,
    gaps: &[GapData],
) -> Result<BoundReport> {
    let tight = lower_norm_bound_tight(t, n, norms)?;
    let mut out = BoundReport {
        kind: BoundKind::LowerNormRefined,
        ..tight
    };
    for (index, gap) in gaps.iter().enumerate() {
        let state = lower_state_bound(t, n, gap, norms)?;
        if state.raw > out.raw {
            out.raw = state.raw;
            out.params.branch = Some(Branch::State(index));
            out.params.k = Some(gap.k.unwrap_or(index));
            out.params.g_star = Some(gap.g_star);
        }
    }
    out.value = out.raw.max(0.0);
    Ok(out)
}

/// Evaluates `bound` at every point of a `t` grid.
pub fn curve(grid: &[f64], bound: impl Fn(f64) -> Result<BoundReport>) -> Result<Vec<BoundReport>> {
    grid.iter().map(|&t| bound(t)).collect()
}

/// Smallest `n` for which the lower state bound at time `t` is positive:
/// `n > (t/4|⟨ψ|Aφ⟩|)[a2 + (t/6|sin(λt/2)|)(‖[A,[A,B]]‖ + 2‖[B,[B,A]]‖)]`.
pub fn state_nontrivial_n(t: f64, gap: &GapData, norms: &NormSet) -> Result<usize> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold needs a finite t > 0, got {t}"
        )));
    }
    let sine = (0.5 * gap.lambda * t).sin().abs();
    if sine <= RESONANCE_TOLERANCE {
        return Err(Error::Resonance { t });
    }
    if gap.overlap <= 0.0 {
        return Err(Error::VanishingOverlap);
    }
    let x = t / (4.0 * gap.overlap)
        * (gap.a2 + t / (6.0 * sine) * (norms.comm_a_ab + 2.0 * norms.comm_b_ba));
    if x >= usize::MAX as f64 {
        return Err(Error::InvalidArgument(format!(
            "threshold {x} does not fit an integer"
        )));
    }
    Ok((x.floor() as usize + 1).max(1))
}

/// Sufficient time below which the main windowed norm bound is nonnegative:
/// `12n‖[A,B]‖ / (6n‖[A+B,[A,B]]‖ + 6‖A‖‖[A,B]‖ + ‖[A,[A,B]]‖ + 2‖[B,[B,A]]‖)`.
pub fn norm_nontrivial_t(n: usize, norms: &NormSet) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSteps);
    }
    if norms.comm_ab <= 0.0 {
        return Err(Error::CommutingSplitting);
    }
    let nf = n as f64;
    Ok(12.0 * nf * norms.comm_ab
        / (6.0 * nf * norms.comm_h_ab
            + 6.0 * norms.a_norm * norms.comm_ab
            + norms.comm_a_ab
            + 2.0 * norms.comm_b_ba))
}

/// `1 − |1 − λt/π + 2⌊λt/2π⌋|`, a lower bound on `|sin(λt/2)|`.
pub fn sine_floor(lambda: f64, t: f64) -> f64 {
    let x = lambda * t;
    1.0 - (1.0 - x / std::f64::consts::PI + 2.0 * (x / (2.0 * std::f64::consts::PI)).floor()).abs()
}

#[cfg(test)]
mod tests;
