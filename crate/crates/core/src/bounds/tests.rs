use super::*;
use crate::linalg::{ComplexMatrix, HermitianOperator};
use crate::pauli::{periodic_bond_sum, Pauli};
use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn matrix(letter: char) -> ComplexMatrix {
    let rows = match letter {
        'X' => vec![vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]],
        _ => vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]],
    };
    ComplexMatrix::from_rows(&rows).unwrap()
}

fn single_qubit() -> Splitting {
    Splitting::new(
        HermitianOperator::new(matrix('X')).unwrap(),
        HermitianOperator::new(matrix('Z')).unwrap(),
    )
    .unwrap()
}

fn commuting() -> Splitting {
    let zi = ComplexMatrix::new(
        matrix('Z')
            .as_dmatrix()
            .kronecker(&nalgebra::DMatrix::identity(2, 2)),
    )
    .unwrap();
    let iz =
        ComplexMatrix::new(nalgebra::DMatrix::identity(2, 2).kronecker(matrix('Z').as_dmatrix()))
            .unwrap();
    Splitting::new(
        HermitianOperator::new(zi).unwrap(),
        HermitianOperator::new(iz).unwrap(),
    )
    .unwrap()
}

fn random_splitting(rng: &mut ChaCha8Rng, d: usize) -> Splitting {
    let mut herm = || {
        let m = ComplexMatrix::from_fn(d, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .unwrap();
        HermitianOperator::new((&m + &m.adjoint()).scale(c(0.5, 0.0))).unwrap()
    };
    let a = herm();
    let b = herm();
    Splitting::new(a, b).unwrap()
}

fn sq_gap(s: &Splitting) -> GapData {
    GapData::from_eigenpairs(s.a(), &s.eigenpair(0), &s.eigenpair(1)).unwrap()
}

/// Closed form of the optimized single-qubit state bound.
fn sq_state_closed_form(t: f64, n: usize) -> f64 {
    let (a, nf) = (0.788_903_f64, n as f64);
    let sine = (SQRT2 * t).sin().abs();
    t * t / nf * (1.0 - a * t / (2.0 * SQRT2 * nf)) * sine / (SQRT2 * t)
        - t.powi(3) / (2.0 * nf * nf)
}

#[test]
fn single_qubit_exact_norms() {
    let norms = NormSet::exact(&single_qubit());
    assert_eq!(norms.mode, NormMode::Exact);
    assert_abs_diff_eq!(norms.comm_ab, 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(norms.comm_a_ab, 4.0, epsilon = 1e-12);
    assert_abs_diff_eq!(norms.comm_b_ba, 4.0, epsilon = 1e-12);
    assert_abs_diff_eq!(norms.comm_h_ab, 4.0 * SQRT2, epsilon = 1e-12);
    assert_abs_diff_eq!(norms.a_norm, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(norms.h_sq_norm, 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(norms.z1(0.0), norms.comm_ab, epsilon = 0.0);
}

#[test]
fn single_qubit_gap_data() {
    let gap = sq_gap(&single_qubit());
    assert_abs_diff_eq!(gap.lambda, 2.0 * SQRT2, epsilon = 1e-12);
    assert_abs_diff_eq!(gap.overlap, 1.0 / SQRT2, epsilon = 1e-12);
    assert_abs_diff_eq!(gap.a2, 0.788903, epsilon = 1e-6);
    assert_abs_diff_eq!(gap.g_star, -1.12859, epsilon = 1e-5);
}

#[test]
fn single_qubit_upper_bounds() {
    let s = single_qubit();
    let norms = NormSet::exact(&s);
    let phi = s.eigenpair(0);
    let shift =
        minimize_upper_shift(s.a(), s.b(), phi.value, &phi.vector, 1.0 + 1.0 + SQRT2).unwrap();
    for (t, n) in [(0.0, 1), (0.5, 3), (2.0, 10)] {
        let up = upper_state_bound(t, n, &shift, norms.mode).unwrap();
        assert_abs_diff_eq!(
            up.value,
            5f64.sqrt() * t * t / (2.0 * n as f64),
            epsilon = 1e-10
        );
        let un = upper_norm_bound(t, n, &norms).unwrap();
        assert_abs_diff_eq!(un.value, t * t / n as f64, epsilon = 1e-12);
    }
}

#[test]
fn single_qubit_lower_state_matches_closed_form() {
    let s = single_qubit();
    let (norms, gap) = (NormSet::exact(&s), sq_gap(&s));
    for t in [0.1, 0.5, 1.0, 2.0, 3.0] {
        for n in [1, 5, 50] {
            let r = lower_state_bound(t, n, &gap, &norms).unwrap();
            assert_abs_diff_eq!(r.raw, sq_state_closed_form(t, n), epsilon = 1e-6 * t);
            assert!(r.value >= 0.0);
        }
    }
}

#[test]
fn single_qubit_state_bound_positive_at_unit_time() {
    let s = single_qubit();
    let (norms, gap) = (NormSet::exact(&s), sq_gap(&s));
    assert_eq!(state_nontrivial_n(1.0, &gap, &norms).unwrap(), 1);
    for n in 1..=200 {
        assert!(
            lower_state_bound(1.0, n, &gap, &norms).unwrap().value > 0.0,
            "n = {n}"
        );
    }
}

#[test]
fn state_threshold_matches_closed_form_and_sign_change() {
    let s = single_qubit();
    let (norms, gap) = (NormSet::exact(&s), sq_gap(&s));
    for t in [0.7, 1.5, 2.0, 3.0] {
        let n = state_nontrivial_n(t, &gap, &norms).unwrap();
        let a = gap.a2;
        let closed = a * t / (2.0 * SQRT2) * (1.0 + 2.0 * t / (a * (SQRT2 * t).sin().abs()));
        assert_eq!(n, closed.floor() as usize + 1);
        assert!(lower_state_bound(t, n, &gap, &norms).unwrap().raw > 0.0);
        if n > 1 {
            assert!(lower_state_bound(t, n - 1, &gap, &norms).unwrap().raw <= 0.0);
        }
    }
    let resonant = std::f64::consts::PI / SQRT2;
    assert!(matches!(
        state_nontrivial_n(resonant, &gap, &norms),
        Err(Error::Resonance { .. })
    ));
}

#[test]
fn single_qubit_main_norm_bound() {
    let norms = NormSet::exact(&single_qubit());
    for t in [0.05, 0.2, 0.5, 0.7] {
        for n in [1, 4, 10] {
            let nf = n as f64;
            let expect = t * t / nf * (1.0 - t / (2.0 * nf)) * (1.0 - SQRT2 * t)
                - t.powi(3) / (2.0 * nf * nf);
            let r = lower_norm_bound_main(t, n, &norms).unwrap();
            assert_abs_diff_eq!(r.raw, expect, epsilon = 1e-12);
            assert_abs_diff_eq!(r.value, expect.max(0.0), epsilon = 1e-12);
            assert!(r.valid);
        }
    }
    let r = lower_norm_bound_main(2.5, 1, &norms).unwrap();
    assert!(!r.valid);
    assert_eq!(r.value, 0.0);
}

#[test]
fn single_qubit_tight_norm_bound() {
    let norms = NormSet::exact(&single_qubit());
    for t in [0.05, 0.3, 0.5, 0.9, 1.5] {
        for n in [1, 3, 10] {
            let nf = n as f64;
            let expect =
                t * t / nf * (1.0 - t / (2.0 * nf)) * (1.0 - t) - t.powi(3) / (2.0 * nf * nf);
            let r = lower_norm_bound_tight(t, n, &norms).unwrap();
            assert_abs_diff_eq!(r.raw, expect, epsilon = 1e-12);
            assert_eq!(r.params.branch, Some(Branch::Windowed));
        }
    }
    // non-trivial exactly below n + 1 − √(n² + 1)
    for n in [1, 2, 10, 40] {
        let nf = n as f64;
        let edge = nf + 1.0 - (nf * nf + 1.0).sqrt();
        assert!(
            lower_norm_bound_tight(edge - 1e-6, n, &norms)
                .unwrap()
                .value
                > 0.0
        );
        assert_eq!(
            lower_norm_bound_tight(edge + 1e-6, n, &norms)
                .unwrap()
                .value,
            0.0
        );
        assert!(1.0 - 1.0 / (2.0 * nf) < edge);
    }
}

#[test]
fn tight_branches_by_direct_formula() {
    let norms = NormSet::exact(&single_qubit());
    let (t, n) = (0.5, 10);
    let nf = n as f64;
    // ‖A‖ = 1, ‖(A+B)²‖ = 2, ‖[A+B,[A,B]]‖ = 4√2
    let z1 = 2.0 - t * (0.5 * 4.0 * SQRT2).min(1.0 * 2.0);
    let z2 = 4.0 / 2.0 + t * 2.0;
    let b1 = t * t / (2.0 * nf) * (1.0 - t / (2.0 * nf)) * z1;
    let b2 = t * t / (2.0 * nf) * (z1 - t / (2.0 * nf) * z2);
    let (w, u) = tight_branches(t, n, &norms);
    assert_abs_diff_eq!(w.unwrap(), b1, epsilon = 1e-13);
    assert_abs_diff_eq!(u, b2, epsilon = 1e-13);
    let tight = lower_norm_bound_tight(t, n, &norms).unwrap();
    let main = lower_norm_bound_main(t, n, &norms).unwrap();
    assert!(tight.value >= main.value);
    assert_abs_diff_eq!(
        tight.raw,
        b1.max(b2) - norms.remainder(t, n),
        epsilon = 1e-13
    );
}

#[test]
fn norm_threshold_single_qubit() {
    let norms = NormSet::exact(&single_qubit());
    for n in [1, 2, 10, 30] {
        let nf = n as f64;
        let t = norm_nontrivial_t(n, &norms).unwrap();
        assert_abs_diff_eq!(t, nf / (SQRT2 * nf + 1.0), epsilon = 1e-12);
        assert!(t <= nf + 1.0 - (nf * nf + 1.0).sqrt());
        let r = lower_norm_bound_main(t, n, &norms).unwrap();
        assert!(r.valid && r.raw >= -1e-15);
        assert!(1.0 - t * norms.a_norm / (2.0 * nf) >= 0.0);
    }
}

#[test]
fn commuting_splitting_clamps_everything() {
    let s = commuting();
    let norms = NormSet::exact(&s);
    assert_eq!(norms.comm_ab, 0.0);
    assert_eq!(
        norm_nontrivial_t(3, &norms).unwrap_err(),
        Error::CommutingSplitting
    );
    let gap = GapData::from_eigenpairs(s.a(), &s.eigenpair(0), &s.eigenpair(3)).unwrap();
    for t in [0.0, 0.4, 1.0, 5.0] {
        for n in [1, 7] {
            assert_eq!(lower_norm_bound_main(t, n, &norms).unwrap().value, 0.0);
            assert_eq!(lower_norm_bound_tight(t, n, &norms).unwrap().value, 0.0);
            assert_eq!(
                lower_norm_bound_refined(t, n, &norms, &[gap])
                    .unwrap()
                    .value,
                0.0
            );
            assert_eq!(lower_state_bound(t, n, &gap, &norms).unwrap().value, 0.0);
            assert_eq!(upper_norm_bound(t, n, &norms).unwrap().value, 0.0);
        }
    }
}

#[test]
fn refined_without_candidates_is_tight() {
    let norms = NormSet::exact(&single_qubit());
    for t in [0.1, 0.6, 2.0, 4.0] {
        let tight = lower_norm_bound_tight(t, 5, &norms).unwrap();
        let refined = lower_norm_bound_refined(t, 5, &norms, &[]).unwrap();
        assert_eq!(refined.value, tight.value);
        assert_eq!(refined.kind, BoundKind::LowerNormRefined);
    }
}

#[test]
fn refined_prefers_state_branch_at_large_n_and_moderate_t() {
    let s = single_qubit();
    let (norms, gap) = (NormSet::exact(&s), sq_gap(&s).with_label(7));
    let r = lower_norm_bound_refined(1.5, 100, &norms, &[gap]).unwrap();
    assert_eq!(r.params.branch, Some(Branch::State(0)));
    assert_eq!(r.params.k, Some(7));
    assert!(r.value > 0.0);
    assert!(lower_norm_bound_tight(1.5, 100, &norms).unwrap().value == 0.0);
}

#[test]
fn degenerate_and_invalid_inputs() {
    let s = commuting();
    // eigenvalues of Z⊗I + I⊗Z are −2, 0, 0, 2
    assert_eq!(
        GapData::from_eigenpairs(s.a(), &s.eigenpair(1), &s.eigenpair(2)).unwrap_err(),
        Error::DegenerateGap
    );
    assert_eq!(
        GapData::new(0.0, 1.0, 1.0, 0.0).unwrap_err(),
        Error::DegenerateGap
    );
    let norms = NormSet::exact(&s);
    assert_eq!(
        upper_norm_bound(1.0, 0, &norms).unwrap_err(),
        Error::ZeroSteps
    );
    assert!(matches!(
        lower_norm_bound_main(-1.0, 1, &norms),
        Err(Error::InvalidArgument(_))
    ));
    let gap = GapData::new(1.0, 0.0, 0.0, 0.0).unwrap();
    assert_eq!(
        state_nontrivial_n(1.0, &gap, &norms).unwrap_err(),
        Error::VanishingOverlap
    );
}

#[test]
fn sine_floor_landmarks() {
    let pi = std::f64::consts::PI;
    assert_abs_diff_eq!(sine_floor(1.0, pi), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(sine_floor(2.0, 0.0), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(sine_floor(1.0, 2.0 * pi), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sine_floor(1.0, 3.0 * pi), 1.0, epsilon = 1e-12);
}

#[test]
fn sine_floor_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let (lambda, t): (f64, f64) = (rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
        assert!((0.5 * lambda * t).sin().abs() >= sine_floor(lambda, t) - 1e-12);
    }
}

#[test]
fn pauli_norm_sets_agree_with_dense() {
    let a = periodic_bond_sum(5, 0.25, Pauli::X).unwrap();
    let b = periodic_bond_sum(5, 0.25, Pauli::Y).unwrap();
    let s = Splitting::new(
        HermitianOperator::new(a.to_dense().unwrap()).unwrap(),
        HermitianOperator::new(b.to_dense().unwrap()).unwrap(),
    )
    .unwrap();
    let dense = NormSet::exact(&s);
    let lanczos = NormSet::exact_pauli(&a, &b).unwrap();
    let cert = NormSet::certificate(&a, &b).unwrap();
    for (x, y) in [
        (dense.comm_ab, lanczos.comm_ab),
        (dense.comm_a_ab, lanczos.comm_a_ab),
        (dense.comm_b_ba, lanczos.comm_b_ba),
        (dense.comm_h_ab, lanczos.comm_h_ab),
        (dense.a_norm, lanczos.a_norm),
        (dense.h_sq_norm, lanczos.h_sq_norm),
    ] {
        assert_abs_diff_eq!(x, y, epsilon = 1e-9 * (1.0 + x));
    }
    assert_eq!(cert.mode, NormMode::Certificate);
    assert!(cert.comm_ab <= dense.comm_ab + 1e-12);
    assert!(cert.comm_ab_upper >= dense.comm_ab - 1e-12);
    assert!(cert.comm_a_ab >= dense.comm_a_ab - 1e-12);
    assert!(cert.comm_b_ba >= dense.comm_b_ba - 1e-12);
    assert!(cert.comm_h_ab >= dense.comm_h_ab - 1e-12);
    assert!(cert.a_norm >= dense.a_norm - 1e-12);
    assert!(cert.h_sq_norm >= dense.h_sq_norm - 1e-12);
}

#[test]
fn provenance_mentions_kind_and_mode() {
    let norms = NormSet::exact(&single_qubit());
    let r = lower_norm_bound_main(5.0, 1, &norms).unwrap();
    let p = r.provenance();
    assert!(p.starts_with("lower_norm_main"));
    assert!(p.contains("mode=exact"));
    assert!(p.contains("outside-window"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sandwich_on_random_splittings(seed in 0u64..100_000, t in 0.0f64..3.0, n in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_splitting(&mut rng, 3);
        let norms = NormSet::exact(&s);
        let phi = s.eigenpair(0);
        let gaps: Vec<GapData> = (1..3)
            .filter_map(|k| GapData::from_eigenpairs(s.a(), &phi, &s.eigenpair(k)).ok())
            .collect();
        let radius = s.a_norm() + s.b().eig().unwrap().spectral_radius() + phi.value.abs();
        let shift = minimize_upper_shift(s.a(), s.b(), phi.value, &phi.vector, radius).unwrap();
        let errs = s.errors(t, n, Some(&phi)).unwrap();
        let xi = errs.state.unwrap();
        for gap in &gaps {
            prop_assert!(lower_state_bound(t, n, gap, &norms).unwrap().value <= xi + 1e-9);
        }
        prop_assert!(xi <= upper_state_bound(t, n, &shift, norms.mode).unwrap().value + 1e-9);
        for r in [
            lower_norm_bound_main(t, n, &norms).unwrap(),
            lower_norm_bound_tight(t, n, &norms).unwrap(),
            lower_norm_bound_refined(t, n, &norms, &gaps).unwrap(),
        ] {
            prop_assert!(r.value >= 0.0);
            prop_assert!(r.value <= errs.norm + 1e-9, "{:?} vs {}", r, errs.norm);
        }
        prop_assert!(errs.norm <= upper_norm_bound(t, n, &norms).unwrap().value + 1e-9);
    }

    #[test]
    fn tight_dominates_main_in_window(seed in 0u64..100_000, t in 0.0f64..4.0, n in 1usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let norms = NormSet::exact(&random_splitting(&mut rng, 3));
        let main = lower_norm_bound_main(t, n, &norms).unwrap();
        if main.valid {
            prop_assert!(lower_norm_bound_tight(t, n, &norms).unwrap().value >= main.value - 1e-12);
        }
    }

    #[test]
    fn sine_floor_is_a_lower_bound(lambda in 0.0f64..20.0, t in 0.0f64..20.0) {
        prop_assert!((0.5 * lambda * t).sin().abs() >= sine_floor(lambda, t) - 1e-12);
    }
}
