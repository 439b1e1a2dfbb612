use super::*;
use crate::bounds::{
    lower_norm_bound_refined, lower_state_bound, state_nontrivial_n, upper_norm_bound,
    upper_state_bound, NormMode,
};
use crate::error::Error;
use crate::linalg::{commutator, operator_norm, LinearOperator, StateVector};
use crate::pauli::{Pauli, PauliString, PauliSum};
use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use std::f64::consts::PI;

fn sites(len: usize, letters: &[(usize, Pauli)]) -> PauliString {
    PauliString::from_sites(len, letters).unwrap()
}

/// `Σ_j Σ_terms coeff · string(j)` with periodic sites.
fn translate(len: usize, pieces: &[(Complex64, &[(usize, Pauli)])]) -> PauliSum {
    let mut out = PauliSum::zero(len).unwrap();
    for j in 0..len {
        for (coeff, letters) in pieces {
            let shifted: Vec<(usize, Pauli)> = letters.iter().map(|&(s, p)| (j + s, p)).collect();
            out.add_term(sites(len, &shifted), *coeff).unwrap();
        }
    }
    out
}

#[test]
fn single_qubit_constants_reproduced() {
    let m = SingleQubitModel::build();
    let (got, want) = (m.constants(), SingleQubitConstants::reference());
    for (x, y) in [
        (got.energies[0], want.energies[0]),
        (got.energies[1], want.energies[1]),
        (got.lambda, want.lambda),
        (got.overlap, want.overlap),
        (got.comm_ab, want.comm_ab),
        (got.comm_a_ab, want.comm_a_ab),
        (got.comm_b_ba, want.comm_b_ba),
        (got.comm_h_ab, want.comm_h_ab),
        (got.a_norm, want.a_norm),
        (got.h_sq_norm, want.h_sq_norm),
    ] {
        assert_abs_diff_eq!(x, y, epsilon = 1e-9);
    }
    assert_abs_diff_eq!(got.a, want.a, epsilon = 1e-4);
    assert_abs_diff_eq!(got.g_star, want.g_star, epsilon = 1e-4);
    let overlap = SingleQubitModel::ground_closed_form()
        .inner(&m.ground().vector)
        .norm();
    assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
}

#[test]
fn chain_length_limits() {
    assert_eq!(
        XXChainModel::build(4, 1.0).unwrap_err(),
        Error::LengthOutOfRange {
            len: 4,
            min: 5,
            max: 12
        }
    );
    assert!(XXChainModel::build(13, 1.0).is_err());
    assert!(XXChainModel::build(5, 0.0).is_err());
    let m = XXChainModel::build(5, 1.0).unwrap();
    assert_eq!(m.a().term_count(), 5);
    assert_eq!(m.b().term_count(), 5);
    assert_eq!(m.h().term_count(), 10);
}

#[test]
fn fully_polarized_states_have_zero_energy() {
    for len in [5, 6, 8] {
        let m = XXChainModel::build(len, 1.3).unwrap();
        let h = m.h();
        for index in [0, m.dim() - 1] {
            let v = StateVector::basis(m.dim(), index);
            assert!(h.apply(&v).norm() <= 1e-12);
        }
        assert!(m.residual(&m.vacuum()) <= 1e-12);
    }
}

#[test]
fn dense_spectrum_contains_zero() {
    let s = XXChainModel::build(5, 1.0)
        .unwrap()
        .dense_splitting()
        .unwrap();
    assert!(s.energies().iter().any(|e| e.abs() <= 1e-10));
}

#[test]
fn commutators_match_closed_forms_term_for_term() {
    use Pauli::{X, Y, Z};
    for len in 5..=9 {
        for j in [1.0, 0.7] {
            let m = XXChainModel::build(len, j).unwrap();
            let ab = m.a().commutator(m.b()).unwrap();
            let i8 = Complex64::new(0.0, j * j / 8.0);
            let expect_ab = translate(
                len,
                &[
                    (i8, &[(0, X), (1, Z), (2, Y)]),
                    (i8, &[(0, Y), (1, Z), (2, X)]),
                ],
            );
            assert_eq!(ab, expect_ab, "L = {len}");
            assert_eq!(ab.term_count(), 2 * len);
            for (_, c) in ab.terms() {
                assert_abs_diff_eq!(c.norm(), j * j / 8.0, epsilon = 1e-15);
            }
            let c3 = Complex64::new(j.powi(3) / 8.0, 0.0);
            let a_ab = m.a().commutator(&ab).unwrap();
            let expect_a_ab = translate(
                len,
                &[
                    (c3, &[(0, Y), (1, Y)]),
                    (-c3, &[(0, X), (1, Z), (2, Z), (3, X)]),
                ],
            );
            assert_eq!(a_ab, expect_a_ab);
            let b_ba = m
                .b()
                .commutator(&ab.scale(Complex64::new(-1.0, 0.0)))
                .unwrap();
            let expect_b_ba = translate(
                len,
                &[
                    (c3, &[(0, X), (1, X)]),
                    (-c3, &[(0, Y), (1, Z), (2, Z), (3, Y)]),
                ],
            );
            assert_eq!(b_ba, expect_b_ba);
            assert_abs_diff_eq!(
                a_ab.triangle_norm_bound(),
                j.powi(3) * len as f64 / 4.0,
                epsilon = 1e-12
            );
            assert_abs_diff_eq!(
                ab.frobenius_lower_bound(),
                j * j / 4.0 * (len as f64 / 2.0).sqrt(),
                epsilon = 1e-12
            );
        }
    }
}

#[test]
fn symbolic_commutators_match_dense() {
    for len in [5, 6, 7] {
        let m = XXChainModel::build(len, 1.0).unwrap();
        let (a, b) = (m.a().to_dense().unwrap(), m.b().to_dense().unwrap());
        let ab = commutator(&a, &b).unwrap();
        let sym = m.a().commutator(m.b()).unwrap();
        assert!(operator_norm(&(&sym.to_dense().unwrap() - &ab)) <= 1e-10);
        let dense_norm = operator_norm(&ab);
        assert!(sym.frobenius_lower_bound() <= dense_norm + 1e-12);
        assert!(dense_norm <= sym.triangle_norm_bound() + 1e-12);
    }
}

#[test]
fn a_squared_on_vacuum() {
    for len in [5, 6, 7] {
        let m = XXChainModel::build(len, 1.0).unwrap();
        let a = m.a().to_dense().unwrap();
        let v = m.vacuum().vector;
        let dense = a.mul_vector(&a.mul_vector(&v).unwrap()).unwrap().norm();
        assert_abs_diff_eq!(dense, m.analytic_a_squared_vacuum(), epsilon = 1e-10);
    }
    let m = XXChainModel::build(5, 1.0).unwrap();
    assert_abs_diff_eq!(
        m.analytic_a_squared_vacuum(),
        65f64.sqrt() / 16.0,
        epsilon = 1e-15
    );
}

#[test]
fn two_excitation_energy_and_residual() {
    let m = XXChainModel::build(5, 1.0).unwrap();
    let psi = m.two_excitation_state(0, 4).unwrap();
    assert_abs_diff_eq!(psi.value, 2.0 * (PI / 5.0).cos(), epsilon = 1e-14);
    assert!(m.residual(&psi) <= 1e-9);
    assert!(m.two_excitation_state(2, 2).is_err());
    assert!(m.two_excitation_state(0, 5).is_err());
    for len in [5, 6, 7, 8] {
        let m = XXChainModel::build(len, 0.9).unwrap();
        for k1 in 0..len {
            for k2 in (k1 + 1)..len {
                let psi = m.two_excitation_state(k1, k2).unwrap();
                assert!(m.residual(&psi) <= 1e-9, "L={len} k=({k1},{k2})");
                assert_abs_diff_eq!(psi.vector.norm(), 1.0, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn two_excitation_overlaps() {
    for len in [5, 6, 7] {
        let j = 1.1;
        let m = XXChainModel::build(len, j).unwrap();
        let a_phi = m.a().apply(&m.vacuum().vector);
        for k1 in 0..len {
            for k2 in 0..len {
                if k1 == k2 {
                    continue;
                }
                let overlap = m
                    .two_excitation_state(k1, k2)
                    .unwrap()
                    .vector
                    .inner(&a_phi)
                    .norm();
                let expect = if k1 + k2 == len - 1 {
                    0.5 * j * m.momentum(k1).sin().abs()
                } else {
                    0.0
                };
                assert_abs_diff_eq!(overlap, expect, epsilon = 1e-10);
            }
        }
    }
}

#[test]
fn analytic_gap_matches_states() {
    let m = XXChainModel::build(6, 1.0).unwrap();
    assert_eq!(m.usable_modes(), vec![0, 2, 3, 5]);
    let exact = m.bound_inputs(NormMode::Exact).unwrap();
    for gap in &exact.gaps {
        let k = gap.k.unwrap();
        let analytic = m.analytic_gap(k).unwrap();
        assert_abs_diff_eq!(gap.lambda, analytic.lambda, epsilon = 1e-12);
        assert_abs_diff_eq!(gap.overlap, analytic.overlap, epsilon = 1e-10);
        assert!(gap.a2 <= analytic.a2 + 1e-12);
    }
    assert!(matches!(m.analytic_gap(1), Err(Error::DegenerateGap)));
    assert_eq!(
        XXChainModel::build(5, 1.0).unwrap().usable_modes(),
        vec![0, 1, 3, 4]
    );
}

#[test]
fn analytic_norms_bracket_exact() {
    for len in [5, 6, 7] {
        let m = XXChainModel::build(len, 1.0).unwrap();
        let exact = m.bound_inputs(NormMode::Exact).unwrap().norms;
        let cert = m.analytic_norms();
        assert!(cert.comm_ab <= exact.comm_ab + 1e-12);
        assert!(exact.comm_ab <= cert.comm_ab_upper + 1e-12);
        assert!(exact.comm_a_ab <= cert.comm_a_ab + 1e-12);
        assert!(exact.comm_b_ba <= cert.comm_b_ba + 1e-12);
        assert!(exact.comm_h_ab <= cert.comm_h_ab + 1e-12);
        assert!(exact.a_norm <= cert.a_norm + 1e-12);
        assert!(exact.h_sq_norm <= cert.h_sq_norm + 1e-12);
    }
}

#[test]
fn chain_bounds_vanish_at_zero_time() {
    let m = XXChainModel::build(5, 1.0).unwrap();
    assert_eq!(m.chain_state_bound(0.0, 20, None).unwrap().value, 0.0);
    assert_eq!(m.chain_norm_bound(0.0, 20, None).unwrap().value, 0.0);
    assert_eq!(m.chain_state_upper(0.0, 20).unwrap(), 0.0);
}

#[test]
fn chain_bounds_bracket_dense_errors() {
    let m = XXChainModel::build(5, 1.0).unwrap();
    let s = m.dense_splitting().unwrap();
    let vacuum = m.vacuum();
    let errs = s.errors(1.0, 20, Some(&vacuum)).unwrap();
    let xi = errs.state.unwrap();
    let lower = m.chain_state_bound(1.0, 20, None).unwrap();
    assert!(lower.value <= xi && xi <= m.chain_state_upper(1.0, 20).unwrap());
    assert!(errs.norm <= m.chain_norm_upper(1.0, 20).unwrap());
    let small = s.norm_error(0.02, 10).unwrap();
    let r = m.chain_norm_bound(0.02, 10, None).unwrap();
    assert!(r.valid && r.value > 0.0 && r.value <= small);
    // window Jt <= 8n/L
    assert!(!m.chain_norm_bound(16.1, 10, None).unwrap().valid);
}

#[test]
fn chain_threshold_matches_displayed_formula() {
    let m = XXChainModel::build(5, 1.0).unwrap();
    let norms = m.analytic_norms();
    let (t, l) = (1.0, 5.0);
    for k in m.usable_modes() {
        let q = m.momentum(k);
        let display = t * l / (32.0 * q.sin().abs())
            * ((3.0 - 2.0 / l).sqrt() + 2.0 * t / (t * q.cos()).sin().abs());
        let gap = m.analytic_gap(k).unwrap();
        let n = state_nontrivial_n(t, &gap, &norms).unwrap();
        assert_eq!(n, display.floor() as usize + 1);
        assert!(m.chain_state_bound(t, n, Some(k)).unwrap().raw > 0.0);
        if n > 1 {
            assert!(m.chain_state_bound(t, n - 1, Some(k)).unwrap().raw <= 0.0);
        }
        // the closed form is the generic bound with the analytic inputs
        for n in [1, 20, 80] {
            assert_abs_diff_eq!(
                m.chain_state_bound(t, n, Some(k)).unwrap().raw,
                lower_state_bound(t, n, &gap, &norms).unwrap().raw,
                epsilon = 1e-14
            );
        }
    }
}

#[test]
fn exact_threshold_sign_change() {
    let m = XXChainModel::build(5, 1.0).unwrap();
    let inputs = m.bound_inputs(NormMode::Exact).unwrap();
    for gap in &inputs.gaps {
        let n = state_nontrivial_n(1.0, gap, &inputs.norms).unwrap();
        assert!(lower_state_bound(1.0, n, gap, &inputs.norms).unwrap().raw > 0.0);
        if n > 1 {
            assert!(
                lower_state_bound(1.0, n - 1, gap, &inputs.norms)
                    .unwrap()
                    .raw
                    <= 0.0
            );
        }
    }
}

#[test]
fn certificate_bounds_below_exact_bounds_below_errors() {
    let m = XXChainModel::build(5, 1.0).unwrap();
    let s = m.dense_splitting().unwrap();
    let exact = m.bound_inputs(NormMode::Exact).unwrap();
    let cert = m.bound_inputs(NormMode::Certificate).unwrap();
    let vacuum = m.vacuum();
    for t in [0.02, 0.1, 0.5, 1.0, 2.0] {
        for n in [1, 10, 20] {
            let errs = s.errors(t, n, Some(&vacuum)).unwrap();
            let ex = lower_norm_bound_refined(t, n, &exact.norms, &exact.gaps).unwrap();
            let ce = m.chain_norm_bound(t, n, None).unwrap();
            assert!(ce.value <= ex.value + 1e-12, "t={t} n={n}");
            assert!(ex.value <= errs.norm + 1e-9);
            let xs = exact
                .gaps
                .iter()
                .map(|g| lower_state_bound(t, n, g, &exact.norms).unwrap().value)
                .fold(0.0, f64::max);
            let cs = m.chain_state_bound(t, n, None).unwrap().value;
            assert!(cs <= xs + 1e-12 && xs <= errs.state.unwrap() + 1e-9);
            let eu = upper_state_bound(t, n, &exact.upper_shift, NormMode::Exact)
                .unwrap()
                .value;
            let cu = upper_state_bound(t, n, &cert.upper_shift, NormMode::Certificate)
                .unwrap()
                .value;
            assert!(errs.state.unwrap() <= eu + 1e-9 && eu <= cu + 1e-12);
            assert_abs_diff_eq!(cu, m.chain_state_upper(t, n).unwrap(), epsilon = 1e-14);
            let un = upper_norm_bound(t, n, &cert.norms).unwrap().value;
            assert_abs_diff_eq!(un, m.chain_norm_upper(t, n).unwrap(), epsilon = 1e-14);
        }
    }
}

#[test]
fn coupling_enters_only_through_jt() {
    let (m1, m2) = (
        XXChainModel::build(5, 1.0).unwrap(),
        XXChainModel::build(5, 2.0).unwrap(),
    );
    let (s1, s2) = (m1.dense_splitting().unwrap(), m2.dense_splitting().unwrap());
    let (i1, i2) = (
        m1.bound_inputs(NormMode::Exact).unwrap(),
        m2.bound_inputs(NormMode::Exact).unwrap(),
    );
    for t in [0.1, 0.8, 2.0] {
        for n in [1, 7] {
            let e1 = s1.errors(t, n, Some(&m1.vacuum())).unwrap();
            let e2 = s2.errors(t / 2.0, n, Some(&m2.vacuum())).unwrap();
            assert_abs_diff_eq!(e1.norm, e2.norm, epsilon = 1e-10);
            assert_abs_diff_eq!(e1.state.unwrap(), e2.state.unwrap(), epsilon = 1e-10);
            let b1 = lower_norm_bound_refined(t, n, &i1.norms, &i1.gaps)
                .unwrap()
                .value;
            let b2 = lower_norm_bound_refined(t / 2.0, n, &i2.norms, &i2.gaps)
                .unwrap()
                .value;
            assert_abs_diff_eq!(b1, b2, epsilon = 1e-10);
            assert_abs_diff_eq!(
                m1.chain_norm_bound(t, n, None).unwrap().value,
                m2.chain_norm_bound(t / 2.0, n, None).unwrap().value,
                epsilon = 1e-10
            );
        }
    }
}
