use super::*;
use crate::analytic::RotationModel;
use crate::rng::trial_rng;
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;

const TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn assert_amps(state: &StateVector, expected: &[Complex64], tol: f64) {
    assert_eq!(state.len(), expected.len());
    for (i, (a, e)) in state.amplitudes().iter().zip(expected).enumerate() {
        assert!((a - e).norm() <= tol, "index {i}: {a} vs {e}");
    }
}

fn random_state(qubits: u32, seed: u64) -> StateVector {
    let mut rng = trial_rng(seed, 0);
    let amps = (0..1usize << qubits)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    StateVector::normalized(amps).unwrap()
}

#[test]
fn uniform_examples() {
    let s = FRAC_1_SQRT_2;
    assert_amps(&StateVector::uniform(1).unwrap(), &[c(s), c(s)], 1e-15);
    assert_amps(&StateVector::uniform(2).unwrap(), &[c(0.5); 4], 1e-15);
    let e = 1.0 / (2.0 * 2f64.sqrt());
    assert_amps(&StateVector::uniform(3).unwrap(), &[c(e); 8], 1e-15);
}

#[test]
fn uniform_size_limit() {
    assert_eq!(
        StateVector::uniform(25),
        Err(Error::SizeLimit {
            requested: 25,
            limit: 24
        })
    );
    assert!(StateVector::uniform(0).is_err());
}

#[test]
fn from_amplitudes_validates() {
    assert!(StateVector::from_amplitudes(vec![c(1.0); 3]).is_err());
    assert!(matches!(
        StateVector::from_amplitudes(vec![c(1.0); 4]),
        Err(Error::NormDrift(_))
    ));
    assert!(StateVector::from_amplitudes(vec![c(0.0), c(1.0)]).is_ok());
}

#[test]
fn phase_oracle_examples() {
    let oracle = OracleSpec::new(2, [3]).unwrap();
    let mut s = StateVector::uniform(2).unwrap();
    s.apply_phase_oracle(&oracle).unwrap();
    assert_amps(&s, &[c(0.5), c(0.5), c(0.5), c(-0.5)], 0.0);
    assert_eq!(oracle.queries(), 1);

    let empty = OracleSpec::new(3, []).unwrap();
    let before = random_state(3, 1);
    let mut s = before.clone();
    s.apply_phase_oracle(&empty).unwrap();
    assert_eq!(s, before);

    let all = OracleSpec::new(2, 0..4).unwrap();
    let mut s = StateVector::uniform(2).unwrap();
    s.apply_phase_oracle(&all).unwrap();
    assert_amps(&s, &[c(-0.5); 4], 0.0);
}

#[test]
fn phase_oracle_dimension_mismatch() {
    let oracle = OracleSpec::new(3, [1]).unwrap();
    let mut s = StateVector::uniform(2).unwrap();
    assert!(matches!(
        s.apply_phase_oracle(&oracle),
        Err(Error::DimensionMismatch { .. })
    ));
    assert_eq!(oracle.queries(), 0);
}

#[test]
fn phase_oracle_acts_on_low_qubits_only() {
    // 2 input qubits, 1 spectator qubit above them.
    let oracle = OracleSpec::new(2, [1]).unwrap();
    let mut s = StateVector::uniform(3).unwrap();
    s.apply_phase_oracle(&oracle).unwrap();
    for i in 0..8u64 {
        let expected = if i & 3 == 1 { -1.0 } else { 1.0 };
        assert!((s.amplitudes()[i as usize].re - expected / 8f64.sqrt()).abs() < 1e-15);
    }
}

#[test]
fn oracle_rejects_out_of_range_marks() {
    assert!(OracleSpec::new(2, [4]).is_err());
    let o = OracleSpec::new(3, [5, 1, 5]).unwrap();
    assert_eq!(o.marked(), &[1, 5]);
    assert!(o.evaluate(5));
    assert!(!o.evaluate(2));
    assert_eq!(o.evaluations(), 2);
    assert_eq!(o.queries(), 0);
}

#[test]
fn diffusion_examples() {
    let mut s = StateVector::from_amplitudes(vec![c(0.5), c(0.5), c(0.5), c(-0.5)]).unwrap();
    s.apply_diffusion(2).unwrap();
    assert_amps(&s, &[c(0.0), c(0.0), c(0.0), c(1.0)], 1e-15);

    let mut u = StateVector::uniform(5).unwrap();
    u.apply_diffusion(5).unwrap();
    assert_amps(&u, StateVector::uniform(5).unwrap().amplitudes(), 1e-15);

    // One-hot at x0: each entry becomes 2·(1/4) − x_i.
    for x0 in 0..4u64 {
        let mut s = StateVector::basis(2, x0).unwrap();
        s.apply_diffusion(2).unwrap();
        let expected: Vec<_> = (0..4).map(|i| c(if i == x0 { -0.5 } else { 0.5 })).collect();
        assert_amps(&s, &expected, 1e-15);
    }
}

#[test]
fn grover_iteration_examples() {
    let oracle = OracleSpec::new(2, [3]).unwrap();
    let mut s = StateVector::uniform(2).unwrap();
    s.apply_grover_iteration(&oracle).unwrap();
    assert_amps(&s, &[c(0.0), c(0.0), c(0.0), c(1.0)], 1e-15);
    assert_eq!(oracle.queries(), 1);

    let empty = OracleSpec::new(4, []).unwrap();
    let mut s = StateVector::uniform(4).unwrap();
    s.apply_grover_iteration(&empty).unwrap();
    assert_amps(&s, StateVector::uniform(4).unwrap().amplitudes(), 1e-15);
}

#[test]
fn grover_iterates_match_rotation_formula() {
    // G^k|h⟩ = sin((2k+1)θ)|A⟩ + cos((2k+1)θ)|B⟩.
    let marked = [2u64, 7, 19, 40, 41];
    let n = 6;
    let oracle = OracleSpec::new(n, marked).unwrap();
    let model = RotationModel::new(n, marked.len() as u64).unwrap();
    let (a, b) = (model.marked() as f64, model.unmarked() as f64);
    let mut s = StateVector::uniform(n).unwrap();
    for k in 0..30u64 {
        let angle = (2 * k + 1) as f64 * model.theta();
        for (i, amp) in s.amplitudes().iter().enumerate() {
            let expected = if oracle.contains(i as u64) {
                angle.sin() / a.sqrt()
            } else {
                angle.cos() / b.sqrt()
            };
            assert!((amp.re - expected).abs() < TOL && amp.im.abs() < TOL);
        }
        s.apply_grover_iteration(&oracle).unwrap();
    }
}

#[test]
fn diffusion_equals_hadamard_zero_reflection_path() {
    for (n, extra) in [(1, 0), (3, 0), (4, 2), (6, 1)] {
        let mut fast = random_state(n + extra, 11 + n as u64);
        let mut slow = fast.clone();
        fast.apply_diffusion(n).unwrap();
        slow.apply_hadamard_layer(0, n).unwrap();
        slow.apply_zero_reflection(n).unwrap();
        slow.negate();
        slow.apply_hadamard_layer(0, n).unwrap();
        assert!(fast.norm_diff(&slow).unwrap() < TOL);
    }
}

#[test]
fn grover_step_stays_in_plane_and_advances_by_two_theta() {
    let n = 7;
    let marked = [3u64, 77, 100];
    let oracle = OracleSpec::new(n, marked).unwrap();
    let model = RotationModel::new(n, 3).unwrap();
    let size = 1usize << n;
    let a_state = StateVector::normalized(
        (0..size)
            .map(|i| c(if oracle.contains(i as u64) { 1.0 } else { 0.0 }))
            .collect(),
    )
    .unwrap();
    let b_state = StateVector::normalized(
        (0..size)
            .map(|i| c(if oracle.contains(i as u64) { 0.0 } else { 1.0 }))
            .collect(),
    )
    .unwrap();
    for start in [0.0f64, 0.3, 1.1, 2.0, -0.7] {
        let amps: Vec<_> = a_state
            .amplitudes()
            .iter()
            .zip(b_state.amplitudes())
            .map(|(x, y)| x * start.sin() + y * start.cos())
            .collect();
        let mut s = StateVector::from_amplitudes(amps).unwrap();
        s.apply_grover_iteration(&oracle).unwrap();
        let along_a = a_state.inner_product(&s).unwrap();
        let along_b = b_state.inner_product(&s).unwrap();
        assert!((along_a.norm_sqr() + along_b.norm_sqr() - 1.0).abs() < TOL);
        let advanced = start + 2.0 * model.theta();
        assert!((along_a.re - advanced.sin()).abs() < TOL);
        assert!((along_b.re - advanced.cos()).abs() < TOL);
    }
}

#[test]
fn bit_flip_oracle_with_minus_ancilla_equals_phase_oracle() {
    let n = 4;
    let oracle = OracleSpec::new(n, [0, 9, 13]).unwrap();
    let input = random_state(n, 5);
    // Input on qubits 0..n, ancilla |−⟩ on qubit n.
    let minus = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
    let joint: Vec<_> = (0..2usize << n)
        .map(|i| input.amplitudes()[i & ((1 << n) - 1)] * minus[i >> n])
        .collect();
    let mut via_bit = StateVector::from_amplitudes(joint).unwrap();
    via_bit.apply_bit_flip_oracle(&oracle, n).unwrap();

    let mut phased = input.clone();
    phased.apply_phase_oracle(&oracle).unwrap();
    let expected: Vec<_> = (0..2usize << n)
        .map(|i| phased.amplitudes()[i & ((1 << n) - 1)] * minus[i >> n])
        .collect();
    assert_amps(&via_bit, &expected, 1e-15);
    assert_eq!(oracle.queries(), 2);
    assert!(via_bit.apply_bit_flip_oracle(&oracle, 1).is_err());
}

fn dft_matrix_apply(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let size = input.len();
    let sign = if inverse { -1.0 } else { 1.0 };
    (0..size)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    let phase = sign * 2.0 * PI * (j * k) as f64 / size as f64;
                    x * Complex64::from_polar(1.0, phase)
                })
                .sum::<Complex64>()
                / (size as f64).sqrt()
        })
        .collect()
}

#[test]
fn qft_examples() {
    let mut z = StateVector::zero(4).unwrap();
    z.qft(0, 4).unwrap();
    assert_amps(&z, StateVector::uniform(4).unwrap().amplitudes(), 1e-12);

    let mut a = random_state(3, 9);
    let mut b = a.clone();
    a.qft(1, 1).unwrap();
    b.apply_hadamard(1).unwrap();
    assert!(a.norm_diff(&b).unwrap() < 1e-12);

    assert!(z.qft(3, 2).is_err());
    assert!(z.qft(0, 0).is_err());
}

#[test]
fn qft_matches_direct_matrix() {
    for t in 1..=8u32 {
        let state = random_state(t, 100 + t as u64);
        let mut fwd = state.clone();
        fwd.qft(0, t).unwrap();
        assert_amps(&fwd, &dft_matrix_apply(state.amplitudes(), false), TOL);
        let mut inv = state.clone();
        inv.inverse_qft(0, t).unwrap();
        assert_amps(&inv, &dft_matrix_apply(state.amplitudes(), true), TOL);
    }
}

#[test]
fn qft_on_high_register_matches_direct_matrix() {
    // 2 low spectator qubits, 3 transformed qubits, 1 high spectator.
    let (low, t, total) = (2u32, 3u32, 6u32);
    let state = random_state(total, 77);
    let mut got = state.clone();
    got.qft(low, t).unwrap();
    let mut expected = state.amplitudes().to_vec();
    for high in 0..1usize << (total - low - t) {
        for l in 0..1usize << low {
            let idx = |y: usize| (high << (low + t)) | (y << low) | l;
            let column: Vec<_> = (0..1usize << t).map(|y| state.amplitudes()[idx(y)]).collect();
            for (y, v) in dft_matrix_apply(&column, false).into_iter().enumerate() {
                expected[idx(y)] = v;
            }
        }
    }
    assert_amps(&got, &expected, TOL);
}

#[test]
fn controlled_power_on_eigenvector() {
    // N = 4, A = {3}: ψ₊ = (|A⟩ + i|B⟩)/√2 has eigenvalue e^{i2θ}, θ = π/6.
    let oracle = OracleSpec::new(2, [3]).unwrap();
    let b = 1.0 / 3f64.sqrt();
    let i = Complex64::i();
    let psi_plus: Vec<Complex64> = [i * b, i * b, i * b, c(1.0)]
        .iter()
        .map(|x| x * FRAC_1_SQRT_2)
        .collect();
    let theta = PI / 6.0;
    let op = GroverOperator::new(&oracle);

    for (j, phase) in [(0u32, 2.0 * theta), (1, 4.0 * theta), (2, 8.0 * theta)] {
        // Control qubit 2 set: |1⟩_c ⊗ ψ₊.
        let mut amps = vec![c(0.0); 8];
        amps[4..].copy_from_slice(&psi_plus);
        let mut s = StateVector::from_amplitudes(amps).unwrap();
        s.apply_controlled_power(&op, 2, j).unwrap();
        let rot = Complex64::from_polar(1.0, phase);
        let expected: Vec<_> = (0..8)
            .map(|k| if k < 4 { c(0.0) } else { psi_plus[k - 4] * rot })
            .collect();
        assert_amps(&s, &expected, TOL);
    }
    assert_eq!(oracle.queries(), 1 + 2 + 4);

    // Control 0 branch untouched.
    let mut amps = vec![c(0.0); 8];
    amps[..4].copy_from_slice(&psi_plus);
    let before = StateVector::from_amplitudes(amps).unwrap();
    let mut s = before.clone();
    s.apply_controlled_power(&op, 2, 3).unwrap();
    assert_eq!(s, before);
    assert!(s.apply_controlled_power(&op, 1, 0).is_err());
}

#[test]
fn measure_one_hot_is_deterministic() {
    let s = StateVector::basis(5, 19).unwrap();
    let mut rng = trial_rng(1, 0);
    for _ in 0..100 {
        assert_eq!(s.measure(&mut rng).unwrap(), 19);
    }
}

#[test]
fn measure_uniform_passes_chi_square() {
    let s = StateVector::uniform(2).unwrap();
    let mut rng = trial_rng(2024, 0);
    let draws = 10_000;
    let mut counts = [0u32; 4];
    for _ in 0..draws {
        counts[s.measure(&mut rng).unwrap() as usize] += 1;
    }
    let expected = draws as f64 / 4.0;
    let chi2: f64 = counts
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    // 0.999 quantile of χ² with 3 degrees of freedom.
    assert!(chi2 < 16.266, "chi2 = {chi2}");
}

#[test]
fn measure_is_seed_deterministic() {
    let s = random_state(6, 3);
    let a: Vec<u64> = {
        let mut rng = trial_rng(5, 1);
        (0..50).map(|_| s.measure(&mut rng).unwrap()).collect()
    };
    let b: Vec<u64> = {
        let mut rng = trial_rng(5, 1);
        (0..50).map(|_| s.measure(&mut rng).unwrap()).collect()
    };
    assert_eq!(a, b);
}

#[test]
fn measure_after_optimal_iterations() {
    let oracle = OracleSpec::new(10, [613]).unwrap();
    let mut s = StateVector::uniform(10).unwrap();
    for _ in 0..24 {
        s.apply_grover_iteration(&oracle).unwrap();
    }
    let p = RotationModel::new(10, 1).unwrap().success_prob(24);
    let mut rng = trial_rng(99, 0);
    let draws = 10_000;
    let hits = (0..draws).filter(|_| s.measure(&mut rng).unwrap() == 613).count();
    let se = (p * (1.0 - p) / draws as f64).sqrt();
    assert!((hits as f64 / draws as f64 - p).abs() < 4.0 * se + 1e-4);
}

#[test]
fn measure_rejects_drifted_norm() {
    let mut s = StateVector::uniform(3).unwrap();
    s.amplitudes_mut()[0] *= 2.0;
    assert!(matches!(
        s.measure(&mut trial_rng(0, 0)),
        Err(Error::NormDrift(_))
    ));
}

#[test]
fn metric_examples() {
    let x = random_state(4, 8);
    assert!((x.inner_product(&x).unwrap() - c(1.0)).norm() < 1e-12);
    assert_eq!(x.norm_diff(&x).unwrap(), 0.0);

    let e0 = StateVector::basis(3, 0).unwrap();
    let e5 = StateVector::basis(3, 5).unwrap();
    assert!((e0.norm_diff(&e5).unwrap() - 2f64.sqrt()).abs() < 1e-15);

    for n in [2u32, 5, 8] {
        let h = StateVector::uniform(n).unwrap();
        let oracle = OracleSpec::singleton(n, 1).unwrap();
        let mut zh = h.clone();
        zh.apply_phase_oracle(&oracle).unwrap();
        let size = (1u64 << n) as f64;
        assert!((zh.norm_diff(&h).unwrap() - 2.0 / size.sqrt()).abs() < 1e-12);
        assert!((h.project_marked_norm(&oracle).unwrap() - 1.0 / size.sqrt()).abs() < 1e-12);
    }
    assert!(matches!(
        e0.norm_diff(&StateVector::zero(2).unwrap()),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn serializes_as_re_im_pairs() {
    let s = StateVector::from_amplitudes(vec![c(0.0), Complex64::new(0.6, -0.8)]).unwrap();
    assert_eq!(serde_json::to_string(&s).unwrap(), "[[0.0,0.0],[0.6,-0.8]]");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operations_preserve_norm(n in 1u32..=8, seed in any::<u64>(), mark in any::<u64>()) {
        let mut s = random_state(n, seed);
        let oracle = OracleSpec::new(n, [mark % (1 << n)]).unwrap();
        s.apply_phase_oracle(&oracle).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < TOL);
        s.apply_diffusion(n).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < TOL);
        s.apply_hadamard(n - 1).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < TOL);
        s.qft(0, n).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn qft_round_trip(n in 1u32..=10, seed in any::<u64>(), first in 0u32..4) {
        let first = first.min(n - 1);
        let t = n - first;
        let original = random_state(n, seed);
        let mut s = original.clone();
        s.qft(first, t).unwrap();
        s.inverse_qft(first, t).unwrap();
        prop_assert!(s.norm_diff(&original).unwrap() < TOL);
    }
}
