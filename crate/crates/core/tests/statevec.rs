use actsim::statevec::*;
use actsim::C64;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> DenseOperator {
    // Columns of a QR factor of a Gaussian matrix are Haar distributed up to phases.
    let d = 1usize << n;
    let cols: Vec<StateVector> = (0..d).map(|_| StateVector::random(n, rng)).collect();
    let m = DMatrix::from_fn(d, d, |i, j| cols[j].amplitudes()[i]);
    let q = m.qr().q();
    DenseOperator::from_matrix(n, q).unwrap()
}

#[test]
fn full_turn_on_unblocked_target_flips_sign() {
    let s = StateVector::basis(2, 0).unwrap();
    let out = apply_projector_controlled_rotation(
        &s,
        1,
        &[0],
        &RotationSpec::normalized(2.0 * PI, [0.2, 0.4, 0.9]).unwrap(),
    )
    .unwrap();
    assert!((out.amplitudes()[0] - c(-1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn zero_angle_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let s = StateVector::random(3, &mut rng);
    let out = apply_projector_controlled_rotation(&s, 1, &[0, 2], &RotationSpec::x(0.0)).unwrap();
    assert_eq!(out, s);
}

#[test]
fn excited_neighbour_blocks_rotation() {
    // |e g g> with target 2 and neighbour 0.
    let s = StateVector::basis(3, 0b100).unwrap();
    let out = apply_projector_controlled_rotation(&s, 2, &[0], &RotationSpec::x(PI)).unwrap();
    assert_eq!(out, s);
}

#[test]
fn controlled_rotation_rejects_bad_indices() {
    let s = StateVector::ground(2);
    assert!(apply_projector_controlled_rotation(&s, 2, &[0], &RotationSpec::x(1.0)).is_err());
    assert!(apply_projector_controlled_rotation(&s, 0, &[0], &RotationSpec::x(1.0)).is_err());
    assert!(apply_projector_controlled_rotation(&s, 0, &[5], &RotationSpec::x(1.0)).is_err());
}

#[test]
fn fidelity_examples() {
    let g = StateVector::basis(1, 0).unwrap();
    let e = StateVector::basis(1, 1).unwrap();
    let plus = StateVector::from_amplitudes(1, vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    assert!((state_fidelity(&g, &g).unwrap() - 1.0).abs() < 1e-15);
    assert!(state_fidelity(&g, &e).unwrap().abs() < 1e-15);
    assert!((state_fidelity(&g, &plus).unwrap() - 0.5).abs() < 1e-15);
    assert!(state_fidelity(&g, &StateVector::ground(2)).is_err());
}

#[test]
fn distance_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u = random_unitary(2, &mut rng);
    assert!(operator_distance(&u, &u, DistanceMode::PhaseInsensitive).unwrap() < 1e-12);
    assert!(operator_distance(&u, &u, DistanceMode::Spectral).unwrap() < 1e-12);
    let minus = u.scale(c(-1.0, 0.0));
    assert!(operator_distance(&u, &minus, DistanceMode::PhaseInsensitive).unwrap() < 1e-12);
    assert!((operator_distance(&u, &minus, DistanceMode::Spectral).unwrap() - 2.0).abs() < 1e-12);
    let id = DenseOperator::identity(1).unwrap();
    let z = DenseOperator::diagonal(1, &[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
    assert!((operator_distance(&id, &z, DistanceMode::Spectral).unwrap() - 2.0).abs() < 1e-15);
    // Phase-insensitive distance for 1 vs Z: best phase e^{i pi/2} gives sqrt(2).
    assert!(
        (operator_distance(&id, &z, DistanceMode::PhaseInsensitive).unwrap() - 2f64.sqrt()).abs()
            < 1e-12
    );
}

#[test]
fn distance_rejects_non_unitary_and_mismatched() {
    let id = DenseOperator::identity(1).unwrap();
    let half = id.scale(c(0.5, 0.0));
    assert!(matches!(
        operator_distance(&id, &half, DistanceMode::Spectral),
        Err(actsim::Error::NotUnitary(_))
    ));
    let id2 = DenseOperator::identity(2).unwrap();
    assert!(operator_distance(&id, &id2, DistanceMode::Spectral).is_err());
}

#[test]
fn phase_distance_matches_numeric_minimisation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let u = random_unitary(2, &mut rng);
        let v = random_unitary(2, &mut rng);
        let closed = operator_distance(&u, &v, DistanceMode::PhaseInsensitive).unwrap();
        let numeric = phase_insensitive_distance_general(u.matrix(), v.matrix()).unwrap();
        assert!((closed - numeric).abs() < 1e-9, "{closed} vs {numeric}");
    }
}

#[test]
fn average_gate_fidelity_examples() {
    let id = DenseOperator::identity(2).unwrap();
    assert!((average_gate_fidelity(&id, &id).unwrap() - 1.0).abs() < 1e-15);
    let cz =
        DenseOperator::diagonal(2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
    assert!((average_gate_fidelity(&id, &cz).unwrap() - 0.4).abs() < 1e-15);
}

#[test]
fn average_gate_fidelity_matches_haar_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let u = random_unitary(1, &mut rng);
    let v = random_unitary(1, &mut rng);
    let formula = average_gate_fidelity(&u, &v).unwrap();
    let samples = 20_000;
    let mut acc = 0.0;
    for _ in 0..samples {
        let psi = StateVector::random(1, &mut rng);
        acc += state_fidelity(&u.apply(&psi).unwrap(), &v.apply(&psi).unwrap()).unwrap();
    }
    let mc = acc / samples as f64;
    assert!(
        (formula - mc).abs() < 1e-2,
        "formula {formula} vs monte carlo {mc}"
    );
}

#[test]
fn block_fidelity_reduces_to_unitary_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = random_unitary(2, &mut rng);
    let v = random_unitary(2, &mut rng);
    let a = average_gate_fidelity(&u, &v).unwrap();
    let b = average_gate_fidelity_block(u.matrix(), v.matrix()).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn two_qubit_application_matches_dense_embedding() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let swap = vec![
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
    ];
    let s = StateVector::random(3, &mut rng);
    let mut t = s.clone();
    t.apply_on_qubits(&[2, 0], &swap).unwrap();
    // Swapping qubits 0 and 2 permutes the basis index bits.
    for i in 0..8usize {
        let j = (i & 0b010) | ((i & 1) << 2) | ((i >> 2) & 1);
        assert!((t.amplitudes()[j] - s.amplitudes()[i]).norm() < 1e-15);
    }
}

fn arb_rotation() -> impl Strategy<Value = RotationSpec> {
    (
        -4.0 * PI..4.0 * PI,
        -1.0f64..1.0,
        -1.0f64..1.0,
        -1.0f64..1.0,
    )
        .prop_filter("nonzero axis", |(_, x, y, z)| x * x + y * y + z * z > 1e-3)
        .prop_map(|(t, x, y, z)| RotationSpec::normalized(t, [x, y, z]).unwrap())
}

fn arb_target_and_neighbors(max_n: usize) -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
    (2..=max_n).prop_flat_map(|n| {
        (Just(n), 0..n, proptest::collection::vec(0..n, 0..n)).prop_map(|(n, t, mut nb)| {
            nb.retain(|&q| q != t);
            nb.sort();
            nb.dedup();
            (n, t, nb)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn controlled_rotation_preserves_norm((n, t, nb) in arb_target_and_neighbors(10), rot in arb_rotation(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = StateVector::random(n, &mut rng);
        let out = apply_projector_controlled_rotation(&s, t, &nb, &rot).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < NORM_TOLERANCE);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn in_place_rotation_matches_kronecker_oracle((n, t, nb) in arb_target_and_neighbors(6), rot in arb_rotation()) {
        let dense = dense_controlled_rotation(n, t, &nb, &rot).unwrap();
        let structured = DenseOperator::from_state_map(n, |s| apply_projector_controlled_rotation(&s, t, &nb, &rot)).unwrap();
        prop_assert!(dense.max_abs_diff(&structured).unwrap() < 1e-12);
    }

    #[test]
    fn projector_identities((n, _t, nb) in arb_target_and_neighbors(6)) {
        let p = ground_projector(n, &nb).unwrap();
        let id = DenseOperator::identity(n).unwrap();
        let q = DenseOperator::from_matrix(n, id.matrix() - p.matrix()).unwrap();
        let sum = DenseOperator::from_matrix(n, p.matrix() + q.matrix()).unwrap();
        prop_assert!(sum.max_abs_diff(&id).unwrap() < 1e-15);
        prop_assert!(p.mul(&q).unwrap().max_abs_diff(&DenseOperator::zeros(n).unwrap()).unwrap() < 1e-15);
        prop_assert!(p.mul(&p).unwrap().max_abs_diff(&p).unwrap() < 1e-15);
    }

    #[test]
    fn su2_composition_round_trips(a in arb_rotation(), b in arb_rotation()) {
        let composed = a.compose(&b);
        let direct = mat2_mul(&a.matrix(), &b.matrix());
        prop_assert!(mat2_max_diff(&composed.matrix(), &direct) < 1e-12);
    }
}
