use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qentangle::audit::{random_alphas, PhaseSampling};
use qentangle::concurrence::{class_terms, classify, ClassTag, ClassifyConfig, GhzM1Enumeration};
use qentangle::entangler::{apply_entangler, build_entangler, Branch};
use qentangle::povm::{delta, delta_tilde, tensor_operator, PhaseSpec, QubitSetting};
use qentangle::qstate::{
    permute_qubits, purity, random_product_state, random_state, reduced_density, schmidt_rank, Bipartition,
};
use qentangle::tensor::{dagger, is_unitary, kron, ComplexMatrix};

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(max: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(complex(), r * c).prop_map(move |e| ComplexMatrix::new(r, c, e).unwrap())
    })
}

fn setting() -> impl Strategy<Value = QubitSetting> {
    prop_oneof![Just(QubitSetting::HalfPi), Just(QubitSetting::Pi), Just(QubitSetting::Identity)]
}

/// Random 2x2 unitary from a phase and an angle pair.
fn unitary2() -> impl Strategy<Value = ComplexMatrix> {
    (0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3, 0.0f64..1.6).prop_map(|(a, b, g, t)| {
        let (c, s) = (t.cos(), t.sin());
        let e = |x: f64| Complex64::from_polar(1.0, x);
        ComplexMatrix::new(2, 2, vec![e(a) * c, e(b) * s, -e(g - b) * s, e(g - a) * c])
            .unwrap()
            .scale(e(0.4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(3), b in matrix(3), c in matrix(2)) {
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        // products of three factors round differently depending on grouping
        let scale = left.max_norm().max(1.0);
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 4.0 * f64::EPSILON * scale);
    }

    #[test]
    fn dagger_distributes_over_kron(a in matrix(3), b in matrix(3)) {
        let lhs = dagger(&kron(&a, &b).unwrap());
        let rhs = kron(&dagger(&a), &dagger(&b)).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(dagger(&dagger(&a)), a);
    }

    #[test]
    fn kron_of_unitaries_is_unitary(a in unitary2(), b in unitary2(), c in unitary2()) {
        prop_assert!(is_unitary(&a, 1e-12).unwrap());
        let k = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        prop_assert!(is_unitary(&k, 1e-12).unwrap());
    }

    #[test]
    fn qubit_delta_is_psd_and_complement_is_delta_minus_identity(phi in -10.0f64..10.0) {
        let spec = PhaseSpec::qubit(phi).unwrap();
        let d = delta(&spec).unwrap();
        prop_assert_eq!(&d, &dagger(&d));
        prop_assert!(d.min_eigenvalue_hermitian().unwrap() >= -1e-12);
        prop_assert_eq!(delta_tilde(&spec).unwrap(), d.sub(&ComplexMatrix::identity(2)).unwrap());
    }

    #[test]
    fn tensor_operators_are_unitary(settings in prop::collection::vec(setting(), 1..=5)) {
        let op = tensor_operator(&settings).unwrap();
        prop_assert!(is_unitary(op.matrix(), 1e-12).unwrap());
        prop_assert!(op.matrix().is_hermitian(0.0));
    }

    #[test]
    fn product_states_are_pure_on_every_qubit_and_cut(seed in any::<u64>(), m in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_product_state(&mut rng, m).unwrap();
        for q in 1..=m {
            let p = purity(&reduced_density(&s, &[q]).unwrap()).unwrap();
            prop_assert!((p - 1.0).abs() < 1e-10);
        }
        for mask in 1..(1usize << m) - 1 {
            let left: Vec<usize> = (1..=m).filter(|q| mask >> (q - 1) & 1 == 1).collect();
            let cut = Bipartition::new(m, &left).unwrap();
            prop_assert_eq!(schmidt_rank(&s, &cut, 1e-10).unwrap(), 1);
        }
    }

    #[test]
    fn reduced_density_has_unit_trace(seed in any::<u64>(), m in 1usize..=5, mask in 1usize..32) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(&mut rng, m).unwrap();
        let keep: Vec<usize> = (1..=m).filter(|q| mask >> (q - 1) & 1 == 1).collect();
        prop_assume!(!keep.is_empty());
        let rho = reduced_density(&s, &keep).unwrap();
        prop_assert!((rho.trace().unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        prop_assert!(rho.is_hermitian(1e-12));
        prop_assert!(rho.min_eigenvalue_hermitian().unwrap() >= -1e-10);
    }

    #[test]
    fn terms_follow_qubit_relabeling(seed in any::<u64>(), m in 2usize..=5, shuffle in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(&mut rng, m).unwrap();
        let mut perm: Vec<usize> = (1..=m).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(shuffle));
        let p = permute_qubits(&s, &perm).unwrap();
        for tag in [ClassTag::W(m), ClassTag::GhzM(m)] {
            let original = class_terms(&s, tag, GhzM1Enumeration::Compact).unwrap();
            let moved = class_terms(&p, tag, GhzM1Enumeration::Compact).unwrap();
            for (op, value) in &original {
                let mut image: Vec<usize> = op.indices.iter().map(|&q| perm[q - 1]).collect();
                image.sort_unstable();
                let (_, v) = moved.iter().find(|(o, _)| o.indices == image).unwrap();
                prop_assert!((v - value).abs() < 1e-12);
            }
        }
        // GHZ^{m-1} under full enumeration is closed under relabeling as a multiset
        if m >= 3 {
            let tag = ClassTag::GhzM1(m);
            let mut a: Vec<f64> = class_terms(&s, tag, GhzM1Enumeration::Full).unwrap().into_iter().map(|t| t.1).collect();
            let mut b: Vec<f64> = class_terms(&p, tag, GhzM1Enumeration::Full).unwrap().into_iter().map(|t| t.1).collect();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn branches_agree_and_amplitudes_transport(seed in any::<u64>(), m in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphas = random_alphas(&mut rng, m, PhaseSampling::Continuous);
        let d = build_entangler(m, &alphas, Branch::DiagonalBlocks, true).unwrap();
        let a = build_entangler(m, &alphas, Branch::AntiDiagonalBlocks, true).unwrap();
        prop_assert_eq!(&d.matrix, &a.matrix);
        prop_assert!(d.unitary);
        let s = apply_entangler(&d).unwrap();
        let h = ((1u64 << m) as f64).sqrt().recip();
        for (x, alpha) in alphas.iter().enumerate() {
            prop_assert!((s.amplitude(x) - alpha * h).norm() < 1e-12);
        }
    }

    #[test]
    fn global_phase_keeps_verdicts(seed in any::<u64>(), m in 2usize..=4, theta in -7.0f64..7.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state(&mut rng, m).unwrap();
        let config = ClassifyConfig::default();
        let a = classify(&s, &config).unwrap();
        let b = classify(&s.with_global_phase(theta), &config).unwrap();
        prop_assert_eq!(a.oracle_separable, b.oracle_separable);
        prop_assert_eq!(a.consistent, b.consistent);
        for (x, y) in a.classes.iter().zip(&b.classes) {
            prop_assert_eq!(x.nonzero, y.nonzero);
            prop_assert!((x.aggregate - y.aggregate).abs() < 1e-14);
        }
    }
}

#[test]
fn unitarity_of_strict_entanglers_up_to_eight_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for m in 1..=8 {
        let alphas = random_alphas(&mut rng, m, PhaseSampling::Continuous);
        let z = build_entangler(m, &alphas, Branch::DiagonalBlocks, true).unwrap();
        assert!(is_unitary(&z.matrix, 1e-10).unwrap(), "m = {m}");
    }
}

#[test]
fn term_counts_for_two_to_six_qubits() {
    for m in 2..=6 {
        let s = random_state(&mut ChaCha8Rng::seed_from_u64(m as u64), m).unwrap();
        let pairs = m * (m - 1) / 2;
        assert_eq!(class_terms(&s, ClassTag::W(m), GhzM1Enumeration::Compact).unwrap().len(), pairs);
        assert_eq!(class_terms(&s, ClassTag::GhzM(m), GhzM1Enumeration::Compact).unwrap().len(), pairs);
        if m >= 3 {
            assert_eq!(class_terms(&s, ClassTag::GhzM1(m), GhzM1Enumeration::Compact).unwrap().len(), m);
            let full = m * (m - 1) * (m - 2) / 2;
            assert_eq!(class_terms(&s, ClassTag::GhzM1(m), GhzM1Enumeration::Full).unwrap().len(), full);
        }
    }
}

#[test]
fn classification_is_bit_stable_across_runs() {
    let s = random_state(&mut ChaCha8Rng::seed_from_u64(1234), 5).unwrap();
    let config = ClassifyConfig::default();
    let first = classify(&s, &config).unwrap();
    for _ in 0..10 {
        assert_eq!(classify(&s, &config).unwrap(), first);
    }
}
