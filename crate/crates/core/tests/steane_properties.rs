use proptest::prelude::*;
use qdp_core::quantum::{random_pure_state, Pauli, PauliString, StreamRng};
use qdp_core::steane::{
    concatenated_decode_classical, decode, decode_syndrome, encode, extract_syndrome_circuit,
    extract_syndrome_classical, qec_cycle, Correction, StabilizerSet,
};

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![
        Just(Pauli::I),
        Just(Pauli::X),
        Just(Pauli::Y),
        Just(Pauli::Z)
    ]
}

fn nontrivial() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

#[test]
fn generators_commute() {
    let generators = StabilizerSet::steane().generators();
    for a in &generators {
        for b in &generators {
            assert!(a.commutes_with(b).unwrap(), "{a} vs {b}");
        }
    }
}

#[test]
fn single_error_syndromes_are_distinct_and_decoded() {
    for letter in Pauli::NONTRIVIAL {
        let mut seen = Vec::new();
        for q in 0..7 {
            let e = PauliString::single(7, q, letter).unwrap();
            let s = extract_syndrome_classical(&e).unwrap();
            assert!(!seen.contains(&s), "{letter:?} on {q}");
            seen.push(s);
            assert_eq!(
                decode_syndrome(&s),
                Correction::Single {
                    qubit: q,
                    pauli: letter
                }
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn encode_decode_round_trip(seed in any::<u64>()) {
        let psi = random_pure_state(1, &mut StreamRng::new(seed, 0)).unwrap();
        let cw = encode(&psi).unwrap();
        prop_assert!(cw.in_code_space(1e-9).unwrap());
        let back = decode(&cw).unwrap();
        prop_assert!(back.fidelity(&psi).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn qec_cycle_is_idempotent(seed in any::<u64>()) {
        let mut rng = StreamRng::new(seed, 0);
        let cw = encode(&random_pure_state(1, &mut rng).unwrap()).unwrap();
        let once = qec_cycle(&cw, &mut rng).unwrap();
        let twice = qec_cycle(&once, &mut rng).unwrap();
        prop_assert!(once.state().fidelity(cw.state()).unwrap() >= 1.0 - 1e-9);
        prop_assert!(twice.state().fidelity(once.state()).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn single_errors_are_corrected(seed in any::<u64>(), q in 0usize..7, letter in nontrivial()) {
        let mut rng = StreamRng::new(seed, 0);
        let psi = random_pure_state(1, &mut rng).unwrap();
        let noisy = encode(&psi).unwrap().with_error(&PauliString::single(7, q, letter).unwrap()).unwrap();
        let fixed = qec_cycle(&noisy, &mut rng).unwrap();
        prop_assert!(decode(&fixed).unwrap().fidelity(&psi).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn circuit_and_classical_syndromes_agree(seed in any::<u64>(), letters in prop::collection::vec(pauli(), 7)) {
        let mut rng = StreamRng::new(seed, 0);
        let error = PauliString::from_paulis(letters);
        let cw = encode(&random_pure_state(1, &mut rng).unwrap()).unwrap();
        let (circuit, _) = extract_syndrome_circuit(&cw.with_error(&error).unwrap(), &mut rng).unwrap();
        prop_assert_eq!(circuit, extract_syndrome_classical(&error).unwrap());
    }

    #[test]
    fn level_two_corrects_any_weight_one(q in 0usize..49, letter in nontrivial()) {
        let e = PauliString::single(49, q, letter).unwrap();
        prop_assert!(concatenated_decode_classical(&e, 2).unwrap().is_identity());
    }

    #[test]
    fn level_two_corrects_one_error_per_block(blocks in prop::collection::vec((0usize..7, nontrivial()), 7)) {
        let mut e = PauliString::identity(49);
        for (b, (q, letter)) in blocks.into_iter().enumerate() {
            e.set(7 * b + q, letter).unwrap();
        }
        prop_assert!(concatenated_decode_classical(&e, 2).unwrap().is_identity());
    }
}
