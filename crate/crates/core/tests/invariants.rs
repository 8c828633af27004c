use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stabmagic::gates::build_gate;
use stabmagic::pauli::{full_spectrum, full_spectrum_naive};
use stabmagic::sre::renyi_entropy;
use stabmagic::stabilizer::StabilizerSet;
use stabmagic::{StateVector, UnitaryMatrix};

fn haar(n: usize, seed: u64) -> StateVector {
    StateVector::haar_random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Random Clifford word over H, S and CNOT.
fn clifford(n: usize, word: &[(u8, usize)]) -> UnitaryMatrix {
    let mut u = UnitaryMatrix::identity(n);
    for &(g, q) in word {
        let q = q % n;
        let step = match g % 3 {
            0 => build_gate("h", &[], 1).unwrap(),
            1 => build_gate("s", &[], 1).unwrap(),
            _ if n > 1 => build_gate("cnot", &[], 2).unwrap(),
            _ => build_gate("h", &[], 1).unwrap(),
        };
        let k = step.n();
        let q = q.min(n - k);
        let full = UnitaryMatrix::identity(q)
            .tensor(&step)
            .tensor(&UnitaryMatrix::identity(n - q - k));
        u = full.compose(&u).unwrap();
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn purity_sum_is_dimension(n in 1usize..=5, seed in any::<u64>()) {
        let s = full_spectrum(&haar(n, seed)).unwrap().purity_sum();
        prop_assert!((s - (1u64 << n) as f64).abs() < 1e-9);
    }

    #[test]
    fn fast_spectrum_matches_naive(n in 1usize..=4, seed in any::<u64>()) {
        let psi = haar(n, seed);
        let a = full_spectrum(&psi).unwrap();
        let b = full_spectrum_naive(&psi).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn sre_is_nonnegative(n in 1usize..=4, seed in any::<u64>(), alpha in prop::sample::select(vec![0.0, 0.5, 1.0, 2.0, 3.0])) {
        let v = renyi_entropy(&haar(n, seed), alpha).unwrap().value;
        prop_assert!(v >= -1e-9, "{v}");
    }

    #[test]
    fn clifford_invariance(n in 1usize..=3, seed in any::<u64>(),
                           word in prop::collection::vec((any::<u8>(), 0usize..3), 0..12),
                           alpha in prop::sample::select(vec![0.5, 1.0, 2.0, 3.0])) {
        let psi = haar(n, seed);
        let c = clifford(n, &word);
        let a = renyi_entropy(&psi, alpha).unwrap().value;
        let b = renyi_entropy(&c.apply(&psi).unwrap(), alpha).unwrap().value;
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn additivity(na in 1usize..=2, nb in 1usize..=2, s1 in any::<u64>(), s2 in any::<u64>(),
                  alpha in prop::sample::select(vec![0.5, 1.0, 2.0, 3.0])) {
        let a = haar(na, s1);
        let b = haar(nb, s2);
        let lhs = renyi_entropy(&a.tensor(&b), alpha).unwrap().value;
        let rhs = renyi_entropy(&a, alpha).unwrap().value + renyi_entropy(&b, alpha).unwrap().value;
        prop_assert!((lhs - rhs).abs() < 1e-9);
    }
}

#[test]
fn stabilizer_states_have_zero_sre() {
    for n in 1..=3 {
        let set = StabilizerSet::shared(n, false).unwrap();
        for s in set.states() {
            for alpha in [0.0, 1.0, 2.0] {
                assert!(renyi_entropy(s, alpha).unwrap().value.abs() < 1e-9);
            }
        }
    }
}
