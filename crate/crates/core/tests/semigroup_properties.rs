mod common;

use common::*;
use jsr_core::{
    matrix_norm, nilpotency_check, power_set_norm, set_norm, Budget, ComplexMatrix, MatrixSet, NormKind,
};
use proptest::prelude::*;
use rand::Rng;

fn brute_force(set: &MatrixSet, n: usize, kind: NormKind) -> f64 {
    all_words(set.len(), n)
        .iter()
        .map(|w| matrix_norm(&realize(set, w), kind).unwrap())
        .fold(0.0, f64::max)
}

#[test]
fn split_consistency() {
    let mut rng = rng(21);
    let b = Budget::default();
    for _ in 0..60 {
        let d = rng.random_range(1..=3);
        let r = rng.random_range(1..=3);
        let set = random_set(&mut rng, d, r);
        let kind = NormKind::INDUCED[rng.random_range(0..3)];
        let norms: Vec<f64> = (1..=8)
            .map(|n| power_set_norm(&set, n, kind, &b).unwrap().norm.to_f64())
            .collect();
        for p in 1..8 {
            for q in 1..=8 - p {
                let lhs = norms[p + q - 1];
                let rhs = norms[p - 1] * norms[q - 1];
                assert!(rel_le(lhs, rhs, 1e-9), "p={p} q={q}: {lhs} > {rhs}");
            }
        }
        let s = set_norm(&set, kind).unwrap();
        for (i, &v) in norms.iter().enumerate() {
            assert!(rel_le(v, s.powi(i as i32 + 1), 1e-9));
        }
    }
}

#[test]
fn pruned_matches_unpruned_and_brute_force() {
    let mut rng = rng(22);
    let pruned = Budget::default();
    let plain = Budget { prune: false, ..Budget::default() };
    for _ in 0..40 {
        let d = rng.random_range(2..=3);
        let r = rng.random_range(2..=3);
        let n = rng.random_range(1..=if r == 2 { 10 } else { 7 });
        let set = random_set(&mut rng, d, r);
        for kind in NormKind::INDUCED {
            let a = power_set_norm(&set, n, kind, &pruned).unwrap();
            let b = power_set_norm(&set, n, kind, &plain).unwrap();
            assert_eq!(a.norm, b.norm);
            assert_eq!(a.argmax, b.argmax);
            assert!(a.nodes <= b.nodes);
            assert_eq!(a.norm.to_f64(), brute_force(&set, n, kind));
        }
    }
}

#[test]
fn singleton_reduces_to_matrix_power() {
    let mut rng = rng(23);
    for _ in 0..50 {
        let d = rng.random_range(1..=4);
        let a = random_matrix(&mut rng, d).scale_real(rng.random_range(0.2..3.0));
        let set = MatrixSet::singleton(a.clone());
        for n in [1, 2, 5, 13] {
            for kind in NormKind::INDUCED {
                let p = power_set_norm(&set, n, kind, &Budget::default()).unwrap();
                assert_eq!(p.norm.to_f64(), matrix_norm(&a.pow(n), kind).unwrap());
            }
        }
    }
}

#[test]
fn nilpotent_sets_have_vanishing_d_products() {
    // strictly upper triangular members of random sizes
    let mut rng = rng(24);
    for _ in 0..30 {
        let d = rng.random_range(2..=4);
        let r = rng.random_range(1..=3);
        let members: Vec<ComplexMatrix> = (0..r)
            .map(|_| {
                let m = random_matrix(&mut rng, d);
                let data = (0..d * d)
                    .map(|k| if k % d > k / d { m.entries()[k] } else { Default::default() })
                    .collect();
                ComplexMatrix::new(d, data).unwrap()
            })
            .collect();
        let set = MatrixSet::new(members).unwrap();
        assert!(nilpotency_check(&set, 0.0, &Budget::default()).unwrap());
        for kind in NormKind::INDUCED {
            assert!(power_set_norm(&set, d, kind, &Budget::default()).unwrap().norm.is_zero());
        }
        // and a generic set is not nilpotent
        let generic = random_set(&mut rng, d, r);
        assert!(!nilpotency_check(&generic, 0.0, &Budget::default()).unwrap());
    }
}

#[test]
fn nilpotency_budget_is_enforced() {
    let set = MatrixSet::new(vec![ComplexMatrix::identity(4); 3]).unwrap();
    let err = nilpotency_check(&set, 0.0, &Budget::with_nodes(3)).unwrap_err();
    assert!(matches!(err, jsr_core::SemigroupError::BudgetExhausted { n: 4, budget: 3, .. }));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_norm_scales_exactly_by_powers_of_two(seed in any::<u64>(), k in -20i32..20, n in 1usize..6) {
        let set = random_set(&mut rng(seed), 2, 2);
        let c = 2f64.powi(k);
        for kind in NormKind::INDUCED {
            let a = power_set_norm(&set, n, kind, &Budget::default()).unwrap().norm;
            let b = power_set_norm(&set.scaled(c), n, kind, &Budget::default()).unwrap().norm;
            prop_assert_eq!(a.mul_pow2(k as i64 * n as i64), b);
        }
    }
}
