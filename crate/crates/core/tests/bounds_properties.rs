mod common;

use common::*;
use jsr_core::{
    base_d_digits, certify, eigen_spectral_radius, gsr_lower_estimate, power_set_norm, set_norm,
    sigma_nu_closed, sigma_nu_exact, sweep, BoundMode, Budget, CertifyOptions, ComplexMatrix, MatrixSet,
    NormKind,
};
use proptest::prelude::*;
use rand::Rng;

const MODES: [BoundMode; 2] = [BoundMode::ExactDigits, BoundMode::ClosedForm];

/// Digit sums from the definitions, with digits peeled off by repeated
/// subtraction of `d^j` from the top place down.
fn sigma_nu_reference(n: u64, d: u64) -> (u128, u128) {
    let mut k = 0u32;
    while (d as u128).pow(k + 1) <= n as u128 {
        k += 1;
    }
    let mut rest = n as u128;
    let mut sigma = 0u128;
    let mut nu = 0u128;
    for j in (0..=k).rev() {
        let place = (d as u128).pow(j);
        let mut digit = 0u128;
        while rest >= place {
            rest -= place;
            digit += 1;
        }
        let w = (d as u128 - 1).pow(j);
        let partial: u128 = (0..=j).map(|i| (d as u128 - 1).pow(i)).sum();
        sigma += digit * partial;
        nu += digit * w;
    }
    (sigma, nu)
}

#[test]
fn digit_sums_match_reference() {
    for d in 2..=7u64 {
        for n in 1..=2000u64 {
            assert_eq!(sigma_nu_exact(n, d).unwrap(), sigma_nu_reference(n, d), "n={n} d={d}");
        }
    }
}

#[test]
fn power_of_two_digit_sums() {
    for k in 0..40u32 {
        let (sigma, nu) = sigma_nu_exact(1u64 << k, 2).unwrap();
        assert_eq!((sigma, nu), (k as u128 + 1, 1));
    }
}

#[test]
fn digit_roundtrip() {
    let mut rng = rng(31);
    for _ in 0..20_000 {
        let n = rng.random_range(1..=1_000_000_000u64);
        let d = rng.random_range(2..=64u64);
        let dec = base_d_digits(n, d);
        assert_eq!(dec.reconstruct(), n as u128);
        let top = *dec.digits.last().unwrap();
        assert!(top >= 1 && top < d);
        assert!(dec.digits.iter().all(|&x| x < d));
        // k = floor(log_d n)
        let k = dec.top_index() as u32;
        assert!((d as u128).pow(k) <= n as u128 && (n as u128) < (d as u128).pow(k + 1));
    }
}

#[test]
fn ratio_term_is_at_least_one() {
    let mut rng = rng(32);
    for _ in 0..100 {
        let d = rng.random_range(2..=4);
        let r = rng.random_range(1..=3);
        let set = random_set(&mut rng, d, r);
        for kind in NormKind::INDUCED {
            let s = set_norm(&set, kind).unwrap();
            let pd = power_set_norm(&set, d, kind, &Budget::default()).unwrap().norm;
            let ln_ratio = d as f64 * s.ln() - pd.ln();
            assert!(ln_ratio >= -1e-9, "{ln_ratio}");
        }
    }
}

#[test]
fn exact_lower_dominates_closed_lower() {
    let mut rng = rng(33);
    for _ in 0..50 {
        let d = rng.random_range(2..=4);
        let r = rng.random_range(1..=2);
        let set = random_set(&mut rng, d, r);
        for n in 1..=9 {
            let exact = certify(&set, n, &CertifyOptions::new(NormKind::InducedOne, BoundMode::ExactDigits)).unwrap();
            let closed = certify(&set, n, &CertifyOptions::new(NormKind::InducedOne, BoundMode::ClosedForm)).unwrap();
            assert_eq!(exact.upper, closed.upper);
            assert!(exact.lower >= closed.lower);
        }
    }
}

#[test]
fn cross_oracle_consistency_for_pairs() {
    let mut rng = rng(34);
    for _ in 0..40 {
        let d = rng.random_range(2..=3);
        let set = random_set(&mut rng, d, 2);
        let gsr = gsr_lower_estimate(&set, 6, &Budget::default()).unwrap();
        for kind in NormKind::INDUCED {
            for mode in MODES {
                let seq = sweep(&set, 8, &CertifyOptions::new(kind, mode));
                assert_eq!(seq.failures().count(), 0);
                let lo = seq.best_lower.unwrap();
                let hi = seq.best_upper.unwrap();
                assert!(rel_le(lo.max(gsr), hi, 1e-9), "{lo} {gsr} {hi}");
            }
        }
    }
}

#[test]
fn best_upper_is_non_increasing() {
    let mut rng = rng(35);
    let set = random_set(&mut rng, 3, 2);
    let opts = CertifyOptions::new(NormKind::InducedTwo, BoundMode::ExactDigits);
    let mut prev = f64::INFINITY;
    for n_max in 1..=8 {
        let seq = sweep(&set, n_max, &opts);
        let best = seq.best_upper.unwrap();
        assert!(best <= prev);
        assert!(seq.best_lower.unwrap() <= best);
        prev = best;
    }
}

#[test]
fn exact_lower_grows_along_powers_of_two() {
    let set = MatrixSet::singleton(ComplexMatrix::diag(&[2.0, 1.0]));
    let opts = CertifyOptions::new(NormKind::InducedInf, BoundMode::ExactDigits);
    let mut prev = 0.0;
    for k in 2..=10u32 {
        let n = 1usize << k;
        let iv = certify(&set, n, &opts).unwrap();
        let expect = 2.0 * 3f64.powf(-((k + 1) as f64) / n as f64);
        assert!(rel_eq(iv.lower, expect, 1e-12), "k={k}");
        assert!(iv.lower > prev);
        prev = iv.lower;
    }
    assert!(prev > 1.97);
}

#[test]
fn enclosure_holds_for_random_pairs_against_gsr() {
    // for r > 1 the only available truth is max ρ(P)^{1/|P|} ≤ ρ(𝒜)
    let mut rng = rng(36);
    for _ in 0..30 {
        let set = random_set(&mut rng, 2, 3);
        let gsr = gsr_lower_estimate(&set, 5, &Budget::default()).unwrap();
        for n in 1..=6 {
            let iv = certify(&set, n, &CertifyOptions::default()).unwrap();
            assert!(rel_le(gsr, iv.upper, 1e-9));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exact_digit_sums_never_exceed_closed_forms(n in 1u64..1_000_000_000_000, d in 2u64..40) {
        let (s, v) = sigma_nu_exact(n, d).unwrap();
        let (sc, vc) = sigma_nu_closed(n, d);
        prop_assert!(s as f64 <= sc && v as f64 <= vc);
    }

    #[test]
    fn enclosure_for_random_singletons(seed in any::<u64>(), d in 2usize..=4, n in 1usize..=12) {
        let a = random_matrix(&mut rng(seed), d);
        let rho = eigen_spectral_radius(&a).unwrap();
        prop_assume!(rho > 1e-6);
        let set = MatrixSet::singleton(a);
        for kind in NormKind::INDUCED {
            for mode in MODES {
                let iv = certify(&set, n, &CertifyOptions::new(kind, mode)).unwrap();
                prop_assert!(iv.contains(rho, 1e-8), "{:?} rho={}", iv, rho);
            }
        }
    }
}
