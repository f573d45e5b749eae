#![allow(dead_code)]

use jsr_core::{ComplexMatrix, Complex64, MatrixSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex entry uniform in the closed unit disc.
pub fn disc_entry(rng: &mut impl Rng) -> Complex64 {
    let radius: f64 = rng.random::<f64>().sqrt();
    let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    Complex64::from_polar(radius, theta)
}

pub fn random_matrix(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    ComplexMatrix::new(d, (0..d * d).map(|_| disc_entry(rng)).collect()).unwrap()
}

pub fn random_set(rng: &mut impl Rng, d: usize, r: usize) -> MatrixSet {
    MatrixSet::new((0..r).map(|_| random_matrix(rng, d)).collect()).unwrap()
}

pub fn rel_le(a: f64, b: f64, slack: f64) -> bool {
    a <= b + slack * a.abs().max(b.abs())
}

pub fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Every word of length `n` over `r` letters, rightmost factor first.
pub fn all_words(r: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut word = vec![0usize; n];
    loop {
        out.push(word.clone());
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            word[pos] += 1;
            if word[pos] < r {
                break;
            }
            word[pos] = 0;
        }
    }
}

/// `A_{w[n-1]} ⋯ A_{w[0]}` by plain left multiplication.
pub fn realize(set: &MatrixSet, word: &[usize]) -> ComplexMatrix {
    let m = set.members();
    let mut acc = m[word[0]].clone();
    for &i in &word[1..] {
        acc = jsr_core::mat_mul(&m[i], &acc).unwrap();
    }
    acc
}
