//! Shared helpers for the integration suites.
#![allow(dead_code)] // each test target uses its own subset

use dftis_core::eigen::{from_even, from_odd, Sign};
use dftis_core::rac::UserSignature;
use dftis_core::{ComplexSequence, Tolerance};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Independent double-sum spectrum, written directly from the defining sum.
/// Kept separate from the library's transform so derived expectations have
/// their own oracle.
pub fn naive_dft(x: &ComplexSequence) -> ComplexSequence {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &xi) in x.samples().iter().enumerate() {
            let ang = -std::f64::consts::TAU * (k as f64) * (i as f64) / n as f64;
            acc += xi * Complex64::new(ang.cos(), ang.sin());
        }
        out.push(acc / (n as f64).sqrt());
    }
    ComplexSequence::new(out).unwrap()
}

pub fn random_real_seq(n: usize, rng: &mut ChaCha8Rng) -> ComplexSequence {
    ComplexSequence::from_real(&(0..n).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())
        .unwrap()
}

pub fn random_complex_seq(n: usize, rng: &mut ChaCha8Rng) -> ComplexSequence {
    ComplexSequence::new(
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

/// Draws a random real-valued certified signature for the given group,
/// retrying while the construction degenerates.
pub fn random_signature(user_id: &str, group: u8, n: usize, rng: &mut ChaCha8Rng) -> UserSignature {
    let tol = Tolerance::default();
    for _ in 0..64 {
        let seed = random_real_seq(n, rng);
        let candidate = match group {
            1 => from_even(&seed, Sign::Plus, tol),
            2 => from_even(&seed, Sign::Minus, tol),
            3 => from_odd(&seed, Sign::Plus, tol),
            4 => from_odd(&seed, Sign::Minus, tol),
            _ => unreachable!("groups are 1..=4"),
        };
        if let Some(es) = candidate {
            return UserSignature::from_eigensequence(user_id, es);
        }
    }
    panic!("no non-degenerate signature for group {group} at N={n}")
}

/// Random '0'/'1' string of the given length.
pub fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> String {
    (0..len)
        .map(|_| if rng.gen::<bool>() { '1' } else { '0' })
        .collect()
}
