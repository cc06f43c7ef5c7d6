//! The unitary discrete Fourier operator.
//!
//! Both directions carry the same `1/√N` factor, so the operator preserves
//! energy and its fourth power is the identity. The reference implementation
//! is the direct O(N²) double sum; power-of-two lengths take an O(N log N)
//! path that is required (and tested) to agree with the direct sum to 1e-12.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::sequence::ComplexSequence;

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        }
    }
}

/// Forward transform: `X[k] = (1/√N) Σₙ x[n]·exp(-j2πkn/N)`.
pub fn unitary_dft(x: &ComplexSequence) -> ComplexSequence {
    transform(x, Direction::Forward)
}

/// Inverse transform: `x[n] = (1/√N) Σₖ X[k]·exp(+j2πkn/N)`.
pub fn unitary_idft(x: &ComplexSequence) -> ComplexSequence {
    transform(x, Direction::Inverse)
}

/// Forward transform by the direct double sum, regardless of length.
pub fn unitary_dft_direct(x: &ComplexSequence) -> ComplexSequence {
    direct(x, Direction::Forward)
}

/// Inverse transform by the direct double sum, regardless of length.
pub fn unitary_idft_direct(x: &ComplexSequence) -> ComplexSequence {
    direct(x, Direction::Inverse)
}

/// `p`-fold application of the forward transform.
///
/// The operator has order four, so `p` is reduced modulo 4 first; any integer
/// is accepted. Two applications equal index reversal and four applications
/// equal the identity, up to floating-point error.
pub fn apply_dft_power(x: &ComplexSequence, p: i64) -> ComplexSequence {
    let mut out = x.clone();
    for _ in 0..p.rem_euclid(4) {
        out = unitary_dft(&out);
    }
    out
}

fn transform(x: &ComplexSequence, dir: Direction) -> ComplexSequence {
    let n = x.len();
    if n.is_power_of_two() {
        radix2(x, dir)
    } else {
        direct(x, dir)
    }
}

fn direct(x: &ComplexSequence, dir: Direction) -> ComplexSequence {
    let n = x.len();
    let scale = 1.0 / (n as f64).sqrt();
    // One table of the N distinct roots of unity; exponents are reduced
    // modulo N so no angle exceeds 2π.
    let roots: Vec<Complex64> = (0..n)
        .map(|t| Complex64::from_polar(1.0, dir.sign() * TAU * t as f64 / n as f64))
        .collect();
    let samples = (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &xi) in x.samples().iter().enumerate() {
                acc += xi * roots[(k * i) % n];
            }
            acc * scale
        })
        .collect();
    ComplexSequence::from_vec(samples)
}

fn radix2(x: &ComplexSequence, dir: Direction) -> ComplexSequence {
    let n = x.len();
    let mut a = x.samples().to_vec();

    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let ang = dir.sign() * TAU / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // Twiddles come straight from the unit circle each time;
                // accumulated products drift at large N.
                let w = Complex64::from_polar(1.0, ang * k as f64);
                let u = a[start + k];
                let v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }

    let scale = 1.0 / (n as f64).sqrt();
    ComplexSequence::from_vec(a.into_iter().map(|z| z * scale).collect())
}
