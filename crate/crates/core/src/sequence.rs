//! Length-N complex sequences with modulo-N index arithmetic.
//!
//! A [`ComplexSequence`] is the universal signal carrier of the crate: input
//! sequences, spectra and channel frames are all values of this type. Index
//! arithmetic is circular, so `x[-1]` means `x[N-1]`.
//!
//! The JSON interchange format is an array whose elements are either a bare
//! number (shorthand for a real sample) or a `[re, im]` pair:
//!
//! ```text
//! [1, 0, 1, 0]          four real samples
//! [[0.0, 1.0], 2, -1]   j, 2, -1
//! ```

use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::de;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default absolute per-sample tolerance used by classification and
/// certification when the caller does not override it.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Absolute per-sample tolerance for floating-point comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    /// Creates a tolerance; `eps` must be finite and non-negative.
    pub fn new(eps: f64) -> Result<Self> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(Error::InvalidInput(format!(
                "tolerance must be a finite non-negative real, got {eps}"
            )));
        }
        Ok(Self { eps })
    }

    pub fn eps(self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps: DEFAULT_EPS }
    }
}

/// An ordered, non-empty list of finite complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence {
    samples: Vec<Complex64>,
}

impl ComplexSequence {
    /// Builds a sequence, rejecting empty input and non-finite samples.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySequence);
        }
        for (index, z) in samples.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteSample { index });
            }
        }
        Ok(Self { samples })
    }

    /// Internal constructor for values produced by arithmetic on already
    /// validated sequences.
    pub(crate) fn from_vec(samples: Vec<Complex64>) -> Self {
        debug_assert!(!samples.is_empty());
        Self { samples }
    }

    /// Builds a sequence from real samples.
    pub fn from_real(samples: &[f64]) -> Result<Self> {
        Self::new(samples.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// The all-zero sequence of length `n`.
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(Self::from_vec(vec![Complex64::new(0.0, 0.0); n]))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; sequences have at least one sample.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Sample at circular index `i` (any integer, reduced modulo N).
    pub fn get(&self, i: i64) -> Complex64 {
        let n = self.samples.len() as i64;
        self.samples[i.rem_euclid(n) as usize]
    }

    /// Index-reversed sequence `x[-n mod N]`.
    pub fn reversed(&self) -> Self {
        let n = self.samples.len();
        Self::from_vec((0..n).map(|i| self.samples[(n - i) % n]).collect())
    }

    /// Circularly symmetric component `(x[n] + x[-n]) / 2`.
    pub fn even_part(&self) -> Self {
        let rev = self.reversed();
        Self::from_vec(
            self.samples
                .iter()
                .zip(rev.samples.iter())
                .map(|(a, b)| (a + b) * 0.5)
                .collect(),
        )
    }

    /// Circularly antisymmetric component `(x[n] - x[-n]) / 2`.
    pub fn odd_part(&self) -> Self {
        let rev = self.reversed();
        Self::from_vec(
            self.samples
                .iter()
                .zip(rev.samples.iter())
                .map(|(a, b)| (a - b) * 0.5)
                .collect(),
        )
    }

    /// Circular shift: `out[n] = x[(n - m) mod N]`.
    pub fn circular_shift(&self, m: i64) -> Self {
        let n = self.samples.len() as i64;
        Self::from_vec((0..n).map(|i| self.get(i - m)).collect())
    }

    /// Complex modulation: `out[n] = exp(j 2π r n / N) · x[n]`.
    pub fn modulate(&self, r: i64) -> Self {
        let n = self.samples.len();
        Self::from_vec(
            self.samples
                .iter()
                .enumerate()
                .map(|(i, &z)| {
                    // Reduce r·n modulo N before forming the angle so large
                    // shifts keep full precision.
                    let t = (r as i128 * i as i128).rem_euclid(n as i128) as f64;
                    z * Complex64::from_polar(1.0, std::f64::consts::TAU * t / n as f64)
                })
                .collect(),
        )
    }

    /// Sequence scaled componentwise by a complex factor.
    pub fn scaled(&self, a: Complex64) -> Self {
        Self::from_vec(self.samples.iter().map(|z| z * a).collect())
    }

    /// Sum of squared magnitudes.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest sample magnitude.
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute imaginary part.
    pub fn max_imag_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Largest per-sample distance to `other`.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "sequence length mismatch");
        self.samples
            .iter()
            .zip(other.samples.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// True when every sample magnitude is at most `tol`.
    pub fn is_zero(&self, tol: Tolerance) -> bool {
        self.max_abs() <= tol.eps()
    }

    /// True when `x[n] = x[-n mod N]` within `tol`.
    pub fn is_even(&self, tol: Tolerance) -> bool {
        self.max_diff(&self.reversed()) <= tol.eps()
    }

    /// True when `x[n] = -x[-n mod N]` within `tol`.
    pub fn is_odd(&self, tol: Tolerance) -> bool {
        let neg_rev = self.reversed().scaled(Complex64::new(-1.0, 0.0));
        self.max_diff(&neg_rev) <= tol.eps()
    }
}

impl Add for &ComplexSequence {
    type Output = ComplexSequence;

    /// Componentwise sum. Panics if the lengths differ.
    fn add(self, rhs: &ComplexSequence) -> ComplexSequence {
        assert_eq!(self.len(), rhs.len(), "sequence length mismatch");
        ComplexSequence::from_vec(
            self.samples
                .iter()
                .zip(rhs.samples.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &ComplexSequence {
    type Output = ComplexSequence;

    /// Componentwise difference. Panics if the lengths differ.
    fn sub(self, rhs: &ComplexSequence) -> ComplexSequence {
        assert_eq!(self.len(), rhs.len(), "sequence length mismatch");
        ComplexSequence::from_vec(
            self.samples
                .iter()
                .zip(rhs.samples.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

/// Componentwise linear combination `Σ cᵢ·xᵢ` of equal-length sequences.
///
/// # Panics
/// Panics if `terms` is empty or lengths differ.
pub(crate) fn linear_combination(terms: &[(Complex64, &ComplexSequence)]) -> ComplexSequence {
    let n = terms
        .first()
        .expect("linear combination of no terms")
        .1
        .len();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for (c, x) in terms {
        assert_eq!(x.len(), n, "sequence length mismatch");
        for (a, z) in acc.iter_mut().zip(x.samples().iter()) {
            *a += c * z;
        }
    }
    ComplexSequence::from_vec(acc)
}

impl Serialize for ComplexSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.samples.len()))?;
        for z in &self.samples {
            if z.im == 0.0 {
                seq.serialize_element(&z.re)?;
            } else {
                seq.serialize_element(&[z.re, z.im])?;
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SampleRepr {
    Real(f64),
    Pair(f64, f64),
}

impl<'de> Deserialize<'de> for ComplexSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<SampleRepr>::deserialize(deserializer)?;
        let samples = raw
            .into_iter()
            .map(|r| match r {
                SampleRepr::Real(re) => Complex64::new(re, 0.0),
                SampleRepr::Pair(re, im) => Complex64::new(re, im),
            })
            .collect();
        ComplexSequence::new(samples).map_err(de::Error::custom)
    }
}
