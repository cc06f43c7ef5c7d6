//! Digital end-to-end path: bitstreams in, channel frames across, bitstreams
//! out.
//!
//! Each user's bitstream is cut into b-bit words. Every word selects one of
//! `Q = 2^b` uniformly spaced coefficient levels in `[-M, +M]`, the weighted
//! signature superposition crosses the adder channel, and the receiver
//! separates the components, projects out each coefficient and maps it back
//! to the nearest level. In a noiseless channel the round trip is bit-exact.
//!
//! Labels are sign-magnitude: the leading bit picks the half (`0` negative,
//! `1` positive) and the remaining b-1 bits give the magnitude rank, from
//! innermost (all zeros) to outermost (all ones). For b = 2 and M = 1 this
//! yields levels `{-1, -1/3, 1/3, 1}` with labels `{01, 00, 10, 11}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rac::{
    combine, extract_coefficient, max_imag_residual, recover, ChannelFrame, RacCase, UserSignature,
};
use crate::sequence::Tolerance;

/// Imaginary residue allowed on components recovered from real signatures.
const IMAG_RESIDUAL_LIMIT: f64 = 1e-9;

/// Uniform b-bit quantizer over `[-M, +M]` with endpoint levels at `±M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizerConfig {
    b: u32,
    m: f64,
}

impl QuantizerConfig {
    /// Builds a quantizer with `b` bits per word and peak coefficient `m`.
    ///
    /// `b` is capped at 52 so that level arithmetic stays exact in an f64
    /// mantissa; larger word sizes are a configuration error.
    pub fn new(b: u32, m: f64) -> Result<Self> {
        if b == 0 {
            return Err(Error::Config("word size must be at least 1 bit".into()));
        }
        if b > 52 {
            return Err(Error::Config(format!(
                "word size {b} exceeds 52 bits; levels would not be representable"
            )));
        }
        if !m.is_finite() || m <= 0.0 {
            return Err(Error::Config(format!(
                "peak coefficient must be positive, got {m}"
            )));
        }
        Ok(Self { b, m })
    }

    pub fn bits(self) -> u32 {
        self.b
    }

    pub fn peak(self) -> f64 {
        self.m
    }

    /// Number of levels `Q = 2^b`.
    pub fn level_count(self) -> u64 {
        1u64 << self.b
    }

    /// Level value at ascending index `i` in `0..Q`:
    /// `M·(2i - (Q-1)) / (Q-1)`.
    fn level(self, i: u64) -> f64 {
        let q = self.level_count();
        if q == 2 {
            return if i == 0 { -self.m } else { self.m };
        }
        // Form the integer ratio first so the endpoints are exactly ±M and
        // the grid stays symmetric; only one rounding step touches m.
        self.m * ((2 * i as i64 - (q as i64 - 1)) as f64 / (q - 1) as f64)
    }

    /// Ascending level index of a sign-magnitude label.
    fn label_index(self, word: &str) -> Result<u64> {
        if word.len() != self.b as usize {
            return Err(Error::InvalidInput(format!(
                "word {word:?} has {} bits, expected {}",
                word.len(),
                self.b
            )));
        }
        let mut bits = word.chars().map(|c| match c {
            '0' => Ok(0u64),
            '1' => Ok(1u64),
            other => Err(Error::InvalidInput(format!(
                "word {word:?} contains {other:?}; only '0' and '1' are allowed"
            ))),
        });
        let sign = bits.next().expect("b >= 1")?;
        let mut rank = 0u64;
        for bit in bits {
            rank = (rank << 1) | bit?;
        }
        let half = self.level_count() / 2;
        Ok(if sign == 1 {
            half + rank
        } else {
            half - 1 - rank
        })
    }

    /// Sign-magnitude label of an ascending level index.
    fn index_label(self, i: u64) -> String {
        let half = self.level_count() / 2;
        let (sign, rank) = if i >= half {
            ('1', i - half)
        } else {
            ('0', half - 1 - i)
        };
        let mut label = String::with_capacity(self.b as usize);
        label.push(sign);
        for bit in (0..self.b - 1).rev() {
            label.push(if (rank >> bit) & 1 == 1 { '1' } else { '0' });
        }
        label
    }

    /// Ascending index of the level nearest to `a`, ties toward the lower
    /// level. `a` must already be range-checked.
    fn nearest_index(self, a: f64) -> u64 {
        let q = self.level_count();
        let t = (a + self.m) * (q - 1) as f64 / (2.0 * self.m);
        // The inversion above can be off by a few ulps at large b; scan a
        // small window around it.
        let center = t.floor().max(0.0).min((q - 1) as f64) as u64;
        let lo = center.saturating_sub(2);
        let hi = (center + 3).min(q - 1);
        let mut best = lo;
        let mut best_dist = (a - self.level(lo)).abs();
        for i in lo + 1..=hi {
            let dist = (a - self.level(i)).abs();
            if dist < best_dist {
                best = i;
                best_dist = dist;
            }
        }
        best
    }
}

/// The full `(label, level)` table in ascending level order.
///
/// The table has `2^b` entries; callers should keep `b` small and use
/// [`encode_word`]/[`decode_level`] for arithmetic at large word sizes.
pub fn quantizer_levels(cfg: QuantizerConfig) -> Vec<(String, f64)> {
    (0..cfg.level_count())
        .map(|i| (cfg.index_label(i), cfg.level(i)))
        .collect()
}

/// Maps a b-bit label to its exact coefficient level.
pub fn encode_word(word: &str, cfg: QuantizerConfig) -> Result<f64> {
    Ok(cfg.level(cfg.label_index(word)?))
}

/// Maps a coefficient to the label of the nearest level; exact midpoints go
/// to the lower level. Values outside `[-M - tol, M + tol]` are range errors.
pub fn decode_level(a: f64, cfg: QuantizerConfig, tol: Tolerance) -> Result<String> {
    if !a.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite coefficient {a}")));
    }
    if a.abs() > cfg.peak() + tol.eps() {
        return Err(Error::Range {
            value: a,
            peak: cfg.peak(),
        });
    }
    let clamped = a.clamp(-cfg.peak(), cfg.peak());
    Ok(cfg.index_label(cfg.nearest_index(clamped)))
}

/// The words every user sends in one transmission interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSchedule {
    pub frame_index: usize,
    /// One b-bit word per user, in transmit order.
    pub words: Vec<String>,
}

/// Splits per-user bitstreams into per-frame word schedules.
///
/// All bitstreams must have equal length, a multiple of `b`; nothing is
/// padded implicitly. Empty bitstreams yield an empty schedule.
pub fn frame_words(bitstreams: &[impl AsRef<str>], b: u32) -> Result<Vec<FrameSchedule>> {
    let streams: Vec<&str> = bitstreams.iter().map(|s| s.as_ref()).collect();
    let Some(&first) = streams.first() else {
        return Err(Error::InvalidInput("no bitstreams given".into()));
    };
    let len = first.len();
    for (i, s) in streams.iter().enumerate() {
        if s.len() != len {
            return Err(Error::Framing(format!(
                "bitstream {i} has {} bits but bitstream 0 has {len}; lengths must match",
                s.len()
            )));
        }
        if let Some(bad) = s.chars().find(|c| *c != '0' && *c != '1') {
            return Err(Error::InvalidInput(format!(
                "bitstream {i} contains {bad:?}; only '0' and '1' are allowed"
            )));
        }
    }
    if len % b as usize != 0 {
        return Err(Error::Framing(format!(
            "bitstream length {len} is not a multiple of the word size {b}; refusing to pad"
        )));
    }
    let frames = len / b as usize;
    Ok((0..frames)
        .map(|f| FrameSchedule {
            frame_index: f,
            words: streams
                .iter()
                .map(|s| s[f * b as usize..(f + 1) * b as usize].to_string())
                .collect(),
        })
        .collect())
}

/// Encodes per-user bitstreams into channel frames.
///
/// `bitstreams[i]` belongs to `signatures[i]`. Each frame carries exactly
/// one b-bit word per user, so the schedule produces `len / b` frames.
pub fn transmit(
    bitstreams: &[impl AsRef<str>],
    signatures: &[UserSignature],
    case: RacCase,
    cfg: QuantizerConfig,
) -> Result<Vec<ChannelFrame>> {
    if bitstreams.len() != signatures.len() {
        return Err(Error::InvalidInput(format!(
            "{} bitstreams for {} signatures",
            bitstreams.len(),
            signatures.len()
        )));
    }
    let schedule = frame_words(bitstreams, cfg.bits())?;
    let mut frames = Vec::with_capacity(schedule.len());
    for slot in &schedule {
        let weights: Vec<f64> = slot
            .words
            .iter()
            .map(|w| encode_word(w, cfg))
            .collect::<Result<_>>()?;
        frames.push(combine(&weights, signatures, case)?);
    }
    Ok(frames)
}

/// Everything recovered from one frame, aligned with the signature order
/// passed to [`receive_frames`].
#[derive(Debug, Clone)]
pub struct FrameDetail {
    pub frame_index: usize,
    /// Separated component `aᵢ·xᵢ` per user.
    pub components: Vec<crate::sequence::ComplexSequence>,
    /// Projected coefficient per user.
    pub coefficients: Vec<f64>,
    /// Decoded b-bit word per user.
    pub words: Vec<String>,
    /// Largest imaginary part left on any component.
    pub imag_residual: f64,
}

/// Separates, projects and decodes every frame, keeping the intermediate
/// values for inspection.
pub fn receive_frames(
    frames: &[ChannelFrame],
    signatures: &[UserSignature],
    cfg: QuantizerConfig,
    tol: Tolerance,
) -> Result<Vec<FrameDetail>> {
    let all_real = signatures
        .iter()
        .all(|s| s.sequence().max_imag_abs() <= tol.eps());
    let mut details = Vec::with_capacity(frames.len());
    for (frame_index, frame) in frames.iter().enumerate() {
        let recovered = recover(frame)?;
        let imag_residual = max_imag_residual(&recovered);
        if all_real && imag_residual > IMAG_RESIDUAL_LIMIT {
            return Err(Error::NumericalConsistency(format!(
                "frame {frame_index}: imaginary residue {imag_residual:.3e} on components of real signatures"
            )));
        }
        let mut components = Vec::with_capacity(signatures.len());
        let mut coefficients = Vec::with_capacity(signatures.len());
        let mut words = Vec::with_capacity(signatures.len());
        for signature in signatures {
            let part = recovered
                .iter()
                .find(|c| c.group == signature.group())
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "frame case {} carries no group {} component for user {:?}",
                        frame.case(),
                        signature.group(),
                        signature.user_id()
                    ))
                })?;
            let a = extract_coefficient(&part.component, signature)?;
            let word = decode_level(a, cfg, tol).map_err(|e| Error::Demodulation {
                frame: frame_index,
                source: Box::new(e),
            })?;
            components.push(part.component.clone());
            coefficients.push(a);
            words.push(word);
        }
        details.push(FrameDetail {
            frame_index,
            components,
            coefficients,
            words,
            imag_residual,
        });
    }
    Ok(details)
}

/// Decodes received frames back into per-user bitstreams.
///
/// Output order matches `signatures`; in a noiseless channel the result is
/// bit-identical to what [`transmit`] consumed.
pub fn receive(
    frames: &[ChannelFrame],
    signatures: &[UserSignature],
    cfg: QuantizerConfig,
    tol: Tolerance,
) -> Result<Vec<String>> {
    let details = receive_frames(frames, signatures, cfg, tol)?;
    let mut streams = vec![String::new(); signatures.len()];
    for detail in &details {
        for (stream, word) in streams.iter_mut().zip(detail.words.iter()) {
            stream.push_str(word);
        }
    }
    Ok(streams)
}
