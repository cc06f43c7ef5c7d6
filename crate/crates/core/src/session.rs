//! One-shot transmission sessions: schedule users, run the digital path and
//! collect per-frame records plus a loss/energy summary.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rac::{
    channel_energy, peak_coefficient, schedule, RacCase, SignatureRecord, UserSignature,
};
use crate::sequence::{linear_combination, ComplexSequence, Tolerance};
use crate::transceiver::{frame_words, receive_frames, transmit, QuantizerConfig};

/// Declarative description of a session.
///
/// Exactly one of `e_max` (energy budget, from which the peak coefficient is
/// derived) or `m` (peak coefficient given directly) must be set. The
/// registry may hold more users than the case needs; the seeded scheduler
/// picks one user per group, and only the selected users must have a
/// bitstream.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionSpec {
    pub case: RacCase,
    /// Bits per word.
    pub b: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "M")]
    pub m: Option<f64>,
    pub users: Vec<SignatureRecord>,
    /// Bitstreams keyed by user id ('0'/'1' strings).
    pub bitstreams: BTreeMap<String, String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// One scheduled user.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectedUser {
    pub user_id: String,
    pub group: u8,
}

/// Everything sent and recovered for one user in one frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UserFrameRecord {
    pub user_id: String,
    pub group: u8,
    pub word_sent: String,
    pub a_sent: f64,
    pub a_recovered: f64,
    pub word_recovered: String,
}

/// One channel use.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameRecord {
    pub frame_index: usize,
    pub y: ComplexSequence,
    pub energy: f64,
    pub users: Vec<UserFrameRecord>,
}

/// Per-user loss accounting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UserSummary {
    pub user_id: String,
    pub group: u8,
    pub bits: usize,
    pub bit_errors: usize,
}

/// Session-level outcome. `bit_errors` must be zero over a noiseless
/// channel.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionSummary {
    pub frames: usize,
    pub bits_per_user: usize,
    pub bit_errors: usize,
    pub lossless: bool,
    /// Largest distance between a recovered component and the transmitted
    /// `aᵢ·xᵢ` over all frames and users.
    pub max_residual: f64,
    /// Largest imaginary part left on any recovered component.
    pub max_imag_residual: f64,
    /// Largest frame energy observed.
    pub energy_max: f64,
    pub per_user: Vec<UserSummary>,
}

/// Full session output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionReport {
    pub case: RacCase,
    pub n: usize,
    pub b: u32,
    /// Peak coefficient actually used.
    pub m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<f64>,
    pub seed: u64,
    pub selected: Vec<SelectedUser>,
    pub frames: Vec<FrameRecord>,
    pub summary: SessionSummary,
}

/// Runs a complete session: registry certification, scheduling, transmit,
/// separation and decode, with per-frame records.
pub fn run_session(spec: &SessionSpec) -> Result<SessionReport> {
    let tol = match spec.tol {
        Some(eps) => Tolerance::new(eps)?,
        None => Tolerance::default(),
    };

    let registry: Vec<UserSignature> = spec
        .users
        .iter()
        .map(|record| record.to_user_signature(tol))
        .collect::<Result<_>>()?;
    let priorities: Vec<f64> = spec
        .users
        .iter()
        .map(|record| record.priority.unwrap_or(1.0))
        .collect();

    let selected = schedule(&registry, spec.case, spec.seed, Some(&priorities))?;

    let m = match (spec.e_max, spec.m) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give either the energy budget e_max or the peak coefficient m, not both".into(),
            ))
        }
        (None, None) => {
            return Err(Error::Config(
                "one of e_max or m is required to size the quantizer".into(),
            ))
        }
        (Some(e_max), None) => peak_coefficient(e_max, &selected)?,
        (None, Some(m)) => m,
    };
    let cfg = QuantizerConfig::new(spec.b, m)?;

    let bitstreams: Vec<String> = selected
        .iter()
        .map(|user| {
            spec.bitstreams.get(user.user_id()).cloned().ok_or_else(|| {
                Error::InvalidInput(format!(
                    "scheduled user {:?} has no bitstream",
                    user.user_id()
                ))
            })
        })
        .collect::<Result<_>>()?;

    let frames = transmit(&bitstreams, &selected, spec.case, cfg)?;
    let schedule_words = frame_words(&bitstreams, spec.b)?;
    let details = receive_frames(&frames, &selected, cfg, tol)?;

    let mut records = Vec::with_capacity(frames.len());
    let mut max_residual: f64 = 0.0;
    let mut max_imag_residual: f64 = 0.0;
    let mut energy_max: f64 = 0.0;
    for ((frame, slot), detail) in frames.iter().zip(&schedule_words).zip(&details) {
        let energy = channel_energy(frame);
        energy_max = energy_max.max(energy);
        max_imag_residual = max_imag_residual.max(detail.imag_residual);
        let mut users = Vec::with_capacity(selected.len());
        for (i, user) in selected.iter().enumerate() {
            let word_sent = slot.words[i].clone();
            let a_sent = crate::transceiver::encode_word(&word_sent, cfg)?;
            let sent_component =
                linear_combination(&[(num_complex::Complex64::new(a_sent, 0.0), user.sequence())]);
            max_residual = max_residual.max(detail.components[i].max_diff(&sent_component));
            users.push(UserFrameRecord {
                user_id: user.user_id().to_string(),
                group: user.group(),
                word_sent,
                a_sent,
                a_recovered: detail.coefficients[i],
                word_recovered: detail.words[i].clone(),
            });
        }
        records.push(FrameRecord {
            frame_index: slot.frame_index,
            y: frame.y().clone(),
            energy,
            users,
        });
    }

    let bits_per_user = bitstreams.first().map_or(0, |s| s.len());
    let mut per_user = Vec::with_capacity(selected.len());
    let mut bit_errors = 0usize;
    for (i, user) in selected.iter().enumerate() {
        let received: String = details.iter().map(|d| d.words[i].as_str()).collect();
        let errors = bitstreams[i]
            .chars()
            .zip(received.chars())
            .filter(|(a, b)| a != b)
            .count()
            + bitstreams[i].len().abs_diff(received.len());
        bit_errors += errors;
        per_user.push(UserSummary {
            user_id: user.user_id().to_string(),
            group: user.group(),
            bits: bitstreams[i].len(),
            bit_errors: errors,
        });
    }

    let n = selected.first().map_or(0, |u| u.len());
    Ok(SessionReport {
        case: spec.case,
        n,
        b: spec.b,
        m,
        e_max: spec.e_max,
        seed: spec.seed,
        selected: selected
            .iter()
            .map(|u| SelectedUser {
                user_id: u.user_id().to_string(),
                group: u.group(),
            })
            .collect(),
        frames: records,
        summary: SessionSummary {
            frames: frames.len(),
            bits_per_user,
            bit_errors,
            lossless: bit_errors == 0,
            max_residual,
            max_imag_residual,
            energy_max,
            per_user,
        },
    })
}
