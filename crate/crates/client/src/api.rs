//! Request and response bodies of the HTTP API.
//!
//! These types are shared verbatim by the server and the client so the two
//! sides cannot drift apart. Domain values reuse the core wire formats:
//! sequences are arrays of numbers or `[re, im]` pairs, eigensequences are
//! `{ "lambda", "seq" }` objects, frames are `{ "case", "y" }` objects and
//! signatures are registry records.

use dftis_core::eigen::{EigensequenceParts, Eigenvalue, Sign};
use dftis_core::rac::{ChannelFrame, RacCase, RecoveredComponent, SignatureRecord};
use dftis_core::session::SelectedUser;
use dftis_core::ComplexSequence;
use serde::{Deserialize, Serialize};

pub use dftis_core::session::{SessionReport, SessionSpec};

/// Body of every error response: `{ "code": ..., "message": ... }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceRequest {
    pub x: ComplexSequence,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceResponse {
    pub x: ComplexSequence,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DftPowerRequest {
    pub x: ComplexSequence,
    pub p: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShiftRequest {
    pub x: ComplexSequence,
    pub m: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModulateRequest {
    pub x: ComplexSequence,
    pub r: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyRequest {
    pub x: ComplexSequence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// Residual of the invariance check for one eigenvalue.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaResidual {
    pub lambda: Eigenvalue,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyResponse {
    /// The unique matching eigenvalue, if any.
    pub lambda: Option<Eigenvalue>,
    /// True when several eigenvalues matched within tolerance.
    pub ambiguous: bool,
    pub residuals: Vec<LambdaResidual>,
    /// Smallest residual over the four eigenvalues.
    pub best_residual: f64,
    /// Circular parity of the input within tolerance.
    pub even: bool,
    pub odd: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructRequest {
    pub x: ComplexSequence,
    pub sign: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructResponse {
    /// `null` when the construction degenerated to the zero sequence.
    pub eigensequence: Option<EigensequenceParts>,
    /// Invariance residual of the result, when one exists.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub x: EigensequenceParts,
    pub m: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyRequest {
    pub x: EigensequenceParts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyResponse {
    pub members: Vec<EigensequenceParts>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CombineTerm {
    pub a: f64,
    pub x: EigensequenceParts,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearCombineRequest {
    pub terms: Vec<CombineTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenspaceDim {
    pub lambda: Eigenvalue,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionsResponse {
    pub n: usize,
    pub dims: Vec<EigenspaceDim>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RacCombineRequest {
    pub case: RacCase,
    pub weights: Vec<f64>,
    pub signatures: Vec<SignatureRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameResponse {
    pub frame: ChannelFrame,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoverRequest {
    pub frame: ChannelFrame,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoverResponse {
    pub components: Vec<RecoveredComponent>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractRequest {
    pub component: ComplexSequence,
    pub signature: SignatureRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractResponse {
    pub a: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeakRequest {
    pub e_max: f64,
    pub signatures: Vec<SignatureRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeakResponse {
    pub m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyRequest {
    pub frame: ChannelFrame,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnergyResponse {
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleRequest {
    pub users: Vec<SignatureRecord>,
    pub case: RacCase,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleResponse {
    pub selected: Vec<SelectedUser>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelsRequest {
    pub b: u32,
    pub m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelEntry {
    pub label: String,
    pub level: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelsResponse {
    pub levels: Vec<LevelEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransmitRequest {
    pub case: RacCase,
    pub b: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "M")]
    pub m: Option<f64>,
    pub signatures: Vec<SignatureRecord>,
    /// `bitstreams[i]` belongs to `signatures[i]`.
    pub bitstreams: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransmitResponse {
    /// Peak coefficient actually used (resolved from `e_max` when given).
    pub m: f64,
    pub frames: Vec<ChannelFrame>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReceiveRequest {
    pub frames: Vec<ChannelFrame>,
    pub signatures: Vec<SignatureRecord>,
    pub b: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none", alias = "M")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReceiveResponse {
    pub bitstreams: Vec<String>,
}
