//! HTTP service exposing the sequence operators, eigensequence constructions
//! and the adder-channel transmission path.
//!
//! The service is stateless: every request carries the sequences or
//! signatures it operates on, so any number of clients can share one
//! instance. Domain failures map to `422` with a `{ code, message }` body,
//! internal invariant violations to `500`.

use axum::extract::Path;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};

use dftis_client::api::*;
use dftis_core::dft::{apply_dft_power, unitary_dft, unitary_idft};
use dftis_core::eigen::{
    classify_detailed, eigenspace_dimensions, from_even, from_odd, generate, generate_family,
    linear_combine, Eigensequence,
};
use dftis_core::rac::{
    channel_energy, combine, extract_coefficient, peak_coefficient, recover, recover_via_matrix,
    schedule, SignatureRecord, UserSignature,
};
use dftis_core::session::run_session;
use dftis_core::transceiver::{quantizer_levels, receive, transmit, QuantizerConfig};
use dftis_core::{Error, Tolerance};

/// Largest word size for which the level-table endpoint will enumerate all
/// `2^b` levels; larger quantizers must use the arithmetic endpoints.
const MAX_TABLE_BITS: u32 = 16;

/// Wrapper that turns a core error into an HTTP response.
pub struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        ApiError(err)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.0 {
            Error::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::UNPROCESSABLE_ENTITY,
        };
        let body = ApiErrorBody {
            code: self.0.code().to_string(),
            message: self.0.to_string(),
        };
        (status, Json(body)).into_response()
    }
}

type ApiResult<T> = std::result::Result<Json<T>, ApiError>;

fn tolerance(tol: Option<f64>) -> Result<Tolerance, Error> {
    match tol {
        Some(eps) => Tolerance::new(eps),
        None => Ok(Tolerance::default()),
    }
}

fn certify_all(records: &[SignatureRecord], tol: Tolerance) -> Result<Vec<UserSignature>, Error> {
    records.iter().map(|r| r.to_user_signature(tol)).collect()
}

/// Resolves the peak coefficient from either an explicit value or an energy
/// budget over the given signatures.
fn resolve_peak(
    m: Option<f64>,
    e_max: Option<f64>,
    signatures: &[UserSignature],
) -> Result<f64, Error> {
    match (m, e_max) {
        (Some(_), Some(_)) => Err(Error::Config(
            "give either the energy budget e_max or the peak coefficient m, not both".into(),
        )),
        (None, None) => Err(Error::Config(
            "one of e_max or m is required to size the quantizer".into(),
        )),
        (Some(m), None) => Ok(m),
        (None, Some(e_max)) => peak_coefficient(e_max, signatures),
    }
}

/// Builds the full application router.
pub fn router() -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/v1/sequence/dft", post(sequence_dft))
        .route("/v1/sequence/idft", post(sequence_idft))
        .route("/v1/sequence/dft-power", post(sequence_dft_power))
        .route("/v1/sequence/even-part", post(sequence_even_part))
        .route("/v1/sequence/odd-part", post(sequence_odd_part))
        .route("/v1/sequence/shift", post(sequence_shift))
        .route("/v1/sequence/modulate", post(sequence_modulate))
        .route("/v1/eigen/verify", post(eigen_verify))
        .route("/v1/eigen/from-even", post(eigen_from_even))
        .route("/v1/eigen/from-odd", post(eigen_from_odd))
        .route("/v1/eigen/generate", post(eigen_generate))
        .route("/v1/eigen/family", post(eigen_family))
        .route("/v1/eigen/combine", post(eigen_combine))
        .route("/v1/eigen/dimensions/{n}", get(eigen_dimensions))
        .route("/v1/rac/combine", post(rac_combine))
        .route("/v1/rac/recover", post(rac_recover))
        .route("/v1/rac/recover-matrix", post(rac_recover_matrix))
        .route("/v1/rac/extract", post(rac_extract))
        .route("/v1/rac/peak-coefficient", post(rac_peak))
        .route("/v1/rac/channel-energy", post(rac_energy))
        .route("/v1/rac/schedule", post(rac_schedule))
        .route("/v1/quantizer/levels", post(quantizer_table))
        .route("/v1/transceiver/transmit", post(transceiver_transmit))
        .route("/v1/transceiver/receive", post(transceiver_receive))
        .route("/v1/simulate", post(simulate))
}

async fn health() -> Json<HealthResponse> {
    Json(HealthResponse {
        status: "ok".into(),
    })
}

async fn sequence_dft(Json(req): Json<SequenceRequest>) -> ApiResult<SequenceResponse> {
    Ok(Json(SequenceResponse {
        x: unitary_dft(&req.x),
    }))
}

async fn sequence_idft(Json(req): Json<SequenceRequest>) -> ApiResult<SequenceResponse> {
    Ok(Json(SequenceResponse {
        x: unitary_idft(&req.x),
    }))
}

async fn sequence_dft_power(Json(req): Json<DftPowerRequest>) -> ApiResult<SequenceResponse> {
    Ok(Json(SequenceResponse {
        x: apply_dft_power(&req.x, req.p),
    }))
}

async fn sequence_even_part(Json(req): Json<SequenceRequest>) -> ApiResult<SequenceResponse> {
    Ok(Json(SequenceResponse {
        x: req.x.even_part(),
    }))
}

async fn sequence_odd_part(Json(req): Json<SequenceRequest>) -> ApiResult<SequenceResponse> {
    Ok(Json(SequenceResponse {
        x: req.x.odd_part(),
    }))
}

async fn sequence_shift(Json(req): Json<ShiftRequest>) -> ApiResult<SequenceResponse> {
    Ok(Json(SequenceResponse {
        x: req.x.circular_shift(req.m),
    }))
}

async fn sequence_modulate(Json(req): Json<ModulateRequest>) -> ApiResult<SequenceResponse> {
    Ok(Json(SequenceResponse {
        x: req.x.modulate(req.r),
    }))
}

async fn eigen_verify(Json(req): Json<VerifyRequest>) -> ApiResult<VerifyResponse> {
    let tol = tolerance(req.tol)?;
    let report = classify_detailed(&req.x, tol)?;
    Ok(Json(VerifyResponse {
        lambda: report.lambda,
        ambiguous: report.ambiguous,
        residuals: report
            .residuals
            .iter()
            .map(|(lambda, residual)| LambdaResidual {
                lambda: *lambda,
                residual: *residual,
            })
            .collect(),
        best_residual: report.best_residual(),
        even: req.x.is_even(tol),
        odd: req.x.is_odd(tol),
    }))
}

fn construct_response(result: Option<Eigensequence>) -> ConstructResponse {
    match result {
        Some(es) => ConstructResponse {
            residual: Some(es.residual()),
            eigensequence: Some(es.into_parts()),
        },
        None => ConstructResponse {
            eigensequence: None,
            residual: None,
        },
    }
}

async fn eigen_from_even(Json(req): Json<ConstructRequest>) -> ApiResult<ConstructResponse> {
    let tol = tolerance(req.tol)?;
    Ok(Json(construct_response(from_even(&req.x, req.sign, tol))))
}

async fn eigen_from_odd(Json(req): Json<ConstructRequest>) -> ApiResult<ConstructResponse> {
    let tol = tolerance(req.tol)?;
    Ok(Json(construct_response(from_odd(&req.x, req.sign, tol))))
}

async fn eigen_generate(Json(req): Json<GenerateRequest>) -> ApiResult<ConstructResponse> {
    let tol = tolerance(req.tol)?;
    let source = Eigensequence::from_parts(req.x, tol)?;
    Ok(Json(construct_response(generate(&source, req.m, tol))))
}

async fn eigen_family(Json(req): Json<FamilyRequest>) -> ApiResult<FamilyResponse> {
    let tol = tolerance(req.tol)?;
    let source = Eigensequence::from_parts(req.x, tol)?;
    Ok(Json(FamilyResponse {
        members: generate_family(&source, tol)
            .into_iter()
            .map(Eigensequence::into_parts)
            .collect(),
    }))
}

async fn eigen_combine(Json(req): Json<LinearCombineRequest>) -> ApiResult<ConstructResponse> {
    let tol = tolerance(req.tol)?;
    let terms = req
        .terms
        .into_iter()
        .map(|t| Ok((t.a, Eigensequence::from_parts(t.x, tol)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Json(construct_response(linear_combine(&terms, tol)?)))
}

async fn eigen_dimensions(Path(n): Path<usize>) -> ApiResult<DimensionsResponse> {
    let dims = eigenspace_dimensions(n)?;
    Ok(Json(DimensionsResponse {
        n,
        dims: dims
            .iter()
            .map(|(lambda, dim)| EigenspaceDim {
                lambda: *lambda,
                dim: *dim,
            })
            .collect(),
    }))
}

async fn rac_combine(Json(req): Json<RacCombineRequest>) -> ApiResult<FrameResponse> {
    let tol = tolerance(req.tol)?;
    let signatures = certify_all(&req.signatures, tol)?;
    Ok(Json(FrameResponse {
        frame: combine(&req.weights, &signatures, req.case)?,
    }))
}

async fn rac_recover(Json(req): Json<RecoverRequest>) -> ApiResult<RecoverResponse> {
    Ok(Json(RecoverResponse {
        components: recover(&req.frame)?,
    }))
}

async fn rac_recover_matrix(Json(req): Json<RecoverRequest>) -> ApiResult<RecoverResponse> {
    Ok(Json(RecoverResponse {
        components: recover_via_matrix(&req.frame)?,
    }))
}

async fn rac_extract(Json(req): Json<ExtractRequest>) -> ApiResult<ExtractResponse> {
    let tol = tolerance(req.tol)?;
    let signature = req.signature.to_user_signature(tol)?;
    Ok(Json(ExtractResponse {
        a: extract_coefficient(&req.component, &signature)?,
    }))
}

async fn rac_peak(Json(req): Json<PeakRequest>) -> ApiResult<PeakResponse> {
    let tol = tolerance(req.tol)?;
    let signatures = certify_all(&req.signatures, tol)?;
    Ok(Json(PeakResponse {
        m: peak_coefficient(req.e_max, &signatures)?,
    }))
}

async fn rac_energy(Json(req): Json<EnergyRequest>) -> ApiResult<EnergyResponse> {
    Ok(Json(EnergyResponse {
        energy: channel_energy(&req.frame),
    }))
}

async fn rac_schedule(Json(req): Json<ScheduleRequest>) -> ApiResult<ScheduleResponse> {
    let tol = tolerance(req.tol)?;
    let users = certify_all(&req.users, tol)?;
    let priorities: Vec<f64> = req
        .users
        .iter()
        .map(|r| r.priority.unwrap_or(1.0))
        .collect();
    let selected = schedule(&users, req.case, req.seed, Some(&priorities))?;
    Ok(Json(ScheduleResponse {
        selected: selected
            .iter()
            .map(|u| dftis_core::session::SelectedUser {
                user_id: u.user_id().to_string(),
                group: u.group(),
            })
            .collect(),
    }))
}

async fn quantizer_table(Json(req): Json<LevelsRequest>) -> ApiResult<LevelsResponse> {
    if req.b > MAX_TABLE_BITS {
        return Err(Error::Config(format!(
            "level table for b = {} would hold 2^{} entries; limit is b <= {MAX_TABLE_BITS}",
            req.b, req.b
        ))
        .into());
    }
    let cfg = QuantizerConfig::new(req.b, req.m)?;
    Ok(Json(LevelsResponse {
        levels: quantizer_levels(cfg)
            .into_iter()
            .map(|(label, level)| LevelEntry { label, level })
            .collect(),
    }))
}

async fn transceiver_transmit(Json(req): Json<TransmitRequest>) -> ApiResult<TransmitResponse> {
    let tol = tolerance(req.tol)?;
    let signatures = certify_all(&req.signatures, tol)?;
    let m = resolve_peak(req.m, req.e_max, &signatures)?;
    let cfg = QuantizerConfig::new(req.b, m)?;
    Ok(Json(TransmitResponse {
        m,
        frames: transmit(&req.bitstreams, &signatures, req.case, cfg)?,
    }))
}

async fn transceiver_receive(Json(req): Json<ReceiveRequest>) -> ApiResult<ReceiveResponse> {
    let tol = tolerance(req.tol)?;
    let signatures = certify_all(&req.signatures, tol)?;
    let m = resolve_peak(req.m, req.e_max, &signatures)?;
    let cfg = QuantizerConfig::new(req.b, m)?;
    Ok(Json(ReceiveResponse {
        bitstreams: receive(&req.frames, &signatures, cfg, tol)?,
    }))
}

async fn simulate(Json(spec): Json<SessionSpec>) -> ApiResult<SessionReport> {
    Ok(Json(run_session(&spec)?))
}
