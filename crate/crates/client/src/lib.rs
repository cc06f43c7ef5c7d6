//! Thin asynchronous client for the dftis HTTP service.
//!
//! Every method is a typed wrapper around one endpoint; see [`api`] for the
//! request and response bodies.

pub mod api;

use api::*;
use dftis_core::eigen::{EigensequenceParts, Sign};
use dftis_core::rac::{ChannelFrame, RacCase, SignatureRecord};
use dftis_core::ComplexSequence;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

/// Client-side failures: transport problems or structured service errors.
#[derive(Debug, Error)]
pub enum ClientError {
    #[error("transport error: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("{message} [{code}]")]
    Api {
        status: u16,
        code: String,
        message: String,
    },
}

impl ClientError {
    /// True for errors raised by the domain logic (as opposed to transport
    /// or protocol failures).
    pub fn is_domain(&self) -> bool {
        matches!(self, ClientError::Api { code, .. } if code != "http")
    }

    /// Machine-readable code, when the service supplied one.
    pub fn code(&self) -> Option<&str> {
        match self {
            ClientError::Api { code, .. } => Some(code),
            ClientError::Transport(_) => None,
        }
    }
}

pub type ClientResult<T> = std::result::Result<T, ClientError>;

/// Handle to one service instance.
#[derive(Debug, Clone)]
pub struct Client {
    base: String,
    http: reqwest::Client,
}

impl Client {
    /// Creates a client for a base URL such as `http://127.0.0.1:8080`.
    pub fn new(base_url: impl Into<String>) -> Self {
        let mut base = base_url.into();
        while base.ends_with('/') {
            base.pop();
        }
        Self {
            base,
            http: reqwest::Client::new(),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base
    }

    async fn decode<T: DeserializeOwned>(resp: reqwest::Response) -> ClientResult<T> {
        let status = resp.status();
        if status.is_success() {
            return Ok(resp.json::<T>().await?);
        }
        let body = resp.text().await.unwrap_or_default();
        match serde_json::from_str::<ApiErrorBody>(&body) {
            Ok(err) => Err(ClientError::Api {
                status: status.as_u16(),
                code: err.code,
                message: err.message,
            }),
            Err(_) => Err(ClientError::Api {
                status: status.as_u16(),
                code: "http".into(),
                message: if body.is_empty() {
                    status.to_string()
                } else {
                    body
                },
            }),
        }
    }

    async fn post<Req: Serialize, Resp: DeserializeOwned>(
        &self,
        path: &str,
        req: &Req,
    ) -> ClientResult<Resp> {
        let resp = self
            .http
            .post(format!("{}{path}", self.base))
            .json(req)
            .send()
            .await?;
        Self::decode(resp).await
    }

    async fn get<Resp: DeserializeOwned>(&self, path: &str) -> ClientResult<Resp> {
        let resp = self.http.get(format!("{}{path}", self.base)).send().await?;
        Self::decode(resp).await
    }

    pub async fn health(&self) -> ClientResult<HealthResponse> {
        self.get("/health").await
    }

    pub async fn dft(&self, x: &ComplexSequence) -> ClientResult<ComplexSequence> {
        let resp: SequenceResponse = self
            .post("/v1/sequence/dft", &SequenceRequest { x: x.clone() })
            .await?;
        Ok(resp.x)
    }

    pub async fn idft(&self, x: &ComplexSequence) -> ClientResult<ComplexSequence> {
        let resp: SequenceResponse = self
            .post("/v1/sequence/idft", &SequenceRequest { x: x.clone() })
            .await?;
        Ok(resp.x)
    }

    pub async fn dft_power(&self, x: &ComplexSequence, p: i64) -> ClientResult<ComplexSequence> {
        let resp: SequenceResponse = self
            .post(
                "/v1/sequence/dft-power",
                &DftPowerRequest { x: x.clone(), p },
            )
            .await?;
        Ok(resp.x)
    }

    pub async fn even_part(&self, x: &ComplexSequence) -> ClientResult<ComplexSequence> {
        let resp: SequenceResponse = self
            .post("/v1/sequence/even-part", &SequenceRequest { x: x.clone() })
            .await?;
        Ok(resp.x)
    }

    pub async fn odd_part(&self, x: &ComplexSequence) -> ClientResult<ComplexSequence> {
        let resp: SequenceResponse = self
            .post("/v1/sequence/odd-part", &SequenceRequest { x: x.clone() })
            .await?;
        Ok(resp.x)
    }

    pub async fn circular_shift(
        &self,
        x: &ComplexSequence,
        m: i64,
    ) -> ClientResult<ComplexSequence> {
        let resp: SequenceResponse = self
            .post("/v1/sequence/shift", &ShiftRequest { x: x.clone(), m })
            .await?;
        Ok(resp.x)
    }

    pub async fn modulate(&self, x: &ComplexSequence, r: i64) -> ClientResult<ComplexSequence> {
        let resp: SequenceResponse = self
            .post(
                "/v1/sequence/modulate",
                &ModulateRequest { x: x.clone(), r },
            )
            .await?;
        Ok(resp.x)
    }

    pub async fn verify(
        &self,
        x: &ComplexSequence,
        tol: Option<f64>,
    ) -> ClientResult<VerifyResponse> {
        self.post("/v1/eigen/verify", &VerifyRequest { x: x.clone(), tol })
            .await
    }

    pub async fn from_even(
        &self,
        x: &ComplexSequence,
        sign: Sign,
        tol: Option<f64>,
    ) -> ClientResult<ConstructResponse> {
        self.post(
            "/v1/eigen/from-even",
            &ConstructRequest {
                x: x.clone(),
                sign,
                tol,
            },
        )
        .await
    }

    pub async fn from_odd(
        &self,
        x: &ComplexSequence,
        sign: Sign,
        tol: Option<f64>,
    ) -> ClientResult<ConstructResponse> {
        self.post(
            "/v1/eigen/from-odd",
            &ConstructRequest {
                x: x.clone(),
                sign,
                tol,
            },
        )
        .await
    }

    pub async fn generate(
        &self,
        x: EigensequenceParts,
        m: i64,
        tol: Option<f64>,
    ) -> ClientResult<ConstructResponse> {
        self.post("/v1/eigen/generate", &GenerateRequest { x, m, tol })
            .await
    }

    pub async fn family(
        &self,
        x: EigensequenceParts,
        tol: Option<f64>,
    ) -> ClientResult<FamilyResponse> {
        self.post("/v1/eigen/family", &FamilyRequest { x, tol })
            .await
    }

    pub async fn linear_combine(
        &self,
        terms: Vec<CombineTerm>,
        tol: Option<f64>,
    ) -> ClientResult<ConstructResponse> {
        self.post("/v1/eigen/combine", &LinearCombineRequest { terms, tol })
            .await
    }

    pub async fn dimensions(&self, n: usize) -> ClientResult<DimensionsResponse> {
        self.get(&format!("/v1/eigen/dimensions/{n}")).await
    }

    pub async fn rac_combine(&self, req: &RacCombineRequest) -> ClientResult<FrameResponse> {
        self.post("/v1/rac/combine", req).await
    }

    pub async fn recover(&self, frame: &ChannelFrame) -> ClientResult<RecoverResponse> {
        self.post(
            "/v1/rac/recover",
            &RecoverRequest {
                frame: frame.clone(),
            },
        )
        .await
    }

    pub async fn recover_via_matrix(&self, frame: &ChannelFrame) -> ClientResult<RecoverResponse> {
        self.post(
            "/v1/rac/recover-matrix",
            &RecoverRequest {
                frame: frame.clone(),
            },
        )
        .await
    }

    pub async fn extract_coefficient(&self, req: &ExtractRequest) -> ClientResult<ExtractResponse> {
        self.post("/v1/rac/extract", req).await
    }

    pub async fn peak_coefficient(
        &self,
        e_max: f64,
        signatures: Vec<SignatureRecord>,
        tol: Option<f64>,
    ) -> ClientResult<PeakResponse> {
        self.post(
            "/v1/rac/peak-coefficient",
            &PeakRequest {
                e_max,
                signatures,
                tol,
            },
        )
        .await
    }

    pub async fn channel_energy(&self, frame: &ChannelFrame) -> ClientResult<EnergyResponse> {
        self.post(
            "/v1/rac/channel-energy",
            &EnergyRequest {
                frame: frame.clone(),
            },
        )
        .await
    }

    pub async fn schedule(
        &self,
        users: Vec<SignatureRecord>,
        case: RacCase,
        seed: u64,
        tol: Option<f64>,
    ) -> ClientResult<ScheduleResponse> {
        self.post(
            "/v1/rac/schedule",
            &ScheduleRequest {
                users,
                case,
                seed,
                tol,
            },
        )
        .await
    }

    pub async fn quantizer_levels(&self, b: u32, m: f64) -> ClientResult<LevelsResponse> {
        self.post("/v1/quantizer/levels", &LevelsRequest { b, m })
            .await
    }

    pub async fn transmit(&self, req: &TransmitRequest) -> ClientResult<TransmitResponse> {
        self.post("/v1/transceiver/transmit", req).await
    }

    pub async fn receive(&self, req: &ReceiveRequest) -> ClientResult<ReceiveResponse> {
        self.post("/v1/transceiver/receive", req).await
    }

    pub async fn simulate(&self, spec: &SessionSpec) -> ClientResult<SessionReport> {
        self.post("/v1/simulate", spec).await
    }
}
