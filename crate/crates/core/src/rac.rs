//! The t-user real adder channel.
//!
//! Users hold eigensequence signatures from distinct eigenspaces. The channel
//! output is the componentwise weighted sum of the active signatures, and
//! because the eigenspaces respond differently to the DFT, each user's
//! contribution can be separated from a single frame in closed form. A
//! matrix-solve route over the powers of the transform provides an
//! independent check of the closed forms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dft::unitary_dft;
use crate::eigen::{Eigensequence, EigensequenceParts, Eigenvalue};
use crate::error::{Error, Result};
use crate::sequence::{linear_combination, ComplexSequence, Tolerance};

/// A user identity bound to a certified signature sequence.
///
/// The user's group (1..=4) is the eigenspace index of the signature.
#[derive(Debug, Clone, PartialEq)]
pub struct UserSignature {
    user_id: String,
    signature: Eigensequence,
}

/// Wire form of a registry entry:
/// `{ "user_id": ..., "group": 1..4, "signature": { "lambda", "seq" } }`.
///
/// `priority` is an optional non-negative scheduling weight (default 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureRecord {
    pub user_id: String,
    pub group: u8,
    pub signature: EigensequenceParts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<f64>,
}

impl SignatureRecord {
    /// Certifies the record into a usable signature.
    pub fn to_user_signature(&self, tol: Tolerance) -> Result<UserSignature> {
        let lambda = Eigenvalue::from_group_index(self.group)?;
        if lambda != self.signature.lambda {
            return Err(Error::InvalidInput(format!(
                "user {:?}: group {} implies eigenvalue {}, but the signature claims {}",
                self.user_id, self.group, lambda, self.signature.lambda
            )));
        }
        UserSignature::new(&self.user_id, self.group, self.signature.seq.clone(), tol)
    }
}

impl UserSignature {
    /// Registers a signature for a user, certifying it against the group's
    /// eigenvalue.
    ///
    /// Registration fails with a dedicated diagnostic when the group's
    /// eigenspace has dimension zero at this length (for example group 3 at
    /// N = 4), since no sequence could ever certify there.
    pub fn new(
        user_id: impl Into<String>,
        group: u8,
        seq: ComplexSequence,
        tol: Tolerance,
    ) -> Result<Self> {
        let lambda = Eigenvalue::from_group_index(group)?;
        let n = seq.len();
        match Eigensequence::certify(seq, lambda, tol) {
            Ok(signature) => Ok(Self {
                user_id: user_id.into(),
                signature,
            }),
            Err(err) => {
                if crate::eigen::eigenspace_dimension(n, lambda)? == 0 {
                    Err(Error::EmptyEigenspace { group, n })
                } else {
                    Err(err)
                }
            }
        }
    }

    /// Wraps an already certified eigensequence.
    pub fn from_eigensequence(user_id: impl Into<String>, signature: Eigensequence) -> Self {
        Self {
            user_id: user_id.into(),
            signature,
        }
    }

    pub fn user_id(&self) -> &str {
        &self.user_id
    }

    pub fn group(&self) -> u8 {
        self.signature.lambda().group_index()
    }

    pub fn lambda(&self) -> Eigenvalue {
        self.signature.lambda()
    }

    pub fn eigensequence(&self) -> &Eigensequence {
        &self.signature
    }

    pub fn sequence(&self) -> &ComplexSequence {
        self.signature.sequence()
    }

    pub fn len(&self) -> usize {
        self.signature.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_record(&self) -> SignatureRecord {
        SignatureRecord {
            user_id: self.user_id.clone(),
            group: self.group(),
            signature: self.signature.to_parts(),
            priority: None,
        }
    }
}

impl Serialize for UserSignature {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(serializer)
    }
}

/// Which groups share the channel: two, three (four variants) or four users.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RacCase {
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3/123")]
    Three123,
    #[serde(rename = "3/124")]
    Three124,
    #[serde(rename = "3/134")]
    Three134,
    #[serde(rename = "3/234")]
    Three234,
    #[serde(rename = "4")]
    Four,
}

impl RacCase {
    pub const ALL: [RacCase; 6] = [
        RacCase::Two,
        RacCase::Three123,
        RacCase::Three124,
        RacCase::Three134,
        RacCase::Three234,
        RacCase::Four,
    ];

    /// Sorted group indices active in this case.
    pub fn groups(self) -> &'static [u8] {
        match self {
            RacCase::Two => &[1, 2],
            RacCase::Three123 => &[1, 2, 3],
            RacCase::Three124 => &[1, 2, 4],
            RacCase::Three134 => &[1, 3, 4],
            RacCase::Three234 => &[2, 3, 4],
            RacCase::Four => &[1, 2, 3, 4],
        }
    }

    /// Eigenvalues of the active groups, in group order.
    pub fn lambdas(self) -> Vec<Eigenvalue> {
        self.groups()
            .iter()
            .map(|&g| Eigenvalue::from_group_index(g).expect("valid group"))
            .collect()
    }

    /// Number of simultaneous users.
    pub fn user_count(self) -> usize {
        self.groups().len()
    }

    pub fn label(self) -> &'static str {
        match self {
            RacCase::Two => "2",
            RacCase::Three123 => "3/123",
            RacCase::Three124 => "3/124",
            RacCase::Three134 => "3/134",
            RacCase::Three234 => "3/234",
            RacCase::Four => "4",
        }
    }
}

impl std::fmt::Display for RacCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for RacCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(RacCase::Two),
            "3/123" | "123" => Ok(RacCase::Three123),
            "3/124" | "124" => Ok(RacCase::Three124),
            "3/134" | "134" => Ok(RacCase::Three134),
            "3/234" | "234" => Ok(RacCase::Three234),
            "4" => Ok(RacCase::Four),
            other => Err(Error::InvalidInput(format!(
                "unknown channel case {other:?}; expected 2, 3/123, 3/124, 3/134, 3/234 or 4"
            ))),
        }
    }
}

/// One use of the channel: the received superposition together with the case
/// that produced it. `{ "case": "2", "y": [...] }` on the wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFrame {
    case: RacCase,
    y: ComplexSequence,
}

impl ChannelFrame {
    pub fn new(case: RacCase, y: ComplexSequence) -> Self {
        Self { case, y }
    }

    pub fn case(&self) -> RacCase {
        self.case
    }

    pub fn y(&self) -> &ComplexSequence {
        &self.y
    }
}

/// One separated user contribution `aᵢ·xᵢ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredComponent {
    pub group: u8,
    pub component: ComplexSequence,
}

/// Validates that `signatures` covers exactly the groups of `case`, with one
/// signature per group and a common length. Returns the common length.
fn check_signature_set(signatures: &[UserSignature], case: RacCase) -> Result<usize> {
    if signatures.len() != case.user_count() {
        return Err(Error::InvalidInput(format!(
            "case {} needs {} signatures, got {}",
            case,
            case.user_count(),
            signatures.len()
        )));
    }
    let mut groups: Vec<u8> = signatures.iter().map(|s| s.group()).collect();
    groups.sort_unstable();
    for pair in groups.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::InvalidInput(format!(
                "duplicate signature for group {}",
                pair[0]
            )));
        }
    }
    if groups != case.groups() {
        return Err(Error::InvalidInput(format!(
            "signature groups {groups:?} do not match case {} groups {:?}",
            case,
            case.groups()
        )));
    }
    let n = signatures[0].len();
    if signatures.iter().any(|s| s.len() != n) {
        return Err(Error::InvalidInput("signatures have mixed lengths".into()));
    }
    Ok(n)
}

/// Componentwise weighted superposition `y[n] = Σ aᵢ·xᵢ[n]`.
///
/// `weights[i]` applies to `signatures[i]`; the signature set must contain
/// exactly one signature per group of `case`.
pub fn combine(
    weights: &[f64],
    signatures: &[UserSignature],
    case: RacCase,
) -> Result<ChannelFrame> {
    if weights.len() != signatures.len() {
        return Err(Error::InvalidInput(format!(
            "{} weights for {} signatures",
            weights.len(),
            signatures.len()
        )));
    }
    if let Some(bad) = weights.iter().find(|w| !w.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite weight {bad}")));
    }
    check_signature_set(signatures, case)?;
    let terms: Vec<(Complex64, &ComplexSequence)> = weights
        .iter()
        .zip(signatures.iter())
        .map(|(&a, s)| (Complex64::new(a, 0.0), s.sequence()))
        .collect();
    Ok(ChannelFrame::new(case, linear_combination(&terms)))
}

/// Separates every user contribution from a frame using the per-case closed
/// forms, written in terms of the even/odd parts of `y` and its spectrum.
///
/// Returns `(group, component)` pairs in ascending group order; each
/// component equals `aᵢ·xᵢ` up to floating-point error.
pub fn recover(frame: &ChannelFrame) -> Result<Vec<RecoveredComponent>> {
    let y = frame.y();
    let spectrum = unitary_dft(y);
    let even = y.even_part();
    let odd = y.odd_part();
    let half = Complex64::new(0.5, 0.0);
    let half_j = Complex64::new(0.0, 0.5);
    let neg_half_j = Complex64::new(0.0, -0.5);

    let components: Vec<(u8, ComplexSequence)> = match frame.case() {
        RacCase::Two => vec![
            (1, linear_combination(&[(half, y), (half, &spectrum)])),
            (2, linear_combination(&[(half, y), (-half, &spectrum)])),
        ],
        RacCase::Three123 => vec![
            (
                1,
                linear_combination(&[(half, &even), (neg_half_j, &odd), (half, &spectrum)]),
            ),
            (
                2,
                linear_combination(&[(half, &even), (half_j, &odd), (-half, &spectrum)]),
            ),
            (3, odd.clone()),
        ],
        RacCase::Three124 => vec![
            (
                1,
                linear_combination(&[(half, &even), (half_j, &odd), (half, &spectrum)]),
            ),
            (
                2,
                linear_combination(&[(half, &even), (neg_half_j, &odd), (-half, &spectrum)]),
            ),
            (4, odd.clone()),
        ],
        RacCase::Three134 => vec![
            (1, even.clone()),
            (
                3,
                linear_combination(&[(half, &odd), (half_j, &even), (neg_half_j, &spectrum)]),
            ),
            (
                4,
                linear_combination(&[(half, &odd), (neg_half_j, &even), (half_j, &spectrum)]),
            ),
        ],
        RacCase::Three234 => vec![
            (2, even.clone()),
            (
                3,
                linear_combination(&[(half, &odd), (neg_half_j, &even), (neg_half_j, &spectrum)]),
            ),
            (
                4,
                linear_combination(&[(half, &odd), (half_j, &even), (half_j, &spectrum)]),
            ),
        ],
        RacCase::Four => {
            let even_spectrum = spectrum.even_part();
            let odd_spectrum = spectrum.odd_part();
            vec![
                (
                    1,
                    linear_combination(&[(half, &even), (half, &even_spectrum)]),
                ),
                (
                    2,
                    linear_combination(&[(half, &even), (-half, &even_spectrum)]),
                ),
                (
                    3,
                    linear_combination(&[(half, &odd), (neg_half_j, &odd_spectrum)]),
                ),
                (
                    4,
                    linear_combination(&[(half, &odd), (half_j, &odd_spectrum)]),
                ),
            ]
        }
    };

    Ok(components
        .into_iter()
        .map(|(group, component)| RecoveredComponent { group, component })
        .collect())
}

/// The t×t coefficient matrix of a case: entry (p, i) is `λᵢᵖ` for the
/// eigenvalues of the active groups.
fn case_matrix(case: RacCase) -> DMatrix<Complex64> {
    let lambdas = case.lambdas();
    let t = lambdas.len();
    DMatrix::from_fn(t, t, |p, i| lambdas[i].value().powu(p as u32))
}

/// Determinant of the case's coefficient matrix (computed numerically).
pub fn case_determinant(case: RacCase) -> Complex64 {
    case_matrix(case).determinant()
}

/// Hard-wired reference determinants used to guard the matrix solve.
fn expected_determinant(case: RacCase) -> Complex64 {
    match case {
        RacCase::Two => Complex64::new(-2.0, 0.0),
        RacCase::Three123 => Complex64::new(4.0, 0.0),
        RacCase::Three124 => Complex64::new(4.0, 0.0),
        RacCase::Three134 => Complex64::new(0.0, -4.0),
        RacCase::Three234 => Complex64::new(0.0, -4.0),
        RacCase::Four => Complex64::new(0.0, 16.0),
    }
}

/// Separates user contributions by solving the t×t linear system whose p-th
/// equation relates the p-fold transform of the frame to the components:
/// `Σᵢ λᵢᵖ·xᵢ[n] = Dᵖ{y}[n]`.
///
/// Agrees with [`recover`] on every valid input and serves as its
/// independent check.
pub fn recover_via_matrix(frame: &ChannelFrame) -> Result<Vec<RecoveredComponent>> {
    let case = frame.case();
    let t = case.user_count();
    let n = frame.y().len();

    let matrix = case_matrix(case);
    let det = matrix.determinant();
    let expected = expected_determinant(case);
    if (det - expected).norm() > 1e-12 {
        return Err(Error::Internal(format!(
            "case {case} coefficient matrix determinant {det} deviates from {expected}"
        )));
    }

    let mut powers: Vec<ComplexSequence> = Vec::with_capacity(t);
    powers.push(frame.y().clone());
    for p in 1..t {
        let next = unitary_dft(&powers[p - 1]);
        powers.push(next);
    }
    let rhs = DMatrix::from_fn(t, n, |p, k| powers[p].samples()[k]);

    let solution = matrix
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Internal(format!("case {case} coefficient matrix is singular")))?;

    Ok(case
        .groups()
        .iter()
        .enumerate()
        .map(|(i, &group)| RecoveredComponent {
            group,
            component: ComplexSequence::from_vec(solution.row(i).iter().copied().collect()),
        })
        .collect())
}

/// Least-squares projection of a recovered component onto a signature:
/// `a = Re⟨component, signature⟩ / ⟨signature, signature⟩`.
///
/// Exact when the component is a real multiple of the signature.
pub fn extract_coefficient(component: &ComplexSequence, signature: &UserSignature) -> Result<f64> {
    if component.len() != signature.len() {
        return Err(Error::InvalidInput(format!(
            "component length {} does not match signature length {}",
            component.len(),
            signature.len()
        )));
    }
    let norm_sqr = signature.sequence().energy();
    if norm_sqr <= 0.0 {
        return Err(Error::InvalidInput("zero-norm signature".into()));
    }
    let inner: Complex64 = component
        .samples()
        .iter()
        .zip(signature.sequence().samples().iter())
        .map(|(c, s)| c * s.conj())
        .sum();
    Ok(inner.re / norm_sqr)
}

/// Largest coefficient magnitude that keeps the channel energy within
/// `e_max` for any choice of weights: `M = √(e_max / Σₙ (Σᵢ |xᵢ[n]|)²)`.
pub fn peak_coefficient(e_max: f64, signatures: &[UserSignature]) -> Result<f64> {
    if !e_max.is_finite() || e_max <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "energy budget must be positive, got {e_max}"
        )));
    }
    let Some(first) = signatures.first() else {
        return Err(Error::InvalidInput(
            "peak coefficient needs at least one signature".into(),
        ));
    };
    let n = first.len();
    if signatures.iter().any(|s| s.len() != n) {
        return Err(Error::InvalidInput("signatures have mixed lengths".into()));
    }
    let denom: f64 = (0..n)
        .map(|k| {
            let magnitude_sum: f64 = signatures
                .iter()
                .map(|s| s.sequence().samples()[k].norm())
                .sum();
            magnitude_sum * magnitude_sum
        })
        .sum();
    if denom <= 0.0 {
        return Err(Error::InvalidInput(
            "all-zero signature set has no finite dynamic range".into(),
        ));
    }
    Ok((e_max / denom).sqrt())
}

/// Energy of a frame: `Σₙ |y[n]|²`.
pub fn channel_energy(frame: &ChannelFrame) -> f64 {
    frame.y().energy()
}

/// Largest absolute imaginary part over a set of recovered components.
pub fn max_imag_residual(components: &[RecoveredComponent]) -> f64 {
    components
        .iter()
        .map(|c| c.component.max_imag_abs())
        .fold(0.0, f64::max)
}

/// Picks one registered user per group of `case` by seeded weighted-uniform
/// sampling.
///
/// `priorities` (when given) must align with `users`; zero-priority users
/// are never selected. The draw is a pure function of the users' order, the
/// seed and the priorities. Groups in ascending order get drawn first.
pub fn schedule(
    users: &[UserSignature],
    case: RacCase,
    seed: u64,
    priorities: Option<&[f64]>,
) -> Result<Vec<UserSignature>> {
    if let Some(p) = priorities {
        if p.len() != users.len() {
            return Err(Error::InvalidInput(format!(
                "{} priorities for {} users",
                p.len(),
                users.len()
            )));
        }
        if let Some(bad) = p.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidInput(format!(
                "priorities must be finite and non-negative, got {bad}"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut selected = Vec::with_capacity(case.user_count());
    for &group in case.groups() {
        let candidates: Vec<usize> = users
            .iter()
            .enumerate()
            .filter(|(_, u)| u.group() == group)
            .map(|(i, _)| i)
            .collect();
        if candidates.is_empty() {
            return Err(Error::StarvedGroup {
                group,
                reason: "no registered user".into(),
            });
        }
        let weights: Vec<f64> = candidates
            .iter()
            .map(|&i| priorities.map_or(1.0, |p| p[i]))
            .collect();
        let index = WeightedIndex::new(&weights).map_err(|_| Error::StarvedGroup {
            group,
            reason: "no user with positive priority".into(),
        })?;
        selected.push(users[candidates[index.sample(&mut rng)]].clone());
    }
    Ok(selected)
}
