//! Construction, classification and family generation of sequences that are
//! invariant in shape under the unitary DFT.
//!
//! A sequence `x` with `DFT(x) = λ·x` is called an eigensequence; the only
//! possible eigenvalues are the fourth roots of unity. Eigenvalues `±1` force
//! circularly even sequences and `±j` circularly odd ones. Each eigenvalue
//! also labels one of the four user groups of the adder-channel system
//! (1 ↔ +1, 2 ↔ -1, 3 ↔ +j, 4 ↔ -j).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dft::unitary_dft;
use crate::error::{Error, Result};
use crate::sequence::{linear_combination, ComplexSequence, Tolerance};

/// One of the four eigenvalues of the unitary DFT operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Eigenvalue {
    #[serde(rename = "+1")]
    PlusOne,
    #[serde(rename = "-1")]
    MinusOne,
    #[serde(rename = "+j")]
    PlusJ,
    #[serde(rename = "-j")]
    MinusJ,
}

impl Eigenvalue {
    /// All four eigenvalues in group order (+1, -1, +j, -j).
    pub const ALL: [Eigenvalue; 4] = [
        Eigenvalue::PlusOne,
        Eigenvalue::MinusOne,
        Eigenvalue::PlusJ,
        Eigenvalue::MinusJ,
    ];

    /// The eigenvalue as a complex number.
    pub fn value(self) -> Complex64 {
        match self {
            Eigenvalue::PlusOne => Complex64::new(1.0, 0.0),
            Eigenvalue::MinusOne => Complex64::new(-1.0, 0.0),
            Eigenvalue::PlusJ => Complex64::new(0.0, 1.0),
            Eigenvalue::MinusJ => Complex64::new(0.0, -1.0),
        }
    }

    /// User-group index of this eigenspace (1..=4).
    pub fn group_index(self) -> u8 {
        match self {
            Eigenvalue::PlusOne => 1,
            Eigenvalue::MinusOne => 2,
            Eigenvalue::PlusJ => 3,
            Eigenvalue::MinusJ => 4,
        }
    }

    /// Eigenvalue for a user-group index (1..=4).
    pub fn from_group_index(group: u8) -> Result<Self> {
        match group {
            1 => Ok(Eigenvalue::PlusOne),
            2 => Ok(Eigenvalue::MinusOne),
            3 => Ok(Eigenvalue::PlusJ),
            4 => Ok(Eigenvalue::MinusJ),
            _ => Err(Error::InvalidInput(format!(
                "group index must be 1..=4, got {group}"
            ))),
        }
    }

    /// Real eigenvalues correspond to circularly even sequences, imaginary
    /// ones to circularly odd sequences.
    pub fn is_real(self) -> bool {
        matches!(self, Eigenvalue::PlusOne | Eigenvalue::MinusOne)
    }

    pub fn label(self) -> &'static str {
        match self {
            Eigenvalue::PlusOne => "+1",
            Eigenvalue::MinusOne => "-1",
            Eigenvalue::PlusJ => "+j",
            Eigenvalue::MinusJ => "-j",
        }
    }
}

impl std::fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Eigenvalue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+1" | "1" => Ok(Eigenvalue::PlusOne),
            "-1" => Ok(Eigenvalue::MinusOne),
            "+j" | "j" => Ok(Eigenvalue::PlusJ),
            "-j" => Ok(Eigenvalue::MinusJ),
            other => Err(Error::InvalidInput(format!(
                "unknown eigenvalue {other:?}; expected one of +1, -1, +j, -j"
            ))),
        }
    }
}

/// Sign selector for the even/odd construction rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Eigenvalue produced by the even construction (`±1`).
    pub fn lambda_even(self) -> Eigenvalue {
        match self {
            Sign::Plus => Eigenvalue::PlusOne,
            Sign::Minus => Eigenvalue::MinusOne,
        }
    }

    /// Eigenvalue produced by the odd construction (`±j`).
    pub fn lambda_odd(self) -> Eigenvalue {
        match self {
            Sign::Plus => Eigenvalue::PlusJ,
            Sign::Minus => Eigenvalue::MinusJ,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::InvalidInput(format!(
                "unknown sign {other:?}; expected + or -"
            ))),
        }
    }
}

/// A sequence certified to satisfy `DFT(seq) = lambda·seq` within tolerance.
///
/// The all-zero sequence belongs to every eigenspace and is therefore never
/// certified; constructions that collapse to zero report a degenerate result
/// instead.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensequence {
    seq: ComplexSequence,
    lambda: Eigenvalue,
}

/// Wire form of an eigensequence: `{ "lambda": "+1", "seq": [...] }`.
///
/// Carries no invariants; convert with [`Eigensequence::certify`] before use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigensequenceParts {
    pub lambda: Eigenvalue,
    pub seq: ComplexSequence,
}

impl Eigensequence {
    /// Certifies a sequence against a claimed eigenvalue.
    pub fn certify(seq: ComplexSequence, lambda: Eigenvalue, tol: Tolerance) -> Result<Self> {
        if seq.is_zero(tol) {
            return Err(Error::DegenerateInput(
                "the all-zero sequence belongs to every eigenspace".into(),
            ));
        }
        let residual = invariance_residual(&seq, lambda);
        if residual > tol.eps() {
            return Err(Error::NotInvariant {
                lambda: lambda.label().into(),
                residual,
            });
        }
        Ok(Self { seq, lambda })
    }

    /// Certifies the wire form.
    pub fn from_parts(parts: EigensequenceParts, tol: Tolerance) -> Result<Self> {
        Self::certify(parts.seq, parts.lambda, tol)
    }

    /// Constructor for sequences produced by the construction rules, whose
    /// invariance holds by linearity of the transform.
    pub(crate) fn certified_by_construction(seq: ComplexSequence, lambda: Eigenvalue) -> Self {
        debug_assert!(
            invariance_residual(&seq, lambda) <= 1e-6 * seq.max_abs().max(1.0),
            "construction produced a non-invariant sequence"
        );
        Self { seq, lambda }
    }

    pub fn sequence(&self) -> &ComplexSequence {
        &self.seq
    }

    pub fn lambda(&self) -> Eigenvalue {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Current invariance residual `max |DFT(seq) - λ·seq|`.
    pub fn residual(&self) -> f64 {
        invariance_residual(&self.seq, self.lambda)
    }

    pub fn into_parts(self) -> EigensequenceParts {
        EigensequenceParts {
            lambda: self.lambda,
            seq: self.seq,
        }
    }

    pub fn to_parts(&self) -> EigensequenceParts {
        EigensequenceParts {
            lambda: self.lambda,
            seq: self.seq.clone(),
        }
    }
}

impl Serialize for Eigensequence {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_parts().serialize(serializer)
    }
}

/// `max_n |DFT(x)[n] - λ·x[n]|`.
pub fn invariance_residual(x: &ComplexSequence, lambda: Eigenvalue) -> f64 {
    let spectrum = unitary_dft(x);
    spectrum.max_diff(&x.scaled(lambda.value()))
}

/// Outcome of testing a sequence against all four eigenvalues.
#[derive(Debug, Clone)]
pub struct ClassifyReport {
    /// The unique matching eigenvalue, if exactly one matched.
    pub lambda: Option<Eigenvalue>,
    /// Residual per eigenvalue, in [`Eigenvalue::ALL`] order.
    pub residuals: [(Eigenvalue, f64); 4],
    /// True when more than one eigenvalue matched within tolerance, which
    /// indicates a near-zero input or a tolerance that is too loose.
    pub ambiguous: bool,
}

impl ClassifyReport {
    /// Smallest residual over the four eigenvalues.
    pub fn best_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|(_, r)| *r)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Classifies a sequence, requiring a unique eigenvalue match.
///
/// Returns `Ok(None)` when no eigenvalue (or more than one) fits within
/// tolerance; the all-zero sequence is rejected as degenerate since every
/// eigenvalue fits it.
pub fn classify(x: &ComplexSequence, tol: Tolerance) -> Result<Option<Eigenvalue>> {
    classify_detailed(x, tol).map(|report| report.lambda)
}

/// Classifies a sequence and reports the residual for every eigenvalue.
pub fn classify_detailed(x: &ComplexSequence, tol: Tolerance) -> Result<ClassifyReport> {
    if x.is_zero(tol) {
        return Err(Error::DegenerateInput(
            "all-zero sequence: every eigenvalue fits, classification is undefined".into(),
        ));
    }
    let spectrum = unitary_dft(x);
    let residuals = Eigenvalue::ALL.map(|lam| (lam, spectrum.max_diff(&x.scaled(lam.value()))));
    let matches: Vec<Eigenvalue> = residuals
        .iter()
        .filter(|(_, r)| *r <= tol.eps())
        .map(|(lam, _)| *lam)
        .collect();
    let (lambda, ambiguous) = match matches.as_slice() {
        [single] => (Some(*single), false),
        [] => (None, false),
        _ => (None, true),
    };
    Ok(ClassifyReport {
        lambda,
        residuals,
        ambiguous,
    })
}

/// Builds a `λ = ±1` eigensequence from an arbitrary seed sequence as
/// `E{x} ± E{DFT(x)}`.
///
/// Returns `None` when the combination collapses to zero (the seed's even
/// part already lies in the opposite eigenspace).
pub fn from_even(x: &ComplexSequence, sign: Sign, tol: Tolerance) -> Option<Eigensequence> {
    let even_x = x.even_part();
    let even_spectrum = unitary_dft(x).even_part();
    let y = linear_combination(&[
        (Complex64::new(1.0, 0.0), &even_x),
        (Complex64::new(sign.factor(), 0.0), &even_spectrum),
    ]);
    if y.is_zero(tol) {
        None
    } else {
        Some(Eigensequence::certified_by_construction(
            y,
            sign.lambda_even(),
        ))
    }
}

/// Builds a `λ = ±j` eigensequence from an arbitrary seed sequence as
/// `O{x} ∓ j·O{DFT(x)}` (minus pairs with `+j`, plus with `-j`).
///
/// Returns `None` when the combination collapses to zero.
pub fn from_odd(x: &ComplexSequence, sign: Sign, tol: Tolerance) -> Option<Eigensequence> {
    let odd_x = x.odd_part();
    let odd_spectrum = unitary_dft(x).odd_part();
    let y = linear_combination(&[
        (Complex64::new(1.0, 0.0), &odd_x),
        (Complex64::new(0.0, -sign.factor()), &odd_spectrum),
    ]);
    if y.is_zero(tol) {
        None
    } else {
        Some(Eigensequence::certified_by_construction(
            y,
            sign.lambda_odd(),
        ))
    }
}

/// Three-term shift/cosine combination that maps an eigensequence to another
/// one with the same eigenvalue:
///
/// `g[n] = x[n+m] + 2·cos(2πmn/N)·x[n] + x[n-m]`
///
/// `m` may be any integer; the result is N-periodic in `m` and symmetric
/// about `N/2` (`g[·,m] = g[·,N-m]`). Returns `None` when the combination
/// collapses to zero.
pub fn generate(x: &Eigensequence, m: i64, tol: Tolerance) -> Option<Eigensequence> {
    let seq = x.sequence();
    let n = seq.len();
    let left = seq.circular_shift(-m); // x[n+m]
    let right = seq.circular_shift(m); // x[n-m]
    let modulated = ComplexSequence::from_vec(
        seq.samples()
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let t = (m as i128 * i as i128).rem_euclid(n as i128) as f64;
                z * 2.0 * (std::f64::consts::TAU * t / n as f64).cos()
            })
            .collect(),
    );
    let g = linear_combination(&[
        (Complex64::new(1.0, 0.0), &left),
        (Complex64::new(1.0, 0.0), &modulated),
        (Complex64::new(1.0, 0.0), &right),
    ]);
    if g.is_zero(tol) {
        None
    } else {
        Some(Eigensequence::certified_by_construction(g, x.lambda()))
    }
}

/// Family generated by [`generate`] for `m = 1..=⌈N/2⌉`, with all-zero
/// members removed and duplicates (within tolerance) collapsed.
///
/// The symmetry `g[·,m] = g[·,N-m]` makes larger `m` redundant, so at most
/// `⌈N/2⌉` members are returned; degenerate seeds may produce fewer.
pub fn generate_family(x: &Eigensequence, tol: Tolerance) -> Vec<Eigensequence> {
    let half = x.len().div_ceil(2).max(1);
    let mut family: Vec<Eigensequence> = Vec::new();
    for m in 1..=half {
        if let Some(g) = generate(x, m as i64, tol) {
            let duplicate = family
                .iter()
                .any(|h| h.sequence().max_diff(g.sequence()) <= tol.eps());
            if !duplicate {
                family.push(g);
            }
        }
    }
    family
}

/// Real linear combination within a single eigenspace.
///
/// All terms must share one eigenvalue (the eigenspaces are real vector
/// spaces, but closure does not hold across them). Returns `None` when the
/// sum collapses to zero.
pub fn linear_combine(
    terms: &[(f64, Eigensequence)],
    tol: Tolerance,
) -> Result<Option<Eigensequence>> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::InvalidInput(
            "linear combination needs at least one term".into(),
        ));
    };
    let lambda = first.lambda();
    let n = first.len();
    for (a, x) in terms {
        if !a.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite scalar {a}")));
        }
        if x.lambda() != lambda {
            return Err(Error::InvalidInput(format!(
                "mixed eigenvalues {} and {}: closure only holds within one eigenspace",
                lambda,
                x.lambda()
            )));
        }
        if x.len() != n {
            return Err(Error::InvalidInput(format!(
                "mixed lengths {n} and {}",
                x.len()
            )));
        }
    }
    let scaled: Vec<(Complex64, &ComplexSequence)> = terms
        .iter()
        .map(|(a, x)| (Complex64::new(*a, 0.0), x.sequence()))
        .collect();
    let sum = linear_combination(&scaled);
    if sum.is_zero(tol) {
        Ok(None)
    } else {
        Ok(Some(Eigensequence::certified_by_construction(sum, lambda)))
    }
}

/// Numerical dimension of one eigenspace for length-`n` sequences.
///
/// The projector `(1/4)·Σₚ λ⁻ᵖ·Dᵖ` is applied to the `n` standard basis
/// sequences and the resulting columns are ranked by singular values with
/// threshold 1e-8. The four dimensions always sum to `n`.
pub fn eigenspace_dimension(n: usize, lambda: Eigenvalue) -> Result<usize> {
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let lam_inv = lambda.value().conj();
    let coeff = [
        Complex64::new(0.25, 0.0),
        lam_inv * 0.25,
        lam_inv * lam_inv * 0.25,
        lam_inv * lam_inv * lam_inv * 0.25,
    ];
    let mut data = Vec::with_capacity(n * n);
    for basis_index in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[basis_index] = Complex64::new(1.0, 0.0);
        let p0 = ComplexSequence::from_vec(e);
        let p1 = unitary_dft(&p0);
        let p2 = unitary_dft(&p1);
        let p3 = unitary_dft(&p2);
        for k in 0..n {
            data.push(
                coeff[0] * p0.samples()[k]
                    + coeff[1] * p1.samples()[k]
                    + coeff[2] * p2.samples()[k]
                    + coeff[3] * p3.samples()[k],
            );
        }
    }
    // Columns are the projected basis sequences (column-major layout).
    let projector = DMatrix::from_vec(n, n, data);
    Ok(projector.rank(1e-8))
}

/// Dimensions of all four eigenspaces in [`Eigenvalue::ALL`] order.
pub fn eigenspace_dimensions(n: usize) -> Result<[(Eigenvalue, usize); 4]> {
    let mut out = [(Eigenvalue::PlusOne, 0usize); 4];
    for (slot, lam) in out.iter_mut().zip(Eigenvalue::ALL) {
        *slot = (lam, eigenspace_dimension(n, lam)?);
    }
    Ok(out)
}
