use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::linalg::FpMatrix;
use crate::presheaf::{FunctorMorphism, Presheaf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// A matrix-level claim that can be re-checked from the stored data alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// `matrix · inverse` and `inverse · matrix` are identities.
    Inverse { label: String, matrix: FpMatrix, inverse: FpMatrix },
    /// The two sides of a square agree.
    Equal { label: String, lhs: FpMatrix, rhs: FpMatrix },
    /// The two sides differ: a separating witness or a counterexample.
    Distinct { label: String, lhs: FpMatrix, rhs: FpMatrix },
    /// The matrix has no two-sided inverse.
    NotInvertible { label: String, matrix: FpMatrix },
    /// `inverse · matrix` is an identity, so the matrix is injective.
    LeftInverse { label: String, matrix: FpMatrix, inverse: FpMatrix },
}

impl Certificate {
    pub fn label(&self) -> &str {
        match self {
            Certificate::Inverse { label, .. }
            | Certificate::Equal { label, .. }
            | Certificate::Distinct { label, .. }
            | Certificate::NotInvertible { label, .. }
            | Certificate::LeftInverse { label, .. } => label,
        }
    }

    pub fn reverify(&self) -> bool {
        match self {
            Certificate::Inverse { matrix, inverse, .. } => {
                let id = |m: crate::error::Result<FpMatrix>| {
                    m.map(|m| m.is_square() && m == FpMatrix::identity(m.fp(), m.rows())).unwrap_or(false)
                };
                id(matrix.mul(inverse)) && id(inverse.mul(matrix))
            }
            Certificate::Equal { lhs, rhs, .. } => lhs == rhs,
            Certificate::Distinct { lhs, rhs, .. } => lhs != rhs,
            Certificate::NotInvertible { matrix, .. } => matrix.is_isomorphism().is_none(),
            Certificate::LeftInverse { matrix, inverse, .. } => inverse
                .mul(matrix)
                .map(|m| m == FpMatrix::identity(m.fp(), m.rows()) && m.is_square())
                .unwrap_or(false),
        }
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("certificates serialize");
        hex::encode(Sha256::digest(&bytes))
    }

    /// An inverse certificate for a natural transformation, if it is invertible.
    pub fn for_morphism(label: impl Into<String>, f: &FunctorMorphism) -> Self {
        let matrix = block_diag(f);
        match matrix.is_isomorphism() {
            Some(inverse) => Certificate::Inverse {
                label: label.into(),
                matrix,
                inverse,
            },
            None => Certificate::NotInvertible {
                label: label.into(),
                matrix,
            },
        }
    }

    pub fn for_matrix(label: impl Into<String>, matrix: FpMatrix) -> Self {
        match matrix.is_isomorphism() {
            Some(inverse) => Certificate::Inverse {
                label: label.into(),
                matrix,
                inverse,
            },
            None => Certificate::NotInvertible {
                label: label.into(),
                matrix,
            },
        }
    }

    pub fn is_inverse(&self) -> bool {
        matches!(self, Certificate::Inverse { .. })
    }
}

/// All components of a natural transformation as one block-diagonal matrix.
pub fn block_diag(f: &FunctorMorphism) -> FpMatrix {
    match f.components.first() {
        Some(m) => FpMatrix::block_diag(m.fp(), &f.components),
        None => FpMatrix::zeros(crate::linalg::Fp::new(2).expect("2 is prime"), 0, 0),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedEntry {
    pub digest: String,
    #[serde(flatten)]
    pub certificate: Certificate,
}

/// One verdict with the certificates backing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub statement: String,
    pub scope: String,
    pub verdict: Verdict,
    pub detail: String,
    pub certificates: Vec<CertifiedEntry>,
}

pub const PROBE_SCOPE: &str = "verified on probes";
pub const FILTERED_SCOPE: &str = "finite-filtered probes only";

impl CheckResult {
    pub fn new(id: impl Into<String>, statement: impl Into<String>, verdict: Verdict, detail: impl Into<String>, certificates: Vec<Certificate>) -> Self {
        Self {
            id: id.into(),
            statement: statement.into(),
            scope: PROBE_SCOPE.into(),
            verdict,
            detail: detail.into(),
            certificates: certificates
                .into_iter()
                .map(|c| CertifiedEntry {
                    digest: c.digest(),
                    certificate: c,
                })
                .collect(),
        }
    }

    pub fn with_scope(mut self, scope: &str) -> Self {
        self.scope = scope.into();
        self
    }

    /// A failure caused by an error inside the check itself.
    pub fn errored(id: impl Into<String>, statement: impl Into<String>, err: &crate::error::Error) -> Self {
        Self::new(id, statement, Verdict::Fail, format!("error: {err}"), vec![])
    }

    /// Recomputes every digest and every stored claim.
    pub fn reverify(&self) -> bool {
        self.certificates
            .iter()
            .all(|e| e.digest == e.certificate.digest() && e.certificate.reverify())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresheafRecord {
    pub label: String,
    pub values: Vec<usize>,
    pub actions: Vec<FpMatrix>,
}

impl PresheafRecord {
    pub fn new(label: impl Into<String>, p: &Presheaf) -> Self {
        let n = p.values().len();
        Self {
            label: label.into(),
            values: p.values().to_vec(),
            actions: (0..n * n).map(|i| p.action(i / n, i % n).clone()).collect(),
        }
    }
}

/// The probe objects a report was computed from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProbeInventory {
    pub seed: Option<u64>,
    pub notes: Vec<String>,
    pub presheaves: Vec<PresheafRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub title: String,
    pub checks: Vec<CheckResult>,
    pub probes: ProbeInventory,
}

impl HarnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict.is_pass())
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn reverify(&self) -> bool {
        self.checks.iter().all(CheckResult::reverify)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = format!("{}\n", self.title);
        for c in &self.checks {
            let v = if c.verdict.is_pass() { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{v}] {}: {} ({})\n", c.id, c.statement, c.scope));
            if verbose || !c.verdict.is_pass() {
                if !c.detail.is_empty() {
                    out.push_str(&format!("    {}\n", c.detail));
                }
                for e in &c.certificates {
                    out.push_str(&format!("    {} {}\n", &e.digest[..16], e.certificate.label()));
                }
            }
        }
        out
    }
}
