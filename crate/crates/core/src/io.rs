//! File schemas and report rendering.
//!
//! State files: `{"m": 2, "amplitudes": [[re, im], ...]}`.
//! Entangler files: `{"m": 2, "alphas": [[re, im], ...], "branch": "diag" | "antidiag"}`.
//! Floats in emitted JSON are rounded to 12 significant digits so output is
//! byte-stable across platforms.

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::audit::{AuditReport, PhaseSampling};
use crate::concurrence::{ConcurrenceReport, GhzM1Enumeration, NormalizationPolicy};
use crate::entangler::{Branch, EntanglerReport};
use crate::error::Error;
use crate::qstate::{make_state, MultiQubitState};
use crate::tensor::ComplexVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub m: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BranchName {
    #[default]
    #[serde(rename = "diag")]
    Diag,
    #[serde(rename = "antidiag")]
    AntiDiag,
}

impl From<BranchName> for Branch {
    fn from(b: BranchName) -> Self {
        match b {
            BranchName::Diag => Branch::DiagonalBlocks,
            BranchName::AntiDiag => Branch::AntiDiagonalBlocks,
        }
    }
}

impl From<Branch> for BranchName {
    fn from(b: Branch) -> Self {
        match b {
            Branch::DiagonalBlocks => BranchName::Diag,
            Branch::AntiDiagonalBlocks => BranchName::AntiDiag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntanglerFile {
    pub m: usize,
    pub alphas: Vec<[f64; 2]>,
    #[serde(default)]
    pub branch: BranchName,
}

/// Errors from reading input files, split the way the CLI reports them.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

fn to_complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn check_length(m: usize, len: usize, what: &str) -> std::result::Result<(), InputError> {
    let expected = u32::try_from(m).ok().and_then(|m| 1usize.checked_shl(m));
    match expected {
        Some(n) if m > 0 && n == len => Ok(()),
        _ if !len.is_power_of_two() => {
            Err(InputError::Parse(format!("{what} has {len} entries, which is not a power of two")))
        }
        _ => Err(InputError::Parse(format!("{what} has {len} entries but m = {m}"))),
    }
}

/// Parses a state file and normalizes the amplitudes.
pub fn parse_state(text: &str) -> std::result::Result<MultiQubitState, InputError> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| InputError::Parse(e.to_string()))?;
    check_length(file.m, file.amplitudes.len(), "amplitudes")?;
    let v = ComplexVector::new(to_complex(&file.amplitudes))?;
    Ok(make_state(file.m, v, true)?)
}

pub fn parse_entangler(text: &str) -> std::result::Result<(usize, Vec<Complex64>, Branch), InputError> {
    let file: EntanglerFile = serde_json::from_str(text).map_err(|e| InputError::Parse(e.to_string()))?;
    check_length(file.m, file.alphas.len(), "alphas")?;
    Ok((file.m, to_complex(&file.alphas), file.branch.into()))
}

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x.abs();
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// f64 that serializes rounded to 12 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(round_sig12(self.0))
    }
}

fn complex_pairs(v: &[Complex64]) -> Vec<[Num; 2]> {
    v.iter().map(|z| [Num(z.re), Num(z.im)]).collect()
}

#[derive(Serialize)]
struct StateJson {
    m: usize,
    amplitudes: Vec<[Num; 2]>,
}

impl From<&MultiQubitState> for StateJson {
    fn from(s: &MultiQubitState) -> Self {
        Self { m: s.num_qubits(), amplitudes: complex_pairs(s.amplitudes().entries()) }
    }
}

#[derive(Serialize)]
struct TermJson {
    idx: Vec<usize>,
    label: String,
    value: Num,
}

#[derive(Serialize)]
struct ClassJson {
    tag: String,
    terms: Vec<TermJson>,
    aggregate: Num,
    nonzero: bool,
}

#[derive(Serialize)]
struct ReportJson {
    state: StateJson,
    tolerance: Num,
    normalization: &'static str,
    ghz_m1_enumeration: &'static str,
    classes: Vec<ClassJson>,
    oracle_separable: bool,
    consistent: bool,
    notes: Vec<String>,
}

pub fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::DiagonalBlocks => "diag",
        Branch::AntiDiagonalBlocks => "antidiag",
    }
}

pub fn policy_name(p: NormalizationPolicy) -> &'static str {
    match p {
        NormalizationPolicy::Raw => "raw",
        NormalizationPolicy::CanonicalUnit => "canonical",
    }
}

pub fn enumeration_name(e: GhzM1Enumeration) -> &'static str {
    match e {
        GhzM1Enumeration::Compact => "compact",
        GhzM1Enumeration::Full => "full",
    }
}

impl From<&ConcurrenceReport> for ReportJson {
    fn from(r: &ConcurrenceReport) -> Self {
        Self {
            state: (&r.state).into(),
            tolerance: Num(r.tolerance),
            normalization: policy_name(r.policy),
            ghz_m1_enumeration: enumeration_name(r.ghz_m1),
            classes: r
                .classes
                .iter()
                .map(|c| ClassJson {
                    tag: c.tag.to_string(),
                    terms: c
                        .terms
                        .iter()
                        .map(|t| TermJson { idx: t.indices.clone(), label: t.label.clone(), value: Num(t.value) })
                        .collect(),
                    aggregate: Num(c.aggregate),
                    nonzero: c.nonzero,
                })
                .collect(),
            oracle_separable: r.oracle_separable,
            consistent: r.consistent,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Serialize)]
struct EntanglerSummaryJson {
    m: usize,
    dimension: usize,
    branch: BranchName,
    alphas: Vec<[Num; 2]>,
    unitary: bool,
    /// Debug text rendering of the matrix.
    matrix: String,
}

#[derive(Serialize)]
struct EntanglerReportJson {
    entangler: EntanglerSummaryJson,
    target: Option<String>,
    condition_holds: Option<bool>,
    classification: ReportJson,
}

#[derive(Serialize)]
struct DisagreementJson {
    sample: usize,
    any_nonzero: bool,
    oracle_separable: bool,
}

#[derive(Serialize)]
struct DiscrepancyJson {
    max_w_term: Num,
    oracle_separable: bool,
    reproduced: bool,
}

#[derive(Serialize)]
struct AuditJson {
    m: usize,
    samples: usize,
    seed: u64,
    sampling: &'static str,
    entangled: usize,
    any_class_agreement: usize,
    any_class_rate: Num,
    w_class_agreement: usize,
    w_class_rate: Num,
    unitary_failures: usize,
    disagreements: Vec<DisagreementJson>,
    ghz3_w3_discrepancy: DiscrepancyJson,
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

pub fn report_to_json(r: &ConcurrenceReport) -> String {
    to_pretty(&ReportJson::from(r))
}

pub fn entangler_report_to_json(r: &EntanglerReport) -> String {
    let z = &r.entangler;
    to_pretty(&EntanglerReportJson {
        entangler: EntanglerSummaryJson {
            m: z.m,
            dimension: z.matrix.rows(),
            branch: z.branch.into(),
            alphas: complex_pairs(&z.alphas),
            unitary: z.unitary,
            matrix: z.matrix.to_string(),
        },
        target: r.target.map(|t| t.to_string()),
        condition_holds: r.condition_holds,
        classification: (&r.classification).into(),
    })
}

pub fn sampling_name(s: PhaseSampling) -> &'static str {
    match s {
        PhaseSampling::Continuous => "continuous",
        PhaseSampling::Binary => "binary",
    }
}

pub fn audit_to_json(r: &AuditReport) -> String {
    to_pretty(&AuditJson {
        m: r.m,
        samples: r.samples,
        seed: r.seed,
        sampling: sampling_name(r.sampling),
        entangled: r.entangled,
        any_class_agreement: r.any_class_agreement,
        any_class_rate: Num(r.any_class_rate()),
        w_class_agreement: r.w_class_agreement,
        w_class_rate: Num(r.w_class_rate()),
        unitary_failures: r.unitary_failures,
        disagreements: r
            .disagreements
            .iter()
            .map(|d| DisagreementJson {
                sample: d.sample,
                any_nonzero: d.any_nonzero,
                oracle_separable: d.oracle_separable,
            })
            .collect(),
        ghz3_w3_discrepancy: DiscrepancyJson {
            max_w_term: Num(r.ghz3_w3.max_w_term),
            oracle_separable: r.ghz3_w3.oracle_separable,
            reproduced: r.ghz3_w3.reproduced,
        },
    })
}

/// Same numbers as the JSON, laid out as a table.
pub fn report_to_text(r: &ConcurrenceReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "state: m = {}, tolerance = {:e}, normalization = {}, ghz_m1 = {}\n",
        r.state.num_qubits(),
        r.tolerance,
        policy_name(r.policy),
        enumeration_name(r.ghz_m1)
    ));
    out.push_str(&format!("{:<8} {:<10} {:>20}\n", "class", "operator", "term"));
    for c in &r.classes {
        for t in &c.terms {
            out.push_str(&format!("{:<8} {:<10} {:>20}\n", c.tag.to_string(), t.label, round_sig12(t.value)));
        }
        out.push_str(&format!(
            "{:<8} {:<10} {:>20}  {}\n",
            c.tag.to_string(),
            "aggregate",
            round_sig12(c.aggregate),
            if c.nonzero { "nonzero" } else { "zero" }
        ));
    }
    out.push_str(&format!(
        "oracle: {}\nconsistent: {}\n",
        if r.oracle_separable { "separable" } else { "entangled" },
        r.consistent
    ));
    for n in &r.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

pub fn entangler_report_to_text(r: &EntanglerReport) -> String {
    let z = &r.entangler;
    let mut out = format!(
        "entangler: m = {}, dimension = {}, branch = {}, unitary = {}\n",
        z.m,
        z.matrix.rows(),
        branch_name(z.branch),
        z.unitary
    );
    if !z.unitary {
        out.push_str("note: matrix is not unitary (not a gate); state was renormalized\n");
    }
    out.push_str("state amplitudes:\n");
    for (x, a) in r.state.amplitudes().entries().iter().enumerate() {
        out.push_str(&format!("  {x:>4}  {:>20} {:>20}\n", round_sig12(a.re), round_sig12(a.im)));
    }
    out.push_str(&report_to_text(&r.classification));
    out
}

pub fn audit_to_text(r: &AuditReport) -> String {
    format!(
        "audit: m = {}, samples = {}, seed = {}, sampling = {}\n\
         entangled samples: {}\n\
         any-class vs oracle agreement: {}/{} ({})\n\
         W-class vs oracle agreement: {}/{} ({})\n\
         non-unitary entanglers: {}\n\
         GHZ3/W3 discrepancy: max W3 term = {}, oracle separable = {}, reproduced = {}\n",
        r.m,
        r.samples,
        r.seed,
        sampling_name(r.sampling),
        r.entangled,
        r.any_class_agreement,
        r.samples,
        round_sig12(r.any_class_rate()),
        r.w_class_agreement,
        r.samples,
        round_sig12(r.w_class_rate()),
        r.unitary_failures,
        round_sig12(r.ghz3_w3.max_w_term),
        r.ghz3_w3.oracle_separable,
        r.ghz3_w3.reproduced,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concurrence::{classify, ClassifyConfig};

    #[test]
    fn rounding() {
        assert_eq!(round_sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig12(-0.0), 0.0);
        assert_eq!(round_sig12(0.0625), 0.0625);
        assert_eq!(round_sig12(123456789.123456789), 123456789.123);
        assert_eq!(serde_json::to_string(&Num(2f64.sqrt())).unwrap(), "1.41421356237");
    }

    #[test]
    fn parse_state_schema() {
        let s = parse_state(r#"{"m": 1, "amplitudes": [[3, 0], [0, 4]]}"#).unwrap();
        assert!((s.amplitude(1).im - 0.8).abs() < 1e-15);

        let err = parse_state(r#"{"m": 2, "amplitudes": [[1,0],[0,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(err, InputError::Parse(ref msg) if msg.contains("power of two")));
        let err = parse_state(r#"{"m": 3, "amplitudes": [[1,0],[0,0],[0,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(err, InputError::Parse(_)));
        assert!(matches!(parse_state("{"), Err(InputError::Parse(_))));
        assert!(matches!(parse_state(r#"{"m": 1, "amps": []}"#), Err(InputError::Parse(_))));
        let err = parse_state(r#"{"m": 1, "amplitudes": [[0,0],[0,0]]}"#).unwrap_err();
        assert!(matches!(err, InputError::Invalid(Error::Degenerate(_))));
    }

    #[test]
    fn parse_entangler_schema() {
        let (m, alphas, branch) = parse_entangler(r#"{"m": 1, "alphas": [[1,0],[-1,0]]}"#).unwrap();
        assert_eq!((m, alphas.len(), branch), (1, 2, Branch::DiagonalBlocks));
        let (_, _, branch) =
            parse_entangler(r#"{"m": 1, "alphas": [[1,0],[-1,0]], "branch": "antidiag"}"#).unwrap();
        assert_eq!(branch, Branch::AntiDiagonalBlocks);
        assert!(parse_entangler(r#"{"m": 1, "alphas": [[1,0],[-1,0]], "branch": "x"}"#).is_err());
    }

    #[test]
    fn report_json_shape() {
        let s = parse_state(r#"{"m": 2, "amplitudes": [[1,0],[0,0],[0,0],[1,0]]}"#).unwrap();
        let report = classify(&s, &ClassifyConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report_to_json(&report)).unwrap();
        assert_eq!(v["classes"][0]["tag"], "W2");
        assert_eq!(v["classes"][0]["terms"][0]["idx"], serde_json::json!([1, 2]));
        assert_eq!(v["classes"][0]["aggregate"], 1.0);
        assert_eq!(v["oracle_separable"], false);
        assert_eq!(v["consistent"], true);
        assert_eq!(v["state"]["m"], 2);
        assert!(report_to_text(&report).contains("entangled"));
    }
}
