//! W^m, GHZ^m and GHZ^{m-1} operator families, their pair terms
//! `|⟨Ψ|Δ̃ C_m Ψ⟩|²`, aggregated class concurrences, and state classification.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::povm::{tensor_operator, PhaseOperator, QubitSetting};
use crate::qstate::{
    canonical_state, conjugate_state, inner, is_fully_separable, make_state, CanonicalKind,
    MultiQubitState, DEFAULT_TOL,
};
use crate::tensor::ComplexVector;

/// Operator family together with the qubit count it acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassTag {
    W(usize),
    /// GHZ^m: `σ_y` on a pair, `σ_x` on every other qubit.
    GhzM(usize),
    /// GHZ^{m-1}: one qubit left as identity, GHZ-type operator on the rest.
    GhzM1(usize),
}

impl ClassTag {
    pub fn num_qubits(self) -> usize {
        match self {
            ClassTag::W(m) | ClassTag::GhzM(m) | ClassTag::GhzM1(m) => m,
        }
    }

    pub fn validate(self) -> Result<()> {
        let (m, min) = match self {
            ClassTag::W(m) | ClassTag::GhzM(m) => (m, 2),
            ClassTag::GhzM1(m) => (m, 3),
        };
        if m < min {
            return Err(Error::Domain(format!("{self} needs at least {min} qubits")));
        }
        Ok(())
    }

    /// Every class defined for an `m`-qubit state, in the order W^m, GHZ^{m-1}, GHZ^m.
    pub fn all_for(m: usize) -> Vec<ClassTag> {
        let mut tags = Vec::new();
        if m >= 2 {
            tags.push(ClassTag::W(m));
        }
        if m >= 3 {
            tags.push(ClassTag::GhzM1(m));
        }
        if m >= 2 {
            tags.push(ClassTag::GhzM(m));
        }
        tags
    }
}

/// `W4`, `GHZ4`, and `GHZ3` for the GHZ^{m-1} family at m = 4.
impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClassTag::W(m) => write!(f, "W{m}"),
            ClassTag::GhzM(m) => write!(f, "GHZ{m}"),
            ClassTag::GhzM1(m) => write!(f, "GHZ{}", m.saturating_sub(1)),
        }
    }
}

/// Which GHZ^{m-1} operators to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GhzM1Enumeration {
    /// One operator per excluded qubit, `σ_y` on the two smallest remaining indices.
    #[default]
    Compact,
    /// Every `σ_y` pair inside every (m-1)-subset.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationPolicy {
    /// `N = 1`.
    Raw,
    /// `N` chosen so the canonical state of the class has concurrence 1.
    #[default]
    CanonicalUnit,
}

impl NormalizationPolicy {
    pub fn constant(self, tag: ClassTag, enumeration: GhzM1Enumeration) -> f64 {
        match self {
            NormalizationPolicy::Raw => 1.0,
            NormalizationPolicy::CanonicalUnit => {
                let m = tag.num_qubits() as f64;
                match (tag, enumeration) {
                    (ClassTag::W(_), _) => m / (2.0 * (m - 1.0)),
                    (ClassTag::GhzM(_), _) => 2.0 / (m * (m - 1.0)),
                    (ClassTag::GhzM1(_), GhzM1Enumeration::Compact) => 1.0,
                    (ClassTag::GhzM1(_), GhzM1Enumeration::Full) => 2.0 / ((m - 1.0) * (m - 2.0)),
                }
            }
        }
    }
}

/// State on which a class's canonical normalization evaluates to 1:
/// `|W_m⟩`, `|GHZ_m⟩`, or `|GHZ_{m-1}⟩ ⊗ |0⟩` for GHZ^{m-1}.
pub fn canonical_class_state(tag: ClassTag) -> Result<MultiQubitState> {
    tag.validate()?;
    match tag {
        ClassTag::W(m) => canonical_state(&CanonicalKind::W, m),
        ClassTag::GhzM(m) => canonical_state(&CanonicalKind::Ghz, m),
        ClassTag::GhzM1(m) => {
            let ghz = canonical_state(&CanonicalKind::Ghz, m - 1)?;
            let zero = ComplexVector::from_real(&[1.0, 0.0])?;
            make_state(m, ghz.amplitudes().kron(&zero), true)
        }
    }
}

/// A family member with its class tag and subscript.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassOperator {
    pub tag: ClassTag,
    /// `σ_y` positions first, then `σ_x` positions (GHZ^{m-1} only).
    pub indices: Vec<usize>,
    /// Subscript as written for four qubits, e.g. `1,2` or `12,3`.
    pub label: String,
    pub operator: PhaseOperator,
}

fn settings_with(m: usize, fill: QubitSetting, half_pi: [usize; 2]) -> Vec<QubitSetting> {
    let mut s = vec![fill; m];
    for q in half_pi {
        s[q - 1] = QubitSetting::HalfPi;
    }
    s
}

fn pairs(qubits: &[usize]) -> impl Iterator<Item = [usize; 2]> + '_ {
    qubits
        .iter()
        .enumerate()
        .flat_map(move |(i, &a)| qubits[i + 1..].iter().map(move |&b| [a, b]))
}

fn pair_family(tag: ClassTag, fill: QubitSetting) -> Result<Vec<ClassOperator>> {
    tag.validate()?;
    let m = tag.num_qubits();
    let qubits: Vec<usize> = (1..=m).collect();
    pairs(&qubits)
        .map(|[r1, r2]| {
            Ok(ClassOperator {
                tag,
                indices: vec![r1, r2],
                label: format!("{r1},{r2}"),
                operator: tensor_operator(&settings_with(m, fill, [r1, r2]))?,
            })
        })
        .collect()
}

/// One operator per pair `r1 < r2`: `σ_y` on the pair, identity elsewhere.
pub fn enumerate_w_ops(m: usize) -> Result<Vec<ClassOperator>> {
    pair_family(ClassTag::W(m), QubitSetting::Identity)
}

/// One operator per pair `r1 < r2`: `σ_y` on the pair, `σ_x` elsewhere.
pub fn enumerate_ghz_m_ops(m: usize) -> Result<Vec<ClassOperator>> {
    pair_family(ClassTag::GhzM(m), QubitSetting::Pi)
}

pub fn enumerate_ghz_m1_ops(m: usize) -> Result<Vec<ClassOperator>> {
    enumerate_ghz_m1_ops_with(m, GhzM1Enumeration::Compact)
}

pub fn enumerate_ghz_m1_ops_with(m: usize, enumeration: GhzM1Enumeration) -> Result<Vec<ClassOperator>> {
    let tag = ClassTag::GhzM1(m);
    tag.validate()?;
    let mut ops = Vec::new();
    // excluding m first yields the subsets in lexicographic order
    for excluded in (1..=m).rev() {
        let subset: Vec<usize> = (1..=m).filter(|&q| q != excluded).collect();
        let chosen: Vec<[usize; 2]> = match enumeration {
            GhzM1Enumeration::Compact => vec![[subset[0], subset[1]]],
            GhzM1Enumeration::Full => pairs(&subset).collect(),
        };
        for [r1, r2] in chosen {
            let rest: Vec<usize> = subset.iter().copied().filter(|&q| q != r1 && q != r2).collect();
            let mut settings = vec![QubitSetting::Identity; m];
            for &q in &subset {
                settings[q - 1] = QubitSetting::Pi;
            }
            settings[r1 - 1] = QubitSetting::HalfPi;
            settings[r2 - 1] = QubitSetting::HalfPi;
            let rest_label: String = rest.iter().map(usize::to_string).collect();
            ops.push(ClassOperator {
                tag,
                indices: [vec![r1, r2], rest].concat(),
                label: format!("{r1}{r2},{rest_label}"),
                operator: tensor_operator(&settings)?,
            });
        }
    }
    Ok(ops)
}

pub fn class_operators(tag: ClassTag, enumeration: GhzM1Enumeration) -> Result<Vec<ClassOperator>> {
    match tag {
        ClassTag::W(m) => enumerate_w_ops(m),
        ClassTag::GhzM(m) => enumerate_ghz_m_ops(m),
        ClassTag::GhzM1(m) => enumerate_ghz_m1_ops_with(m, enumeration),
    }
}

/// `|⟨Ψ| O C_m Ψ⟩|²`. Each qubit has a single phase pair, so no sum over `(k, l)` remains.
pub fn pair_term(s: &MultiQubitState, op: &PhaseOperator) -> Result<f64> {
    if op.matrix().cols() != s.dim() {
        return Err(Error::Shape(format!(
            "{}-qubit operator applied to a {}-qubit state",
            op.num_qubits(),
            s.num_qubits()
        )));
    }
    let flipped = op.matrix().matvec(conjugate_state(s).amplitudes())?;
    Ok(inner(s, &flipped)?.norm_sqr())
}

fn check_tag(s: &MultiQubitState, tag: ClassTag) -> Result<()> {
    tag.validate()?;
    if tag.num_qubits() != s.num_qubits() {
        return Err(Error::Shape(format!("{tag} applied to a {}-qubit state", s.num_qubits())));
    }
    Ok(())
}

/// Pair terms for every operator of the class, in enumeration order.
pub fn class_terms(
    s: &MultiQubitState,
    tag: ClassTag,
    enumeration: GhzM1Enumeration,
) -> Result<Vec<(ClassOperator, f64)>> {
    check_tag(s, tag)?;
    class_operators(tag, enumeration)?
        .into_par_iter()
        .map(|op| {
            let value = pair_term(s, &op.operator)?;
            Ok((op, value))
        })
        .collect()
}

fn aggregate(constant: f64, terms: impl Iterator<Item = f64>) -> f64 {
    // sequential sum so the result does not depend on thread scheduling
    let total: f64 = terms.fold(0.0, |acc, t| acc + t);
    (constant * total).sqrt()
}

pub fn class_concurrence(s: &MultiQubitState, tag: ClassTag, policy: NormalizationPolicy) -> Result<f64> {
    class_concurrence_with(s, tag, policy, GhzM1Enumeration::Compact)
}

pub fn class_concurrence_with(
    s: &MultiQubitState,
    tag: ClassTag,
    policy: NormalizationPolicy,
    enumeration: GhzM1Enumeration,
) -> Result<f64> {
    let terms = class_terms(s, tag, enumeration)?;
    Ok(aggregate(policy.constant(tag, enumeration), terms.iter().map(|(_, v)| *v)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    /// Threshold for the "≠ 0" conditions.
    pub tol: f64,
    pub policy: NormalizationPolicy,
    pub ghz_m1: GhzM1Enumeration,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, policy: NormalizationPolicy::default(), ghz_m1: GhzM1Enumeration::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermEntry {
    pub indices: Vec<usize>,
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub tag: ClassTag,
    pub terms: Vec<TermEntry>,
    pub aggregate: f64,
    pub nonzero: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceReport {
    pub state: MultiQubitState,
    pub tolerance: f64,
    pub policy: NormalizationPolicy,
    pub ghz_m1: GhzM1Enumeration,
    pub classes: Vec<ClassReport>,
    /// Verdict of the single-qubit purity oracle.
    pub oracle_separable: bool,
    /// Whether "every W^m term vanishes" agrees with `oracle_separable`.
    pub consistent: bool,
    pub notes: Vec<String>,
}

impl ConcurrenceReport {
    pub fn class(&self, tag: ClassTag) -> Option<&ClassReport> {
        self.classes.iter().find(|c| c.tag == tag)
    }

    pub fn any_nonzero(&self) -> bool {
        self.classes.iter().any(|c| c.nonzero)
    }
}

pub fn classify(s: &MultiQubitState, config: &ClassifyConfig) -> Result<ConcurrenceReport> {
    if !(config.tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {}", config.tol)));
    }
    let m = s.num_qubits();
    let classes = ClassTag::all_for(m)
        .into_iter()
        .map(|tag| {
            let terms = class_terms(s, tag, config.ghz_m1)?;
            let agg = aggregate(config.policy.constant(tag, config.ghz_m1), terms.iter().map(|(_, v)| *v));
            Ok(ClassReport {
                tag,
                terms: terms
                    .into_iter()
                    .map(|(op, value)| TermEntry { indices: op.indices, label: op.label, value })
                    .collect(),
                aggregate: agg,
                nonzero: agg > config.tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let oracle_separable = is_fully_separable(s, config.tol);
    let w_vanishes = classes.iter().filter(|c| matches!(c.tag, ClassTag::W(_))).all(|c| !c.nonzero);
    let consistent = w_vanishes == oracle_separable;

    let mut notes = Vec::new();
    if m == 2 {
        notes.push("W2 and GHZ2 operator families coincide for two qubits".to_string());
    }
    if !consistent {
        notes.push(if w_vanishes {
            format!("all W{m} terms vanish on a state the purity oracle reports as entangled")
        } else {
            format!("W{m} terms are nonzero on a state the purity oracle reports as separable")
        });
    }

    Ok(ConcurrenceReport {
        state: s.clone(),
        tolerance: config.tol,
        policy: config.policy,
        ghz_m1: config.ghz_m1,
        classes,
        oracle_separable,
        consistent,
        notes,
    })
}
