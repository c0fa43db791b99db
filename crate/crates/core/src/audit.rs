//! Separability-consistency sweep over random unit-modulus entanglers.
//!
//! For each sampled phase vector the produced state is classified and the
//! verdict "some class aggregate is nonzero" is compared with the purity
//! oracle. The sweep also re-checks the known case where every W^3 term
//! vanishes on the entangled `|GHZ_3⟩`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::concurrence::{class_terms, ClassTag, ClassifyConfig};
use crate::entangler::{verify_entangler, EntanglerReport};
use crate::error::{Error, Result};
use crate::qstate::{canonical_state, is_fully_separable, CanonicalKind};

/// How entangler phases are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseSampling {
    /// Uniform on `[0, 2π)`.
    #[default]
    Continuous,
    /// `α_x = ±1` with equal probability.
    Binary,
}

pub fn random_alphas<R: Rng + ?Sized>(rng: &mut R, m: usize, sampling: PhaseSampling) -> Vec<Complex64> {
    (0..1usize << m)
        .map(|_| {
            let phi = match sampling {
                PhaseSampling::Continuous => rng.random_range(0.0..TAU),
                PhaseSampling::Binary => {
                    if rng.random_bool(0.5) {
                        PI
                    } else {
                        0.0
                    }
                }
            };
            Complex64::from_polar(1.0, phi)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disagreement {
    pub sample: usize,
    pub any_nonzero: bool,
    pub oracle_separable: bool,
}

/// The GHZ_3 / W^3 check.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzWDiscrepancy {
    pub max_w_term: f64,
    pub oracle_separable: bool,
    /// True when every W^3 term is below 1e-12 while the oracle reports entanglement.
    pub reproduced: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub m: usize,
    pub samples: usize,
    pub seed: u64,
    pub sampling: PhaseSampling,
    pub entangled: usize,
    /// Samples where "some class nonzero" matches "oracle says entangled".
    pub any_class_agreement: usize,
    /// Samples where "W^m nonzero" matches "oracle says entangled".
    pub w_class_agreement: usize,
    pub unitary_failures: usize,
    pub disagreements: Vec<Disagreement>,
    pub ghz3_w3: GhzWDiscrepancy,
}

impl AuditReport {
    pub fn any_class_rate(&self) -> f64 {
        self.any_class_agreement as f64 / self.samples as f64
    }

    pub fn w_class_rate(&self) -> f64 {
        self.w_class_agreement as f64 / self.samples as f64
    }
}

pub const GHZ_W_TERM_TOL: f64 = 1e-12;

pub fn ghz3_w3_discrepancy(tol: f64) -> Result<GhzWDiscrepancy> {
    let ghz3 = canonical_state(&CanonicalKind::Ghz, 3)?;
    let terms = class_terms(&ghz3, ClassTag::W(3), Default::default())?;
    let max_w_term = terms.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let oracle_separable = is_fully_separable(&ghz3, tol);
    Ok(GhzWDiscrepancy {
        max_w_term,
        oracle_separable,
        reproduced: max_w_term < GHZ_W_TERM_TOL && !oracle_separable,
    })
}

pub fn run_audit(
    m: usize,
    samples: usize,
    seed: u64,
    sampling: PhaseSampling,
    config: &ClassifyConfig,
) -> Result<AuditReport> {
    if m < 2 {
        return Err(Error::Domain(format!("audit needs at least 2 qubits, got {m}")));
    }
    if samples == 0 {
        return Err(Error::Domain("audit needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AuditReport {
        m,
        samples,
        seed,
        sampling,
        entangled: 0,
        any_class_agreement: 0,
        w_class_agreement: 0,
        unitary_failures: 0,
        disagreements: Vec::new(),
        ghz3_w3: ghz3_w3_discrepancy(config.tol)?,
    };
    for sample in 0..samples {
        let alphas = random_alphas(&mut rng, m, sampling);
        let EntanglerReport { entangler, classification, .. } = verify_entangler(m, &alphas, None, config)?;
        let entangled = !classification.oracle_separable;
        let any_nonzero = classification.any_nonzero();
        let w_nonzero = classification.class(ClassTag::W(m)).is_some_and(|c| c.nonzero);
        report.entangled += usize::from(entangled);
        report.unitary_failures += usize::from(!entangler.unitary);
        report.w_class_agreement += usize::from(w_nonzero == entangled);
        if any_nonzero == entangled {
            report.any_class_agreement += 1;
        } else {
            report.disagreements.push(Disagreement {
                sample,
                any_nonzero,
                oracle_separable: classification.oracle_separable,
            });
        }
    }
    Ok(report)
}
