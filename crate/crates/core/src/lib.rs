//! Concurrence classes built from phase-POVM complements, and block-diagonal
//! quantum gate entanglers, for pure multi-qubit states.
//!
//! Modules, bottom up:
//! - [`tensor`]: dense complex matrices, Kronecker products, unitarity checks.
//! - [`qstate`]: pure states, the basis conjugation `C_m`, and a purity-based separability oracle.
//! - [`povm`]: phase POVM elements, their complements, and qubit operator settings.
//! - [`concurrence`]: W^m / GHZ^m / GHZ^{m-1} operator families and state classification.
//! - [`entangler`]: the block entangler `Z`, its action on `H^{⊗m}|0⟩`, and the CZ gate.
//! - [`audit`]: random sweeps comparing class verdicts with the oracle.
//! - [`io`] and [`cli`]: JSON schemas, report rendering, and the command-line tool.

pub mod audit;
pub mod cli;
pub mod concurrence;
pub mod entangler;
pub mod error;
pub mod io;
pub mod povm;
pub mod qstate;
pub mod tensor;

pub use concurrence::{
    class_concurrence, classify, enumerate_ghz_m1_ops, enumerate_ghz_m_ops, enumerate_w_ops, pair_term,
    ClassTag, ClassifyConfig, ConcurrenceReport, GhzM1Enumeration, NormalizationPolicy,
};
pub use entangler::{apply_entangler, build_entangler, cz_gate, hadamard_input, verify_entangler, Branch};
pub use error::{Error, Result};
pub use povm::{delta, delta_tilde, qubit_op, tensor_operator, PhaseOperator, PhaseSpec, QubitSetting};
pub use qstate::{canonical_state, make_state, CanonicalKind, MultiQubitState};
pub use tensor::{dagger, is_unitary, kron, ComplexMatrix, ComplexVector};
