//! Block-diagonal quantum gate entanglers `Z_{2^m×2^m}` acting on the
//! uniform superposition `H^{⊗m}|0⟩^{⊗m}`, plus the controlled-phase gate.

use num_complex::Complex64;

use crate::concurrence::{classify, ClassTag, ClassifyConfig, ConcurrenceReport};
use crate::error::{Error, Result};
use crate::qstate::{make_state, MultiQubitState, DEFAULT_TOL, MAX_QUBITS};
use crate::tensor::{is_unitary, kron, ComplexMatrix, ComplexVector, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// `U_x = diag(α_{2x}, α_{2x+1})`.
    #[default]
    DiagonalBlocks,
    /// `U_x = [[0, α_{2x}], [α_{2x+1}, 0]]`, followed by the swap `S_x`.
    AntiDiagonalBlocks,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglerMatrix {
    pub m: usize,
    pub branch: Branch,
    pub alphas: Vec<Complex64>,
    pub matrix: ComplexMatrix,
    /// `is_unitary` at 1e-10. False means the matrix is not a gate.
    pub unitary: bool,
}

fn swap() -> ComplexMatrix {
    ComplexMatrix::pauli_x()
}

/// The 2x2 block `x` of the entangler after the branch's swap (if any).
fn block(branch: Branch, a: Complex64, b: Complex64) -> Result<ComplexMatrix> {
    match branch {
        Branch::DiagonalBlocks => Ok(ComplexMatrix::diagonal(&[a, b])),
        Branch::AntiDiagonalBlocks => {
            let u = ComplexMatrix::new(2, 2, vec![ZERO, a, b, ZERO])?;
            u.matmul(&swap())
        }
    }
}

/// Indices whose amplitude is not unit modulus within `tol`.
pub fn non_unit_indices(alphas: &[Complex64], tol: f64) -> Vec<usize> {
    alphas
        .iter()
        .enumerate()
        .filter(|(_, a)| (a.norm() - 1.0).abs() > tol)
        .map(|(i, _)| i)
        .collect()
}

fn check_alphas(m: usize, alphas: &[Complex64]) -> Result<()> {
    if m == 0 || m > MAX_QUBITS {
        return Err(Error::Domain(format!("qubit count {m} outside 1..={MAX_QUBITS}")));
    }
    if alphas.len() != 1 << m {
        return Err(Error::Shape(format!("{} amplitudes for {m} qubits (expected {})", alphas.len(), 1 << m)));
    }
    if let Some(i) = alphas.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

/// The factor `Z^x`: identity except for block `x`.
pub fn block_factor(m: usize, alphas: &[Complex64], branch: Branch, x: usize) -> Result<ComplexMatrix> {
    check_alphas(m, alphas)?;
    if x >= 1 << (m - 1) {
        return Err(Error::Domain(format!("block index {x} out of range for {m} qubits")));
    }
    let b = block(branch, alphas[2 * x], alphas[2 * x + 1])?;
    let mut out = ComplexMatrix::identity(1 << m);
    for r in 0..2 {
        for c in 0..2 {
            out[(2 * x + r, 2 * x + c)] = b[(r, c)];
        }
    }
    Ok(out)
}

/// Assembles `Z = Z^0 Z^1 ⋯ Z^{2^{m-1}-1}` as the direct sum of its blocks.
/// With `strict`, every `|α_x|` must be 1 within 1e-10.
pub fn build_entangler(m: usize, alphas: &[Complex64], branch: Branch, strict: bool) -> Result<EntanglerMatrix> {
    check_alphas(m, alphas)?;
    if strict {
        let bad = non_unit_indices(alphas, DEFAULT_TOL);
        if !bad.is_empty() {
            return Err(Error::NonUnitaryAmplitude { indices: bad });
        }
    }
    let dim = 1 << m;
    let mut matrix = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim / 2 {
        let b = block(branch, alphas[2 * x], alphas[2 * x + 1])?;
        for r in 0..2 {
            for c in 0..2 {
                matrix[(2 * x + r, 2 * x + c)] = b[(r, c)];
            }
        }
    }
    let unitary = is_unitary(&matrix, DEFAULT_TOL)?;
    Ok(EntanglerMatrix { m, branch, alphas: alphas.to_vec(), matrix, unitary })
}

/// `H^{⊗m}|0⟩^{⊗m}`: every amplitude equals `2^{-m/2}`.
pub fn hadamard_input(m: usize) -> Result<MultiQubitState> {
    if m == 0 || m > MAX_QUBITS {
        return Err(Error::Domain(format!("qubit count {m} outside 1..={MAX_QUBITS}")));
    }
    let dim = 1usize << m;
    let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
    make_state(m, ComplexVector::new(vec![amp; dim])?, false)
}

/// `Z H^{⊗m}|0⟩^{⊗m}`, renormalized only when some `|α_x| ≠ 1`.
pub fn apply_entangler(z: &EntanglerMatrix) -> Result<MultiQubitState> {
    let input = hadamard_input(z.m)?;
    let out = z.matrix.matvec(input.amplitudes())?;
    let unit = non_unit_indices(&z.alphas, DEFAULT_TOL).is_empty();
    make_state(z.m, out, !unit)
}

/// Controlled phase gate `½(I⊗I + I⊗Z + Z⊗I − Z⊗Z)`.
pub fn cz_gate() -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    let z = ComplexMatrix::pauli_z();
    let terms = [
        kron(&id, &id).expect("4x4"),
        kron(&id, &z).expect("4x4"),
        kron(&z, &id).expect("4x4"),
        kron(&z, &z).expect("4x4").scale(-ONE),
    ];
    let sum = terms[1..].iter().fold(terms[0].clone(), |acc, t| acc.add(t).expect("4x4"));
    sum.scale(Complex64::new(0.5, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglerReport {
    pub entangler: EntanglerMatrix,
    pub state: MultiQubitState,
    pub classification: ConcurrenceReport,
    pub target: Option<ClassTag>,
    /// Whether the target class aggregate is nonzero at the configured tolerance.
    pub condition_holds: Option<bool>,
}

/// Strict build on the diagonal branch, application to `H^{⊗m}|0⟩`, and classification.
pub fn verify_entangler(
    m: usize,
    alphas: &[Complex64],
    target: Option<ClassTag>,
    config: &ClassifyConfig,
) -> Result<EntanglerReport> {
    let z = build_entangler(m, alphas, Branch::DiagonalBlocks, true)?;
    verify_built(z, target, config)
}

pub fn verify_built(z: EntanglerMatrix, target: Option<ClassTag>, config: &ClassifyConfig) -> Result<EntanglerReport> {
    if let Some(tag) = target {
        tag.validate()?;
        if tag.num_qubits() != z.m {
            return Err(Error::Shape(format!("{tag} targeted by a {}-qubit entangler", z.m)));
        }
    }
    let state = apply_entangler(&z)?;
    let classification = classify(&state, config)?;
    let condition_holds = target.and_then(|t| classification.class(t)).map(|c| c.nonzero);
    Ok(EntanglerReport { entangler: z, state, classification, target, condition_holds })
}
