//! Pure multi-qubit states, canonical constructors, the basis conjugation
//! `C_m`, and the separability oracle used to audit concurrence verdicts.
//!
//! Qubits are numbered `1..=m` and qubit 1 is the most significant bit of a
//! basis index.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tensor::{dagger, ComplexMatrix, ComplexVector, DEFAULT_MAX_DIM, ONE, ZERO};

/// Tolerance used for rank, purity and normalization decisions unless a caller overrides it.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest supported qubit count, tied to the matrix size cap.
pub const MAX_QUBITS: usize = DEFAULT_MAX_DIM.trailing_zeros() as usize;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiQubitState {
    num_qubits: usize,
    amplitudes: ComplexVector,
    normalized: bool,
}

fn check_qubits(m: usize) -> Result<usize> {
    if m == 0 || m > MAX_QUBITS {
        return Err(Error::Domain(format!("qubit count {m} outside 1..={MAX_QUBITS}")));
    }
    Ok(1 << m)
}

/// Builds an `m`-qubit state. With `normalize` the amplitudes are scaled to
/// unit norm; otherwise they are kept as given and [`MultiQubitState::is_normalized`]
/// reports whether they already were.
pub fn make_state(m: usize, amplitudes: ComplexVector, normalize: bool) -> Result<MultiQubitState> {
    let dim = check_qubits(m)?;
    if amplitudes.dim() != dim {
        return Err(Error::Shape(format!(
            "{} amplitudes for {m} qubits (expected {dim})",
            amplitudes.dim()
        )));
    }
    let norm_sqr = amplitudes.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::Degenerate("all amplitudes are zero".into()));
    }
    if normalize {
        let amplitudes = amplitudes.scale(Complex64::new(norm_sqr.sqrt().recip(), 0.0));
        return Ok(MultiQubitState { num_qubits: m, amplitudes, normalized: true });
    }
    let normalized = (norm_sqr - 1.0).abs() <= DEFAULT_TOL;
    Ok(MultiQubitState { num_qubits: m, amplitudes, normalized })
}

impl MultiQubitState {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        Self {
            amplitudes: self.amplitudes.scale(Complex64::from_polar(1.0, theta)),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CanonicalKind {
    Ghz,
    W,
    /// Computational basis state `|x⟩`.
    Basis(usize),
    /// Tensor product of the given single-qubit amplitude pairs, qubit 1 first.
    Product(Vec<[Complex64; 2]>),
}

pub fn canonical_state(kind: &CanonicalKind, m: usize) -> Result<MultiQubitState> {
    let dim = check_qubits(m)?;
    let mut amps = vec![ZERO; dim];
    match kind {
        CanonicalKind::Ghz | CanonicalKind::W if m < 2 => {
            return Err(Error::Domain(format!("GHZ and W states need at least 2 qubits, got {m}")));
        }
        CanonicalKind::Ghz => {
            amps[0] = ONE;
            amps[dim - 1] = ONE;
        }
        CanonicalKind::W => {
            for j in 0..m {
                amps[1 << j] = ONE;
            }
        }
        CanonicalKind::Basis(x) => {
            if *x >= dim {
                return Err(Error::Domain(format!("basis index {x} out of range for {m} qubits")));
            }
            amps[*x] = ONE;
        }
        CanonicalKind::Product(factors) => {
            if factors.len() != m {
                return Err(Error::Shape(format!("{} factors for {m} qubits", factors.len())));
            }
            let mut acc = ComplexVector::new(vec![ONE])?;
            for (j, f) in factors.iter().enumerate() {
                let v = ComplexVector::new(f.to_vec())?;
                if v.norm_sqr() == 0.0 {
                    return Err(Error::Degenerate(format!("factor for qubit {} is zero", j + 1)));
                }
                acc = acc.kron(&v);
            }
            return make_state(m, acc, true);
        }
    }
    make_state(m, ComplexVector::new(amps)?, true)
}

/// Component-wise complex conjugation in the computational basis (the
/// antiunitary `C_m`).
pub fn conjugate_state(s: &MultiQubitState) -> MultiQubitState {
    MultiQubitState { amplitudes: s.amplitudes.conj(), ..s.clone() }
}

/// `⟨a|b⟩`, conjugate-linear in the state.
pub fn inner(a: &MultiQubitState, b: &ComplexVector) -> Result<Complex64> {
    a.amplitudes.inner(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    /// Splits `1..=m` into `left` and its complement; both sides must be non-empty.
    pub fn new(m: usize, left: &[usize]) -> Result<Self> {
        let left = qubit_set(m, left)?;
        let right: Vec<usize> = (1..=m).filter(|q| !left.contains(q)).collect();
        if right.is_empty() {
            return Err(Error::Domain("right side of the bipartition is empty".into()));
        }
        Ok(Self { left, right })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }
}

/// Sorted, de-duplicated, non-empty subset of `1..=m`.
fn qubit_set(m: usize, qubits: &[usize]) -> Result<Vec<usize>> {
    if qubits.is_empty() {
        return Err(Error::Domain("empty qubit set".into()));
    }
    if let Some(&q) = qubits.iter().find(|&&q| q == 0 || q > m) {
        return Err(Error::Domain(format!("qubit {q} outside 1..={m}")));
    }
    Ok(qubits.iter().copied().collect::<BTreeSet<_>>().into_iter().collect())
}

/// Extracts the bits of `x` belonging to `qubits` (sorted, 1-based), packing
/// them with the first listed qubit as the most significant bit.
fn gather_bits(x: usize, m: usize, qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |acc, &q| (acc << 1) | ((x >> (m - q)) & 1))
}

/// Amplitude matrix with rows indexed by the `rows` qubits and columns by the rest.
fn reshape(s: &MultiQubitState, rows: &[usize]) -> ComplexMatrix {
    let m = s.num_qubits;
    let cols: Vec<usize> = (1..=m).filter(|q| !rows.contains(q)).collect();
    let mut out = ComplexMatrix::zeros(1 << rows.len(), 1 << cols.len());
    for (x, &a) in s.amplitudes.entries().iter().enumerate() {
        out[(gather_bits(x, m, rows), gather_bits(x, m, &cols))] = a;
    }
    out
}

/// Density matrix of the `keep` qubits after tracing out the rest.
pub fn reduced_density(s: &MultiQubitState, keep: &[usize]) -> Result<ComplexMatrix> {
    let keep = qubit_set(s.num_qubits, keep)?;
    let psi = reshape(s, &keep);
    psi.matmul(&dagger(&psi))
}

/// Number of Schmidt coefficients above `tol` across `cut`.
pub fn schmidt_rank(s: &MultiQubitState, cut: &Bipartition, tol: f64) -> Result<usize> {
    if cut.left.len() + cut.right.len() != s.num_qubits {
        return Err(Error::Domain(format!(
            "bipartition covers {} qubits, state has {}",
            cut.left.len() + cut.right.len(),
            s.num_qubits
        )));
    }
    let psi = reshape(s, &cut.left).to_nalgebra();
    Ok(psi.singular_values().iter().filter(|&&sv| sv > tol).count())
}

/// `Tr(ρ²)` of a density matrix.
pub fn purity(rho: &ComplexMatrix) -> Result<f64> {
    Ok(rho.matmul(rho)?.trace()?.re)
}

/// True iff every single-qubit marginal is pure within `tol`, which for a
/// pure state is equivalent to a full product structure.
pub fn is_fully_separable(s: &MultiQubitState, tol: f64) -> bool {
    (1..=s.num_qubits).all(|q| {
        reduced_density(s, &[q])
            .and_then(|rho| purity(&rho))
            .is_ok_and(|p| p >= 1.0 - tol)
    })
}

/// Relabels qubits: qubit `q` of `s` becomes qubit `perm[q - 1]` of the result.
pub fn permute_qubits(s: &MultiQubitState, perm: &[usize]) -> Result<MultiQubitState> {
    let m = s.num_qubits;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=m).collect::<Vec<_>>() {
        return Err(Error::Domain(format!("{perm:?} is not a permutation of 1..={m}")));
    }
    let mut amps = vec![ZERO; s.dim()];
    for (x, &a) in s.amplitudes.entries().iter().enumerate() {
        let y = (1..=m).fold(0, |acc, q| acc | (((x >> (m - q)) & 1) << (m - perm[q - 1])));
        amps[y] = a;
    }
    Ok(MultiQubitState { amplitudes: ComplexVector::new(amps)?, ..s.clone() })
}

fn gaussian_amplitude<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state on `m` qubits.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Result<MultiQubitState> {
    let dim = check_qubits(m)?;
    let amps = (0..dim).map(|_| gaussian_amplitude(rng)).collect();
    make_state(m, ComplexVector::new(amps)?, true)
}

/// Tensor product of `m` independent Haar-random single-qubit states.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Result<MultiQubitState> {
    let factors = (0..m).map(|_| [gaussian_amplitude(rng), gaussian_amplitude(rng)]).collect();
    canonical_state(&CanonicalKind::Product(factors), m)
}
