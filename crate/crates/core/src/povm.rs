//! Symmetric phase POVM matrices, their zero-diagonal complements, and the
//! qubit-level operator settings from which every concurrence operator is
//! assembled.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{kron_all, ComplexMatrix, ONE};

/// Relative phases `φ_{k,l}` (1-based, `k < l`) of an `N`-dimensional phase POVM element.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpec {
    dim: usize,
    phases: BTreeMap<(usize, usize), f64>,
}

impl PhaseSpec {
    /// Accepts a possibly incomplete phase map; completeness is checked by [`delta`].
    pub fn new(dim: usize, phases: BTreeMap<(usize, usize), f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Domain(format!("phase POVM dimension must be at least 2, got {dim}")));
        }
        for (&(k, l), &phi) in &phases {
            if k == 0 || k >= l || l > dim {
                return Err(Error::Domain(format!("invalid phase index pair ({k}, {l}) for N = {dim}")));
            }
            if !phi.is_finite() {
                return Err(Error::Domain(format!("phase for ({k}, {l}) is not finite")));
            }
        }
        Ok(Self { dim, phases })
    }

    /// Every pair `k < l` carries the same angle.
    pub fn uniform(dim: usize, phi: f64) -> Result<Self> {
        let phases = (1..=dim)
            .flat_map(|k| (k + 1..=dim).map(move |l| ((k, l), phi)))
            .collect();
        Self::new(dim, phases)
    }

    /// Single qubit with one relative phase `φ_{1,2}`.
    pub fn qubit(phi: f64) -> Result<Self> {
        Self::uniform(2, phi)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phase(&self, k: usize, l: usize) -> Option<f64> {
        self.phases.get(&(k, l)).copied()
    }
}

/// The POVM element: ones on the diagonal, `e^{iφ_{k,l}}` above and `e^{-iφ_{k,l}}` below.
pub fn delta(spec: &PhaseSpec) -> Result<ComplexMatrix> {
    let n = spec.dim;
    let mut out = ComplexMatrix::identity(n);
    for k in 1..=n {
        for l in k + 1..=n {
            let phi = spec.phase(k, l).ok_or(Error::IncompleteSpec(k, l))?;
            let z = Complex64::from_polar(1.0, phi);
            out[(k - 1, l - 1)] = z;
            out[(l - 1, k - 1)] = z.conj();
        }
    }
    Ok(out)
}

/// Orthogonal complement of the POVM element: `delta(spec) - I`.
pub fn delta_tilde(spec: &PhaseSpec) -> Result<ComplexMatrix> {
    let mut out = delta(spec)?;
    for i in 0..spec.dim {
        out[(i, i)] = Complex64::new(0.0, 0.0);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitSetting {
    /// `φ = π/2`, realized as `σ_y`.
    HalfPi,
    /// `φ = π`, realized as `σ_x`.
    Pi,
    Identity,
}

impl QubitSetting {
    /// The POVM phase behind this setting, if any.
    pub fn phase(self) -> Option<f64> {
        match self {
            QubitSetting::HalfPi => Some(FRAC_PI_2),
            QubitSetting::Pi => Some(PI),
            QubitSetting::Identity => None,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            QubitSetting::HalfPi => "Y",
            QubitSetting::Pi => "X",
            QubitSetting::Identity => "I",
        }
    }
}

/// 2x2 realization of a setting. Signs are canonicalized: `-δ̃(π/2) = σ_y`
/// and `-δ̃(π) = σ_x`; concurrence terms are squared moduli so the global
/// sign drops out.
pub fn qubit_op(setting: QubitSetting) -> ComplexMatrix {
    match setting {
        QubitSetting::HalfPi => ComplexMatrix::pauli_y(),
        QubitSetting::Pi => ComplexMatrix::pauli_x(),
        QubitSetting::Identity => ComplexMatrix::identity(2),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOperator {
    settings: Vec<QubitSetting>,
    matrix: ComplexMatrix,
}

impl PhaseOperator {
    pub fn settings(&self) -> &[QubitSetting] {
        &self.settings
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn num_qubits(&self) -> usize {
        self.settings.len()
    }

    /// Copy with the matrix multiplied by a scalar; used to probe sign conventions.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { settings: self.settings.clone(), matrix: self.matrix.scale(factor) }
    }
}

/// Tensor string such as `Y⊗Y⊗X⊗I`.
impl fmt::Display for PhaseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.settings.iter().map(|s| s.symbol()).collect();
        f.write_str(&parts.join("⊗"))
    }
}

pub fn tensor_operator(settings: &[QubitSetting]) -> Result<PhaseOperator> {
    if settings.is_empty() {
        return Err(Error::Domain("operator needs at least one qubit setting".into()));
    }
    let factors: Vec<ComplexMatrix> = settings.iter().map(|&s| qubit_op(s)).collect();
    Ok(PhaseOperator { settings: settings.to_vec(), matrix: kron_all(&factors)? })
}

/// Max-norm distance between the grid average of `Δ(2πk/K)` and the identity.
pub fn povm_resolution_check(n: usize, grid_points: usize) -> Result<f64> {
    if n != 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    if grid_points < 2 {
        return Err(Error::Domain(format!("grid needs at least 2 points, got {grid_points}")));
    }
    let mut sum = ComplexMatrix::zeros(n, n);
    for k in 0..grid_points {
        let phi = TAU * k as f64 / grid_points as f64;
        sum = sum.add(&delta(&PhaseSpec::qubit(phi)?)?)?;
    }
    let avg = sum.scale(Complex64::new(1.0 / grid_points as f64, 0.0));
    avg.max_abs_diff(&ComplexMatrix::identity(n))
}

const DENSITY_TOL: f64 = 1e-10;

/// Checks that `rho` is a density matrix: Hermitian, unit trace, and positive semidefinite.
pub fn validate_density(rho: &ComplexMatrix) -> Result<()> {
    if !rho.is_square() {
        return Err(Error::InvalidDensity(format!("{}x{} is not square", rho.rows(), rho.cols())));
    }
    if !rho.is_hermitian(DENSITY_TOL) {
        return Err(Error::InvalidDensity("not Hermitian".into()));
    }
    let tr = rho.trace()?;
    if (tr - ONE).norm() > DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("trace {tr} differs from 1")));
    }
    let min_ev = rho.min_eigenvalue_hermitian()?;
    if min_ev < -DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min_ev}")));
    }
    Ok(())
}

/// Outcome density `Tr(ρ Δ)` for the phases in `spec`.
pub fn povm_probability(rho: &ComplexMatrix, spec: &PhaseSpec) -> Result<f64> {
    validate_density(rho)?;
    if rho.rows() != spec.dim {
        return Err(Error::Shape(format!("{}-dim state against N = {} POVM", rho.rows(), spec.dim)));
    }
    let p = rho.matmul(&delta(spec)?)?.trace()?;
    if p.im.abs() > DENSITY_TOL {
        return Err(Error::InvalidDensity(format!("probability has imaginary part {}", p.im)));
    }
    Ok(p.re)
}
