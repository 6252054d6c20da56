//! Bipartite density matrices, the three reference initial states, state
//! validation and Uhlmann fidelity.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{eig_hermitian, sqrt_psd, ComplexMatrix, C64};
use crate::{Error, Result};

/// Tolerance used by [`DensityMatrix::new`] for Hermiticity, trace and
/// positivity.
pub const STATE_TOL: f64 = 1e-10;

/// Trace-one PSD matrix on `H_A ⊗ H_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl DensityMatrix {
    /// Validates all invariants at [`STATE_TOL`].
    pub fn new(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        let rho = Self::new_unchecked(matrix, dim_a, dim_b)?;
        let report = validate_with(&rho, STATE_TOL);
        if !report.is_valid() {
            return Err(Error::InvalidState(format!("{report:?}")));
        }
        Ok(rho)
    }

    /// Checks only the shape; use [`validate`] for the rest.
    pub fn new_unchecked(matrix: ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let n = dim_a * dim_b;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        Ok(Self {
            matrix,
            dim_a,
            dim_b,
        })
    }

    /// Normalizes `ket` and returns `|ψ⟩⟨ψ|`.
    pub fn from_pure(ket: &[C64], dim_a: usize, dim_b: usize) -> Result<Self> {
        let norm = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let normalized: Vec<C64> = ket.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&normalized), dim_a, dim_b)
    }

    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> Self {
        let n = dim_a * dim_b;
        Self {
            matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
            dim_a,
            dim_b,
        }
    }

    /// Product basis state `|a⟩⟨a| ⊗ |b⟩⟨b|`.
    pub fn basis_product(a: usize, b: usize, dim_a: usize, dim_b: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim_a * dim_b, dim_a * dim_b);
        let k = a * dim_b + b;
        m[(k, k)] = C64::new(1.0, 0.0);
        Self {
            matrix: m,
            dim_a,
            dim_b,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_of_product(&self.matrix).re
    }

    /// `U ρ U†`, keeping the bipartition.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.rows() != self.dim() || u.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.rows(),
            });
        }
        Self::new_unchecked(&(u * &self.matrix) * &u.adjoint(), self.dim_a, self.dim_b)
    }
}

fn ket(dim_a: usize, dim_b: usize, terms: &[(f64, usize, usize)]) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); dim_a * dim_b];
    for &(amp, a, b) in terms {
        v[a * dim_b + b] += C64::new(amp, 0.0);
    }
    v
}

/// `w·|ψ⟩⟨ψ| + noise·I`.
fn noisy_pure(psi: &[C64], weight: f64, noise: f64, dim_a: usize, dim_b: usize) -> DensityMatrix {
    let n = dim_a * dim_b;
    let m = &ComplexMatrix::outer(psi).scale_real(weight) + &ComplexMatrix::identity(n).scale_real(noise);
    DensityMatrix::new(m, dim_a, dim_b).expect("reference state is valid")
}

/// `(|00⟩ + |11⟩)(⟨00| + ⟨11|) / 2`.
pub fn bell_qubit() -> DensityMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::from_pure(&ket(2, 2, &[(h, 0, 0), (h, 1, 1)]), 2, 2).expect("valid")
}

/// `½|ψ⟩⟨ψ| + ⅛I` with `|ψ⟩ = |01⟩/√2 + |10⟩/2 + |11⟩/2`.
pub fn nonsym_qubit() -> DensityMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let psi = ket(2, 2, &[(h, 0, 1), (0.5, 1, 0), (0.5, 1, 1)]);
    noisy_pure(&psi, 0.5, 1.0 / 8.0, 2, 2)
}

/// `½|ψ⟩⟨ψ| + I/18` with `|ψ⟩ = |10⟩/2 + |02⟩/√2 + |21⟩/2`.
pub fn nonsym_qutrit() -> DensityMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let psi = ket(3, 3, &[(0.5, 1, 0), (h, 0, 2), (0.5, 2, 1)]);
    noisy_pure(&psi, 0.5, 1.0 / 18.0, 3, 3)
}

/// Invariant diagnostics for a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    /// `NaN` when the spectrum could not be computed (non-Hermitian input).
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub hermitian_ok: bool,
    pub trace_ok: bool,
    pub positivity_ok: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian_ok && self.trace_ok && self.positivity_ok
    }
}

pub fn validate(rho: &DensityMatrix) -> ValidationReport {
    validate_with(rho, STATE_TOL)
}

pub fn validate_with(rho: &DensityMatrix, tol: f64) -> ValidationReport {
    let m = rho.matrix();
    let hermiticity_deviation = m.hermitian_deviation();
    let tr = m.trace();
    let trace_deviation = (tr - C64::new(1.0, 0.0)).norm();
    let hermitian_ok = hermiticity_deviation <= tol;
    let min_eigenvalue = if hermitian_ok {
        eig_hermitian(m).map(|e| e.min_eigenvalue()).unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    ValidationReport {
        hermiticity_deviation,
        trace_deviation,
        min_eigenvalue,
        tolerance: tol,
        hermitian_ok,
        trace_ok: trace_deviation <= tol,
        positivity_ok: min_eigenvalue >= -tol,
    }
}

fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Uhlmann fidelity `[Tr √(√ρ_f ρ_i √ρ_f)]²`, evaluated as the squared trace
/// norm of `√ρ_i·√ρ_f`.
pub fn fidelity(rho_i: &DensityMatrix, rho_f: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho_i, rho_f)?;
    let a = sqrt_psd(rho_i.matrix())?;
    let b = sqrt_psd(rho_f.matrix())?;
    let f = (&a * &b).trace_norm();
    Ok((f * f).clamp(0.0, 1.0))
}

/// The nested-square-root form, kept as a cross-check for [`fidelity`].
pub fn fidelity_nested(rho_i: &DensityMatrix, rho_f: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho_i, rho_f)?;
    let s = sqrt_psd(rho_f.matrix())?;
    let inner = &(&s * rho_i.matrix()) * &s;
    let inner = (&inner + &inner.adjoint()).scale_real(0.5);
    let root = sqrt_psd(&inner)?;
    let t = root.trace().re;
    Ok(t * t)
}
