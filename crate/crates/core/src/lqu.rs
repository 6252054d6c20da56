//! Local quantum uncertainty.
//!
//! `U_A = min_Λ I(ρ, Λ ⊗ I)` over non-degenerate local observables, where
//! `I(ρ, K) = −½ Tr [√ρ, K]²` is the Wigner–Yanase skew information.
//!
//! Two closed forms are provided:
//!
//! * qubit A (`d1 = 2`): `U_A = 1 − λ_max(W)`, with
//!   `W_ij = Tr{√ρ (σ_i ⊗ I) √ρ (σ_j ⊗ I)}` over the Pauli matrices;
//! * general `d1`: `U_A = 2/d1 − λ_max(W)`, with
//!   `W_ij = Tr{√ρ (λ_i ⊗ I) √ρ (λ_j ⊗ I)} − G_ij · L`, where
//!   `G_ij = (g_ij1, …, g_ijn)` are the symmetric SU(d1) structure constants
//!   and `L_k = Tr(ρ λ_k ⊗ I)`.
//!
//! Both minimize the skew information over the normalized traceless family
//! `Λ = Σ v_i λ_i`, `|v| = 1`. The minimizer can be degenerate at `d1 ≥ 3`;
//! [`LquResult::degenerate`] reports it rather than silently accepting it.
//!
//! [`lqu_bruteforce`] is an independent oracle that samples Haar-random
//! eigenbases for a fixed spectrum and refines the best one by coordinate
//! descent.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::{pauli, structure_constants_for, su_generators, GeneratorSet, StructureConstants};
use crate::linalg::{eig_hermitian, kron, sqrt_psd, ComplexMatrix, EigenDecomposition, C64};
use crate::random::{haar_unitary, rng_for};
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// Spectral gap of the optimal observable below which it is flagged
/// degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Imaginary residue tolerated in the entries of `W`.
const W_IMAG_TOL: f64 = 1e-10;

pub const DEFAULT_ORACLE_SEED: u64 = 0x1a05_eed5;

#[derive(Debug, Clone, PartialEq)]
pub struct LquResult {
    pub value: f64,
    /// Real symmetric `(d1² − 1) × (d1² − 1)` matrix.
    pub w_matrix: DMatrix<f64>,
    pub lambda_max: f64,
    pub top_eigvec: Vec<f64>,
    /// `Λ^A = Σ_i v_i λ_i` for the top eigenvector `v`.
    pub optimal_observable: ComplexMatrix,
    /// Smallest spacing in the spectrum of `optimal_observable`.
    pub degeneracy_gap: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `1 − λ_max(W)` over Pauli matrices (qubit A only).
    Pauli,
    /// `2/d1 − λ_max(W)` with the `G·L` correction.
    SuGenerators,
}

/// Precomputed operators for repeated LQU evaluations at fixed `(d1, d2)`.
#[derive(Debug, Clone)]
pub struct LquCalculator {
    dim_a: usize,
    dim_b: usize,
    form: ClosedForm,
    local: GeneratorSet,
    lifted: Vec<ComplexMatrix>,
    g: Option<StructureConstants>,
}

impl LquCalculator {
    /// Pauli form for `d1 = 2`, SU(3) form for `d1 = 3`.
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        match dim_a {
            2 => Self::with_form(dim_a, dim_b, ClosedForm::Pauli),
            3 => Self::with_form(dim_a, dim_b, ClosedForm::SuGenerators),
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    /// Any `d1 ≥ 2`; the Pauli form additionally requires `d1 = 2`.
    pub fn with_form(dim_a: usize, dim_b: usize, form: ClosedForm) -> Result<Self> {
        if dim_b == 0 {
            return Err(Error::InvalidDimension(dim_b));
        }
        let (local, g) = match form {
            ClosedForm::Pauli if dim_a == 2 => (pauli(), None),
            ClosedForm::Pauli => return Err(Error::UnsupportedDimension(dim_a)),
            ClosedForm::SuGenerators => {
                let set = su_generators(dim_a)?;
                let g = structure_constants_for(&set);
                (set, Some(g))
            }
        };
        let id_b = ComplexMatrix::identity(dim_b);
        let lifted = local.generators().iter().map(|l| kron(l, &id_b)).collect();
        Ok(Self {
            dim_a,
            dim_b,
            form,
            local,
            lifted,
            g,
        })
    }

    pub fn form(&self) -> ClosedForm {
        self.form
    }

    fn check_dims(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim_a() != self.dim_a || rho.dim_b() != self.dim_b {
            return Err(Error::DimensionMismatch {
                expected: self.dim_a * self.dim_b,
                found: rho.dim(),
            });
        }
        Ok(())
    }

    pub fn w_matrix(&self, rho: &DensityMatrix) -> Result<DMatrix<f64>> {
        self.check_dims(rho)?;
        let s = sqrt_psd(rho.matrix())?;
        let n = self.lifted.len();
        let b: Vec<ComplexMatrix> = self.lifted.iter().map(|a| &s * a).collect();
        let mut w = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = b[i].trace_of_product(&b[j]);
                debug_assert!(t.im.abs() < W_IMAG_TOL, "W imaginary residue {}", t.im);
                w[(i, j)] = t.re;
                w[(j, i)] = t.re;
            }
        }
        if let Some(g) = &self.g {
            let bloch: Vec<f64> = self
                .lifted
                .iter()
                .map(|a| rho.matrix().trace_of_product(a).re)
                .collect();
            for i in 0..n {
                for j in i..n {
                    let corr: f64 = g.row(i, j).iter().zip(&bloch).map(|(x, y)| x * y).sum();
                    w[(i, j)] -= corr;
                    if i != j {
                        w[(j, i)] -= corr;
                    }
                }
            }
        }
        Ok(w)
    }

    pub fn compute(&self, rho: &DensityMatrix) -> Result<LquResult> {
        let w = self.w_matrix(rho)?;
        let n = w.nrows();
        let wc = ComplexMatrix::from_fn(n, n, |r, c| C64::new(w[(r, c)], 0.0));
        let eig = eig_hermitian(&wc)?;
        let lambda_max = eig.max_eigenvalue();
        let mut v: Vec<f64> = eig.eigenvector(n - 1).iter().map(|z| z.re).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);

        let offset = match self.form {
            ClosedForm::Pauli => 1.0,
            ClosedForm::SuGenerators => 2.0 / self.dim_a as f64,
        };
        let optimal_observable = self.local.combine(&v);
        let degeneracy_gap = spectral_gap(&eig_hermitian(&optimal_observable)?);
        Ok(LquResult {
            value: offset - lambda_max,
            w_matrix: w,
            lambda_max,
            top_eigvec: v,
            optimal_observable,
            degeneracy_gap,
            degenerate: degeneracy_gap < DEGENERACY_TOL,
        })
    }
}

fn spectral_gap(eig: &EigenDecomposition) -> f64 {
    eig.eigenvalues
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

/// Closed-form LQU for `d1 ∈ {2, 3}`.
pub fn lqu_closed_form(rho: &DensityMatrix) -> Result<LquResult> {
    LquCalculator::new(rho.dim_a(), rho.dim_b())?.compute(rho)
}

fn check_observable(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<()> {
    if k.rows() != rho.dim() || k.cols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: k.rows(),
        });
    }
    let deviation = k.hermitian_deviation();
    if deviation > crate::linalg::HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// `I(ρ, K) = −½ Tr [√ρ, K]²` for an observable on the full space.
pub fn skew_information(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    check_observable(rho, k)?;
    Ok(skew_with_sqrt(&sqrt_psd(rho.matrix())?, k))
}

/// `[√ρ, K]` is anti-Hermitian, so `−Tr C² = ‖C‖_F²`.
fn skew_with_sqrt(sqrt_rho: &ComplexMatrix, k: &ComplexMatrix) -> f64 {
    0.5 * sqrt_rho.commutator(k).frobenius_sq()
}

/// Default oracle spectrum: `(−1, 1)` for qubits, `(−1, 0, 1)` for qutrits.
pub fn default_spectrum(d1: usize) -> Result<Vec<f64>> {
    match d1 {
        2 => Ok(vec![-1.0, 1.0]),
        3 => Ok(vec![-1.0, 0.0, 1.0]),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Normalized traceless qutrit spectrum `√(4/3)·cos(φ − 2πk/3)`, sorted.
/// Non-degenerate for `φ ∈ (0, π/3)`; `φ = π/6` gives `(−1, 0, 1)`.
fn qutrit_spectrum(phi: f64) -> Vec<f64> {
    let a = (4.0f64 / 3.0).sqrt();
    let tau = 2.0 * core::f64::consts::PI / 3.0;
    let mut s: Vec<f64> = (0..3).map(|k| a * (phi - tau * k as f64).cos()).collect();
    s.sort_by(f64::total_cmp);
    s
}

const PHI_MARGIN: f64 = 1e-6;
const REFINE_MIN_STEP: f64 = 1e-6;
const REFINE_IMPROVEMENT: f64 = 1e-9;
const REFINE_MAX_PASSES: usize = 50_000;

struct Landscape {
    sqrt_rho: ComplexMatrix,
    dim_a: usize,
    id_b: ComplexMatrix,
    gens: Vec<EigenDecomposition>,
}

impl Landscape {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let gens = su_generators(rho.dim_a())?
            .generators()
            .iter()
            .map(eig_hermitian)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sqrt_rho: sqrt_psd(rho.matrix())?,
            dim_a: rho.dim_a(),
            id_b: ComplexMatrix::identity(rho.dim_b()),
            gens,
        })
    }

    fn skew(&self, u: &ComplexMatrix, spectrum: &[f64]) -> f64 {
        let local = &(u * &ComplexMatrix::from_real_diag(spectrum)) * &u.adjoint();
        skew_with_sqrt(&self.sqrt_rho, &kron(&local, &self.id_b))
    }

    /// `exp(i·t·λ_j)`.
    fn rotation(&self, j: usize, t: f64) -> ComplexMatrix {
        self.gens[j].reconstruct_with_complex(|e| C64::new(0.0, t * e).exp())
    }
}

/// Brute-force minimum of the skew information over `U·diag(spectrum)·U† ⊗ I`
/// with the default seed.
pub fn lqu_bruteforce(rho: &DensityMatrix, spectrum: &[f64], samples: usize) -> Result<f64> {
    lqu_bruteforce_seeded(rho, spectrum, samples, DEFAULT_ORACLE_SEED)
}

/// Samples `samples` Haar unitaries (sample `i` drawn from stream `i` of
/// `seed`), then refines the best by coordinate descent on
/// `U ← U·exp(±i·h·λ_j)`. The result is an upper bound on the minimum over
/// this spectrum.
pub fn lqu_bruteforce_seeded(
    rho: &DensityMatrix,
    spectrum: &[f64],
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if spectrum.len() != rho.dim_a() || spectrum.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSpectrum);
    }
    search(rho, samples, seed, Some(spectrum))
}

/// Like [`lqu_bruteforce_seeded`] but also minimizes over the shape of the
/// spectrum within the normalized traceless non-degenerate family
/// (`Tr Λ = 0`, `Tr Λ² = 2`). This is the set the closed forms minimize over.
/// Supports `d1 ∈ {2, 3}`.
pub fn lqu_bruteforce_free_spectrum(rho: &DensityMatrix, samples: usize, seed: u64) -> Result<f64> {
    match rho.dim_a() {
        2 => lqu_bruteforce_seeded(rho, &[-1.0, 1.0], samples, seed),
        3 => search(rho, samples, seed, None),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// `fixed = None` searches the qutrit spectral angle as an extra coordinate.
fn search(rho: &DensityMatrix, samples: usize, seed: u64, fixed: Option<&[f64]>) -> Result<f64> {
    use rand::Rng;

    if samples == 0 {
        return Err(Error::ParamOutOfRange {
            name: "samples",
            value: 0.0,
            range: ">= 1",
        });
    }
    let land = Landscape::new(rho)?;
    let phi_lo = PHI_MARGIN;
    let phi_hi = core::f64::consts::FRAC_PI_3 - PHI_MARGIN;
    let spectrum_at = |phi: f64| -> Vec<f64> {
        match fixed {
            Some(s) => s.to_vec(),
            None => qutrit_spectrum(phi),
        }
    };

    let mut best_u = ComplexMatrix::identity(land.dim_a);
    let mut best_phi = core::f64::consts::FRAC_PI_6;
    let mut best = f64::INFINITY;
    for i in 0..samples {
        let mut rng = rng_for(seed, i as u64);
        let u = haar_unitary(&mut rng, land.dim_a);
        let phi = if fixed.is_some() {
            best_phi
        } else {
            rng.gen_range(phi_lo..phi_hi)
        };
        let v = land.skew(&u, &spectrum_at(phi));
        if v < best {
            best = v;
            best_u = u;
            best_phi = phi;
        }
    }

    let ngen = land.gens.len();
    let mut step = 0.25;
    let mut passes = 0;
    while step >= REFINE_MIN_STEP && passes < REFINE_MAX_PASSES {
        passes += 1;
        let start = best;
        for j in 0..ngen {
            for t in [step, -step] {
                let cand = &best_u * &land.rotation(j, t);
                let v = land.skew(&cand, &spectrum_at(best_phi));
                if v < best {
                    best = v;
                    best_u = cand;
                    break;
                }
            }
        }
        if fixed.is_none() {
            for t in [step, -step] {
                let phi = (best_phi + t).clamp(phi_lo, phi_hi);
                let v = land.skew(&best_u, &qutrit_spectrum(phi));
                if v < best {
                    best = v;
                    best_phi = phi;
                    break;
                }
            }
        }
        if start - best < REFINE_IMPROVEMENT {
            step *= 0.5;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_qubit, nonsym_qubit};

    fn sigma_z_a() -> ComplexMatrix {
        kron(
            &ComplexMatrix::from_real_diag(&[1.0, -1.0]),
            &ComplexMatrix::identity(2),
        )
    }

    #[test]
    fn skew_information_cases() {
        let mixed = DensityMatrix::maximally_mixed(2, 2);
        let k = kron(&pauli().get(0).clone(), &ComplexMatrix::identity(2));
        assert!(skew_information(&mixed, &k).unwrap().abs() < 1e-14);

        let prod = DensityMatrix::basis_product(0, 0, 2, 2);
        assert!(skew_information(&prod, &sigma_z_a()).unwrap().abs() < 1e-14);

        // pure Bell: I = Tr(ρK²) − Tr(ρKρK) = 1 − ⟨σz⊗I⟩² = 1
        let v = skew_information(&bell_qubit(), &sigma_z_a()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn skew_information_errors() {
        let rho = bell_qubit();
        let not_h = ComplexMatrix::from_real_rows(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
        ]);
        assert!(matches!(skew_information(&rho, &not_h), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            skew_information(&rho, &ComplexMatrix::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bell_w_matrix_top_eigenvalue_is_zero() {
        // for a pure maximally entangled state √ρ = ρ and
        // Tr(ρ σ_i⊗I ρ σ_j⊗I) = ⟨σ_i⊗I⟩⟨σ_j⊗I⟩ = 0 for all i, j
        let w = LquCalculator::new(2, 2).unwrap().w_matrix(&bell_qubit()).unwrap();
        assert!(w.iter().all(|x| x.abs() < 1e-12));
        let r = lqu_closed_form(&bell_qubit()).unwrap();
        assert!(r.lambda_max.abs() < 1e-12);
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_state_has_zero_lqu() {
        let r = lqu_closed_form(&DensityMatrix::basis_product(0, 0, 2, 2)).unwrap();
        assert!(r.value.abs() < 1e-12);
        let r = lqu_closed_form(&DensityMatrix::basis_product(1, 2, 3, 3)).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn qubit_observable_is_unit_bloch() {
        let r = lqu_closed_form(&nonsym_qubit()).unwrap();
        let norm: f64 = r.top_eigvec.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!((r.degeneracy_gap - 2.0).abs() < 1e-10);
        assert!(!r.degenerate);
        assert!((r.value - (1.0 - r.lambda_max)).abs() < 1e-15);
    }

    #[test]
    fn unsupported_dimension() {
        let rho = DensityMatrix::maximally_mixed(4, 2);
        assert_eq!(lqu_closed_form(&rho).unwrap_err(), Error::UnsupportedDimension(4));
        assert!(LquCalculator::with_form(3, 3, ClosedForm::Pauli).is_err());
        // the generic route accepts it
        let r = LquCalculator::with_form(4, 2, ClosedForm::SuGenerators)
            .unwrap()
            .compute(&rho)
            .unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn qutrit_spectrum_family() {
        let s = qutrit_spectrum(core::f64::consts::FRAC_PI_6);
        for (a, b) in s.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        for phi in [0.1, 0.5, 1.0] {
            let s = qutrit_spectrum(phi);
            assert!(s.iter().sum::<f64>().abs() < 1e-14);
            assert!((s.iter().map(|x| x * x).sum::<f64>() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn bruteforce_errors_and_trivial_case() {
        let rho = bell_qubit();
        assert_eq!(lqu_bruteforce(&rho, &[1.0, 1.0], 10), Err(Error::InvalidSpectrum));
        assert_eq!(lqu_bruteforce(&rho, &[-1.0, 0.0, 1.0], 10), Err(Error::InvalidSpectrum));
        assert!(lqu_bruteforce(&rho, &[-1.0, 1.0], 0).is_err());

        let mixed = DensityMatrix::maximally_mixed(2, 2);
        assert!(lqu_bruteforce(&mixed, &[-1.0, 1.0], 50).unwrap().abs() < 1e-9);
    }
}
