//! Weak measurement and measurement reversal as diagonal local filters.
//!
//! Filters here are not required to be contractions. Entries above 1 (which
//! the reference optima use) describe the same normalized output as the
//! filter divided by its largest entry; [`FilterOutcome::physical_success_prob`]
//! reports the post-selection probability of that rescaled filter.

use alloc::vec::Vec;

use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// Minimum normalizing trace accepted by [`apply_filter_pair`].
pub const MIN_SUCCESS_PROB: f64 = 1e-14;

/// Diagonal non-negative operator on one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFilter {
    diag: Vec<f64>,
}

impl LocalFilter {
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if let Some(&bad) = diag.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::ParamOutOfRange {
                name: "filter entry",
                value: bad,
                range: "[0, ∞)",
            });
        }
        if diag.iter().all(|&v| v == 0.0) {
            return Err(Error::ParamOutOfRange {
                name: "filter entry",
                value: 0.0,
                range: "at least one entry > 0",
            });
        }
        Ok(Self { diag })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            diag: alloc::vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn max_entry(&self) -> f64 {
        self.diag.iter().copied().fold(0.0, f64::max)
    }

    /// True if some entry exceeds 1, i.e. the filter is not a contraction.
    pub fn exceeds_unit(&self) -> bool {
        self.diag.iter().any(|&v| v > 1.0)
    }

    /// Same filter divided by its largest entry.
    pub fn canonical(&self) -> Self {
        let m = self.max_entry();
        Self {
            diag: self.diag.iter().map(|v| v / m).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.diag.iter().map(|v| v * s).collect())
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diag(&self.diag)
    }
}

fn non_negative(name: &'static str, v: f64) -> Result<f64> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value: v,
            range: "[0, ∞)",
        })
    }
}

/// `diag(1, m)`. For `m < 1` it partially collapses toward `|0⟩`, for
/// `m > 1` toward `|1⟩`.
pub fn weak_measurement_qubit(m: f64) -> Result<LocalFilter> {
    LocalFilter::new(alloc::vec![1.0, non_negative("m", m)?])
}

/// `diag(n, 1)`.
pub fn reversal_qubit(n: f64) -> Result<LocalFilter> {
    LocalFilter::new(alloc::vec![non_negative("n", n)?, 1.0])
}

/// `diag(1, m1, m2)`.
pub fn weak_measurement_qutrit(m1: f64, m2: f64) -> Result<LocalFilter> {
    LocalFilter::new(alloc::vec![1.0, non_negative("m1", m1)?, non_negative("m2", m2)?])
}

/// `diag(n1, n2, n3)`. Entries above 1 are accepted; check
/// [`LocalFilter::exceeds_unit`] to warn about them.
pub fn reversal_qutrit(n1: f64, n2: f64, n3: f64) -> Result<LocalFilter> {
    LocalFilter::new(alloc::vec![
        non_negative("n1", n1)?,
        non_negative("n2", n2)?,
        non_negative("n3", n3)?,
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutcome {
    pub state: DensityMatrix,
    /// Raw normalizing trace `Tr(ρ F†F)`.
    pub success_prob: f64,
    /// Normalizing trace of the filter pair after dividing each filter by its
    /// largest entry. Equals `success_prob` when both are contractions.
    pub physical_success_prob: f64,
}

/// `F ρ F† / Tr(ρ F†F)` with `F = F_A ⊗ F_B`.
pub fn apply_filter_pair(
    fa: &LocalFilter,
    fb: &LocalFilter,
    rho: &DensityMatrix,
) -> Result<FilterOutcome> {
    if fa.dim() != rho.dim_a() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim_a(),
            found: fa.dim(),
        });
    }
    if fb.dim() != rho.dim_b() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim_b(),
            found: fb.dim(),
        });
    }
    let db = rho.dim_b();
    let f: Vec<f64> = (0..rho.dim())
        .map(|k| fa.diag[k / db] * fb.diag[k % db])
        .collect();
    let m = rho.matrix();
    let success_prob: f64 = (0..rho.dim()).map(|k| f[k] * f[k] * m[(k, k)].re).sum();
    if !(success_prob >= MIN_SUCCESS_PROB) {
        return Err(Error::ZeroSuccessProbability(success_prob));
    }
    let out = ComplexMatrix::from_fn(rho.dim(), rho.dim(), |r, c| {
        m[(r, c)] * (f[r] * f[c] / success_prob)
    });
    let rescale = fa.max_entry() * fb.max_entry();
    Ok(FilterOutcome {
        state: DensityMatrix::new_unchecked(out, rho.dim_a(), db)?,
        success_prob,
        physical_success_prob: success_prob / (rescale * rescale),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::states::bell_qubit;

    #[test]
    fn constructors() {
        assert_eq!(weak_measurement_qubit(1.0).unwrap(), LocalFilter::identity(2));
        assert_eq!(reversal_qubit(1.0).unwrap(), LocalFilter::identity(2));
        assert_eq!(weak_measurement_qutrit(1.0, 1.0).unwrap(), LocalFilter::identity(3));
        assert_eq!(reversal_qutrit(1.0, 1.0, 1.0).unwrap(), LocalFilter::identity(3));
        assert_eq!(weak_measurement_qubit(1.285).unwrap().diag(), &[1.0, 1.285]);
        assert_eq!(reversal_qubit(1.606).unwrap().diag(), &[1.606, 1.0]);
        assert_eq!(
            weak_measurement_qutrit(1.2745, 1.29).unwrap().diag(),
            &[1.0, 1.2745, 1.29]
        );
    }

    #[test]
    fn negative_parameters_rejected() {
        assert!(matches!(weak_measurement_qubit(-0.1), Err(Error::ParamOutOfRange { name: "m", .. })));
        assert!(reversal_qubit(-1.0).is_err());
        assert!(weak_measurement_qutrit(0.5, -2.0).is_err());
        assert!(reversal_qutrit(0.5, 0.5, f64::NAN).is_err());
        assert!(LocalFilter::new(alloc::vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn qutrit_reversal_above_one_is_flagged_not_rejected() {
        let f = reversal_qutrit(1.2, 0.5, 0.3).unwrap();
        assert!(f.exceeds_unit());
        assert!(!reversal_qutrit(0.751, 0.564, 0.48).unwrap().exceeds_unit());
    }

    #[test]
    fn projective_limits() {
        // qubit state α|0⟩ + β|1⟩
        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let rho = DensityMatrix::from_pure(&psi, 2, 1).unwrap();
        let out = apply_filter_pair(&weak_measurement_qubit(0.0).unwrap(), &LocalFilter::identity(1), &rho).unwrap();
        assert!(out.state.matrix().max_abs_diff(DensityMatrix::basis_product(0, 0, 2, 1).matrix()) < 1e-15);
        assert!((out.success_prob - 0.36).abs() < 1e-15);

        let out = apply_filter_pair(&reversal_qubit(0.0).unwrap(), &LocalFilter::identity(1), &rho).unwrap();
        assert!(out.state.matrix().max_abs_diff(DensityMatrix::basis_product(1, 0, 2, 1).matrix()) < 1e-15);
    }

    #[test]
    fn identity_filters_are_noop() {
        let rho = crate::states::nonsym_qutrit();
        let id = LocalFilter::identity(3);
        let out = apply_filter_pair(&id, &id, &rho).unwrap();
        assert!(out.state.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        assert!((out.success_prob - 1.0).abs() < 1e-14);
    }

    #[test]
    fn collapse_bell_to_ground() {
        let f = weak_measurement_qubit(0.0).unwrap();
        let out = apply_filter_pair(&f, &f, &bell_qubit()).unwrap();
        assert!(out.state.matrix().max_abs_diff(DensityMatrix::basis_product(0, 0, 2, 2).matrix()) < 1e-15);
        assert!((out.success_prob - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weak_measurement_on_bell_matches_hand_computation() {
        // (|00⟩ + m1·m2|11⟩)/√2, normalized by (1 + m1²m2²)/2
        let (m1, m2) = (1.285, 0.76);
        let out = apply_filter_pair(
            &weak_measurement_qubit(m1).unwrap(),
            &weak_measurement_qubit(m2).unwrap(),
            &bell_qubit(),
        )
        .unwrap();
        let mm = m1 * m2;
        assert!((out.success_prob - (1.0 + mm * mm) / 2.0).abs() < 1e-14);
        let want = DensityMatrix::from_pure(
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(mm, 0.0)],
            2,
            2,
        )
        .unwrap();
        assert!(out.state.matrix().max_abs_diff(want.matrix()) < 1e-14);
        // rescaled to a contraction: divide by m1 on A
        assert!((out.physical_success_prob - out.success_prob / (m1 * m1)).abs() < 1e-15);
    }

    #[test]
    fn zero_success_probability() {
        let rho = DensityMatrix::basis_product(1, 1, 2, 2);
        let f = weak_measurement_qubit(0.0).unwrap();
        assert!(matches!(
            apply_filter_pair(&f, &f, &rho),
            Err(Error::ZeroSuccessProbability(_))
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let f = LocalFilter::identity(3);
        assert!(matches!(
            apply_filter_pair(&f, &f, &bell_qubit()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
