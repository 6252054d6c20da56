//! Kraus channels on one subsystem and their product action on bipartite
//! states.
//!
//! The generalized amplitude damping (GAD) channels weight the excitation
//! loss branch by `√r` and the gain branch by `√(1 − r)`; `r = 1` is the
//! zero-temperature amplitude damping channel.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{kron, ComplexMatrix, C64};
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// Completeness tolerance for `Σ E†E = I`.
pub const CPTP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    ops: Vec<ComplexMatrix>,
    label: String,
}

impl KrausChannel {
    /// Checks shapes only; see [`validate_cptp`] for completeness.
    pub fn new(dim: usize, ops: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        if dim == 0 || ops.is_empty() {
            return Err(Error::InvalidDimension(dim));
        }
        for op in &ops {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: op.rows().max(op.cols()),
                });
            }
        }
        Ok(Self {
            dim,
            ops,
            label: label.into(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            ops: alloc::vec![ComplexMatrix::identity(dim)],
            label: String::from("identity"),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `ρ ↦ Σ E ρ E†` on a single system.
    pub fn apply_local(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for e in &self.ops {
            out = &out + &(&(e * rho) * &e.adjoint());
        }
        out
    }
}

fn unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

fn single(dim: usize, r: usize, c: usize, v: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    m[(r, c)] = C64::new(v, 0.0);
    m
}

/// Zero-temperature amplitude damping: `diag(1, √(1−p))`, `√p|0⟩⟨1|`.
pub fn amplitude_damping(p: f64) -> Result<KrausChannel> {
    unit_interval("p", p)?;
    let ops = alloc::vec![
        ComplexMatrix::from_real_diag(&[1.0, (1.0 - p).sqrt()]),
        single(2, 0, 1, p.sqrt()),
    ];
    KrausChannel::new(2, ops, alloc::format!("ad(p={p})"))
}

/// Qubit GAD. Operator order: `E0 = √r·diag(1, √(1−p))`,
/// `E1 = √r·√p|0⟩⟨1|`, `E2 = √(1−r)·diag(√(1−p), 1)`, `E3 = √(1−r)·√p|1⟩⟨0|`.
pub fn gad_qubit(r: f64, p: f64) -> Result<KrausChannel> {
    unit_interval("r", r)?;
    unit_interval("p", p)?;
    let (sr, sg) = (r.sqrt(), (1.0 - r).sqrt());
    let q = (1.0 - p).sqrt();
    let ops = alloc::vec![
        ComplexMatrix::from_real_diag(&[sr, sr * q]),
        single(2, 0, 1, sr * p.sqrt()),
        ComplexMatrix::from_real_diag(&[sg * q, sg]),
        single(2, 1, 0, sg * p.sqrt()),
    ];
    KrausChannel::new(2, ops, alloc::format!("gad2(r={r}, p={p})"))
}

/// Three-level V-configuration GAD: levels 1 and 2 exchange excitations with
/// the ground level only, with probabilities `p1` and `p2`.
pub fn gad_qutrit_v(r: f64, p1: f64, p2: f64) -> Result<KrausChannel> {
    unit_interval("r", r)?;
    for (name, v) in [("p1", p1), ("p2", p2)] {
        if !(v >= 0.0) {
            return Err(Error::ParamOutOfRange {
                name,
                value: v,
                range: "[0, ∞)",
            });
        }
    }
    if p1 + p2 > 1.0 {
        return Err(Error::ExcitationBudgetExceeded(p1 + p2));
    }
    let (sr, sg) = (r.sqrt(), (1.0 - r).sqrt());
    let ops = alloc::vec![
        ComplexMatrix::from_real_diag(&[sr, sr * (1.0 - p1).sqrt(), sr * (1.0 - p2).sqrt()]),
        single(3, 0, 1, sr * p1.sqrt()),
        single(3, 0, 2, sr * p2.sqrt()),
        ComplexMatrix::from_real_diag(&[sg * (1.0 - p1 - p2).max(0.0).sqrt(), sg, sg]),
        single(3, 1, 0, sg * p1.sqrt()),
        single(3, 2, 0, sg * p2.sqrt()),
    ];
    KrausChannel::new(3, ops, alloc::format!("gad3(r={r}, p1={p1}, p2={p2})"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport {
    /// `max |(Σ E†E − I)_ij|`.
    pub deviation: f64,
    pub passes: bool,
}

pub fn completeness_sum(ch: &KrausChannel) -> ComplexMatrix {
    let mut sum = ComplexMatrix::zeros(ch.dim, ch.dim);
    for e in &ch.ops {
        sum = &sum + &(&e.adjoint() * e);
    }
    sum
}

pub fn validate_cptp(ch: &KrausChannel) -> CptpReport {
    let deviation = completeness_sum(ch).max_abs_diff(&ComplexMatrix::identity(ch.dim));
    CptpReport {
        deviation,
        passes: deviation <= CPTP_TOL,
    }
}

/// `Σ_{i,j} (E_i ⊗ F_j) ρ (E_i ⊗ F_j)†` over every Kraus pair, in order.
pub fn apply_product(
    ch_a: &KrausChannel,
    ch_b: &KrausChannel,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    if ch_a.dim != rho.dim_a() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim_a(),
            found: ch_a.dim,
        });
    }
    if ch_b.dim != rho.dim_b() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim_b(),
            found: ch_b.dim,
        });
    }
    let n = rho.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for ea in ch_a.ops.iter().filter(|e| e.max_abs() > 0.0) {
        for eb in ch_b.ops.iter().filter(|e| e.max_abs() > 0.0) {
            let k = kron(ea, eb);
            out = &out + &(&(&k * rho.matrix()) * &k.adjoint());
        }
    }
    DensityMatrix::new_unchecked(out, rho.dim_a(), rho.dim_b())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::bell_qubit;

    fn ket_proj(dim: usize, k: usize) -> ComplexMatrix {
        single(dim, k, k, 1.0)
    }

    #[test]
    fn zero_temperature_limit_is_amplitude_damping() {
        let gad = gad_qubit(1.0, 0.3).unwrap();
        let ad = amplitude_damping(0.3).unwrap();
        assert_eq!(gad.kraus_ops()[0], ad.kraus_ops()[0]);
        assert_eq!(gad.kraus_ops()[1], ad.kraus_ops()[1]);
        assert_eq!(gad.kraus_ops()[2].max_abs(), 0.0);
        assert_eq!(gad.kraus_ops()[3].max_abs(), 0.0);
    }

    #[test]
    fn no_transition_is_identity() {
        let rho = crate::states::nonsym_qubit();
        let ch = gad_qubit(0.37, 0.0).unwrap();
        let out = apply_product(&ch, &ch, &rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);

        let rho3 = crate::states::nonsym_qutrit();
        let ch3 = gad_qutrit_v(0.2, 0.0, 0.0).unwrap();
        let out = apply_product(&ch3, &ch3, &rho3).unwrap();
        assert!(out.matrix().max_abs_diff(rho3.matrix()) < 1e-15);
    }

    #[test]
    fn full_decay() {
        let ch = gad_qubit(1.0, 1.0).unwrap();
        assert_eq!(ch.apply_local(&ket_proj(2, 1)), ket_proj(2, 0));

        let ch3 = gad_qutrit_v(1.0, 1.0, 0.0).unwrap();
        assert_eq!(ch3.apply_local(&ket_proj(3, 1)), ket_proj(3, 0));
        assert_eq!(ch3.apply_local(&ket_proj(3, 2)), ket_proj(3, 2));
    }

    #[test]
    fn bell_decays_to_ground() {
        let ch = gad_qubit(1.0, 1.0).unwrap();
        let out = apply_product(&ch, &ch, &bell_qubit()).unwrap();
        assert!(out.matrix().max_abs_diff(&ket_proj(4, 0)) < 1e-15);
    }

    #[test]
    fn completeness_of_reference_channels() {
        let ch = gad_qutrit_v(0.5, 0.1, 0.4).unwrap();
        let sum = completeness_sum(&ch);
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(validate_cptp(&ch).passes);
        assert!(validate_cptp(&gad_qubit(0.3, 0.7).unwrap()).passes);

        let filter = KrausChannel::new(2, alloc::vec![ComplexMatrix::from_real_diag(&[1.0, 0.5])], "filter").unwrap();
        let rep = validate_cptp(&filter);
        assert!(!rep.passes);
        assert!((rep.deviation - 0.75).abs() < 1e-15);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(gad_qubit(1.2, 0.5), Err(Error::ParamOutOfRange { name: "r", .. })));
        assert!(matches!(gad_qubit(0.5, -0.1), Err(Error::ParamOutOfRange { name: "p", .. })));
        assert!(matches!(gad_qutrit_v(0.5, 0.6, 0.5), Err(Error::ExcitationBudgetExceeded(_))));
        assert!(matches!(gad_qutrit_v(0.5, -0.1, 0.5), Err(Error::ParamOutOfRange { .. })));
    }

    #[test]
    fn dimension_mismatch() {
        let ch = gad_qubit(0.5, 0.5).unwrap();
        let ch3 = gad_qutrit_v(0.5, 0.1, 0.4).unwrap();
        assert!(matches!(
            apply_product(&ch, &ch3, &bell_qubit()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(KrausChannel::new(2, alloc::vec![ComplexMatrix::identity(3)], "bad").is_err());
    }

    #[test]
    fn half_temperature_qubit_gad_fixes_maximally_mixed() {
        let mixed = ComplexMatrix::identity(2).scale_real(0.5);
        for p in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let out = gad_qubit(0.5, p).unwrap().apply_local(&mixed);
            assert!(out.max_abs_diff(&mixed) < 1e-10);
        }
    }

    #[test]
    fn amplitude_damping_composes_on_populations() {
        let (p, q) = (0.3, 0.45);
        let pop = ComplexMatrix::from_real_diag(&[0.2, 0.8]);
        let two = gad_qubit(1.0, q)
            .unwrap()
            .apply_local(&gad_qubit(1.0, p).unwrap().apply_local(&pop));
        let total = 1.0 - (1.0 - p) * (1.0 - q);
        let one = gad_qubit(1.0, total).unwrap().apply_local(&pop);
        assert!(two.max_abs_diff(&one) < 1e-12);
    }
}
