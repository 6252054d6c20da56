//! Generators of SU(d) and their symmetric structure constants.
//!
//! Ordering (0-based here): the `d − 1` diagonal generators first, then the
//! symmetric `|k⟩⟨m| + |m⟩⟨k|`, then the antisymmetric
//! `i(|k⟩⟨m| − |m⟩⟨k|)`, both off-diagonal families enumerating `k < m` in
//! lexicographic order.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{ComplexMatrix, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    dim: usize,
    generators: Vec<ComplexMatrix>,
}

impl GeneratorSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn get(&self, j: usize) -> &ComplexMatrix {
        &self.generators[j]
    }

    /// `Σ_j c_j λ_j`.
    pub fn combine(&self, coeffs: &[f64]) -> ComplexMatrix {
        assert_eq!(coeffs.len(), self.len());
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if *c != 0.0 {
                acc = &acc + &g.scale_real(*c);
            }
        }
        acc
    }

    /// Expansion coefficients `c_j = ½ Tr(λ_j H)`.
    pub fn coefficients(&self, h: &ComplexMatrix) -> Vec<f64> {
        self.generators
            .iter()
            .map(|g| 0.5 * g.trace_of_product(h).re)
            .collect()
    }
}

fn offdiag_pairs(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..d).flat_map(move |k| (k + 1..d).map(move |m| (k, m)))
}

pub fn su_generators(d: usize) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut generators = Vec::with_capacity(d * d - 1);
    for j in 1..d {
        let norm = (2.0 / (j * (j + 1)) as f64).sqrt();
        let mut diag = alloc::vec![0.0; d];
        for entry in diag.iter_mut().take(j) {
            *entry = norm;
        }
        diag[j] = -(j as f64) * norm;
        generators.push(ComplexMatrix::from_real_diag(&diag));
    }
    for (k, m) in offdiag_pairs(d) {
        let mut g = ComplexMatrix::zeros(d, d);
        g[(k, m)] = C64::new(1.0, 0.0);
        g[(m, k)] = C64::new(1.0, 0.0);
        generators.push(g);
    }
    for (k, m) in offdiag_pairs(d) {
        let mut g = ComplexMatrix::zeros(d, d);
        g[(k, m)] = C64::new(0.0, 1.0);
        g[(m, k)] = C64::new(0.0, -1.0);
        generators.push(g);
    }
    Ok(GeneratorSet { dim: d, generators })
}

/// Pauli matrices in the order `σ_x, σ_y, σ_z`.
pub fn pauli() -> GeneratorSet {
    let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let mut y = ComplexMatrix::zeros(2, 2);
    y[(0, 1)] = C64::new(0.0, -1.0);
    y[(1, 0)] = C64::new(0.0, 1.0);
    let z = ComplexMatrix::from_real_diag(&[1.0, -1.0]);
    GeneratorSet {
        dim: 2,
        generators: alloc::vec![x, y, z],
    }
}

/// Dense rank-3 tensor `g_ijk = ¼ Tr({λ_i, λ_j} λ_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    n: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    /// Row vector `G_ij = (g_ij1, …, g_ijn)`.
    pub fn row(&self, i: usize, j: usize) -> &[f64] {
        let start = (i * self.n + j) * self.n;
        &self.data[start..start + self.n]
    }
}

/// Imaginary residue tolerated (and then discarded) when evaluating `g_ijk`.
const G_IMAG_TOL: f64 = 1e-12;

pub fn structure_constants_g(d: usize) -> Result<StructureConstants> {
    Ok(structure_constants_for(&su_generators(d)?))
}

pub fn structure_constants_for(set: &GeneratorSet) -> StructureConstants {
    let gens = set.generators();
    let n = gens.len();
    let mut data = alloc::vec![0.0; n * n * n];
    for i in 0..n {
        for j in i..n {
            let anti = &(&gens[i] * &gens[j]) + &(&gens[j] * &gens[i]);
            for k in 0..n {
                let v = anti.trace_of_product(&gens[k]) * 0.25;
                debug_assert!(v.im.abs() < G_IMAG_TOL, "g_ijk imaginary residue {}", v.im);
                data[(i * n + j) * n + k] = v.re;
                data[(j * n + i) * n + k] = v.re;
            }
        }
    }
    StructureConstants { n, data }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, rng_for};

    #[test]
    fn su2_is_pauli_up_to_order_and_sign() {
        let s = su_generators(2).unwrap();
        let p = pauli();
        // ordering: σ_z, σ_x, then i(|0⟩⟨1| − |1⟩⟨0|) = −σ_y
        assert_eq!(s.get(0), p.get(2));
        assert_eq!(s.get(1), p.get(0));
        assert_eq!(*s.get(2), p.get(1).scale_real(-1.0));
    }

    #[test]
    fn su3_diagonal_generators() {
        let s = su_generators(3).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.get(0).max_abs_diff(&ComplexMatrix::from_real_diag(&[1.0, -1.0, 0.0])) < 1e-15);
        let r3 = 1.0 / 3.0f64.sqrt();
        let want = ComplexMatrix::from_real_diag(&[r3, r3, -2.0 * r3]);
        assert!(s.get(1).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn generators_are_orthonormal_traceless_hermitian() {
        for d in 2..=5 {
            let s = su_generators(d).unwrap();
            assert_eq!(s.len(), d * d - 1);
            for (i, a) in s.generators().iter().enumerate() {
                assert!(a.hermitian_deviation() < 1e-12);
                assert!(a.trace().norm() < 1e-12);
                for (j, b) in s.generators().iter().enumerate() {
                    let want = if i == j { 2.0 } else { 0.0 };
                    assert!((a.trace_of_product(b) - C64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn invalid_dimension() {
        assert_eq!(su_generators(1), Err(Error::InvalidDimension(1)));
        assert!(structure_constants_g(0).is_err());
    }

    #[test]
    fn g_vanishes_for_su2() {
        let g = structure_constants_g(2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(g.get(i, j, k).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn g_su3_known_entry_and_full_symmetry() {
        let g = structure_constants_g(3).unwrap();
        assert!((g.get(0, 0, 1) - 1.0 / 3.0f64.sqrt()).abs() < 1e-12);
        for i in 0..8 {
            for j in 0..8 {
                for k in 0..8 {
                    let v = g.get(i, j, k);
                    for w in [g.get(j, i, k), g.get(i, k, j), g.get(k, j, i), g.get(j, k, i), g.get(k, i, j)] {
                        assert!((v - w).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn anticommutator_expansion() {
        for d in [2, 3] {
            let s = su_generators(d).unwrap();
            let g = structure_constants_for(&s);
            let n = s.len();
            for i in 0..n {
                for j in 0..n {
                    let a = s.get(i);
                    let b = s.get(j);
                    let anti = &(a * b) + &(b * a);
                    let mut rhs = ComplexMatrix::identity(d)
                        .scale_real(if i == j { 4.0 / d as f64 } else { 0.0 });
                    for k in 0..n {
                        rhs = &rhs + &s.get(k).scale_real(2.0 * g.get(i, j, k));
                    }
                    assert!(anti.max_abs_diff(&rhs) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn completeness_reconstructs_traceless_hermitian() {
        let mut rng = rng_for(5, 0);
        for d in 2..=4 {
            let s = su_generators(d).unwrap();
            let h = random_hermitian(&mut rng, d);
            let shift = ComplexMatrix::identity(d).scale(h.trace() / d as f64);
            let traceless = &h - &shift;
            let back = s.combine(&s.coefficients(&traceless));
            assert!(back.max_abs_diff(&traceless) < 1e-10);
        }
    }
}
