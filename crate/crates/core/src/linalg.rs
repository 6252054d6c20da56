//! Dense complex matrices and the Hermitian primitives the rest of the crate
//! builds on.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Max entrywise deviation from the adjoint accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues down to `-PSD_TOL` are treated as round-off and clamped to 0.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are considered tied when ordering eigenpairs.
pub const TIE_TOL: f64 = 1e-12;

const EIGEN_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN_TOL,
            psd: PSD_TOL,
        }
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(rows.min(cols)));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_real_diag(&vec![1.0; n])
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let ncols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |r, c| C64::new(rows[r][c], 0.0))
    }

    /// `|ψ⟩⟨ψ|` for an (unnormalized) ket.
    pub fn outer(ket: &[C64]) -> Self {
        let n = ket.len();
        Self::from_fn(n, n, |r, c| ket[r] * ket[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise modulus of `self - other`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise deviation from the adjoint; `f64::INFINITY` if not square.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// Squared Frobenius norm.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().into_iter().fold(0.0, f64::max)
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.to_nalgebra().singular_values().iter().copied().collect()
    }

    /// Sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        self.singular_values().iter().sum()
    }

    /// `A·B − B·A`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `Tr(A·B)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> C64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Kronecker product with left-factor-major block layout.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.eigenvectors.rows())
            .map(|r| self.eigenvectors[(r, k)])
            .collect()
    }

    /// `V·diag(f(e))·V†`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fe: Vec<f64> = self.eigenvalues.iter().map(|&e| f(e)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * fe[k])
                .sum()
        })
    }

    /// `V·diag(f(e))·V†` for a complex-valued `f`.
    pub fn reconstruct_with_complex(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fe: Vec<C64> = self.eigenvalues.iter().map(|&e| f(e)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| v[(r, k)] * v[(c, k)].conj() * fe[k]).sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|e| e)
    }
}

pub fn eig_hermitian(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    eig_hermitian_with(h, &Tolerances::default())
}

/// Full Hermitian eigendecomposition with deterministic ordering.
///
/// Eigenvalues are ascending. Each eigenvector has its first entry of modulus
/// above `TIE_TOL` made real positive, and runs of tied eigenvalues are
/// ordered lexicographically by (re, im) of their eigenvector entries.
pub fn eig_hermitian_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            found: h.cols(),
        });
    }
    let deviation = h.hermitian_deviation();
    if !(deviation <= tol.hermitian) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows();
    // symmetrize so the solver sees an exactly Hermitian input
    let sym = ComplexMatrix::from_fn(n, n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let eig = nalgebra::SymmetricEigen::try_new(sym.to_nalgebra(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::ConvergenceFailure)?;

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut v: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            fix_phase(&mut v);
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].0 - pairs[end - 1].0 < TIE_TOL {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| lex_cmp(&a.1, &b.1));
        start = end;
    }

    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| pairs[c].1[r]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn fix_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().find(|z| z.norm() > TIE_TOL) {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

fn lex_cmp(a: &[C64], b: &[C64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

pub fn sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    sqrt_psd_with(h, &Tolerances::default())
}

/// Principal square root of a positive-semidefinite Hermitian matrix.
///
/// Eigenvalues within the solver's round-off floor `n·ε·‖h‖` are set to zero
/// before taking the root: `√` would otherwise amplify ~1e-17 noise on
/// rank-deficient inputs to ~1e-9.
pub fn sqrt_psd_with(h: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let eig = eig_hermitian_with(h, tol)?;
    let min_eigenvalue = eig.min_eigenvalue();
    if min_eigenvalue < -tol.psd {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    let scale = eig.eigenvalues.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let floor = h.rows() as f64 * f64::EPSILON * scale;
    Ok(eig.reconstruct_with(|e| if e <= floor { 0.0 } else { e.sqrt() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let (m, n) = (0.3, 1.7);
        let k = kron(
            &ComplexMatrix::from_real_diag(&[1.0, m]),
            &ComplexMatrix::from_real_diag(&[1.0, n]),
        );
        assert_eq!(k, ComplexMatrix::from_real_diag(&[1.0, n, m, m * n]));
    }

    #[test]
    fn kron_flips_both_qubits() {
        let xx = kron(&pauli_x(), &pauli_x());
        // column 0 is the image of |00>
        let image: Vec<C64> = (0..4).map(|r| xx[(r, 0)]).collect();
        assert_eq!(image, vec![c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
    }

    #[test]
    fn eig_of_diagonal_and_pauli() {
        let d = ComplexMatrix::from_real_diag(&[3.0, 1.0, 2.0]);
        assert_eq!(eig_hermitian(&d).unwrap().eigenvalues, vec![1.0, 2.0, 3.0]);

        let e = eig_hermitian(&pauli_x()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        // phase fixed: first component real and positive
        for k in 0..2 {
            let v = e.eigenvector(k);
            assert!(v[0].re > 0.0 && v[0].im.abs() < 1e-15);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_tie_order_is_deterministic() {
        let e = eig_hermitian(&ComplexMatrix::identity(3)).unwrap();
        let v = &e.eigenvectors;
        // lexicographic: (0,0,1) < (0,1,0) < (1,0,0)
        assert_eq!(v[(2, 0)], c(1., 0.));
        assert_eq!(v[(1, 1)], c(1., 0.));
        assert_eq!(v[(0, 2)], c(1., 0.));
    }

    #[test]
    fn sqrt_examples() {
        let s = sqrt_psd(&ComplexMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 3.0])) < 1e-14);

        let h = core::f64::consts::FRAC_1_SQRT_2;
        let proj = ComplexMatrix::outer(&[c(h, 0.), c(0., h)]);
        assert!(sqrt_psd(&proj).unwrap().max_abs_diff(&proj) < 1e-12);

        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let s = sqrt_psd(&half).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2).scale_real(h)) < 1e-14);
    }

    #[test]
    fn sqrt_clamps_roundoff_but_rejects_negative() {
        let tiny = ComplexMatrix::from_real_diag(&[1.0, -5e-11]);
        let s = sqrt_psd(&tiny).unwrap();
        assert_eq!(s[(1, 1)], c(0., 0.));

        let neg = ComplexMatrix::from_real_diag(&[1.0, -0.1]);
        assert!(matches!(sqrt_psd(&neg), Err(Error::NotPsd { .. })));

        let loose = Tolerances {
            psd: 0.2,
            ..Tolerances::default()
        };
        assert!(sqrt_psd_with(&neg, &loose).is_ok());
    }

    #[test]
    fn constructor_checks() {
        assert!(ComplexMatrix::new(2, 2, vec![c(0., 0.); 3]).is_err());
        assert_eq!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.)]),
            Err(Error::NonFinite)
        );
    }
}
