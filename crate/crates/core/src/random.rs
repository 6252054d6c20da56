//! Seeded random matrices: Haar unitaries, Ginibre-ensemble density
//! matrices and random Hermitian matrices.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{kron, ComplexMatrix, C64};
use crate::states::DensityMatrix;

/// Generator for stream `stream` of `seed`. Distinct streams are independent,
/// so per-sample generators can be derived from a counter.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unitary via Gram–Schmidt on a Ginibre matrix.
pub fn haar_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut v: Vec<C64> = (0..d).map(|r| g[(r, k)]).collect();
        // two passes for numerical orthogonality
        for _ in 0..2 {
            for q in &cols {
                let dot: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= dot * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        cols.push(v);
    }
    ComplexMatrix::from_fn(d, d, |r, c| cols[c][r])
}

pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Full-rank random state from the Hilbert–Schmidt (Ginibre) ensemble.
pub fn random_density(rng: &mut impl Rng, dim_a: usize, dim_b: usize) -> DensityMatrix {
    random_density_rank(rng, dim_a, dim_b, dim_a * dim_b)
}

/// Random state of at most the given rank.
pub fn random_density_rank(
    rng: &mut impl Rng,
    dim_a: usize,
    dim_b: usize,
    rank: usize,
) -> DensityMatrix {
    let n = dim_a * dim_b;
    let g = ginibre(rng, n, rank.max(1));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr), dim_a, dim_b)
        .expect("Ginibre product is a valid state")
}

/// `Σ_k p_k |k⟩⟨k| ⊗ σ_k` with random weights and random states `σ_k`.
pub fn random_classical_quantum(rng: &mut impl Rng, dim_a: usize, dim_b: usize) -> DensityMatrix {
    let weights: Vec<f64> = (0..dim_a).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut acc = ComplexMatrix::zeros(dim_a * dim_b, dim_a * dim_b);
    for (k, w) in weights.iter().enumerate() {
        let mut proj = ComplexMatrix::zeros(dim_a, dim_a);
        proj[(k, k)] = C64::new(1.0, 0.0);
        let sigma = random_density(rng, dim_b, 1);
        acc = &acc + &kron(&proj, sigma.matrix()).scale_real(w / total);
    }
    DensityMatrix::new(acc, dim_a, dim_b).expect("convex mixture of states")
}
