//! Seeded random inputs. Every generator takes its RNG or seed explicitly.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.sample(StandardNormal))
}

/// Uniform point on the unit sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> DVector<f64> {
    loop {
        let v = gaussian_vector(rng, len);
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

/// Symmetric matrix with entries uniform in `[−spread, spread]`.
pub fn uniform_symmetric<R: Rng + ?Sized>(rng: &mut R, dim: usize, spread: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = rng.gen_range(-spread..=spread);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Orthonormalized Gaussian `dim × k` frame (Haar-distributed).
pub fn orthonormal_frame<R: Rng + ?Sized>(rng: &mut R, dim: usize, k: usize) -> DMatrix<f64> {
    linalg::orthonormalize(&gaussian_matrix(rng, dim, k))
}

/// Random symmetric positive-definite matrix `GᵀG + shift·I`.
pub fn spd_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, shift: f64) -> DMatrix<f64> {
    let g = gaussian_matrix(rng, dim, dim);
    let m = g.transpose() * g + DMatrix::identity(dim, dim) * shift;
    (&m + m.transpose()) * 0.5
}
