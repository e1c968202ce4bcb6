use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::structures::standard_j;
use crate::error::{Error, Result};
use crate::linalg;

/// Largest accepted condition number of the input matrix.
pub const MAX_CONDITION: f64 = 1e12;

/// `SᵀMS = Λ ⊕ Λ` with `S` symplectic and `lambda` sorted descending.
#[derive(Clone, Debug, Serialize)]
pub struct WilliamsonDecomposition {
    #[serde(serialize_with = "crate::linalg::serialize_rows")]
    pub s: DMatrix<f64>,
    pub lambda: Vec<f64>,
}

impl WilliamsonDecomposition {
    /// `Λ ⊕ Λ` as a diagonal matrix.
    pub fn normal_form(&self) -> DMatrix<f64> {
        let d: Vec<f64> = self.lambda.iter().chain(self.lambda.iter()).copied().collect();
        DMatrix::from_diagonal(&DVector::from_vec(d))
    }

    /// `(‖SᵀJS − J‖∞, ‖SᵀMS − Λ⊕Λ‖∞)`.
    pub fn residuals(&self, m: &DMatrix<f64>) -> (f64, f64) {
        let j = standard_j(self.lambda.len());
        let st = self.s.transpose();
        let rj = linalg::max_abs(&(&st * &j * &self.s - &j));
        let rm = linalg::max_abs(&(&st * m * &self.s - self.normal_form()));
        (rj, rm)
    }
}

/// How the skew matrix `K = M^{-1/2} J M^{-1/2}` is brought to normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkewSolver {
    /// Hermitian eigendecomposition of `iK`.
    Hermitian,
    /// Real symmetric eigendecomposition of `KᵀK` with pair deflation.
    Symmetric,
}

/// Permutation `P` from interleaved pair ordering `(a₁, b₁, a₂, b₂, …)` to
/// block ordering `(a₁, …, aₙ, b₁, …, bₙ)`: `W_block = W_interleaved · P`
/// and `Pᵀ (Iₙ ⊗ J₂) P = J`.
pub fn interleave_permutation(n: usize) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        p[(2 * j, j)] = 1.0;
        p[(2 * j + 1, n + j)] = 1.0;
    }
    p
}

/// Block-diagonal `Iₙ ⊗ J₂`, the interleaved standard complex structure.
pub fn interleaved_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(2 * i + 1, 2 * i)] = 1.0;
        j[(2 * i, 2 * i + 1)] = -1.0;
    }
    j
}

/// Validates `M` and returns `M^{-1/2}`.
pub fn inverse_sqrt_spd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    linalg::half_dim(m)?;
    let scale = 1.0 + linalg::max_abs(m);
    let asymmetry = linalg::asymmetry(m);
    if asymmetry > 1e-12 * scale {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let min = eig.eigenvalues.min();
    let max = eig.eigenvalues.max();
    if min <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    let condition = max / min;
    if condition > MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    let d = eig.eigenvalues.map(|x| 1.0 / x.sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose())
}

/// Orthonormal pairs `(a_j, b_j)` with `K a_j = d_j b_j`, `K b_j = −d_j a_j`,
/// returned as interleaved columns and `d` ascending.
fn skew_pairs(k: &DMatrix<f64>, solver: SkewSolver) -> (DMatrix<f64>, Vec<f64>) {
    match solver {
        SkewSolver::Hermitian => hermitian_pairs(k),
        SkewSolver::Symmetric => deflated_pairs(k),
    }
}

fn hermitian_pairs(k: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let dim = k.nrows();
    let n = dim / 2;
    let ik = k.map(|x| Complex64::new(0.0, x));
    let eig = ik.symmetric_eigen();
    // iK w = d w with w = a + ib gives K a = d b and K b = −d a
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let mut positive: Vec<usize> = order[..n].to_vec();
    positive.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]).then(x.cmp(&y)));

    let mut w = DMatrix::zeros(dim, dim);
    let mut d = Vec::with_capacity(n);
    let root2 = std::f64::consts::SQRT_2;
    for (j, &idx) in positive.iter().enumerate() {
        let col = eig.eigenvectors.column(idx);
        for r in 0..dim {
            w[(r, 2 * j)] = col[r].re * root2;
            w[(r, 2 * j + 1)] = col[r].im * root2;
        }
        d.push(eig.eigenvalues[idx]);
    }
    (linalg::orthonormalize(&w), d)
}

fn deflated_pairs(k: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let dim = k.nrows();
    let n = dim / 2;
    let eig = (k.transpose() * k).symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]).then(x.cmp(&y)));

    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut d = Vec::with_capacity(n);
    for &idx in &order {
        if d.len() == n {
            break;
        }
        let mut a: DVector<f64> = eig.eigenvectors.column(idx).into_owned();
        for _ in 0..2 {
            for c in &chosen {
                a -= c * c.dot(&a);
            }
        }
        let norm = a.norm();
        if norm < 1e-6 {
            continue;
        }
        a /= norm;
        let ka = k * &a;
        let dj = ka.norm();
        let mut b = ka / dj;
        for c in &chosen {
            b -= c * c.dot(&b);
        }
        b -= &a * a.dot(&b);
        b.normalize_mut();
        chosen.push(a);
        chosen.push(b);
        d.push(dj);
    }
    let w = DMatrix::from_columns(&chosen);
    (w, d)
}

/// Williamson normal form of a symmetric positive-definite `2n × 2n` matrix.
pub fn williamson(m: &DMatrix<f64>) -> Result<WilliamsonDecomposition> {
    williamson_with(m, SkewSolver::Hermitian)
}

pub fn williamson_with(m: &DMatrix<f64>, solver: SkewSolver) -> Result<WilliamsonDecomposition> {
    let n = linalg::half_dim(m)?;
    let m_inv_sqrt = inverse_sqrt_spd(m)?;
    let j = standard_j(n);
    let k = &m_inv_sqrt * &j * &m_inv_sqrt;
    let k = (&k - k.transpose()) * 0.5;

    let (w_interleaved, d) = skew_pairs(&k, solver);
    if d.len() != n || d.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Precondition("skew normal form did not produce n positive pairs".into()));
    }
    let w = w_interleaved * interleave_permutation(n);

    let scale: Vec<f64> = d.iter().chain(d.iter()).map(|x| 1.0 / x.sqrt()).collect();
    let s = m_inv_sqrt * w * DMatrix::from_diagonal(&DVector::from_vec(scale));
    let lambda = d.iter().map(|x| 1.0 / x).collect();
    Ok(WilliamsonDecomposition { s, lambda })
}
