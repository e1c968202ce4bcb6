//! Small dense helpers shared across modules.
//!
//! The generic routines (determinant, rank) run over any [`Scalar`] so the
//! same code serves exact-rational and float callers.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Determinant by Gaussian elimination with magnitude pivoting.
pub fn det<S: Scalar>(m: &DMatrix<S>) -> S {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    let mut a = m.clone();
    let mut sign_flip = false;
    let mut acc = S::one();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[(r, col)].is_zero())
            .max_by(|&r1, &r2| a[(r1, col)].magnitude().total_cmp(&a[(r2, col)].magnitude()));
        let Some(p) = pivot else {
            return S::zero();
        };
        if p != col {
            a.swap_rows(p, col);
            sign_flip = !sign_flip;
        }
        let piv = a[(col, col)].clone();
        for r in col + 1..n {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = a[(r, col)].clone() / piv.clone();
            for c in col + 1..n {
                let v = a[(r, c)].clone() - factor.clone() * a[(col, c)].clone();
                a[(r, c)] = v;
            }
        }
        acc = acc * piv;
    }
    if sign_flip {
        -acc
    } else {
        acc
    }
}

/// Rank by row reduction; entries with `negligible(tol)` count as zero.
pub fn rank<S: Scalar>(m: &DMatrix<S>, tol: f64) -> usize {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows)
            .filter(|&r| !a[(r, col)].negligible(tol))
            .max_by(|&r1, &r2| a[(r1, col)].magnitude().total_cmp(&a[(r2, col)].magnitude()));
        let Some(p) = pivot else { continue };
        a.swap_rows(p, rank);
        let piv = a[(rank, col)].clone();
        for r in rank + 1..rows {
            let factor = a[(r, col)].clone() / piv.clone();
            for c in col..cols {
                let v = a[(r, c)].clone() - factor.clone() * a[(rank, c)].clone();
                a[(r, c)] = v;
            }
        }
        rank += 1;
    }
    rank
}

pub fn dot<S: Scalar>(a: &DVector<S>, b: &DVector<S>) -> S {
    a.iter()
        .zip(b.iter())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn require_square<S: Scalar>(m: &DMatrix<S>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// Half-dimension `n` of a square `2n x 2n` matrix.
pub fn half_dim<S: Scalar>(m: &DMatrix<S>) -> Result<usize> {
    let d = require_square(m)?;
    if d % 2 != 0 || d == 0 {
        return Err(Error::OddDimension(d));
    }
    Ok(d / 2)
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s))
}

/// Max-abs deviation of `FᵀF` from the identity.
pub fn gram_residual(frame: &DMatrix<f64>) -> f64 {
    let g = frame.transpose() * frame;
    max_abs(&(g - DMatrix::identity(frame.ncols(), frame.ncols())))
}

/// Orthonormalize columns by QR, fixing signs so the diagonal of R is
/// non-negative (keeps the orientation of the input frame).
pub fn orthonormalize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..q.ncols() {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Row-major nested vectors, the JSON matrix layout.
pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
    }
    Ok(DMatrix::from_fn(rows.len(), cols, |r, c| rows[r][c]))
}

pub fn serialize_rows<Z: serde::Serializer>(m: &DMatrix<f64>, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
    serde::Serialize::serialize(&to_rows(m), serializer)
}

pub fn deserialize_rows<'de, D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<DMatrix<f64>, D::Error> {
    let rows: Vec<Vec<f64>> = serde::Deserialize::deserialize(deserializer)?;
    from_rows(&rows).map_err(serde::de::Error::custom)
}

pub fn serialize_vector<Z: serde::Serializer>(v: &DVector<f64>, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
    serde::Serialize::serialize(v.as_slice(), serializer)
}

pub fn deserialize_vector<'de, D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<DVector<f64>, D::Error> {
    let v: Vec<f64> = serde::Deserialize::deserialize(deserializer)?;
    Ok(DVector::from_vec(v))
}

/// Max-abs asymmetry `max |m − mᵀ|`.
pub fn asymmetry(m: &DMatrix<f64>) -> f64 {
    max_abs(&(m - m.transpose()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn det_exact_matches_hand_value() {
        // [[2, 1/2], [3, 4]] -> 8 - 3/2 = 13/2
        let m = DMatrix::from_row_slice(2, 2, &[q(2, 1), q(1, 2), q(3, 1), q(4, 1)]);
        assert_eq!(det(&m), q(13, 2));
    }

    #[test]
    fn det_needs_row_swap() {
        let m = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(det(&m), -1.0);
    }

    #[test]
    fn rank_of_singular_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 1.0, 0.0, 1.0]);
        assert_eq!(rank(&m, 1e-12), 2);
        let e = m.map(|x| Rational::from_i64(x as i64));
        assert_eq!(rank(&e, 0.0), 2);
    }

    #[test]
    fn orthonormalize_keeps_orientation() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 3.0]);
        let q = orthonormalize(&m);
        assert!(gram_residual(&q) < 1e-14);
        assert!(q.determinant() > 0.0);
    }
}
