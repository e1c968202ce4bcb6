use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::forms::FloatForm;
use crate::linalg;
use crate::scalar::{factorial, Scalar};
use crate::symplin::{standard_j, standard_omega};

/// Default Gram tolerance for orthonormal frames.
pub const FRAME_TOL: f64 = 1e-10;

/// `k` vectors in `ℝⁿ` stored as the columns of an `n × k` matrix. The
/// frame order fixes the orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    vectors: DMatrix<f64>,
}

impl Frame {
    pub fn new(vectors: DMatrix<f64>) -> Self {
        Frame { vectors }
    }

    /// Accepts the columns only if `FᵀF` is within `tol` of the identity.
    pub fn orthonormal(vectors: DMatrix<f64>, tol: f64) -> Result<Self> {
        let residual = linalg::gram_residual(&vectors);
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(Frame { vectors })
    }

    pub fn from_vectors(vs: &[DVector<f64>]) -> Self {
        Frame { vectors: DMatrix::from_columns(vs) }
    }

    pub fn columns(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn len(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.ncols() == 0
    }

    pub fn gram_residual(&self) -> f64 {
        linalg::gram_residual(&self.vectors)
    }

    fn require_orthonormal(&self) -> Result<()> {
        let residual = self.gram_residual();
        if residual > FRAME_TOL {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(())
    }
}

impl Serialize for Frame {
    /// Serialized as the list of vectors.
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let cols: Vec<Vec<f64>> = self.vectors.column_iter().map(|c| c.iter().copied().collect()).collect();
        cols.serialize(serializer)
    }
}

/// `α(v₁, …, v_k) ≥ 1 − tol` on an orthonormal frame.
pub fn is_calibrated_subspace(alpha: &FloatForm, frame: &Frame, tol: f64) -> Result<bool> {
    frame.require_orthonormal()?;
    Ok(alpha.evaluate_columns(frame.columns())? >= 1.0 - tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WirtingerReport {
    /// `|ω^k(frame)| / k!`.
    pub value: f64,
    pub is_equality: bool,
    #[serde(rename = "is_J_invariant")]
    pub is_j_invariant: bool,
    /// Spectral norm of `(I − P) J P`.
    pub j_residual: f64,
}

/// Wirtinger check on an orthonormal `2k`-frame in `ℝ²ⁿ`.
pub fn wirtinger_check(frame: &Frame, tol: f64) -> Result<WirtingerReport> {
    frame.require_orthonormal()?;
    let dim = frame.dim();
    if !dim.is_multiple_of(2) || dim == 0 {
        return Err(Error::OddDimension(dim));
    }
    if !frame.len().is_multiple_of(2) || frame.len() > dim || frame.is_empty() {
        return Err(Error::WrongVectorCount { expected: 2 * (frame.len() / 2 + 1), found: frame.len() });
    }
    let n = dim / 2;
    let k = frame.len() / 2;
    let wk = standard_omega::<f64>(n).power(k)?;
    let value = wk.evaluate_columns(frame.columns())?.abs() / factorial::<f64>(k);

    let f = frame.columns();
    let p = f * f.transpose();
    let off = (DMatrix::identity(dim, dim) - &p) * standard_j(n) * &p;
    let j_residual = linalg::spectral_norm(&off);
    Ok(WirtingerReport { value, is_equality: value >= 1.0 - tol, is_j_invariant: j_residual <= tol, j_residual })
}

/// Orthogonalization without normalization: `v₁ ∧ … ∧ v_k = w₁ ∧ … ∧ w_k`
/// and `|v_j| ≤ |w_j|`. Exact in rational mode.
pub fn gram_schmidt_bounded<S: Scalar>(ws: &[DVector<S>]) -> Result<Vec<DVector<S>>> {
    let mut vs: Vec<DVector<S>> = Vec::with_capacity(ws.len());
    let mut norms: Vec<S> = Vec::with_capacity(ws.len());
    for (j, w) in ws.iter().enumerate() {
        if let Some(first) = ws.first() {
            if first.len() != w.len() {
                return Err(Error::DimensionMismatch { expected: first.len(), found: w.len() });
            }
        }
        let mut v = w.clone();
        for (u, uu) in vs.iter().zip(&norms) {
            let c = linalg::dot(w, u) / uu.clone();
            for (vi, ui) in v.iter_mut().zip(u.iter()) {
                *vi = vi.clone() - ui.clone() * c.clone();
            }
        }
        let vv = linalg::dot(&v, &v);
        let ww = linalg::dot(w, w);
        let dependent = if S::EXACT {
            vv.is_zero()
        } else {
            vv.to_f64().sqrt() < 1e-12 * ww.to_f64().sqrt().max(1.0)
        };
        if dependent {
            return Err(Error::LinearlyDependent { index: j, pivot: vv.to_f64().sqrt() });
        }
        vs.push(v);
        norms.push(vv);
    }
    Ok(vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calib::catalog::catalog_by_name;
    use crate::forms::KForm;
    use crate::sampling;
    use crate::scalar::Rational;
    use crate::symplin::standard_omega;

    fn unit(dim: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn calibrated_subspace_examples() {
        let w = standard_omega::<f64>(2);
        let ef = Frame::from_vectors(&[unit(4, 0), unit(4, 2)]);
        assert!(is_calibrated_subspace(&w, &ef, 1e-12).unwrap());
        let re = catalog_by_name("slag_re(0)", 4).unwrap().real().unwrap().clone();
        assert!(is_calibrated_subspace(&re, &Frame::from_vectors(&[unit(4, 0), unit(4, 1)]), 1e-12).unwrap());
        assert!(!is_calibrated_subspace(&re, &ef, 1e-12).unwrap());
        let skew = Frame::new(DMatrix::from_column_slice(4, 2, &[1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]));
        assert!(matches!(is_calibrated_subspace(&re, &skew, 1e-12), Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn wirtinger_examples() {
        let n = 4;
        let complex_frame = Frame::from_vectors(&[unit(8, 0), unit(8, 4), unit(8, 1), unit(8, 5)]);
        let r = wirtinger_check(&complex_frame, 1e-9).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15 && r.is_equality && r.is_j_invariant);

        let lagrangian = Frame::from_vectors(&(0..n).map(|i| unit(8, i)).collect::<Vec<_>>());
        let r = wirtinger_check(&lagrangian, 1e-9).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.is_equality && !r.is_j_invariant);
    }

    #[test]
    fn unitary_images_stay_calibrated() {
        let mut rng = sampling::rng(6);
        for _ in 0..10 {
            // unitary = orthogonal ∩ symplectic; exp of J·H with H commuting with J
            let h = sampling::uniform_symmetric(&mut rng, 6, 1.0);
            let j = standard_j(3);
            let h = (&h - &j * &h * &j) * 0.5;
            let u = (&j * h).exp();
            let frame = Frame::new(&u * DMatrix::from_columns(&[unit(6, 0), unit(6, 3), unit(6, 1), unit(6, 4)]));
            let r = wirtinger_check(&frame, 1e-9).unwrap();
            assert!((r.value - 1.0).abs() < 1e-9);
            assert!(r.is_equality && r.is_j_invariant);
        }
    }

    #[test]
    fn gram_schmidt_examples() {
        let ws = vec![unit(3, 0), unit(3, 1)];
        assert_eq!(gram_schmidt_bounded(&ws).unwrap(), ws);
        let ws = vec![unit(2, 0), unit(2, 0) + unit(2, 1)];
        assert_eq!(gram_schmidt_bounded(&ws).unwrap(), vec![unit(2, 0), unit(2, 1)]);
        let dep = vec![unit(2, 0), unit(2, 0) * 2.0];
        assert!(matches!(gram_schmidt_bounded(&dep), Err(Error::LinearlyDependent { index: 1, .. })));
    }

    #[test]
    fn gram_schmidt_exact_wedge_and_norms() {
        let q = |a: i64, b: i64| Rational::from_ratio(a, b);
        let ws = vec![
            DVector::from_vec(vec![q(1, 1), q(2, 1), q(0, 1), q(-1, 3)]),
            DVector::from_vec(vec![q(1, 2), q(1, 1), q(3, 1), q(0, 1)]),
            DVector::from_vec(vec![q(0, 1), q(-1, 1), q(1, 1), q(2, 1)]),
        ];
        let vs = gram_schmidt_bounded(&ws).unwrap();
        let wedge = |xs: &[DVector<Rational>]| {
            xs.iter()
                .map(|x| KForm::from_terms(4, 1, (0..4).map(|i| (vec![i], x[i].clone()))).unwrap())
                .reduce(|a, b| a.wedge(&b).unwrap())
                .unwrap()
        };
        assert_eq!(wedge(&vs), wedge(&ws));
        for (v, w) in vs.iter().zip(&ws).skip(1) {
            assert!(linalg::dot(v, v) < linalg::dot(w, w));
        }
    }
}
