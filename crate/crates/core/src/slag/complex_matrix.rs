use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::symplin::standard_j;

/// `X + iY` with `X`, `Y` real `n × n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrixDocument", into = "ComplexMatrixDocument")]
pub struct ComplexMatrix {
    re: DMatrix<f64>,
    im: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct ComplexMatrixDocument {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<ComplexMatrixDocument> for ComplexMatrix {
    type Error = Error;

    fn try_from(doc: ComplexMatrixDocument) -> Result<Self> {
        ComplexMatrix::new(linalg::from_rows(&doc.re)?, linalg::from_rows(&doc.im)?)
    }
}

impl From<ComplexMatrix> for ComplexMatrixDocument {
    fn from(m: ComplexMatrix) -> Self {
        ComplexMatrixDocument { re: linalg::to_rows(&m.re), im: linalg::to_rows(&m.im) }
    }
}

impl ComplexMatrix {
    pub fn new(re: DMatrix<f64>, im: DMatrix<f64>) -> Result<Self> {
        if re.shape() != im.shape() {
            return Err(Error::DimensionMismatch { expected: re.nrows(), found: im.nrows() });
        }
        linalg::require_square(&re)?;
        Ok(ComplexMatrix { re, im })
    }

    pub fn identity(n: usize) -> Self {
        ComplexMatrix { re: DMatrix::identity(n, n), im: DMatrix::zeros(n, n) }
    }

    /// `z · I`.
    pub fn scalar(n: usize, z: Complex64) -> Self {
        ComplexMatrix { re: DMatrix::identity(n, n) * z.re, im: DMatrix::identity(n, n) * z.im }
    }

    pub fn from_complex(m: &DMatrix<Complex64>) -> Self {
        ComplexMatrix { re: m.map(|z| z.re), im: m.map(|z| z.im) }
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.re.nrows(), self.re.ncols(), |r, c| Complex64::new(self.re[(r, c)], self.im[(r, c)]))
    }

    pub fn re(&self) -> &DMatrix<f64> {
        &self.re
    }

    pub fn im(&self) -> &DMatrix<f64> {
        &self.im
    }

    pub fn n(&self) -> usize {
        self.re.nrows()
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix { re: self.re.transpose(), im: -self.im.transpose() }
    }

    pub fn det(&self) -> Complex64 {
        self.to_complex().determinant()
    }
}

/// `X + iY ↦ [[X, −Y], [Y, X]]`.
pub fn embed_complex(m: &ComplexMatrix) -> DMatrix<f64> {
    let n = m.n();
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    a.view_mut((0, 0), (n, n)).copy_from(&m.re);
    a.view_mut((n, n), (n, n)).copy_from(&m.re);
    a.view_mut((n, 0), (n, n)).copy_from(&m.im);
    a.view_mut((0, n), (n, n)).copy_from(&(-&m.im));
    a
}

/// `‖AJ − JA‖∞`.
pub fn commutator_residual(a: &DMatrix<f64>) -> Result<f64> {
    let n = linalg::half_dim(a)?;
    let j = standard_j(n);
    Ok(linalg::max_abs(&(a * &j - &j * a)))
}

/// Inverse of [`embed_complex`] on complex-linear matrices; `None` when
/// `‖AJ − JA‖∞ > tol`.
pub fn extract_complex(a: &DMatrix<f64>, tol: f64) -> Result<Option<ComplexMatrix>> {
    let n = linalg::half_dim(a)?;
    if commutator_residual(a)? > tol {
        return Ok(None);
    }
    let x = (a.view((0, 0), (n, n)) + a.view((n, n), (n, n))) * 0.5;
    let y = (a.view((n, 0), (n, n)) - a.view((0, n), (n, n))) * 0.5;
    Ok(Some(ComplexMatrix { re: x, im: y }))
}

/// Complex Gaussian matrix rescaled by `det^{−1/n}` (principal branch).
pub fn random_sl_nc<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let re = sampling::gaussian_matrix(rng, n, n);
        let im = sampling::gaussian_matrix(rng, n, n);
        let m = ComplexMatrix { re, im }.to_complex();
        let d = m.determinant();
        if d.norm() < 1e-6 {
            continue;
        }
        let scale = d.powf(-1.0 / n as f64);
        return ComplexMatrix::from_complex(&(m * scale));
    }
}

/// Complex Gaussian matrix, unnormalized.
pub fn random_gl_nc<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix { re: sampling::gaussian_matrix(rng, n, n), im: sampling::gaussian_matrix(rng, n, n) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_times_identity_embeds_to_j() {
        for n in 1..=4 {
            let i = ComplexMatrix::scalar(n, Complex64::i());
            assert_eq!(embed_complex(&i), standard_j(n));
            assert_eq!(extract_complex(&standard_j(n), 1e-12).unwrap().unwrap(), i);
        }
    }

    #[test]
    fn transpose_is_adjoint() {
        let mut rng = sampling::rng(1);
        let m = random_gl_nc(&mut rng, 3);
        assert_eq!(embed_complex(&m).transpose(), embed_complex(&m.adjoint()));
    }

    #[test]
    fn round_trip_and_rejection() {
        let mut rng = sampling::rng(2);
        let m = random_gl_nc(&mut rng, 4);
        let back = extract_complex(&embed_complex(&m), 1e-12).unwrap().unwrap();
        assert_eq!(back, m);
        let mut a = embed_complex(&m);
        a[(0, 1)] += 1e-3;
        assert!(extract_complex(&a, 1e-8).unwrap().is_none());
    }

    #[test]
    fn sl_samples_have_unit_det() {
        let mut rng = sampling::rng(3);
        for n in 1..=5 {
            let m = random_sl_nc(&mut rng, n);
            assert!((m.det() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn json_schema() {
        let m = ComplexMatrix::scalar(1, Complex64::new(0.5, -2.0));
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"re":[[0.5]],"im":[[-2.0]]}"#);
        assert_eq!(serde_json::from_str::<ComplexMatrix>(&text).unwrap(), m);
    }
}
