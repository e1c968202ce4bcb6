use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::kform::KForm;
use super::multi_index::MultiIndex;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Complex-valued constant-coefficient form `re + i·im`.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexKForm<S: Scalar> {
    re: KForm<S>,
    im: KForm<S>,
}

impl<S: Scalar> ComplexKForm<S> {
    pub fn new(re: KForm<S>, im: KForm<S>) -> Result<Self> {
        if re.dim() != im.dim() {
            return Err(Error::DimensionMismatch { expected: re.dim(), found: im.dim() });
        }
        if re.degree() != im.degree() {
            return Err(Error::InvalidDegree { degree: im.degree(), dim: im.dim() });
        }
        Ok(ComplexKForm { re, im })
    }

    pub fn from_real(re: KForm<S>) -> Self {
        let im = KForm::zero(re.dim(), re.degree());
        ComplexKForm { re, im }
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        ComplexKForm { re: KForm::zero(dim, degree), im: KForm::zero(dim, degree) }
    }

    pub fn re(&self) -> &KForm<S> {
        &self.re
    }

    pub fn im(&self) -> &KForm<S> {
        &self.im
    }

    pub fn dim(&self) -> usize {
        self.re.dim()
    }

    pub fn degree(&self) -> usize {
        self.re.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Coefficient at `idx` as `(re, im)`.
    pub fn coeff(&self, idx: &MultiIndex) -> (S, S) {
        (self.re.coeff(idx), self.im.coeff(idx))
    }

    /// `(a + ib) ∧ (c + id) = (a∧c − b∧d) + i(a∧d + b∧c)`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let re = self.re.wedge(&other.re)?.try_sub(&self.im.wedge(&other.im)?)?;
        let im = self.re.wedge(&other.im)?.try_add(&self.im.wedge(&other.re)?)?;
        Ok(ComplexKForm { re, im })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(ComplexKForm { re: self.re.try_add(&other.re)?, im: self.im.try_add(&other.im)? })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(ComplexKForm { re: self.re.try_sub(&other.re)?, im: self.im.try_sub(&other.im)? })
    }

    /// Multiplication by the complex scalar `a + ib`.
    pub fn scale(&self, a: S, b: S) -> Self {
        let re = self.re.scale(a.clone()).try_sub(&self.im.scale(b.clone()));
        let im = self.re.scale(b).try_add(&self.im.scale(a));
        ComplexKForm {
            re: re.expect("same shape"),
            im: im.expect("same shape"),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexKForm { re: self.re.clone(), im: self.im.neg() }
    }

    /// Pullback by a real linear map; same convention as [`KForm::pullback`].
    pub fn pullback(&self, a: &DMatrix<S>) -> Result<Self> {
        Ok(ComplexKForm { re: self.re.pullback(a)?, im: self.im.pullback(a)? })
    }

    /// Interior product with a real vector.
    pub fn contract(&self, v: &DVector<S>) -> Result<Self> {
        Ok(ComplexKForm { re: self.re.contract(v)?, im: self.im.contract(v)? })
    }

    /// Value on real vectors as `(re, im)`.
    pub fn evaluate(&self, vs: &[DVector<S>]) -> Result<(S, S)> {
        Ok((self.re.evaluate(vs)?, self.im.evaluate(vs)?))
    }

    pub fn evaluate_columns(&self, m: &DMatrix<S>) -> Result<(S, S)> {
        Ok((self.re.evaluate_columns(m)?, self.im.evaluate_columns(m)?))
    }

    pub fn to_float(&self) -> ComplexKForm<f64> {
        ComplexKForm { re: self.re.to_float(), im: self.im.to_float() }
    }

    /// Union of the multi-indices carrying a nonzero real or imaginary part.
    pub fn support(&self) -> Vec<MultiIndex> {
        let mut keys: Vec<MultiIndex> = self
            .re
            .terms()
            .chain(self.im.terms())
            .map(|(k, _)| k.clone())
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }
}

impl ComplexKForm<f64> {
    pub fn coeff_c(&self, idx: &MultiIndex) -> Complex64 {
        Complex64::new(self.re.coeff(idx), self.im.coeff(idx))
    }

    pub fn evaluate_c(&self, m: &DMatrix<f64>) -> Result<Complex64> {
        let (re, im) = self.evaluate_columns(m)?;
        Ok(Complex64::new(re, im))
    }

    pub fn scale_c(&self, z: Complex64) -> Self {
        self.scale(z.re, z.im)
    }

    /// Largest modulus of a coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.support()
            .iter()
            .fold(0.0_f64, |acc, k| acc.max(self.coeff_c(k).norm()))
    }

    /// Max over coefficients of the larger of the real and imaginary
    /// differences.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let dr = self.re.max_abs_diff(&other.re)?;
        let di = self.im.max_abs_diff(&other.im)?;
        Ok(dr.max(di))
    }

    /// Complex matrix of `v ↦ i_v Υ`: column `j` holds the coefficients of
    /// `i_{e_j} Υ` in lexicographic order of the `(k−1)`-subsets.
    pub fn contraction_matrix(&self) -> Result<DMatrix<Complex64>> {
        let dim = self.dim();
        if self.degree() == 0 {
            return Err(Error::InvalidDegree { degree: 0, dim });
        }
        let rows: Vec<MultiIndex> = MultiIndex::combinations(dim, self.degree() - 1).collect();
        let mut m = DMatrix::from_element(rows.len(), dim, Complex64::new(0.0, 0.0));
        for j in 0..dim {
            let mut e = DVector::zeros(dim);
            e[j] = 1.0;
            let c = self.contract(&e)?;
            for (r, idx) in rows.iter().enumerate() {
                m[(r, j)] = c.coeff_c(idx);
            }
        }
        Ok(m)
    }
}
