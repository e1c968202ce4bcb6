use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::multi_index::{sort_with_sign, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{Rational, Scalar};

/// Constant-coefficient alternating `k`-form on `ℝⁿ`.
///
/// Coefficients are stored sparsely against the basis `e^{i₁} ∧ … ∧ e^{i_k}`
/// with `i₁ < … < i_k`, keyed in lexicographic order so iteration (and thus
/// any serialized output) is deterministic. Exact zeros are never stored.
///
/// A form of degree greater than its dimension is necessarily zero; such
/// forms can arise from [`KForm::wedge`] or [`KForm::power`] and carry no
/// terms.
#[derive(Clone, PartialEq, Debug)]
pub struct KForm<S: Scalar> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

pub type FloatForm = KForm<f64>;
pub type ExactForm = KForm<Rational>;

impl<S: Scalar> KForm<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm { dim, degree, coeffs: BTreeMap::new() }
    }

    /// Degree-0 form with the given value.
    pub fn scalar(dim: usize, value: S) -> Self {
        let mut f = Self::zero(dim, 0);
        f.insert(MultiIndex::empty(), value);
        f
    }

    /// `e^{i₁} ∧ … ∧ e^{i_k}` for 0-based indices in any order (the sign of
    /// the sorting permutation is applied; repeated indices give zero).
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let mut f = Self::zero(dim, indices.len());
        f.add_term(indices, S::one())?;
        Ok(f)
    }

    /// Builds a form from `(indices, coefficient)` pairs; indices 0-based in
    /// any order.
    pub fn from_terms<I>(dim: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        if degree > dim {
            return Err(Error::InvalidDegree { degree, dim });
        }
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            f.add_term(&idx, c)?;
        }
        Ok(f)
    }

    /// Adds `c · e^{indices}` to the form.
    pub fn add_term(&mut self, indices: &[usize], c: S) -> Result<()> {
        if indices.len() != self.degree {
            return Err(Error::InvalidDegree { degree: indices.len(), dim: self.dim });
        }
        if indices.iter().any(|&i| i >= self.dim) {
            return Err(Error::InvalidMultiIndex { indices: indices.to_vec(), dim: self.dim });
        }
        let Some((idx, odd)) = sort_with_sign(indices) else {
            return Ok(());
        };
        self.accumulate(idx, if odd { -c } else { c });
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> S {
        self.coeffs.get(idx).cloned().unwrap_or_else(S::zero)
    }

    /// Terms in lexicographic order of their multi-index.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub(crate) fn insert(&mut self, idx: MultiIndex, c: S) {
        if c.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
    }

    fn accumulate(&mut self, idx: MultiIndex, c: S) {
        let total = match self.coeffs.remove(&idx) {
            Some(old) => old + c,
            None => c,
        };
        self.insert(idx, total);
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.degree != other.degree {
            return Err(Error::InvalidDegree { degree: other.degree, dim: other.dim });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.accumulate(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-S::one()))
    }

    pub fn scale(&self, s: S) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (idx, c) in &self.coeffs {
            out.insert(idx.clone(), c.clone() * s.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-S::one())
    }

    /// Exterior product; sign from the parity of the sorted merge.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        if out.degree > self.dim {
            return Ok(out);
        }
        for (ia, ca) in &self.coeffs {
            for (ib, cb) in &other.coeffs {
                if let Some((idx, odd)) = ia.merge(ib) {
                    let c = ca.clone() * cb.clone();
                    out.accumulate(idx, if odd { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product `i_v α`, inserting `v` into the first slot.
    pub fn contract(&self, v: &DVector<S>) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        if self.degree == 0 {
            return Err(Error::InvalidDegree { degree: 0, dim: self.dim });
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.coeffs {
            for (pos, &i) in idx.as_slice().iter().enumerate() {
                if v[i].is_zero() {
                    continue;
                }
                let term = c.clone() * v[i].clone();
                out.accumulate(idx.without_position(pos), if pos % 2 == 1 { -term } else { term });
            }
        }
        Ok(out)
    }

    /// Pullback `A*α`, defined by `(A*α)(v₁,…,v_k) = α(Av₁,…,Av_k)`.
    ///
    /// Composition order: `(AB)*α = B*(A*α)`, i.e.
    /// `α.pullback(&(a * b)) == α.pullback(&a)?.pullback(&b)?`.
    pub fn pullback(&self, a: &DMatrix<S>) -> Result<Self> {
        if a.nrows() != self.dim || a.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.nrows().max(a.ncols()) });
        }
        let mut out = Self::zero(self.dim, self.degree);
        if self.is_zero() {
            return Ok(out);
        }
        if self.degree == 0 {
            return Ok(self.clone());
        }
        let k = self.degree;
        for cols in MultiIndex::combinations(self.dim, k) {
            let mut total = S::zero();
            for (rows, c) in &self.coeffs {
                let minor = DMatrix::from_fn(k, k, |r, s| {
                    a[(rows.as_slice()[r], cols.as_slice()[s])].clone()
                });
                total = total + c.clone() * linalg::det(&minor);
            }
            out.insert(cols, total);
        }
        Ok(out)
    }

    /// `α(v₁, …, v_k)`.
    pub fn evaluate(&self, vs: &[DVector<S>]) -> Result<S> {
        if vs.len() != self.degree {
            return Err(Error::WrongVectorCount { expected: self.degree, found: vs.len() });
        }
        for v in vs {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
            }
        }
        let m = DMatrix::from_fn(self.dim, vs.len(), |r, c| vs[c][r].clone());
        self.evaluate_columns(&m)
    }

    /// `α` evaluated on the columns of an `n × k` matrix.
    pub fn evaluate_columns(&self, m: &DMatrix<S>) -> Result<S> {
        if m.ncols() != self.degree {
            return Err(Error::WrongVectorCount { expected: self.degree, found: m.ncols() });
        }
        if m.nrows() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: m.nrows() });
        }
        let k = self.degree;
        let mut total = S::zero();
        for (rows, c) in &self.coeffs {
            let minor = DMatrix::from_fn(k, k, |r, s| m[(rows.as_slice()[r], s)].clone());
            total = total + c.clone() * linalg::det(&minor);
        }
        Ok(total)
    }

    /// `α^k` for a 2-form (`α⁰ = 1`). Zero when `2k > dim`.
    pub fn power(&self, k: usize) -> Result<Self> {
        if self.degree != 2 {
            return Err(Error::InvalidDegree { degree: self.degree, dim: self.dim });
        }
        let mut acc = Self::scalar(self.dim, S::one());
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Euclidean Hodge star for the orientation `e¹ ∧ … ∧ eⁿ`:
    /// `α ∧ ⋆β = ⟨α, β⟩ vol`.
    pub fn hodge_star(&self) -> Self {
        let mut out = Self::zero(self.dim, self.dim.saturating_sub(self.degree));
        for (idx, c) in &self.coeffs {
            let comp = idx.complement(self.dim);
            let (_, odd) = idx.merge(&comp).expect("complement is disjoint");
            out.insert(comp, if odd { -c.clone() } else { c.clone() });
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().fold(0.0_f64, |acc, c| acc.max(c.magnitude()))
    }

    /// Max-abs coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs_coeff())
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> KForm<T> {
        let mut out = KForm::zero(self.dim, self.degree);
        for (idx, c) in &self.coeffs {
            out.insert(idx.clone(), f(c));
        }
        out
    }

    pub fn to_float(&self) -> FloatForm {
        self.map_scalar(|c| c.to_f64())
    }
}

impl FloatForm {
    /// Default relative tolerance for float form equality.
    pub const EQ_TOL: f64 = 1e-9;

    /// Float equality: max-abs coefficient difference at most
    /// `tol · (1 + max coefficient magnitude)`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.dim != other.dim || self.degree != other.degree {
            return false;
        }
        let scale = 1.0 + self.max_abs_coeff().max(other.max_abs_coeff());
        self.max_abs_diff(other).is_ok_and(|d| d <= tol * scale)
    }
}

/// Evaluates `ω^k(u₁, …, u_{2k})` through the permutation sum
/// `2^{-k} Σ_{σ ∈ S_{2k}} sign(σ) Π ω(u_{σ(2i−1)}, u_{σ(2i)})`,
/// accumulated over subsets of unused vectors.
///
/// This is an independent route to `power(ω, k)` followed by `evaluate`;
/// the two must agree exactly in rational mode.
pub fn omega_k_sum_formula<S: Scalar>(us: &[DVector<S>], omega: &KForm<S>) -> Result<S> {
    if omega.degree() != 2 {
        return Err(Error::InvalidDegree { degree: omega.degree(), dim: omega.dim() });
    }
    if !us.len().is_multiple_of(2) {
        return Err(Error::WrongVectorCount { expected: us.len() + 1, found: us.len() });
    }
    let m = us.len();
    let k = m / 2;
    let mut pairing = vec![vec![S::zero(); m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                pairing[i][j] = omega.evaluate(&[us[i].clone(), us[j].clone()])?;
            }
        }
    }
    // Choosing the j-th smallest unused index contributes j inversions, so
    // the sum over orderings factors through the set of unused indices.
    let full = (1usize << m) - 1;
    let mut partial: Vec<Option<S>> = vec![None; 1 << m];
    partial[0] = Some(S::one());
    for mask in 1..=full {
        if mask.count_ones() % 2 != 0 {
            continue;
        }
        let remaining: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let mut total = S::zero();
        for (ja, &a) in remaining.iter().enumerate() {
            for (jb, &b) in remaining.iter().enumerate() {
                if a == b {
                    continue;
                }
                let rest = partial[mask & !(1 << a) & !(1 << b)].clone().expect("even subsets filled first");
                let t = pairing[a][b].clone() * rest;
                let inversions = ja + if jb > ja { jb - 1 } else { jb };
                total = if inversions % 2 == 0 { total + t } else { total - t };
            }
        }
        partial[mask] = Some(total);
    }
    let total = partial[full].take().expect("full set filled");
    let two_k = (0..k).fold(S::one(), |acc, _| acc * S::from_i64(2));
    Ok(total / two_k)
}

/// Matrix of `L^j: Λ^{n−j} → Λ^{n+j}, θ ↦ θ ∧ ω^j` in lexicographic bases
/// (rows indexed by `(n+j)`-subsets, columns by `(n−j)`-subsets).
pub fn lefschetz_matrix<S: Scalar>(omega: &KForm<S>, j: usize) -> Result<DMatrix<S>> {
    if omega.degree() != 2 {
        return Err(Error::InvalidDegree { degree: omega.degree(), dim: omega.dim() });
    }
    if !omega.dim().is_multiple_of(2) {
        return Err(Error::OddDimension(omega.dim()));
    }
    let n = omega.dim() / 2;
    if j == 0 || j > n {
        return Err(Error::OutOfRange(format!("Lefschetz power j = {j} must lie in 1..={n}")));
    }
    let dim = omega.dim();
    let wj = omega.power(j)?;
    let rows: Vec<MultiIndex> = MultiIndex::combinations(dim, n + j).collect();
    let cols: Vec<MultiIndex> = MultiIndex::combinations(dim, n - j).collect();
    let mut m = DMatrix::from_element(rows.len(), cols.len(), S::zero());
    for (c, idx) in cols.iter().enumerate() {
        let theta = KForm::basis(dim, idx.as_slice())?;
        let image = theta.wedge(&wj)?;
        for (r, ridx) in rows.iter().enumerate() {
            m[(r, c)] = image.coeff(ridx);
        }
    }
    Ok(m)
}
