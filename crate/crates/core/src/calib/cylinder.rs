use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// `x ↦ Ax + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(serialize_with = "linalg::serialize_rows", deserialize_with = "linalg::deserialize_rows")]
    pub linear: DMatrix<f64>,
    #[serde(serialize_with = "linalg::serialize_vector", deserialize_with = "linalg::deserialize_vector")]
    pub translation: DVector<f64>,
}

impl AffineMap {
    pub fn new(linear: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        if linear.nrows() != translation.len() {
            return Err(Error::DimensionMismatch { expected: linear.nrows(), found: translation.len() });
        }
        Ok(AffineMap { linear, translation })
    }

    pub fn linear(linear: DMatrix<f64>) -> Self {
        let rows = linear.nrows();
        AffineMap { linear, translation: DVector::zeros(rows) }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.linear * x + &self.translation
    }
}

/// `Z_L(R) = {x : |proj_L x| ≤ R}` for an orthonormal basis `L` of a
/// `k`-plane, stored as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct CalibratedCylinder {
    basis: DMatrix<f64>,
    radius: f64,
}

impl CalibratedCylinder {
    pub fn new(basis: DMatrix<f64>, radius: f64) -> Result<Self> {
        require_orthonormal_basis(&basis)?;
        if !(radius > 0.0) {
            return Err(Error::OutOfRange(format!("cylinder radius {radius} must be positive")));
        }
        Ok(CalibratedCylinder { basis, radius })
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        (self.basis.transpose() * x).norm() <= self.radius
    }
}

pub fn require_orthonormal_basis(basis: &DMatrix<f64>) -> Result<()> {
    if basis.ncols() == 0 || basis.ncols() > basis.nrows() {
        return Err(Error::WrongVectorCount { expected: basis.nrows(), found: basis.ncols() });
    }
    let residual = linalg::gram_residual(basis);
    if residual > 1e-10 {
        return Err(Error::NotOrthonormal { residual });
    }
    Ok(())
}

/// `r · σ_max(Lᵀ A) + |Lᵀ b|`. Equals the minimal enclosing radius when
/// `Lᵀ b = 0` or `Lᵀ b` lies along the top left singular direction, and
/// bounds it from above otherwise.
pub fn enclosing_radius_bound(basis: &DMatrix<f64>, map: &AffineMap, r: f64) -> Result<f64> {
    require_orthonormal_basis(basis)?;
    check_shapes(basis, map)?;
    let lt = basis.transpose();
    Ok(r * linalg::spectral_norm(&(&lt * &map.linear)) + (&lt * &map.translation).norm())
}

/// Minimal `R` with `A(B(r)) + b ⊆ Z_L(R)`, i.e. `max_{|x| ≤ r} |Lᵀ(Ax + b)|`.
///
/// With `M = LᵀA` and `c = Lᵀb` this is the largest-multiplier solution of
/// the secular equation `|(μI − MᵀM)⁻¹ Mᵀc| = r`; for `c = 0` it reduces to
/// `r · σ_max(M)`.
pub fn enclosing_radius(basis: &DMatrix<f64>, map: &AffineMap, r: f64) -> Result<f64> {
    require_orthonormal_basis(basis)?;
    check_shapes(basis, map)?;
    if !(r > 0.0) {
        return Err(Error::OutOfRange(format!("ball radius {r} must be positive")));
    }
    let lt = basis.transpose();
    let m = &lt * &map.linear;
    let c = &lt * &map.translation;
    let sigma = linalg::spectral_norm(&m);
    if c.norm() <= f64::EPSILON * (1.0 + sigma * r) {
        return Ok(r * sigma + c.norm());
    }
    let x = farthest_point(&m, &c, r);
    let value = (&m * &x + &c).norm();
    // ±r·v₁ already reach √(r²σ² + |c|²)
    Ok(value.max((r * sigma).hypot(c.norm())))
}

fn check_shapes(basis: &DMatrix<f64>, map: &AffineMap) -> Result<()> {
    if map.linear.nrows() != basis.nrows() {
        return Err(Error::DimensionMismatch { expected: basis.nrows(), found: map.linear.nrows() });
    }
    if map.translation.len() != basis.nrows() {
        return Err(Error::DimensionMismatch { expected: basis.nrows(), found: map.translation.len() });
    }
    Ok(())
}

/// Maximizer of `|Mx + c|` over `|x| = r`.
fn farthest_point(m: &DMatrix<f64>, c: &DVector<f64>, r: f64) -> DVector<f64> {
    let h = m.transpose() * m;
    let eig = h.symmetric_eigen();
    let lambda = &eig.eigenvalues;
    let v = &eig.eigenvectors;
    let g = v.transpose() * (m.transpose() * c);
    let top = lambda.max();
    let scale = top.abs().max(1.0);
    let in_top: Vec<bool> = lambda.iter().map(|&l| top - l <= 1e-12 * scale).collect();
    let g_top: f64 = g.iter().zip(&in_top).filter(|(_, &t)| t).map(|(x, _)| x * x).sum::<f64>().sqrt();
    let g_all = g.norm();

    let point = |mu: f64| -> DVector<f64> {
        let coords = DVector::from_fn(g.len(), |i, _| if in_top[i] && mu == top { 0.0 } else { g[i] / (mu - lambda[i]) });
        v * coords
    };

    if g_top <= 1e-14 * g_all.max(1e-300) {
        let rest = point(top);
        let rest_norm = rest.norm();
        if rest_norm <= r {
            let idx = in_top.iter().position(|&t| t).expect("top eigenvalue exists");
            let fill = (r * r - rest_norm * rest_norm).max(0.0).sqrt();
            return rest + v.column(idx) * fill;
        }
    }

    // |x(μ)| decreases on (top, ∞); the root lies in t = μ − top ∈ [g_top/r, g_all/r]
    let norm_at = |t: f64| -> f64 {
        g.iter()
            .zip(lambda.iter())
            .map(|(gi, li)| {
                let d = top + t - li;
                (gi / d).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    };
    let mut lo = (g_top / r).max(f64::MIN_POSITIVE);
    let mut hi = (g_all / r).max(lo);
    if norm_at(lo) < r {
        lo = f64::MIN_POSITIVE;
    }
    for _ in 0..200 {
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if norm_at(mid) > r {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    point(top + 0.5 * (lo + hi))
}
