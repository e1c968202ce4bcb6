use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::williamson::{inverse_sqrt_spd, williamson_with, SkewSolver, WilliamsonDecomposition};
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::factorial;

/// Closed sublevel set `{z : ⟨z − c, M(z − c)⟩ ≤ 1}` with `M` symmetric
/// positive-definite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EllipsoidDocument", into = "EllipsoidDocument")]
pub struct Ellipsoid {
    center: DVector<f64>,
    shape: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct EllipsoidDocument {
    center: Vec<f64>,
    shape: Vec<Vec<f64>>,
}

impl TryFrom<EllipsoidDocument> for Ellipsoid {
    type Error = Error;

    fn try_from(doc: EllipsoidDocument) -> Result<Self> {
        Ellipsoid::new(DVector::from_vec(doc.center), linalg::from_rows(&doc.shape)?)
    }
}

impl From<Ellipsoid> for EllipsoidDocument {
    fn from(e: Ellipsoid) -> Self {
        EllipsoidDocument { center: e.center.as_slice().to_vec(), shape: linalg::to_rows(&e.shape) }
    }
}

impl Ellipsoid {
    pub fn new(center: DVector<f64>, shape: DMatrix<f64>) -> Result<Self> {
        linalg::half_dim(&shape)?;
        if center.len() != shape.nrows() {
            return Err(Error::DimensionMismatch { expected: shape.nrows(), found: center.len() });
        }
        inverse_sqrt_spd(&shape)?;
        Ok(Ellipsoid { center, shape })
    }

    /// Centered ellipsoid.
    pub fn centered(shape: DMatrix<f64>) -> Result<Self> {
        let dim = shape.nrows();
        Self::new(DVector::zeros(dim), shape)
    }

    /// Ball `B(r)` in `ℝ²ⁿ`.
    pub fn ball(n: usize, r: f64) -> Result<Self> {
        Self::centered(DMatrix::identity(2 * n, 2 * n) / (r * r))
    }

    /// Normal-form ellipsoid `E(r) = {Σ (x_j² + y_j²)/r_j² ≤ 1}`.
    pub fn normal_form(radii: &[f64]) -> Result<Self> {
        let d: Vec<f64> = radii.iter().chain(radii.iter()).map(|r| 1.0 / (r * r)).collect();
        Self::centered(DMatrix::from_diagonal(&DVector::from_vec(d)))
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    pub fn half_dim(&self) -> usize {
        self.shape.nrows() / 2
    }

    pub fn contains(&self, z: &DVector<f64>) -> bool {
        let d = z - &self.center;
        d.dot(&(&self.shape * &d)) <= 1.0
    }

    /// Image `A(E) + b`, with shape `A⁻ᵀ M A⁻¹`.
    pub fn image(&self, a: &DMatrix<f64>, b: &DVector<f64>) -> Result<Self> {
        let inv = a.clone().try_inverse().ok_or(Error::Singular)?;
        let shape = inv.transpose() * &self.shape * &inv;
        let shape = (&shape + shape.transpose()) * 0.5;
        Self::new(a * &self.center + b, shape)
    }

    pub fn williamson(&self) -> Result<WilliamsonDecomposition> {
        williamson_with(&self.shape, SkewSolver::Hermitian)
    }
}

/// `0 < r₁ ≤ … ≤ rₙ` with `E` symplectically equivalent to `E(r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymplecticSpectrum {
    pub radii: Vec<f64>,
}

impl SymplecticSpectrum {
    pub fn smallest(&self) -> f64 {
        self.radii[0]
    }

    /// Largest relative deviation between two spectra of equal length.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        self.radii
            .iter()
            .zip(&other.radii)
            .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()))
            .fold(0.0, f64::max)
    }
}

fn spectrum_from(decomposition: &WilliamsonDecomposition) -> SymplecticSpectrum {
    let mut radii: Vec<f64> = decomposition.lambda.iter().map(|l| 1.0 / l.sqrt()).collect();
    radii.sort_by(f64::total_cmp);
    SymplecticSpectrum { radii }
}

/// Spectrum with `SᵀMS = Λ ⊕ Λ` and `r_j = 1/√Λ_jj`; the center is ignored.
pub fn symplectic_spectrum(e: &Ellipsoid) -> Result<SymplecticSpectrum> {
    Ok(spectrum_from(&e.williamson()?))
}

/// Spectrum through a chosen skew normal-form solver.
pub fn symplectic_spectrum_with(e: &Ellipsoid, solver: SkewSolver) -> Result<SymplecticSpectrum> {
    Ok(spectrum_from(&williamson_with(e.shape(), solver)?))
}

/// Linear symplectic width `π r₁²`.
pub fn linear_symplectic_width(e: &Ellipsoid) -> Result<f64> {
    let r1 = symplectic_spectrum(e)?.smallest();
    Ok(std::f64::consts::PI * r1 * r1)
}

/// `k`-width `ω_{2k}/π^k · w_L(E)^k = w_L(E)^k / k!`.
pub fn k_width_ellipsoid(e: &Ellipsoid, k: usize) -> Result<f64> {
    let n = e.half_dim();
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("k = {k} must lie in 1..={n}")));
    }
    let width = linear_symplectic_width(e)?;
    Ok(k_width_from_linear(width, k))
}

/// `w^k / k!`, the unit-ball volume ratio `ω_{2k}/π^k` times `w^k`.
pub fn k_width_from_linear(width: f64, k: usize) -> f64 {
    width.powi(k as i32) / factorial::<f64>(k)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::sampling;
    use crate::symplin::structures::{antisymplectic_reflection, random_symplectic};

    #[test]
    fn ball_and_normal_form_spectra() {
        let s = symplectic_spectrum(&Ellipsoid::ball(3, 1.0).unwrap()).unwrap();
        assert!(s.radii.iter().all(|r| (r - 1.0).abs() < 1e-12));
        let s = symplectic_spectrum(&Ellipsoid::normal_form(&[3.0, 1.0, 2.0]).unwrap()).unwrap();
        for (r, want) in s.radii.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - want).abs() < 1e-12);
        }
    }

    #[test]
    fn width_examples() {
        let w = linear_symplectic_width(&Ellipsoid::ball(2, 1.0).unwrap()).unwrap();
        assert!((w - PI).abs() < 1e-12);
        let w = linear_symplectic_width(&Ellipsoid::normal_form(&[1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert!((w - PI).abs() < 1e-12);
        let e = Ellipsoid::normal_form(&[2.0, 3.0]).unwrap();
        let a = random_symplectic(2, 4, 0.4);
        let img = e.image(&a, &DVector::from_vec(vec![1.0, -2.0, 0.5, 0.0])).unwrap();
        assert!((linear_symplectic_width(&img).unwrap() / (4.0 * PI) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn k_width_examples() {
        let b = Ellipsoid::ball(3, 1.0).unwrap();
        assert_eq!(k_width_ellipsoid(&b, 1).unwrap(), linear_symplectic_width(&b).unwrap());
        assert!((k_width_ellipsoid(&b, 2).unwrap() - PI * PI / 2.0).abs() < 1e-12);
        let e = Ellipsoid::normal_form(&[2.0, 5.0, 7.0]).unwrap();
        assert!((k_width_ellipsoid(&e, 2).unwrap() / (PI * PI / 2.0 * 16.0) - 1.0).abs() < 1e-12);
        assert!(k_width_ellipsoid(&e, 0).is_err());
        assert!(k_width_ellipsoid(&e, 4).is_err());
    }

    #[test]
    fn spectrum_invariant_under_symplectic_and_antisymplectic() {
        let mut rng = sampling::rng(9);
        for n in 1..=4 {
            let m = sampling::spd_matrix(&mut rng, 2 * n, 0.3);
            let e = Ellipsoid::centered(m.clone()).unwrap();
            let base = symplectic_spectrum(&e).unwrap();
            for seed in 0..5 {
                let a = random_symplectic(n, seed, 0.3);
                let conj = Ellipsoid::centered(a.transpose() * &m * &a).unwrap();
                assert!(symplectic_spectrum(&conj).unwrap().relative_distance(&base) < 1e-7);
            }
            let t = antisymplectic_reflection(n);
            let refl = Ellipsoid::centered(&t * &m * &t).unwrap();
            assert!(symplectic_spectrum(&refl).unwrap().relative_distance(&base) < 1e-9);
        }
    }

    #[test]
    fn solvers_agree() {
        let mut rng = sampling::rng(21);
        for n in 1..=6 {
            let e = Ellipsoid::centered(sampling::spd_matrix(&mut rng, 2 * n, 0.2)).unwrap();
            let a = symplectic_spectrum_with(&e, SkewSolver::Hermitian).unwrap();
            let b = symplectic_spectrum_with(&e, SkewSolver::Symmetric).unwrap();
            assert!(a.relative_distance(&b) < 1e-8);
        }
    }

    #[test]
    fn json_schema() {
        let e = Ellipsoid::ball(1, 1.0).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        assert_eq!(text, r#"{"center":[0.0,0.0],"shape":[[1.0,0.0],[0.0,1.0]]}"#);
        let back: Ellipsoid = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
        let bad = r#"{"center":[0,0],"shape":[[1,0],[0,-1]]}"#;
        assert!(serde_json::from_str::<Ellipsoid>(bad).is_err());
    }

    #[test]
    fn monotone_under_inclusion() {
        let mut rng = sampling::rng(2);
        for _ in 0..20 {
            let big = sampling::spd_matrix(&mut rng, 4, 0.2);
            let extra = sampling::spd_matrix(&mut rng, 4, 0.0) * 0.1;
            // larger shape matrix means smaller ellipsoid
            let small = &big + extra;
            let w_small = linear_symplectic_width(&Ellipsoid::centered(small).unwrap()).unwrap();
            let w_big = linear_symplectic_width(&Ellipsoid::centered(big).unwrap()).unwrap();
            assert!(w_small <= w_big + 1e-9);
        }
    }
}
