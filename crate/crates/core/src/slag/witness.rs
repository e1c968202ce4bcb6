use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::complex_matrix::{commutator_residual, embed_complex, extract_complex, ComplexMatrix};
use super::omega::holomorphic_volume;
use crate::calib::{enclosing_radius, AffineMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symplin::standard_j;

/// Squeezing map for a complex-linear `Ψ` with `|det_ℂ Ψ| ≠ 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SlagWitness {
    /// `Aᵀ = Ψ(Φᵀ)⁻¹`, mapping `B(1)` into `Z_L(λ)` for `L = span(e₁, …, eₙ)`.
    #[serde(serialize_with = "linalg::serialize_rows")]
    pub map: DMatrix<f64>,
    pub lambda: f64,
    /// `arg Ω(Ψᵀe₁, …, Ψᵀeₙ)`.
    pub theta: f64,
    /// Whether `Ψ` was replaced by `Ψ⁻¹` because `|det_ℂ Ψ| > 1`.
    pub inverted: bool,
    /// Independently recomputed enclosing radius of `Aᵀ(B(1))`.
    pub certified_radius: f64,
}

/// Orthonormal basis of `span(e₁, …, eₙ)` in `ℝ²ⁿ`.
pub fn real_lagrangian(n: usize) -> DMatrix<f64> {
    DMatrix::identity(2 * n, n)
}

pub fn slag_squeezing_witness(psi: &DMatrix<f64>, tol: f64) -> Result<SlagWitness> {
    let n = linalg::half_dim(psi)?;
    let m = extract_complex(psi, tol)?.ok_or(Error::NotComplexLinear { residual: commutator_residual(psi)? })?;
    let det = m.det();
    if (det.norm() - 1.0).abs() <= tol {
        return Err(Error::Precondition(format!("|det_ℂ Ψ| = {} is 1: no squeezing exists", det.norm())));
    }
    let inverted = det.norm() > 1.0;
    let m = if inverted {
        let inv = m.to_complex().try_inverse().ok_or(Error::Singular)?;
        ComplexMatrix::from_complex(&inv)
    } else {
        m
    };
    let psi = embed_complex(&m);
    let psi_t = psi.transpose();
    let omega = holomorphic_volume(n);

    let w = omega.evaluate_c(&psi_t.columns(0, n).into_owned())?;
    let lambda = w.norm().powf(1.0 / n as f64);
    let theta = w.arg();
    let rotate = embed_complex(&ComplexMatrix::scalar(n, Complex64::from_polar(1.0 / lambda, -theta / n as f64)));
    let j = standard_j(n);
    let mut phi = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        let e_image: DVector<f64> = &rotate * psi_t.column(k);
        let f_image = &j * &e_image;
        phi.set_column(k, &e_image);
        phi.set_column(n + k, &f_image);
    }
    let check = omega.evaluate_c(&phi.columns(0, n).into_owned())?;
    if (check - 1.0).norm() > 1e-8 {
        return Err(Error::Tripwire(format!("completed Φ has Ω(Φe) = {check}, expected 1")));
    }

    let phi_t_inv = phi.transpose().try_inverse().ok_or(Error::Singular)?;
    let map = &psi * phi_t_inv;
    let certified_radius = enclosing_radius(&real_lagrangian(n), &AffineMap::linear(map.clone()), 1.0)?;
    if certified_radius > lambda + 1e-9 {
        return Err(Error::Tripwire(format!(
            "witness radius {certified_radius} exceeds λ = {lambda}"
        )));
    }
    Ok(SlagWitness { map, lambda, theta, inverted, certified_radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::slag::complex_matrix::{random_gl_nc, random_sl_nc};

    #[test]
    fn half_identity() {
        for n in 1..=4 {
            let psi = embed_complex(&ComplexMatrix::scalar(n, Complex64::new(0.5, 0.0)));
            let w = slag_squeezing_witness(&psi, 1e-10).unwrap();
            assert!((w.lambda - 0.5).abs() < 1e-12);
            assert!(w.certified_radius <= 0.5 + 1e-9);
            assert!(!w.inverted);
        }
    }

    #[test]
    fn single_half_entry() {
        let n = 3;
        let mut m = ComplexMatrix::identity(n).to_complex();
        m[(0, 0)] = Complex64::new(0.5, 0.0);
        let w = slag_squeezing_witness(&embed_complex(&ComplexMatrix::from_complex(&m)), 1e-10).unwrap();
        assert!((w.lambda - 0.5f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(w.certified_radius <= w.lambda + 1e-9);
    }

    #[test]
    fn expanding_maps_are_inverted() {
        let psi = embed_complex(&ComplexMatrix::scalar(2, Complex64::new(0.0, 3.0)));
        let w = slag_squeezing_witness(&psi, 1e-10).unwrap();
        assert!(w.inverted);
        assert!((w.lambda - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_contractions_are_certified() {
        let mut rng = sampling::rng(31);
        for n in 1..=4 {
            for _ in 0..5 {
                let m = random_gl_nc(&mut rng, n);
                if (m.det().norm() - 1.0).abs() < 1e-3 {
                    continue;
                }
                let w = slag_squeezing_witness(&embed_complex(&m), 1e-10).unwrap();
                assert!(w.lambda < 1.0);
                assert!(w.certified_radius <= w.lambda + 1e-9);
            }
        }
    }

    #[test]
    fn unit_determinant_has_no_witness() {
        let mut rng = sampling::rng(2);
        let psi = embed_complex(&random_sl_nc(&mut rng, 3));
        assert!(matches!(slag_squeezing_witness(&psi, 1e-8), Err(Error::Precondition(_))));
        let unitary = embed_complex(&ComplexMatrix::scalar(2, Complex64::from_polar(1.0, 0.3)));
        assert!(slag_squeezing_witness(&unitary, 1e-8).is_err());
    }

    #[test]
    fn real_non_complex_input_is_rejected() {
        let mut a = DMatrix::identity(4, 4) * 0.5;
        a[(0, 1)] = 0.2;
        assert!(matches!(slag_squeezing_witness(&a, 1e-8), Err(Error::NotComplexLinear { .. })));
    }
}
