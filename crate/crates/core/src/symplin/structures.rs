use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::KForm;
use crate::linalg;
use crate::sampling;
use crate::scalar::Scalar;

/// `ω = Σ e^i ∧ f^i` on `ℝ²ⁿ`.
pub fn standard_omega<S: Scalar>(n: usize) -> KForm<S> {
    KForm::from_terms(2 * n, 2, (0..n).map(|i| (vec![i, n + i], S::one())))
        .expect("indices are in range")
}

/// `J = [[0, −I], [I, 0]]`, so `J e_k = f_k` and `ω(x, y) = ⟨Jx, y⟩`.
pub fn standard_j(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(n + i, i)] = 1.0;
        j[(i, n + i)] = -1.0;
    }
    j
}

/// `ω(x, y) = ⟨Jx, y⟩` without building the form.
pub fn omega_pair(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let n = x.len() / 2;
    (0..n).map(|i| x[i] * y[n + i] - x[n + i] * y[i]).sum()
}

/// `(x, y) ↦ (−x, y)`.
pub fn antisymplectic_reflection(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n, 2 * n, |r, c| match (r == c, r < n) {
        (true, true) => -1.0,
        (true, false) => 1.0,
        _ => 0.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapClass {
    Symplectic,
    AntiSymplectic,
    Neither,
}

/// Residuals `‖AᵀJA − J‖∞` and `‖AᵀJA + J‖∞`.
pub fn symplectic_residuals(a: &DMatrix<f64>) -> Result<(f64, f64)> {
    let n = linalg::half_dim(a)?;
    let j = standard_j(n);
    let form = a.transpose() * &j * a;
    Ok((linalg::max_abs(&(&form - &j)), linalg::max_abs(&(&form + &j))))
}

pub fn classify_map(a: &DMatrix<f64>, tol: f64) -> Result<MapClass> {
    let (plus, minus) = symplectic_residuals(a)?;
    Ok(if plus <= tol {
        MapClass::Symplectic
    } else if minus <= tol {
        MapClass::AntiSymplectic
    } else {
        MapClass::Neither
    })
}

/// `exp(J·H)` for a seeded symmetric `H` with entries in `[−spread, spread]`.
pub fn random_symplectic(n: usize, seed: u64, spread: f64) -> DMatrix<f64> {
    random_symplectic_with(&mut sampling::rng(seed), n, spread)
}

pub fn random_symplectic_with<R: Rng + ?Sized>(rng: &mut R, n: usize, spread: f64) -> DMatrix<f64> {
    let h = sampling::uniform_symmetric(rng, 2 * n, spread);
    symplectic_exp(&h)
}

/// `exp(J·H)`; symplectic for every symmetric `H`.
pub fn symplectic_exp(h: &DMatrix<f64>) -> DMatrix<f64> {
    let n = h.nrows() / 2;
    (standard_j(n) * h).exp()
}

/// Symplectic `Φ` with `Φe₁ = u` and `Φf₁ = v`, completed by symplectic
/// Gram–Schmidt over the standard basis.
pub fn extend_to_symplectic_basis(u: &DVector<f64>, v: &DVector<f64>, tol: f64) -> Result<DMatrix<f64>> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), found: v.len() });
    }
    if !u.len().is_multiple_of(2) || u.is_empty() {
        return Err(Error::OddDimension(u.len()));
    }
    let w = omega_pair(u, v);
    if (w - 1.0).abs() > tol {
        return Err(Error::Precondition(format!("ω(u, v) = {w}, expected 1")));
    }
    let n = u.len() / 2;
    let j = standard_j(n);
    let mut pairs: Vec<(DVector<f64>, DVector<f64>)> = vec![(u.clone(), v.clone())];

    let project = |w: &DVector<f64>, pairs: &[(DVector<f64>, DVector<f64>)]| {
        let mut out = w.clone();
        for _ in 0..2 {
            for (a, b) in pairs {
                let (wa, wb) = (omega_pair(&out, a), omega_pair(&out, b));
                out += a * (-wb) + b * wa;
            }
        }
        out
    };

    while pairs.len() < n {
        let a = (0..2 * n)
            .map(|m| project(&DVector::from_fn(2 * n, |i, _| if i == m { 1.0 } else { 0.0 }), &pairs))
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .expect("dimension is positive");
        let a = &a / a.norm();
        let b = project(&(&j * &a), &pairs);
        let b = &b / omega_pair(&a, &b);
        pairs.push((a, b));
    }

    let mut phi = DMatrix::zeros(2 * n, 2 * n);
    for (i, (a, b)) in pairs.iter().enumerate() {
        phi.set_column(i, a);
        phi.set_column(n + i, b);
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_matches_j() {
        let mut rng = sampling::rng(3);
        for n in 1..=4 {
            let w = standard_omega::<f64>(n);
            let j = standard_j(n);
            assert_eq!(&j * &j, -DMatrix::identity(2 * n, 2 * n));
            for _ in 0..5 {
                let x = sampling::gaussian_vector(&mut rng, 2 * n);
                let y = sampling::gaussian_vector(&mut rng, 2 * n);
                let direct = (&j * &x).dot(&y);
                assert!((w.evaluate(&[x.clone(), y.clone()]).unwrap() - direct).abs() < 1e-12);
                assert!((omega_pair(&x, &y) - direct).abs() < 1e-12);
            }
        }
        assert_eq!(standard_j(1), DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let e1 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(standard_j(2) * e1, DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_map(&DMatrix::identity(4, 4), 1e-12).unwrap(), MapClass::Symplectic);
        assert_eq!(classify_map(&antisymplectic_reflection(3), 1e-12).unwrap(), MapClass::AntiSymplectic);
        let mut d = DMatrix::identity(4, 4);
        d[(0, 0)] = 2.0;
        assert_eq!(classify_map(&d, 1e-12).unwrap(), MapClass::Neither);
        assert!(classify_map(&DMatrix::<f64>::identity(3, 3), 1e-12).is_err());
    }

    #[test]
    fn random_symplectic_is_symplectic() {
        for seed in 0..20 {
            let a = random_symplectic(3, seed, 0.5);
            assert_eq!(classify_map(&a, 1e-8).unwrap(), MapClass::Symplectic);
            assert!((a.determinant() - 1.0).abs() < 1e-6);
        }
        let tiny = random_symplectic(2, 1, 1e-14);
        assert!(linalg::max_abs(&(tiny - DMatrix::identity(4, 4))) < 1e-12);
    }

    #[test]
    fn extension_examples() {
        let n = 3;
        let e = |i: usize| DVector::from_fn(2 * n, |r, _| if r == i { 1.0 } else { 0.0 });
        let phi = extend_to_symplectic_basis(&e(0), &e(n), 1e-12).unwrap();
        assert_eq!(classify_map(&phi, 1e-12).unwrap(), MapClass::Symplectic);

        let u = e(0) + e(1);
        let v = e(n);
        let phi = extend_to_symplectic_basis(&u, &v, 1e-12).unwrap();
        assert_eq!(phi.column(0), u.column(0));
        assert_eq!(phi.column(n), v.column(0));
        assert_eq!(classify_map(&phi, 1e-10).unwrap(), MapClass::Symplectic);

        assert!(extend_to_symplectic_basis(&e(0), &e(1), 1e-12).is_err());
    }

    #[test]
    fn extension_of_random_pairs() {
        let mut rng = sampling::rng(11);
        for n in 1..=5 {
            for _ in 0..10 {
                let u = sampling::gaussian_vector(&mut rng, 2 * n);
                let v = sampling::gaussian_vector(&mut rng, 2 * n);
                let w = omega_pair(&u, &v);
                let u = u / w;
                let phi = extend_to_symplectic_basis(&u, &v, 1e-9).unwrap();
                let (res, _) = symplectic_residuals(&phi).unwrap();
                assert!(res < 1e-9 * (1.0 + linalg::max_abs(&phi).powi(2)), "n={n} res={res}");
            }
        }
    }
}
