use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::group::complex_plane;
use crate::calib::{enclosing_radius, AffineMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::symplin::{classify_map, extend_to_symplectic_basis, omega_pair, MapClass};

/// Pair attempts used by [`rigidity_witness_symplectic`].
pub const WITNESS_ATTEMPTS: usize = 10_000;
/// A pair counts only if `|ω(Ψᵀu, Ψᵀv)| < (1 − margin)|ω(u, v)|`.
pub const RATIO_MARGIN: f64 = 1e-9;
/// Pairs with `|ω(u, v)|` below this are skipped as ill-conditioned.
const MIN_PAIRING: f64 = 1e-3;

/// Normalized pair with `ω(u, v) = 1` and `0 < |ω(Pᵀu, Pᵀv)| < 1` for
/// `P = Ψ` or `P = Ψ⁻¹`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessPair {
    #[serde(serialize_with = "linalg::serialize_vector")]
    pub u: DVector<f64>,
    #[serde(serialize_with = "linalg::serialize_vector")]
    pub v: DVector<f64>,
    /// Whether `P = Ψ⁻¹`.
    pub inverted: bool,
    /// `ω(Pᵀu, Pᵀv)`.
    pub image_pairing: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticWitness {
    /// `Aᵀ = ΦᵀP(Φ′ᵀ)⁻¹`, mapping `B(1)` into `Z(λ)` over `span(e₁, f₁)`.
    #[serde(serialize_with = "linalg::serialize_rows")]
    pub map: DMatrix<f64>,
    pub lambda: f64,
    pub pair: WitnessPair,
    /// Independently recomputed enclosing radius of `Aᵀ(B(1))`.
    pub certified_radius: f64,
}

fn inverse(psi: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    linalg::half_dim(psi)?;
    psi.clone().try_inverse().ok_or(Error::Singular)
}

/// Samples `attempts` pairs from the unit sphere and keeps the one with the
/// largest gap `|ω(u, v)| − |ω(Pᵀu, Pᵀv)|` over `P ∈ {Ψ, Ψ⁻¹}`. No pair
/// exists when `Ψ` is symplectic or anti-symplectic.
pub fn search_witness_pair(psi: &DMatrix<f64>, attempts: usize, seed: u64) -> Result<Option<WitnessPair>> {
    let psi_inv = inverse(psi)?;
    let dim = psi.nrows();
    let transposes = [psi.transpose(), psi_inv.transpose()];
    let mut rng = sampling::rng(seed);
    let mut best: Option<(f64, WitnessPair)> = None;
    for _ in 0..attempts {
        let u = sampling::unit_vector(&mut rng, dim);
        let v = sampling::unit_vector(&mut rng, dim);
        let w = omega_pair(&u, &v);
        if w.abs() < MIN_PAIRING {
            continue;
        }
        for (which, pt) in transposes.iter().enumerate() {
            let w_image = omega_pair(&(pt * &u), &(pt * &v));
            if w_image == 0.0 || w_image.abs() >= (1.0 - RATIO_MARGIN) * w.abs() {
                continue;
            }
            let gap = w.abs() - w_image.abs();
            if best.as_ref().is_some_and(|(g, _)| *g >= gap) {
                continue;
            }
            // swap to make ω(u, v) positive, then scale u so that it is 1
            let (u, v, w, w_image) = if w > 0.0 { (u.clone(), v.clone(), w, w_image) } else { (v.clone(), u.clone(), -w, -w_image) };
            let pair = WitnessPair { u: u / w, v, inverted: which == 1, image_pairing: w_image / w };
            best = Some((gap, pair));
        }
    }
    Ok(best.map(|(_, p)| p))
}

/// Builds the squeezing map from a normalized pair: `Φ(e₁, f₁) = (u, v)`,
/// `Φ′(e₁, f₁) = (±λ⁻¹Pᵀu, λ⁻¹Pᵀv)` and `Aᵀ = ΦᵀP(Φ′ᵀ)⁻¹`.
pub fn witness_from_pair(psi: &DMatrix<f64>, pair: &WitnessPair) -> Result<SymplecticWitness> {
    let p = if pair.inverted { inverse(psi)? } else { psi.clone() };
    let n = linalg::half_dim(&p)?;
    let pt = p.transpose();
    let pu = &pt * &pair.u;
    let pv = &pt * &pair.v;
    let w_image = omega_pair(&pu, &pv);
    let lambda = w_image.abs().sqrt();
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Precondition(format!("pair gives λ = {lambda}, not in (0, 1)")));
    }
    let sign = w_image.signum();
    let phi = extend_to_symplectic_basis(&pair.u, &pair.v, 1e-9)?;
    let phi_prime = extend_to_symplectic_basis(&(pu * (sign / lambda)), &(pv / lambda), 1e-9)?;
    let phi_prime_t_inv = phi_prime.transpose().try_inverse().ok_or(Error::Singular)?;
    let map = phi.transpose() * &p * phi_prime_t_inv;
    let certified_radius = enclosing_radius(&complex_plane(n, 1), &AffineMap::linear(map.clone()), 1.0)?;
    if certified_radius > lambda + 1e-9 {
        return Err(Error::Tripwire(format!("witness radius {certified_radius} exceeds λ = {lambda}")));
    }
    Ok(SymplecticWitness { map, lambda, pair: pair.clone(), certified_radius })
}

/// Squeezing witness for a map that is neither symplectic nor
/// anti-symplectic: `Aᵀ(B(1)) ⊆ Z(λ)` with `λ < 1`. Errors on `±`symplectic
/// input; `None` if the pair search comes up empty.
pub fn rigidity_witness_symplectic(psi: &DMatrix<f64>, tol: f64, seed: u64) -> Result<Option<SymplecticWitness>> {
    inverse(psi)?;
    match classify_map(psi, tol)? {
        MapClass::Neither => {}
        class => {
            return Err(Error::Precondition(format!("Ψ is {class:?}: no squeezing witness exists")));
        }
    }
    match search_witness_pair(psi, WITNESS_ATTEMPTS, seed)? {
        Some(pair) => witness_from_pair(psi, &pair).map(Some),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplin::{antisymplectic_reflection, random_symplectic};

    fn diag(v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_vec(v.to_vec()))
    }

    fn unit(dim: usize, i: usize) -> DVector<f64> {
        DVector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 })
    }

    #[test]
    fn expanding_diagonal_has_witness() {
        let w = rigidity_witness_symplectic(&diag(&[2.0, 2.0, 1.0, 1.0]), 1e-9, 1).unwrap().unwrap();
        assert!(w.lambda < 1.0);
        assert!(w.certified_radius <= w.lambda + 1e-9);
    }

    #[test]
    fn quarter_pairing_gives_half() {
        let psi = diag(&[0.5, 1.0, 0.5, 1.0]);
        let pair = WitnessPair { u: unit(4, 0), v: unit(4, 2), inverted: false, image_pairing: 0.25 };
        let w = witness_from_pair(&psi, &pair).unwrap();
        assert!((w.lambda - 0.5).abs() < 1e-15);
        assert!(w.certified_radius <= 0.5 + 1e-9);
        let searched = rigidity_witness_symplectic(&psi, 1e-9, 3).unwrap().unwrap();
        assert!(searched.lambda < 1.0);
    }

    #[test]
    fn symplectic_inputs_are_refused_and_have_no_pairs() {
        let sp = random_symplectic(2, 4, 0.5);
        assert!(matches!(rigidity_witness_symplectic(&sp, 1e-9, 0), Err(Error::Precondition(_))));
        assert_eq!(search_witness_pair(&sp, 2000, 0).unwrap(), None);
        let anti = antisymplectic_reflection(2) * sp;
        assert_eq!(search_witness_pair(&anti, 2000, 0).unwrap(), None);
    }

    #[test]
    fn random_non_symplectic_maps() {
        let mut rng = sampling::rng(77);
        for _ in 0..10 {
            let psi = sampling::gaussian_matrix(&mut rng, 4, 4) + DMatrix::identity(4, 4);
            let w = rigidity_witness_symplectic(&psi, 1e-9, 5).unwrap().unwrap();
            assert!(w.lambda < 1.0 && w.certified_radius <= w.lambda + 1e-9);
        }
    }
}
