//! Stabilizers of `ω^k` on `ℝ²ⁿ`.
//!
//! Linear maps preserving `ω^k` for `k ≤ n − 1` are symplectic, or
//! anti-symplectic when `k` is even; for `k = n` they form `SL(2n, ℝ)`.
//! The functions here turn that classification into a checked verdict.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{FloatForm, MultiIndex};
use crate::linalg;
use crate::sampling;
use crate::symplin::{antisymplectic_reflection, random_symplectic_with, standard_omega, symplectic_residuals};

/// Default relative tolerance for form-coefficient residuals.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Slack between the power residual and the map residual before a
/// preserved power with no matching class is reported as inconsistent.
pub const CLASS_SLACK: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PowerClass {
    Symplectic,
    AntiSymplectic,
    VolumeOnly,
    Inconsistent,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerStabilizerVerdict {
    pub preserves_power: bool,
    /// `None` when the power is not preserved.
    pub classification: Option<PowerClass>,
    pub residuals: BTreeMap<String, f64>,
}

fn check_power_range(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("power k = {k} must lie in 1..={n}")));
    }
    Ok(())
}

/// `max |A*ω^k − ω^k| / max |ω^k|`.
pub fn omega_power_residual(a: &DMatrix<f64>, k: usize) -> Result<f64> {
    let n = linalg::half_dim(a)?;
    check_power_range(n, k)?;
    let wk = standard_omega::<f64>(n).power(k)?;
    let pulled = wk.pullback(a)?;
    Ok(pulled.max_abs_diff(&wk)? / wk.max_abs_coeff())
}

pub fn preserves_omega_power(a: &DMatrix<f64>, k: usize, tol: f64) -> Result<bool> {
    Ok(omega_power_residual(a, k)? <= tol)
}

pub fn classify_power_preserver(a: &DMatrix<f64>, k: usize, tol: f64) -> Result<PowerStabilizerVerdict> {
    let n = linalg::half_dim(a)?;
    let power = omega_power_residual(a, k)?;
    let (plus, minus) = symplectic_residuals(a)?;
    let det = (a.determinant() - 1.0).abs();
    let residuals = BTreeMap::from([
        ("power".to_string(), power),
        ("symplectic".to_string(), plus),
        ("anti_symplectic".to_string(), minus),
        ("det".to_string(), det),
    ]);
    let preserves_power = power <= tol;
    let classification = preserves_power.then(|| {
        let anti_allowed = k.is_multiple_of(2);
        if k == n {
            if plus <= tol {
                PowerClass::Symplectic
            } else if anti_allowed && minus <= tol {
                PowerClass::AntiSymplectic
            } else {
                PowerClass::VolumeOnly
            }
        } else {
            let (class, residual) = if anti_allowed && minus < plus {
                (PowerClass::AntiSymplectic, minus)
            } else {
                (PowerClass::Symplectic, plus)
            };
            if residual <= CLASS_SLACK * tol * (1.0 + linalg::max_abs(a).powi(2)) {
                class
            } else {
                PowerClass::Inconsistent
            }
        }
    });
    Ok(PowerStabilizerVerdict { preserves_power, classification, residuals })
}

/// Scalars recovered from a two-form whose `k`-th power is proportional
/// to `ω^k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoFormDiagonal {
    /// Constant with `c Ω^k = ω^k`.
    pub c: f64,
    /// Coefficients `λᵢ` of `Ω = Σ λᵢ eⁱ ∧ fⁱ`.
    pub lambda: Vec<f64>,
}

/// Returns `None` when `Ω^k` is not proportional to `ω^k`; otherwise checks
/// that `Ω` is diagonal in the `eⁱ ∧ fⁱ` basis and returns the `λᵢ`.
/// Off-diagonal mass on a proportional input is reported as a tripwire.
pub fn check_two_form_diagonal(big_omega: &FloatForm, k: usize, tol: f64) -> Result<Option<TwoFormDiagonal>> {
    if big_omega.degree() != 2 {
        return Err(Error::InvalidDegree { degree: big_omega.degree(), dim: big_omega.dim() });
    }
    let dim = big_omega.dim();
    if !dim.is_multiple_of(2) || dim == 0 {
        return Err(Error::OddDimension(dim));
    }
    let n = dim / 2;
    if k == n {
        return Err(Error::OutOfRange(format!("k = n = {n} is not covered; k must be at most n − 1")));
    }
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("power k = {k} must lie in 1..={}", n - 1)));
    }
    let wk = standard_omega::<f64>(n).power(k)?;
    let bk = big_omega.power(k)?;
    let first: Vec<usize> = (0..k).chain(n..n + k).collect();
    let first = MultiIndex::new(first, dim)?;
    debug_assert_eq!(wk.terms().next().map(|(i, _)| i), Some(&first));
    let denom = bk.coeff(&first);
    if denom.abs() <= tol * (1.0 + bk.max_abs_coeff()) {
        return Ok(None);
    }
    let c = wk.coeff(&first) / denom;
    let mismatch = bk.scale(c).max_abs_diff(&wk)? / wk.max_abs_coeff();
    if mismatch > tol {
        return Ok(None);
    }
    let lambda: Vec<f64> = (0..n)
        .map(|i| big_omega.coeff(&MultiIndex::new(vec![i, n + i], dim).expect("in range")))
        .collect();
    let off_diagonal = big_omega
        .terms()
        .filter(|(idx, _)| !(idx.as_slice()[0] < n && idx.as_slice()[1] == idx.as_slice()[0] + n))
        .fold(0.0_f64, |acc, (_, v)| acc.max(v.abs()));
    if off_diagonal > tol * (1.0 + big_omega.max_abs_coeff()) {
        return Err(Error::Tripwire(format!(
            "Ω^{k} is proportional to ω^{k} but Ω has off-diagonal coefficient {off_diagonal:e}"
        )));
    }
    Ok(Some(TwoFormDiagonal { c, lambda }))
}

/// Whether `Aᵀ` preserves `ω^k`, given that `A` does.
pub fn transpose_closure_check(a: &DMatrix<f64>, k: usize, tol: f64) -> Result<bool> {
    if !preserves_omega_power(a, k, tol)? {
        return Err(Error::Precondition(format!("A does not preserve ω^{k}")));
    }
    preserves_omega_power(&a.transpose(), k, tol)
}

/// `exp(X)` for a seeded traceless `X`; an element of `SL(m, ℝ)`.
pub fn random_special_linear<R: Rng + ?Sized>(rng: &mut R, dim: usize, spread: f64) -> DMatrix<f64> {
    let mut x = sampling::gaussian_matrix(rng, dim, dim) * spread;
    let trace = x.trace() / dim as f64;
    for i in 0..dim {
        x[(i, i)] -= trace;
    }
    x.exp()
}

/// Samples from the classified components of `Stab(ω^k)`: symplectic,
/// anti-symplectic (even `k`), and `SL(2n, ℝ)` when `k = n`.
pub fn sample_power_preserver<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, spread: f64) -> DMatrix<f64> {
    let choice = rng.gen_range(0..3);
    let sp = random_symplectic_with(rng, n, spread);
    match choice {
        1 if k.is_multiple_of(2) => antisymplectic_reflection(n) * sp,
        2 if k == n => random_special_linear(rng, 2 * n, spread),
        _ => sp,
    }
}
