use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;
use crate::slag::{embed_complex, preserves_omega_form, random_sl_nc, ComplexMatrix};
use crate::stab::{preserves_omega_power, sample_power_preserver};
use crate::symplin::{antisymplectic_reflection, standard_j, symplectic_residuals};

/// Default membership tolerance for chart outputs.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// A matrix group acting on `ℝ^dim` together with an exponential chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// `Sp(2n, ℝ)`, chart `H ↦ exp(JH)` on symmetric `H`.
    Symplectic { n: usize },
    /// `Stab(ω^k)`: `Sp` and, for even `k`, `T·Sp` with `T` anti-symplectic;
    /// `SL(2n, ℝ)` when `k = n`.
    PowerStabilizer { n: usize, k: usize },
    /// `SL(n, ℂ)` embedded in `GL(2n, ℝ)`, chart `exp` of traceless complex
    /// matrices.
    #[serde(rename = "slnc")]
    SlnC { n: usize },
    /// `O(dim)`, chart `exp` of skew matrices.
    Isometry { dim: usize },
    /// `exp(Σ pᵢ Gᵢ)` for the given generators.
    Custom {
        #[serde(with = "matrix_list")]
        generators: Vec<DMatrix<f64>>,
    },
}

mod matrix_list {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg;

    pub fn serialize<Z: Serializer>(ms: &[DMatrix<f64>], serializer: Z) -> Result<Z::Ok, Z::Error> {
        ms.iter().map(linalg::to_rows).collect::<Vec<_>>().serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<DMatrix<f64>>, D::Error> {
        let raw = Vec::<Vec<Vec<f64>>>::deserialize(deserializer)?;
        raw.iter()
            .map(|rows| linalg::from_rows(rows).map_err(serde::de::Error::custom))
            .collect()
    }
}

fn symmetric_from(params: &[f64], dim: usize) -> DMatrix<f64> {
    let mut h = DMatrix::zeros(dim, dim);
    let mut it = params.iter();
    for i in 0..dim {
        for j in i..dim {
            let v = *it.next().expect("parameter count checked");
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

fn skew_from(params: &[f64], dim: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(dim, dim);
    let mut it = params.iter();
    for i in 0..dim {
        for j in i + 1..dim {
            let v = *it.next().expect("parameter count checked");
            s[(i, j)] = v;
            s[(j, i)] = -v;
        }
    }
    s
}

/// Traceless real matrix: every entry but the last diagonal one is free.
fn traceless_from(params: &[f64], dim: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(dim, dim);
    let mut it = params.iter();
    for i in 0..dim {
        for j in 0..dim {
            if i == dim - 1 && j == dim - 1 {
                continue;
            }
            x[(i, j)] = *it.next().expect("parameter count checked");
        }
    }
    x[(dim - 1, dim - 1)] = -(0..dim - 1).map(|i| x[(i, i)]).sum::<f64>();
    x
}

impl GroupSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Symplectic { n } | GroupSpec::SlnC { n } if *n == 0 => {
                Err(Error::OutOfRange("n must be positive".into()))
            }
            GroupSpec::PowerStabilizer { n, k } if *k == 0 || *k > *n => {
                Err(Error::OutOfRange(format!("power k = {k} must lie in 1..={n}")))
            }
            GroupSpec::Isometry { dim } if *dim == 0 => Err(Error::OutOfRange("dimension must be positive".into())),
            GroupSpec::Custom { generators } => {
                let first = generators
                    .first()
                    .ok_or_else(|| Error::OutOfRange("custom group needs a generator".into()))?;
                let dim = linalg::require_square(first)?;
                for g in generators {
                    if g.shape() != (dim, dim) {
                        return Err(Error::DimensionMismatch { expected: dim, found: g.nrows() });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match self {
            GroupSpec::Symplectic { n } | GroupSpec::PowerStabilizer { n, .. } | GroupSpec::SlnC { n } => 2 * n,
            GroupSpec::Isometry { dim } => *dim,
            GroupSpec::Custom { generators } => generators.first().map_or(0, |g| g.nrows()),
        }
    }

    /// Number of chart components searched separately.
    pub fn components(&self) -> usize {
        match self {
            GroupSpec::PowerStabilizer { n, k } if k < n && k % 2 == 0 => 2,
            _ => 1,
        }
    }

    pub fn param_count(&self) -> usize {
        let d = self.dim();
        match self {
            GroupSpec::Symplectic { .. } => d * (d + 1) / 2,
            GroupSpec::PowerStabilizer { n, k } if k == n => d * d - 1,
            GroupSpec::PowerStabilizer { .. } => d * (d + 1) / 2,
            GroupSpec::SlnC { n } => 2 * (n * n - 1),
            GroupSpec::Isometry { dim } => dim * (dim - 1) / 2,
            GroupSpec::Custom { generators } => generators.len(),
        }
    }

    /// Chart value at `params` on `component`; the zero vector maps to the
    /// component's base point (the identity for component 0).
    pub fn element(&self, params: &[f64], component: usize) -> Result<DMatrix<f64>> {
        if params.len() != self.param_count() {
            return Err(Error::DimensionMismatch { expected: self.param_count(), found: params.len() });
        }
        if component >= self.components() {
            return Err(Error::OutOfRange(format!("component {component} of {}", self.components())));
        }
        let d = self.dim();
        Ok(match self {
            GroupSpec::Symplectic { n } => (standard_j(*n) * symmetric_from(params, d)).exp(),
            GroupSpec::PowerStabilizer { n, k } if k == n => traceless_from(params, d).exp(),
            GroupSpec::PowerStabilizer { n, .. } => {
                let sp = (standard_j(*n) * symmetric_from(params, d)).exp();
                if component == 1 {
                    antisymplectic_reflection(*n) * sp
                } else {
                    sp
                }
            }
            GroupSpec::SlnC { n } => {
                let n = *n;
                let (re, im) = params.split_at(n * n - 1);
                let mut x = DMatrix::zeros(n, n);
                let mut y = DMatrix::zeros(n, n);
                for (slot, (&a, &b)) in re.iter().zip(im).enumerate() {
                    x[(slot / n, slot % n)] = a;
                    y[(slot / n, slot % n)] = b;
                }
                x[(n - 1, n - 1)] = -(0..n - 1).map(|i| x[(i, i)]).sum::<f64>();
                y[(n - 1, n - 1)] = -(0..n - 1).map(|i| y[(i, i)]).sum::<f64>();
                embed_complex(&ComplexMatrix::new(x, y)?).exp()
            }
            GroupSpec::Isometry { dim } => skew_from(params, *dim).exp(),
            GroupSpec::Custom { generators } => {
                let x = generators
                    .iter()
                    .zip(params)
                    .fold(DMatrix::zeros(d, d), |acc, (g, p)| acc + g * *p);
                x.exp()
            }
        })
    }

    /// A random group element, following the sampling recipe of each group.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, spread: f64) -> DMatrix<f64> {
        let d = self.dim();
        match self {
            GroupSpec::Symplectic { n } => {
                let h = sampling::uniform_symmetric(rng, d, spread);
                (standard_j(*n) * h).exp()
            }
            GroupSpec::PowerStabilizer { n, k } => sample_power_preserver(rng, *n, *k, spread),
            GroupSpec::SlnC { n } => embed_complex(&random_sl_nc(rng, *n)),
            GroupSpec::Isometry { dim } => sampling::orthonormal_frame(rng, *dim, *dim),
            GroupSpec::Custom { .. } => {
                let p: Vec<f64> = (0..self.param_count()).map(|_| rng.gen_range(-spread..=spread)).collect();
                self.element(&p, 0).expect("parameter count matches")
            }
        }
    }

    /// Membership at `tol`, relative to the size of `a` where the defining
    /// identity is polynomial in its entries. Custom groups are trusted.
    pub fn is_member(&self, a: &DMatrix<f64>, tol: f64) -> Result<bool> {
        let d = self.dim();
        if a.shape() != (d, d) {
            return Err(Error::DimensionMismatch { expected: d, found: a.nrows() });
        }
        let size = linalg::max_abs(a).max(1.0);
        Ok(match self {
            GroupSpec::Symplectic { .. } => symplectic_residuals(a)?.0 <= tol * size * size,
            GroupSpec::PowerStabilizer { k, .. } => preserves_omega_power(a, *k, tol * size.powi(2 * *k as i32))?,
            GroupSpec::SlnC { n } => preserves_omega_form(a, tol * size.powi(*n as i32))?,
            GroupSpec::Isometry { .. } => linalg::gram_residual(a) <= tol,
            GroupSpec::Custom { .. } => true,
        })
    }
}

/// Orthonormal basis of `span(e₁, f₁, …, e_k, f_k)` in `ℝ²ⁿ`.
pub fn complex_plane(n: usize, k: usize) -> DMatrix<f64> {
    let mut basis = DMatrix::zeros(2 * n, 2 * k);
    for i in 0..k {
        basis[(i, 2 * i)] = 1.0;
        basis[(n + i, 2 * i + 1)] = 1.0;
    }
    basis
}

/// Orthonormal basis of the Lagrangian `span(e₁, …, eₙ)` in `ℝ²ⁿ`.
pub fn lagrangian_plane(n: usize) -> DMatrix<f64> {
    DMatrix::identity(2 * n, n)
}

/// Orthonormal basis of `span(e₁, …, e_k)` in `ℝ^dim`.
pub fn coordinate_plane(dim: usize, k: usize) -> DMatrix<f64> {
    DMatrix::identity(dim, k)
}

/// `(x, y) ↦ (δx, δ⁻¹y)`: symplectic, and squeezes `B(1)` into the
/// Lagrangian cylinder of radius `δ`.
pub fn lagrangian_splitting(n: usize, delta: f64) -> DMatrix<f64> {
    let d = DVector::from_fn(2 * n, |i, _| if i < n { delta } else { 1.0 / delta });
    DMatrix::from_diagonal(&d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplin::{classify_map, MapClass};

    fn groups() -> Vec<GroupSpec> {
        vec![
            GroupSpec::Symplectic { n: 2 },
            GroupSpec::PowerStabilizer { n: 3, k: 2 },
            GroupSpec::PowerStabilizer { n: 3, k: 1 },
            GroupSpec::PowerStabilizer { n: 2, k: 2 },
            GroupSpec::SlnC { n: 3 },
            GroupSpec::Isometry { dim: 5 },
        ]
    }

    #[test]
    fn zero_parameters_give_identity() {
        for g in groups() {
            let a = g.element(&vec![0.0; g.param_count()], 0).unwrap();
            assert_eq!(a, DMatrix::identity(g.dim(), g.dim()), "{g:?}");
        }
    }

    #[test]
    fn chart_and_samples_are_members() {
        let mut rng = sampling::rng(4);
        for g in groups() {
            for c in 0..g.components() {
                for _ in 0..10 {
                    let p: Vec<f64> = (0..g.param_count()).map(|_| rng.gen_range(-0.7..0.7)).collect();
                    assert!(g.is_member(&g.element(&p, c).unwrap(), MEMBERSHIP_TOL).unwrap(), "{g:?}");
                }
            }
            for _ in 0..10 {
                assert!(g.is_member(&g.sample(&mut rng, 0.7), MEMBERSHIP_TOL).unwrap(), "{g:?}");
            }
        }
    }

    #[test]
    fn second_component_is_anti_symplectic() {
        let g = GroupSpec::PowerStabilizer { n: 3, k: 2 };
        let a = g.element(&vec![0.1; g.param_count()], 1).unwrap();
        assert_eq!(classify_map(&a, 1e-10).unwrap(), MapClass::AntiSymplectic);
    }

    #[test]
    fn non_members_are_rejected() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0, 1.0, 1.0]));
        assert!(!GroupSpec::Symplectic { n: 2 }.is_member(&a, MEMBERSHIP_TOL).unwrap());
        assert!(!GroupSpec::SlnC { n: 2 }.is_member(&a, MEMBERSHIP_TOL).unwrap());
        assert!(!GroupSpec::Isometry { dim: 4 }.is_member(&a, MEMBERSHIP_TOL).unwrap());
    }

    #[test]
    fn custom_generators_round_trip_json() {
        let g = GroupSpec::Custom { generators: vec![standard_j(1)] };
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"kind":"custom","generators":[[[0.0,-1.0],[1.0,0.0]]]}"#);
        assert_eq!(serde_json::from_str::<GroupSpec>(&text).unwrap(), g);
        let rotation = g.element(&[std::f64::consts::FRAC_PI_2], 0).unwrap();
        assert!(linalg::max_abs(&(rotation - standard_j(1))) < 1e-15);
    }

    #[test]
    fn planes_and_splitting() {
        assert_eq!(linalg::gram_residual(&complex_plane(3, 2)), 0.0);
        assert_eq!(complex_plane(2, 1)[(2, 1)], 1.0);
        let s = lagrangian_splitting(2, 0.1);
        assert_eq!(classify_map(&s, 1e-12).unwrap(), MapClass::Symplectic);
    }
}
