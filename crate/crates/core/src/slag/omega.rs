use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::complex_matrix::{commutator_residual, extract_complex};
use crate::error::{Error, Result};
use crate::forms::{ComplexKForm, FloatForm, KForm, MultiIndex};
use crate::linalg;

/// Band between the two membership paths inside which a disagreement is
/// attributed to rounding rather than a bug.
const AGREEMENT_BAND: f64 = 100.0;

/// `Ω = dz¹ ∧ … ∧ dzⁿ` with `dz^k = e^k + i f^k` on `ℝ²ⁿ`.
pub fn holomorphic_volume(n: usize) -> ComplexKForm<f64> {
    let dim = 2 * n;
    let dz = |k: usize| {
        let re = KForm::basis(dim, &[k]).expect("index in range");
        let im = KForm::basis(dim, &[n + k]).expect("index in range");
        ComplexKForm::new(re, im).expect("same shape")
    };
    (0..n).fold(ComplexKForm::from_real(FloatForm::scalar(dim, 1.0)), |acc, k| {
        acc.wedge(&dz(k)).expect("same dimension")
    })
}

/// `det_ℂ` of a complex-linear `2n × 2n` matrix; `None` when `‖AJ − JA‖∞ > tol`.
pub fn complex_det(a: &DMatrix<f64>, tol: f64) -> Result<Option<Complex64>> {
    Ok(extract_complex(a, tol)?.map(|m| m.det()))
}

fn require_invertible(a: &DMatrix<f64>) -> Result<usize> {
    let n = linalg::half_dim(a)?;
    let scale = linalg::max_abs(a).max(f64::MIN_POSITIVE);
    let det = a.determinant();
    if !det.is_finite() || det.abs() <= 1e-14 * scale.powi(2 * n as i32) {
        return Err(Error::Singular);
    }
    Ok(n)
}

/// Both sides of the `Stab(Ω) = SL(n, ℂ)` comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaResiduals {
    /// `‖A*Ω − Ω‖∞` over real and imaginary coefficients.
    pub pullback: f64,
    /// `‖AJ − JA‖∞`.
    pub commutator: f64,
    /// `|det_ℂ A − 1|`, or `None` when `A` is not complex-linear.
    pub det: Option<f64>,
}

impl OmegaResiduals {
    pub fn pullback_path(&self, tol: f64) -> bool {
        self.pullback <= tol
    }

    pub fn det_path(&self, tol: f64) -> bool {
        self.commutator <= tol && self.det.is_some_and(|d| d <= tol)
    }
}

pub fn omega_residuals(a: &DMatrix<f64>, tol: f64) -> Result<OmegaResiduals> {
    let n = require_invertible(a)?;
    let omega = holomorphic_volume(n);
    let pullback = omega.pullback(a)?.max_abs_diff(&omega)?;
    let commutator = commutator_residual(a)?;
    let det = complex_det(a, tol.max(commutator))?.map(|d| (d - 1.0).norm());
    Ok(OmegaResiduals { pullback, commutator, det })
}

/// `‖A*Ω − Ω‖∞ ≤ tol`, cross-checked against complex-linearity with
/// `det_ℂ = 1`. A decisive disagreement between the two raises a tripwire.
pub fn preserves_omega_form(a: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let r = omega_residuals(a, tol)?;
    let n = a.nrows() / 2;
    let loose = AGREEMENT_BAND * tol * linalg::max_abs(a).max(1.0).powi(n as i32);
    let pull = r.pullback_path(tol);
    let det = r.det_path(tol);
    if pull && !r.det_path(loose) {
        return Err(Error::Tripwire(format!(
            "A*Ω = Ω within {tol} but AJ − JA = {:e}, |det_ℂ − 1| = {:?}",
            r.commutator, r.det
        )));
    }
    if det && !r.pullback_path(loose) {
        return Err(Error::Tripwire(format!(
            "A ∈ SL(n, ℂ) within {tol} but ‖A*Ω − Ω‖ = {:e}",
            r.pullback
        )));
    }
    Ok(pull)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseVerdict {
    pub preserves_up_to_phase: bool,
    /// `θ ∈ (−π, π]` with `A*Ω = e^{iθ} Ω`, present when the verdict holds.
    pub theta: Option<f64>,
    /// `‖A*Ω − cΩ‖∞` with `c` the `dz¹ ∧ … ∧ dzⁿ` coefficient of `A*Ω`,
    /// or `| |c| − 1 |` if larger.
    pub residual: f64,
}

pub fn phase_verdict(a: &DMatrix<f64>, tol: f64) -> Result<PhaseVerdict> {
    let n = require_invertible(a)?;
    let omega = holomorphic_volume(n);
    let pulled = omega.pullback(a)?;
    let top = MultiIndex::new((0..n).collect(), 2 * n)?;
    let c = pulled.coeff_c(&top);
    let proportional = pulled.max_abs_diff(&omega.scale_c(c))?;
    let residual = proportional.max((c.norm() - 1.0).abs());
    let holds = residual <= tol;
    let theta = holds.then(|| {
        let t = c.arg();
        if t == -std::f64::consts::PI {
            std::f64::consts::PI
        } else {
            t
        }
    });
    Ok(PhaseVerdict { preserves_up_to_phase: holds, theta, residual })
}

/// `Re(e^{iθ} Ω)`.
fn phased_real_part(n: usize, theta: f64) -> FloatForm {
    let omega = holomorphic_volume(n);
    omega.re().scale(theta.cos()).try_sub(&omega.im().scale(theta.sin())).expect("same shape")
}

/// Whether `A` preserves `Re(e^{iθ₁}Ω)` and `Re(e^{iθ₂}Ω)`. When both hold,
/// `A` must preserve `Ω` itself; a failure of that raises a tripwire.
pub fn two_phase_implies_full(a: &DMatrix<f64>, theta1: f64, theta2: f64, tol: f64) -> Result<bool> {
    let n = require_invertible(a)?;
    let gap = (theta1 - theta2).sin().abs();
    if gap <= 1e-9 {
        return Err(Error::Precondition(format!(
            "phases {theta1} and {theta2} are equal or antipodal"
        )));
    }
    let keeps = |theta: f64| -> Result<bool> {
        let form = phased_real_part(n, theta);
        Ok(form.pullback(a)?.max_abs_diff(&form)? <= tol)
    };
    if !(keeps(theta1)? && keeps(theta2)?) {
        return Ok(false);
    }
    let omega = holomorphic_volume(n);
    let full = omega.pullback(a)?.max_abs_diff(&omega)?;
    // Ω is recovered from the two real parts with coefficients of size 1/|sin(θ₁ − θ₂)|
    if full > AGREEMENT_BAND * tol / gap {
        return Err(Error::Tripwire(format!(
            "two phases preserved within {tol} but ‖A*Ω − Ω‖ = {full:e}"
        )));
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    use super::*;
    use crate::sampling;
    use crate::slag::complex_matrix::{embed_complex, random_gl_nc, random_sl_nc, ComplexMatrix};

    fn phase(n: usize, theta: f64) -> DMatrix<f64> {
        embed_complex(&ComplexMatrix::scalar(n, Complex64::from_polar(1.0, theta)))
    }

    #[test]
    fn omega_on_standard_frame() {
        for n in 1..=4 {
            let omega = holomorphic_volume(n);
            let e = DMatrix::identity(2 * n, n);
            assert_eq!(omega.evaluate_c(&e).unwrap(), Complex64::new(1.0, 0.0));
            assert_eq!(omega.support().len(), 1 << n);
        }
    }

    #[test]
    fn complex_det_examples() {
        assert_eq!(complex_det(&DMatrix::identity(4, 4), 1e-12).unwrap(), Some(Complex64::new(1.0, 0.0)));
        let d = complex_det(&phase(3, 0.4), 1e-12).unwrap().unwrap();
        assert!((d - Complex64::from_polar(1.0, 1.2)).norm() < 1e-14);
        let mut a = DMatrix::identity(4, 4);
        a[(0, 2)] = 1.0;
        assert_eq!(complex_det(&a, 1e-8).unwrap(), None);
    }

    #[test]
    fn pullback_scales_by_complex_det() {
        let mut rng = sampling::rng(5);
        for n in 1..=4 {
            let m = random_gl_nc(&mut rng, n);
            let a = embed_complex(&m);
            let omega = holomorphic_volume(n);
            let expected = omega.scale_c(m.det());
            assert!(omega.pullback(&a).unwrap().max_abs_diff(&expected).unwrap() < 1e-10);
        }
    }

    #[test]
    fn sl_members_preserve_omega() {
        let mut rng = sampling::rng(8);
        for n in 1..=5 {
            let a = embed_complex(&random_sl_nc(&mut rng, n));
            assert!(preserves_omega_form(&a, 1e-8).unwrap());
            let v = phase_verdict(&a, 1e-8).unwrap();
            assert!(v.preserves_up_to_phase);
            assert!(v.theta.unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn scalar_phase_is_recovered() {
        let n = 3;
        for theta in [0.3, -2.0, 3.0] {
            let v = phase_verdict(&phase(n, theta / n as f64), 1e-10).unwrap();
            assert!(v.preserves_up_to_phase);
            assert!((v.theta.unwrap() - theta).abs() < 1e-12);
            assert!(!preserves_omega_form(&phase(n, theta / n as f64), 1e-10).unwrap());
        }
    }

    #[test]
    fn real_diagonal_with_det_two() {
        let n = 3;
        let mut d = vec![1.0; 2 * n];
        d[0] = 2.0;
        d[n] = 2.0;
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d));
        assert!(!preserves_omega_form(&a, 1e-8).unwrap());
        let v = phase_verdict(&a, 1e-8).unwrap();
        assert!(!v.preserves_up_to_phase && v.theta.is_none());
    }

    #[test]
    fn non_members_agree_on_both_paths() {
        let mut rng = sampling::rng(13);
        for n in 1..=4 {
            let a = sampling::gaussian_matrix(&mut rng, 2 * n, 2 * n);
            assert!(!preserves_omega_form(&a, 1e-8).unwrap());
            let r = omega_residuals(&a, 1e-8).unwrap();
            assert!(!r.det_path(1e-8));
        }
    }

    #[test]
    fn singular_input_is_rejected() {
        assert!(matches!(preserves_omega_form(&DMatrix::zeros(4, 4), 1e-8), Err(Error::Singular)));
    }

    #[test]
    fn two_phase_examples() {
        let mut rng = sampling::rng(21);
        let a = embed_complex(&random_sl_nc(&mut rng, 3));
        assert!(two_phase_implies_full(&a, 0.0, FRAC_PI_2, 1e-8).unwrap());
        assert!(two_phase_implies_full(&a, 0.2, FRAC_PI_3, 1e-8).unwrap());

        // complex conjugation sends Ω to its conjugate: Re Ω kept, Im Ω negated
        let n = 2;
        let mut sigma = DMatrix::identity(2 * n, 2 * n);
        for k in n..2 * n {
            sigma[(k, k)] = -1.0;
        }
        let re = phased_real_part(n, 0.0);
        assert!(re.pullback(&sigma).unwrap().approx_eq(&re, 1e-15));
        assert!(!two_phase_implies_full(&sigma, 0.0, 0.7, 1e-8).unwrap());

        assert!(two_phase_implies_full(&a, 0.0, PI, 1e-8).is_err());
        assert!(two_phase_implies_full(&a, 0.5, 0.5, 1e-8).is_err());
    }
}
