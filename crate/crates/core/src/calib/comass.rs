use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::frames::Frame;
use crate::error::{Error, Result};
use crate::forms::FloatForm;
use crate::linalg;
use crate::sampling;

/// Relative per-step gain below which an ascent counts as converged.
pub const GAIN_TOL: f64 = 1e-12;

/// Armijo sufficient-increase constant.
const SUFFICIENT_INCREASE: f64 = 0.25;

/// Best `|α(frame)|` found over orthonormal frames; a certified lower bound
/// on the comass, never a claim of the exact value.
#[derive(Clone, Debug, Serialize)]
pub struct ComassReport {
    pub value: f64,
    pub frame: Frame,
    pub restarts: usize,
    pub converged_fraction: f64,
    /// Final value of each restart, in restart order.
    pub restart_values: Vec<f64>,
}

/// One projected-gradient ascent run.
#[derive(Clone, Debug)]
pub struct AscentTrace {
    /// `|α(V_t)|` after each accepted step, starting with the initial frame.
    pub values: Vec<f64>,
    pub frame: DMatrix<f64>,
    pub converged: bool,
}

/// Euclidean gradient of `V ↦ α(V)`: entry `(m, j)` is `α` with column
/// `j` replaced by `e_m`.
fn euclidean_gradient(alpha: &FloatForm, v: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let (dim, k) = v.shape();
    let mut g = DMatrix::zeros(dim, k);
    let mut w = v.clone();
    for j in 0..k {
        let saved = v.column(j).into_owned();
        for m in 0..dim {
            w.column_mut(j).fill(0.0);
            w[(m, j)] = 1.0;
            g[(m, j)] = alpha.evaluate_columns(&w)?;
        }
        w.set_column(j, &saved);
    }
    Ok(g)
}

/// Ascent of `|α|` on the Stiefel manifold from `start`: Riemannian
/// gradient `G − V sym(VᵀG)`, QR retraction, step halving until an
/// Armijo increase.
pub fn ascend(alpha: &FloatForm, start: &DMatrix<f64>, max_iters: usize) -> Result<AscentTrace> {
    let mut v = linalg::orthonormalize(start);
    let mut f = alpha.evaluate_columns(&v)?;
    let mut values = vec![f.abs()];
    let mut step: f64 = 1.0;
    let mut converged = false;
    for _ in 0..max_iters {
        let sign = if f < 0.0 { -1.0 } else { 1.0 };
        let g = euclidean_gradient(alpha, &v)? * sign;
        let vtg = v.transpose() * &g;
        let xi = &g - &v * ((&vtg + vtg.transpose()) * 0.5);
        if xi.norm() <= 1e-15 * (1.0 + f.abs()) {
            converged = true;
            break;
        }
        let current = f.abs();
        let slope = xi.norm_squared();
        let mut accepted = None;
        step = (step * 2.0).min(1e3);
        while step > 1e-16 {
            let candidate = linalg::orthonormalize(&(&v + &xi * step));
            let fc = alpha.evaluate_columns(&candidate)?;
            if fc.abs() > current && fc.abs() >= current + SUFFICIENT_INCREASE * step * slope {
                accepted = Some((candidate, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((candidate, fc)) = accepted else {
            converged = true;
            break;
        };
        let gain = (fc.abs() - current) / current.max(f64::MIN_POSITIVE);
        v = candidate;
        f = fc;
        values.push(f.abs());
        if gain < GAIN_TOL {
            converged = true;
            break;
        }
    }
    Ok(AscentTrace { values, frame: v, converged })
}

/// Multi-restart comass estimate. Restart `i` starts from a Haar-random
/// frame seeded by `seed ^ i`; restarts run in parallel and merge by the
/// largest value, ties to the lowest restart index.
pub fn comass_estimate(alpha: &FloatForm, restarts: usize, seed: u64, max_iters: usize) -> Result<ComassReport> {
    let k = alpha.degree();
    let dim = alpha.dim();
    if k == 0 || k > dim {
        return Err(Error::InvalidDegree { degree: k, dim });
    }
    if restarts == 0 {
        return Err(Error::OutOfRange("restarts must be at least 1".into()));
    }
    let runs: Vec<AscentTrace> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::rng(seed ^ i as u64);
            let start = sampling::orthonormal_frame(&mut rng, dim, k);
            ascend(alpha, &start, max_iters)
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    let mut restart_values = Vec::with_capacity(restarts);
    let mut converged = 0;
    for (i, run) in runs.iter().enumerate() {
        let value = alpha.evaluate_columns(&run.frame)?.abs();
        restart_values.push(value);
        if value > restart_values[best] {
            best = i;
        }
        converged += usize::from(run.converged);
    }
    let frame = runs[best].frame.clone();
    let value = alpha.evaluate_columns(&frame)?.abs();
    Ok(ComassReport {
        value,
        frame: Frame::orthonormal(frame, 1e-10)?,
        restarts,
        converged_fraction: converged as f64 / restarts as f64,
        restart_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calib::catalog::{catalog_by_name, g2_phi};
    use crate::symplin::standard_omega;

    #[test]
    fn gradient_matches_finite_differences() {
        let alpha = g2_phi();
        let mut rng = sampling::rng(1);
        let v = sampling::orthonormal_frame(&mut rng, 7, 3);
        let g = euclidean_gradient(&alpha, &v).unwrap();
        let h = 1e-6;
        for (m, j) in [(0, 0), (3, 1), (6, 2)] {
            let mut vp = v.clone();
            vp[(m, j)] += h;
            let mut vm = v.clone();
            vm[(m, j)] -= h;
            let fd = (alpha.evaluate_columns(&vp).unwrap() - alpha.evaluate_columns(&vm).unwrap()) / (2.0 * h);
            assert!((fd - g[(m, j)]).abs() < 1e-8);
        }
    }

    #[test]
    fn ascent_trace_is_monotone() {
        let alpha = catalog_by_name("slag_re(0)", 6).unwrap().real().unwrap().clone();
        let mut rng = sampling::rng(4);
        let start = sampling::orthonormal_frame(&mut rng, 6, 3);
        let trace = ascend(&alpha, &start, 500).unwrap();
        assert!(trace.values.windows(2).all(|w| w[1] > w[0]));
        assert!(linalg::gram_residual(&trace.frame) < 1e-12);
    }

    #[test]
    fn omega_has_comass_one() {
        let r = comass_estimate(&standard_omega(2), 8, 7, 500).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
        let r = comass_estimate(&catalog_by_name("omega_power_normalized(2)", 6).unwrap().real().unwrap().clone(), 8, 7, 500).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn report_is_reproducible_and_certified() {
        let alpha = g2_phi();
        let a = comass_estimate(&alpha, 6, 99, 300).unwrap();
        let b = comass_estimate(&alpha, 6, 99, 300).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.value, alpha.evaluate_columns(a.frame.columns()).unwrap().abs());
        assert!(linalg::gram_residual(a.frame.columns()) < 1e-10);
    }

    #[test]
    fn rejects_degenerate_requests() {
        assert!(comass_estimate(&FloatForm::scalar(3, 1.0), 2, 0, 10).is_err());
        assert!(comass_estimate(&standard_omega(1), 0, 0, 10).is_err());
    }
}
