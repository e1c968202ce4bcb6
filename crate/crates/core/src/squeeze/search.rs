use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::group::{GroupSpec, MEMBERSHIP_TOL};
use super::nelder_mead::nelder_mead;
use crate::calib::{enclosing_radius, require_orthonormal_basis, AffineMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::sampling;

/// Range of the random chart parameters used for restarts and sweeps.
pub const PARAM_SPREAD: f64 = 0.5;
/// Initial Nelder–Mead simplex edge.
pub const SIMPLEX_STEP: f64 = 0.3;
/// Relative floor checked by [`nonsqueezing_sweep`].
pub const SWEEP_FLOOR: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartRecord {
    pub restart: usize,
    pub seed: u64,
    pub component: usize,
    pub radius: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SqueezeResult {
    pub group: GroupSpec,
    /// Radius `r` of the ball being squeezed.
    pub ball_radius: f64,
    pub best_radius: f64,
    pub best_params: Vec<f64>,
    pub best_component: usize,
    /// Optimal translation: zero after projecting out `P_L b`.
    pub best_translation: Vec<f64>,
    #[serde(serialize_with = "linalg::serialize_rows")]
    pub best_element: DMatrix<f64>,
    /// Iterations used by the winning restart.
    pub iterations: usize,
    pub restarts: Vec<RestartRecord>,
}

impl SqueezeResult {
    /// Best radius of each restart, in restart order.
    pub fn trace(&self) -> Vec<f64> {
        self.restarts.iter().map(|r| r.radius).collect()
    }
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ restart as u64
}

fn radius_of(basis: &DMatrix<f64>, a: DMatrix<f64>, r: f64) -> f64 {
    enclosing_radius(basis, &AffineMap::linear(a), r).unwrap_or(f64::INFINITY)
}

fn check_inputs(group: &GroupSpec, basis: &DMatrix<f64>, r: f64) -> Result<()> {
    group.validate()?;
    require_orthonormal_basis(basis)?;
    if basis.nrows() != group.dim() {
        return Err(Error::DimensionMismatch { expected: group.dim(), found: basis.nrows() });
    }
    if !(r > 0.0) {
        return Err(Error::OutOfRange(format!("ball radius {r} must be positive")));
    }
    Ok(())
}

/// Minimizes the enclosing cylinder radius of `g(B(r))` over `g ∈ G` by
/// multi-restart Nelder–Mead on the group chart. Restart 0 starts at the
/// identity; restart `i` otherwise starts at random parameters seeded by
/// `seed ^ i` on component `i mod components`. The winner (smallest radius,
/// lowest restart on ties) is re-certified from scratch.
pub fn squeeze_search(
    group: &GroupSpec,
    basis: &DMatrix<f64>,
    r: f64,
    restarts: usize,
    seed: u64,
    budget: usize,
) -> Result<SqueezeResult> {
    check_inputs(group, basis, r)?;
    if restarts == 0 {
        return Err(Error::OutOfRange("restarts must be at least 1".into()));
    }
    let p = group.param_count();
    let components = group.components();
    let runs: Vec<(RestartRecord, DVector<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|i| {
            let s = restart_seed(seed, i);
            let component = i % components;
            let x0 = if i == 0 {
                DVector::zeros(p)
            } else {
                let mut rng = sampling::rng(s);
                DVector::from_fn(p, |_, _| rng.gen_range(-PARAM_SPREAD..=PARAM_SPREAD))
            };
            let objective = |x: &DVector<f64>| match group.element(x.as_slice(), component) {
                Ok(a) => radius_of(basis, a, r),
                Err(_) => f64::INFINITY,
            };
            let m = nelder_mead(objective, &x0, SIMPLEX_STEP, budget);
            let record = RestartRecord { restart: i, seed: s, component, radius: m.value, iterations: m.iterations };
            (record, m.x)
        })
        .collect();

    let mut best = 0;
    for (i, (rec, _)) in runs.iter().enumerate() {
        if rec.radius < runs[best].0.radius {
            best = i;
        }
    }
    let (record, params) = &runs[best];
    let element = group.element(params.as_slice(), record.component)?;
    let certified = enclosing_radius(basis, &AffineMap::linear(element.clone()), r)?;
    if certified != record.radius {
        return Err(Error::Tripwire(format!(
            "re-certified radius {certified} differs from optimizer value {}",
            record.radius
        )));
    }
    if !group.is_member(&element, MEMBERSHIP_TOL)? {
        return Err(Error::Tripwire("best element fails its group membership test".into()));
    }
    Ok(SqueezeResult {
        group: group.clone(),
        ball_radius: r,
        best_radius: certified,
        best_params: params.iter().copied().collect(),
        best_component: record.component,
        best_translation: vec![0.0; group.dim()],
        best_element: element,
        iterations: record.iterations,
        restarts: runs.into_iter().map(|(rec, _)| rec).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub trials: usize,
    pub min_radius: f64,
    pub argmin_trial: usize,
    /// `r(1 − 1e−9)`.
    pub floor: f64,
    /// Trials whose radius fell below the floor.
    pub violations: usize,
    /// Sampled elements failing the membership test.
    pub non_members: usize,
}

impl SweepReport {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.non_members == 0
    }
}

/// Random group elements with random translations: records the smallest
/// exact enclosing radius of `A(B(r)) + b` and counts floor violations.
pub fn nonsqueezing_sweep(group: &GroupSpec, basis: &DMatrix<f64>, r: f64, trials: usize, seed: u64) -> Result<SweepReport> {
    check_inputs(group, basis, r)?;
    let dim = group.dim();
    let results: Vec<(f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = sampling::rng(restart_seed(seed, i));
            let a = group.sample(&mut rng, PARAM_SPREAD);
            let b = sampling::gaussian_vector(&mut rng, dim);
            let member = group.is_member(&a, MEMBERSHIP_TOL)?;
            let radius = enclosing_radius(basis, &AffineMap::new(a, b)?, r)?;
            Ok((radius, member))
        })
        .collect::<Result<_>>()?;
    let floor = r * (1.0 - SWEEP_FLOOR);
    let mut argmin = 0;
    for (i, (radius, _)) in results.iter().enumerate() {
        if *radius < results[argmin].0 {
            argmin = i;
        }
    }
    Ok(SweepReport {
        trials,
        min_radius: results.get(argmin).map_or(f64::INFINITY, |x| x.0),
        argmin_trial: argmin,
        floor,
        violations: results.iter().filter(|(radius, _)| *radius < floor).count(),
        non_members: results.iter().filter(|(_, m)| !m).count(),
    })
}
