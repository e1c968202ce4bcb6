use nalgebra::DVector;

/// Result of a Nelder–Mead run.
#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: DVector<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Best value after each iteration, starting with the initial vertex.
    pub history: Vec<f64>,
}

/// Nelder–Mead with dimension-adaptive coefficients. `max_iters` is the
/// only stopping rule apart from a collapsed simplex, so the best value is
/// non-increasing in the budget. Non-finite objective values count as `+∞`.
pub fn nelder_mead<F>(mut f: F, x0: &DVector<f64>, step: f64, max_iters: usize) -> Minimum
where
    F: FnMut(&DVector<f64>) -> f64,
{
    let d = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &DVector<f64>| {
        evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let start = eval(x0);
    if d == 0 {
        return Minimum { x: x0.clone(), value: start, iterations: 0, evaluations: 1, history: vec![start] };
    }

    let dd = d as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / dd, 0.75 - 0.5 / dd, 1.0 - 1.0 / dd);
    let mut simplex: Vec<(DVector<f64>, f64)> = vec![(x0.clone(), start)];
    for i in 0..d {
        let mut x = x0.clone();
        x[i] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let order = |s: &mut Vec<(DVector<f64>, f64)>| s.sort_by(|a, b| a.1.total_cmp(&b.1));
    order(&mut simplex);

    let mut history = vec![simplex[0].1.min(start)];
    let mut iterations = 0;
    while iterations < max_iters {
        let best = simplex[0].1;
        let worst = simplex[d].1;
        let diameter = simplex.iter().skip(1).map(|(x, _)| (x - &simplex[0].0).amax()).fold(0.0, f64::max);
        if (worst - best).abs() <= 1e-15 * (1.0 + best.abs()) && diameter <= 1e-12 {
            break;
        }
        iterations += 1;

        let centroid = simplex[..d].iter().fold(DVector::zeros(d), |acc, (x, _)| acc + x) / dd;
        let toward = |t: f64| &centroid + (&simplex[d].0 - &centroid) * t;
        let xr = toward(-alpha);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = toward(-alpha * gamma);
            let fe = eval(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let outside = fr < simplex[d].1;
            let xc = if outside { toward(-alpha * rho) } else { toward(rho) };
            let fc = eval(&xc);
            if fc < if outside { fr } else { simplex[d].1 } {
                simplex[d] = (xc, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x = &anchor + (&vertex.0 - &anchor) * sigma;
                    let v = eval(&x);
                    *vertex = (x, v);
                }
            }
        }
        order(&mut simplex);
        history.push(simplex[0].1);
    }
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, iterations, evaluations, history }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &DVector<f64>| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(rosen, &DVector::from_vec(vec![-1.2, 1.0]), 0.5, 5000);
        assert!(m.value < 1e-12, "{}", m.value);
        assert!((m.x[0] - 1.0).abs() < 1e-5);
    }

    #[test]
    fn history_is_monotone_and_budget_prefix_stable() {
        let f = |x: &DVector<f64>| x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.3).powi(2)).sum::<f64>();
        let x0 = DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
        let long = nelder_mead(f, &x0, 0.4, 300);
        assert!(long.history.windows(2).all(|w| w[1] <= w[0]));
        let short = nelder_mead(f, &x0, 0.4, 40);
        assert_eq!(short.history[..], long.history[..short.history.len()]);
        assert!(long.value <= short.value);
    }

    #[test]
    fn non_finite_values_are_avoided() {
        let f = |x: &DVector<f64>| if x[0] > 2.0 { f64::NAN } else { (x[0] - 1.5).powi(2) };
        let m = nelder_mead(f, &DVector::from_vec(vec![0.0]), 1.0, 200);
        assert!((m.x[0] - 1.5).abs() < 1e-6);
    }
}
