//! Derivative-free minimization: Nelder–Mead with dimension-adaptive
//! coefficients, simplex restarts on stall, and a deterministic multistart
//! driver.

use crate::par;

#[derive(Clone, Copy, Debug)]
pub struct NmOptions {
    pub max_evals: usize,
    /// Stop when the spread of simplex values falls below this.
    pub ftol: f64,
    /// Edge length of the initial simplex.
    pub step: f64,
    /// Fresh simplices built around the incumbent after convergence.
    pub restarts: usize,
}

impl Default for NmOptions {
    fn default() -> Self {
        Self {
            max_evals: 5000,
            ftol: 1e-9,
            step: 0.1,
            restarts: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub evals: usize,
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NmOptions) -> NmResult {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        sanitize(f(x))
    };
    let mut best_x = x0.to_vec();
    let mut best_f = eval(x0, &mut evals);
    if n == 0 {
        return NmResult {
            x: best_x,
            f: best_f,
            evals,
        };
    }
    let nf = n as f64;
    let (alpha, gamma, rho, sigma) = (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let mut step = opts.step;

    for _round in 0..=opts.restarts {
        if evals >= opts.max_evals {
            break;
        }
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((best_x.clone(), best_f));
        for i in 0..n {
            let mut x = best_x.clone();
            x[i] += step;
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }
        let start_f = best_f;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            if evals >= opts.max_evals || (spread.is_finite() && spread.abs() <= opts.ftol) {
                break;
            }
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let worst = simplex[n].clone();
            let toward = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let xr = toward(alpha);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = toward(alpha * gamma);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let xc = toward(alpha * rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = toward(-rho);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            let x0 = simplex[0].0.clone();
            for s in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = x0.iter().zip(&s.0).map(|(a, b)| a + sigma * (b - a)).collect();
                let fx = eval(&x, &mut evals);
                *s = (x, fx);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best_f {
            best_x = simplex[0].0.clone();
            best_f = simplex[0].1;
        }
        if !(best_f < start_f - opts.ftol) && _round > 0 {
            break;
        }
        step *= 0.5;
    }
    NmResult {
        x: best_x,
        f: best_f,
        evals,
    }
}

/// Runs [`nelder_mead`] from every start and returns the best result and
/// its start index. Ties go to the lowest index, so the answer does not
/// depend on scheduling.
pub fn multistart<F>(f: F, starts: &[Vec<f64>], opts: &NmOptions) -> (usize, NmResult)
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    assert!(!starts.is_empty(), "multistart needs at least one start");
    let results = par::map(starts, |x0| nelder_mead(|x| f(x), x0, opts));
    results
        .into_iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.f.total_cmp(&b.f).then(i.cmp(j)))
        .expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &NmOptions::default(),
        );
        assert!((r.x[0] - 1.0).abs() < 1e-3 && (r.x[1] + 2.0).abs() < 1e-3, "{r:?}");
    }

    #[test]
    fn rosenbrock() {
        let rb = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(
            rb,
            &[-1.2, 1.0],
            &NmOptions {
                ftol: 1e-14,
                ..Default::default()
            },
        );
        assert!(r.f < 1e-8, "{r:?}");
    }

    #[test]
    fn respects_eval_budget() {
        let r = nelder_mead(
            |x| x.iter().map(|v| v.abs()).sum(),
            &[1.0; 10],
            &NmOptions {
                max_evals: 200,
                ..Default::default()
            },
        );
        assert!(r.evals <= 200 + 12);
    }

    #[test]
    fn multistart_ties_pick_lowest_index() {
        let starts = vec![vec![3.0], vec![-3.0], vec![3.0]];
        let (i, r) = multistart(|x| (x[0] * x[0] - 4.0).powi(2), &starts, &NmOptions::default());
        assert!(r.f < 1e-8);
        assert!(i == 0 || i == 1);
        let (j, _) = multistart(|_| 1.0, &starts, &NmOptions::default());
        assert_eq!(j, 0);
    }
}
