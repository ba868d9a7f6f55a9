//! Derivative-free Nelder-Mead minimization used by the witness-constant and
//! discord optimizers.

#[derive(Clone, Debug)]
pub struct NelderMead {
    /// Initial simplex edge length along each axis.
    pub step: f64,
    /// Stop when the spread of objective values across the simplex is below this.
    pub ftol: f64,
    pub max_evals: usize,
}

#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            step: 0.1,
            ftol: 1e-9,
            max_evals: 500,
        }
    }
}

impl NelderMead {
    pub fn minimize<F>(&self, mut f: F, x0: &[f64]) -> Minimum
    where
        F: FnMut(&[f64]) -> f64,
    {
        const ALPHA: f64 = 1.0;
        const GAMMA: f64 = 2.0;
        const RHO: f64 = 0.5;
        const SHRINK: f64 = 0.5;

        let n = x0.len();
        let mut evals = 0;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            let v = f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let v0 = eval(x0, &mut evals);
        simplex.push((x0.to_vec(), v0));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.step;
            let v = eval(&x, &mut evals);
            simplex.push((x, v));
        }

        let mut converged = false;
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            if (worst - best).abs() <= self.ftol {
                converged = true;
                break;
            }
            if evals >= self.max_evals {
                break;
            }

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };

            let xr = along(-ALPHA);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                let xe = along(-GAMMA);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            // outside contraction if the reflection improved on the worst point
            let xc = if fr < simplex[n].1 { along(-RHO) } else { along(RHO) };
            let fc = eval(&xc, &mut evals);
            if fc < fr.min(simplex[n].1) {
                simplex[n] = (xc, fc);
                continue;
            }
            let x_best = simplex[0].0.clone();
            for entry in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = x_best
                    .iter()
                    .zip(&entry.0)
                    .map(|(b, xi)| b + SHRINK * (xi - b))
                    .collect();
                let v = eval(&x, &mut evals);
                *entry = (x, v);
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            evals,
            converged,
        }
    }
}
