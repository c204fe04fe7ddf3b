//! Bounded Nelder-Mead simplex minimization.
//!
//! Small derivative-free minimizer for the handful of low-dimensional fits
//! in this crate. Box bounds are enforced by projecting every trial point
//! into the box before evaluation. Deterministic: no internal randomness.

/// Options for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadConfig {
    /// Hard cap on objective evaluations.
    pub max_evals: usize,
    /// Convergence: every simplex vertex within this relative distance of
    /// the best vertex, per coordinate.
    pub rel_tol: f64,
    /// Initial simplex step as a fraction of each bound interval's width.
    pub initial_step_rel: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            max_evals: 4000,
            rel_tol: 1e-6,
            initial_step_rel: 0.05,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

fn clamp_into(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (xi, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *xi = xi.clamp(lo, hi);
    }
}

/// Minimizes `f` over the box `bounds` starting from `x0` (projected into
/// the box). Standard reflection/expansion/contraction/shrink coefficients
/// (1, 2, 1/2, 1/2).
pub fn nelder_mead(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x0: &[f64],
    bounds: &[(f64, f64)],
    config: &NelderMeadConfig,
) -> MinimizeResult {
    assert_eq!(x0.len(), bounds.len(), "one bound pair per parameter");
    let dim = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        f(x)
    };

    // Initial simplex: x0 plus one step along each axis, stepping inward
    // when the step would leave the box.
    let mut start = x0.to_vec();
    clamp_into(&mut start, bounds);
    let mut simplex: Vec<Vec<f64>> = vec![start.clone()];
    for j in 0..dim {
        let (lo, hi) = bounds[j];
        let step = config.initial_step_rel * (hi - lo);
        let mut vertex = start.clone();
        vertex[j] = if vertex[j] + step <= hi {
            vertex[j] + step
        } else {
            vertex[j] - step
        };
        simplex.push(vertex);
    }
    let mut values: Vec<f64> = simplex
        .iter()
        .map(|v| eval(v, &mut evaluations))
        .collect();

    let converged = |simplex: &[Vec<f64>], bounds: &[(f64, f64)], tol: f64| {
        let best = &simplex[0];
        simplex.iter().skip(1).all(|v| {
            v.iter().zip(best).zip(bounds).all(|((&a, &b), &(lo, hi))| {
                let scale = b.abs().max(1e-6 * (hi - lo)).max(f64::MIN_POSITIVE);
                (a - b).abs() <= tol * scale
            })
        })
    };

    loop {
        // Order ascending by value.
        let mut order: Vec<usize> = (0..simplex.len()).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite objective"));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if converged(&simplex, bounds, config.rel_tol) {
            return MinimizeResult {
                x: simplex[0].clone(),
                value: values[0],
                evaluations,
                converged: true,
            };
        }
        if evaluations >= config.max_evals {
            return MinimizeResult {
                x: simplex[0].clone(),
                value: values[0],
                evaluations,
                converged: false,
            };
        }

        let worst = dim;
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..worst].iter().map(|v| v[j]).sum::<f64>() / worst as f64)
            .collect();
        let blend = |t: f64| -> Vec<f64> {
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(&c, &w)| c + t * (c - w))
                .collect();
            clamp_into(&mut x, bounds);
            x
        };

        let reflected = blend(1.0);
        let reflected_value = eval(&reflected, &mut evaluations);
        if reflected_value < values[0] {
            let expanded = blend(2.0);
            let expanded_value = eval(&expanded, &mut evaluations);
            if expanded_value < reflected_value {
                simplex[worst] = expanded;
                values[worst] = expanded_value;
            } else {
                simplex[worst] = reflected;
                values[worst] = reflected_value;
            }
        } else if reflected_value < values[worst - 1] {
            simplex[worst] = reflected;
            values[worst] = reflected_value;
        } else {
            let contracted = if reflected_value < values[worst] {
                blend(0.5)
            } else {
                blend(-0.5)
            };
            let contracted_value = eval(&contracted, &mut evaluations);
            if contracted_value < values[worst].min(reflected_value) {
                simplex[worst] = contracted;
                values[worst] = contracted_value;
            } else {
                // Shrink toward the best vertex.
                for i in 1..simplex.len() {
                    for j in 0..dim {
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    }
                    values[i] = eval(&simplex[i].clone(), &mut evaluations);
                }
            }
        }
    }
}
