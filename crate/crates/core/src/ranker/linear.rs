//! Linear scoring models: ridge regression on ranks (pointwise) and a
//! squared-hinge ranker on pair differences (pairwise).

use nalgebra::{DMatrix, DVector};

use super::{Hyperparams, LogRow, TrainingSet};

/// Column means and scales used to standardise inputs.
struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    fn fit(x: &[Vec<f64>]) -> Self {
        let d = x[0].len();
        let len = x.len() as f64;
        let mut mean = vec![0.0; d];
        for row in x {
            for (m, v) in mean.iter_mut().zip(row) {
                *m += v / len;
            }
        }
        let mut scale = vec![0.0; d];
        for row in x {
            for ((s, v), m) in scale.iter_mut().zip(row).zip(&mean) {
                *s += (v - m).powi(2) / len;
            }
        }
        let scale = scale
            .into_iter()
            .map(|v| if v.sqrt() > 1e-12 { v.sqrt() } else { 1.0 })
            .collect();
        Standardizer { mean, scale }
    }

    fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((v, m), s)| (v - m) / s)
            .collect()
    }

    /// Maps weights on standardised inputs back to raw inputs.
    fn unfold(&self, w: &[f64], bias: f64) -> (Vec<f64>, f64) {
        let raw: Vec<f64> = w.iter().zip(&self.scale).map(|(w, s)| w / s).collect();
        let bias = bias - raw.iter().zip(&self.mean).map(|(w, m)| w * m).sum::<f64>();
        (raw, bias)
    }
}

/// Ridge regression of the normalised rank on the features.
pub(super) fn fit_pointwise(data: &TrainingSet, hp: &Hyperparams) -> (Vec<f64>, f64, Vec<LogRow>) {
    let std = Standardizer::fit(&data.x);
    let d = data.x[0].len();
    let rows = data.x.len();
    let mut design = DMatrix::<f64>::zeros(rows, d + 1);
    for (r, row) in data.x.iter().enumerate() {
        for (c, v) in std.apply(row).into_iter().enumerate() {
            design[(r, c)] = v;
        }
        design[(r, d)] = 1.0;
    }
    let y = DVector::from_column_slice(&data.y);
    let mut gram = design.transpose() * &design;
    for c in 0..d {
        gram[(c, c)] += hp.lambda;
    }
    let rhs = design.transpose() * &y;
    let beta = match gram.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => gram
            .lu()
            .solve(&rhs)
            .unwrap_or_else(|| DVector::zeros(d + 1)),
    };
    let w: Vec<f64> = beta.iter().take(d).copied().collect();
    let (w, bias) = std.unfold(&w, beta[d]);
    let pred: Vec<f64> = data.x.iter().map(|x| dot(&w, x) + bias).collect();
    let log = vec![LogRow {
        round: 1,
        loss: mse(&pred, &data.y),
        satisfied_pairs: data.satisfied_fraction(&pred),
    }];
    (w, bias, log)
}

/// Pairwise ranker minimising `lambda/2 |w|^2 + mean over pairs of
/// max(0, 1 - w.(x_hi - x_lo))^2` by Newton steps on the active pair set,
/// with backtracking. When the minimiser leaves pairs unsatisfied, `lambda`
/// is divided by 100 and the search resumes from the current weights, down
/// to `1e-20`. At most `epochs` Newton steps are taken in total; the iterate
/// with the best satisfied-pair fraction is returned.
pub(super) fn fit_pairwise(data: &TrainingSet, hp: &Hyperparams) -> (Vec<f64>, f64, Vec<LogRow>) {
    let std = Standardizer::fit(&data.x);
    let z: Vec<Vec<f64>> = data.x.iter().map(|r| std.apply(r)).collect();
    let d = z[0].len();
    let diffs: Vec<DVector<f64>> = data
        .pairs
        .iter()
        .map(|&(hi, lo)| DVector::from_iterator(d, (0..d).map(|k| z[hi][k] - z[lo][k])))
        .collect();
    let scale = 1.0 / diffs.len().max(1) as f64;
    let objective = |w: &DVector<f64>, lambda: f64| {
        let loss: f64 = diffs.iter().map(|x| (1.0 - w.dot(x)).max(0.0).powi(2)).sum();
        0.5 * lambda * w.norm_squared() + scale * loss
    };
    let satisfied = |w: &DVector<f64>| {
        let pred: Vec<f64> = z.iter().map(|x| dot(w.as_slice(), x)).collect();
        data.satisfied_fraction(&pred)
    };

    let mut lambda = hp.lambda.max(1e-20);
    let mut w = DVector::<f64>::zeros(d);
    let mut obj = objective(&w, lambda);
    let mut best = (w.clone(), satisfied(&w));
    let mut log = vec![LogRow { round: 0, loss: obj, satisfied_pairs: best.1 }];
    let mut step = 0;
    while step < hp.epochs.max(1) {
        step += 1;
        let mut hess = DMatrix::<f64>::identity(d, d) * lambda;
        let mut grad = &w * lambda;
        for x in &diffs {
            let slack = 1.0 - w.dot(x);
            if slack > 0.0 {
                grad -= x * (2.0 * scale * slack);
                hess.ger(2.0 * scale, x, x, 1.0);
            }
        }
        let mut converged = grad.norm() < 1e-12;
        if !converged {
            let dir = match hess.clone().cholesky() {
                Some(ch) => Some(ch.solve(&grad)),
                None => hess.lu().solve(&grad),
            };
            let mut moved = false;
            if let Some(dir) = dir {
                let mut t = 1.0;
                let mut next = &w - &dir * t;
                let mut next_obj = objective(&next, lambda);
                while next_obj > obj && t > 1e-10 {
                    t *= 0.5;
                    next = &w - &dir * t;
                    next_obj = objective(&next, lambda);
                }
                if next_obj <= obj {
                    converged = obj - next_obj <= 1e-15 * obj.max(1e-300);
                    w = next;
                    obj = next_obj;
                    moved = true;
                }
            }
            converged |= !moved;
        }
        let sat = satisfied(&w);
        log.push(LogRow { round: step, loss: obj, satisfied_pairs: sat });
        if sat >= best.1 {
            best = (w.clone(), sat);
        }
        if converged {
            if best.1 >= 1.0 || lambda <= 1e-20 {
                break;
            }
            lambda = (lambda / 100.0).max(1e-20);
            obj = objective(&w, lambda);
        }
    }
    let (w, bias) = std.unfold(best.0.as_slice(), 0.0);
    (w, bias, log)
}

pub(super) fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

pub(super) fn mse(pred: &[f64], y: &[f64]) -> f64 {
    pred.iter().zip(y).map(|(p, t)| (p - t).powi(2)).sum::<f64>() / y.len().max(1) as f64
}
