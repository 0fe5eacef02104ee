//! Gradient-boosted regression trees with exact greedy split search.
//!
//! Both objectives share the tree learner; they differ only in how
//! per-row gradients and hessians are produced each round.

use super::{Hyperparams, LogRow, TrainingSet};

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf { value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut k = 0;
        loop {
            match self.nodes[k] {
                TreeNode::Leaf { value } => return value,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => k = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, k: usize) -> usize {
            match t.nodes[k] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(t, left).max(go(t, right)),
            }
        }
        go(self, 0)
    }

    pub fn split_features(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            TreeNode::Split { feature, .. } => Some(*feature),
            TreeNode::Leaf { .. } => None,
        })
    }
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    grad: &'a [f64],
    hess: &'a [f64],
    hp: &'a Hyperparams,
    nodes: Vec<TreeNode>,
}

struct Split {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl Builder<'_> {
    fn leaf_value(&self, g: f64, h: f64) -> f64 {
        -self.hp.learning_rate * g / (h + self.hp.lambda)
    }

    fn score(&self, g: f64, h: f64) -> f64 {
        g * g / (h + self.hp.lambda)
    }

    fn best_split(&self, rows: &[usize], g: f64, h: f64) -> Option<Split> {
        let parent = self.score(g, h);
        let mut best: Option<Split> = None;
        let mut sorted = rows.to_vec();
        for f in 0..self.x[0].len() {
            sorted.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]).then(a.cmp(&b)));
            let (mut gl, mut hl) = (0.0, 0.0);
            for w in sorted.windows(2) {
                gl += self.grad[w[0]];
                hl += self.hess[w[0]];
                let (lo, hi) = (self.x[w[0]][f], self.x[w[1]][f]);
                if lo == hi {
                    continue;
                }
                let (gr, hr) = (g - gl, h - hl);
                if hl < self.hp.min_child_weight || hr < self.hp.min_child_weight {
                    continue;
                }
                let gain = 0.5 * (self.score(gl, hl) + self.score(gr, hr) - parent);
                if gain > 1e-12 && best.as_ref().is_none_or(|b| gain > b.gain) {
                    best = Some(Split {
                        feature: f,
                        threshold: lo + (hi - lo) / 2.0,
                        gain,
                    });
                }
            }
        }
        best
    }

    fn build(&mut self, rows: &[usize], depth: usize) -> usize {
        let g: f64 = rows.iter().map(|&r| self.grad[r]).sum();
        let h: f64 = rows.iter().map(|&r| self.hess[r]).sum();
        let id = self.nodes.len();
        self.nodes.push(TreeNode::Leaf {
            value: self.leaf_value(g, h),
        });
        if depth >= self.hp.max_depth || rows.len() < 2 {
            return id;
        }
        let Some(split) = self.best_split(rows, g, h) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&row| self.x[row][split.feature] <= split.threshold);
        let left = self.build(&l, depth + 1);
        let right = self.build(&r, depth + 1);
        self.nodes[id] = TreeNode::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        id
    }
}

fn fit_tree(x: &[Vec<f64>], grad: &[f64], hess: &[f64], hp: &Hyperparams) -> Tree {
    let mut b = Builder {
        x,
        grad,
        hess,
        hp,
        nodes: Vec::new(),
    };
    let rows: Vec<usize> = (0..x.len()).collect();
    b.build(&rows, 0);
    Tree { nodes: b.nodes }
}

/// Squared-error boosting on the normalised rank target.
pub(super) fn fit_pointwise(data: &TrainingSet, hp: &Hyperparams) -> (f64, Vec<Tree>, Vec<LogRow>) {
    let base = data.y.iter().sum::<f64>() / data.y.len() as f64;
    let mut pred = vec![base; data.y.len()];
    let hess = vec![1.0; data.y.len()];
    let mut trees = Vec::with_capacity(hp.rounds);
    let mut log = vec![LogRow {
        round: 0,
        loss: super::linear::mse(&pred, &data.y),
        satisfied_pairs: data.satisfied_fraction(&pred),
    }];
    for round in 1..=hp.rounds {
        let grad: Vec<f64> = pred.iter().zip(&data.y).map(|(p, y)| p - y).collect();
        let tree = fit_tree(&data.x, &grad, &hess, hp);
        for (p, x) in pred.iter_mut().zip(&data.x) {
            *p += tree.predict(x);
        }
        trees.push(tree);
        log.push(LogRow {
            round,
            loss: super::linear::mse(&pred, &data.y),
            satisfied_pairs: data.satisfied_fraction(&pred),
        });
    }
    (base, trees, log)
}

/// Logistic pair loss `log(1 + exp(-(f_hi - f_lo)))` averaged over pairs.
fn pair_gradients(data: &TrainingSet, pred: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
    let mut grad = vec![0.0; pred.len()];
    let mut hess = vec![0.0; pred.len()];
    let mut loss = 0.0;
    for &(hi, lo) in &data.pairs {
        let s = pred[hi] - pred[lo];
        let rho = 1.0 / (1.0 + s.exp());
        loss += (-s).exp().ln_1p();
        grad[hi] -= rho;
        grad[lo] += rho;
        let h = (rho * (1.0 - rho)).max(1e-16);
        hess[hi] += h;
        hess[lo] += h;
    }
    (grad, hess, loss / data.pairs.len().max(1) as f64)
}

pub(super) fn fit_pairwise(data: &TrainingSet, hp: &Hyperparams) -> (f64, Vec<Tree>, Vec<LogRow>) {
    let mut pred = vec![0.0; data.x.len()];
    let mut trees = Vec::with_capacity(hp.rounds);
    let (mut grad, mut hess, loss) = pair_gradients(data, &pred);
    let mut log = vec![LogRow {
        round: 0,
        loss,
        satisfied_pairs: data.satisfied_fraction(&pred),
    }];
    for round in 1..=hp.rounds {
        let tree = fit_tree(&data.x, &grad, &hess, hp);
        for (p, x) in pred.iter_mut().zip(&data.x) {
            *p += tree.predict(x);
        }
        trees.push(tree);
        let (g, h, loss) = pair_gradients(data, &pred);
        grad = g;
        hess = h;
        log.push(LogRow {
            round,
            loss,
            satisfied_pairs: data.satisfied_fraction(&pred),
        });
    }
    (0.0, trees, log)
}
