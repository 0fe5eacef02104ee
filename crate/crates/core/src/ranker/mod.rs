//! Learning-to-rank models for variable orderings.
//!
//! A model scores each variable from its feature row; sorting scores in
//! decreasing order yields the predicted ordering (highest score is placed
//! first, matching rank `n` for the first variable). Pointwise models
//! regress the rank normalised by `n`; pairwise models fit the pairs
//! `(hi, lo)` of each instance with `rank(hi) > rank(lo)`.

mod gbt;
mod kendall;
mod linear;
mod selection;

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

pub use gbt::{Tree, TreeNode};
pub use kendall::kendall_tau;
pub use selection::{select_model, Candidate, CandidateScore, SelectionReport};

use crate::features::{featurize, FeatureRow, RankingDataset, FEATURE_NAMES, NUM_FEATURES, NUM_VARIABLE_FEATURES};
use crate::ordering::order_by_scores;
use crate::{io, Error, MkpInstance, Result, VariableOrder};

const FORMAT_HEADER: &str = "kpvo-rank-model 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    LinearPointwise,
    LinearPairwise,
    GbtPointwise,
    GbtPairwise,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::LinearPointwise,
        ModelKind::LinearPairwise,
        ModelKind::GbtPointwise,
        ModelKind::GbtPairwise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::LinearPointwise => "linear_pointwise",
            ModelKind::LinearPairwise => "linear_pairwise",
            ModelKind::GbtPointwise => "gbt_pointwise",
            ModelKind::GbtPairwise => "gbt_pairwise",
        }
    }

    pub fn is_pairwise(self) -> bool {
        matches!(self, ModelKind::LinearPairwise | ModelKind::GbtPairwise)
    }

    pub fn is_tree(self) -> bool {
        matches!(self, ModelKind::GbtPointwise | ModelKind::GbtPairwise)
    }

    /// Linear models see only the variable features; trees see everything.
    pub fn default_schema(self) -> FeatureSchema {
        if self.is_tree() {
            FeatureSchema::All
        } else {
            FeatureSchema::Variable
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::Model(format!(
                    "unknown model kind `{s}`; expected one of linear_pointwise, linear_pairwise, gbt_pointwise, gbt_pairwise"
                ))
            })
    }
}

/// Which of the 37 features a model consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureSchema {
    /// The 18 variable features.
    Variable,
    /// Variable plus the 19 context features.
    All,
}

impl FeatureSchema {
    pub fn width(self) -> usize {
        match self {
            FeatureSchema::Variable => NUM_VARIABLE_FEATURES,
            FeatureSchema::All => NUM_FEATURES,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FeatureSchema::Variable => "variable",
            FeatureSchema::All => "all",
        }
    }
}

impl FromStr for FeatureSchema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "variable" => Ok(FeatureSchema::Variable),
            "all" => Ok(FeatureSchema::All),
            _ => Err(Error::Model(format!("unknown feature schema `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams {
    /// Boosting rounds.
    pub rounds: usize,
    pub max_depth: usize,
    /// Tree shrinkage, or the step size of the linear pairwise learner.
    pub learning_rate: f64,
    /// L2 penalty: leaf weights, ridge coefficients, or hinge shrinkage.
    pub lambda: f64,
    pub min_child_weight: f64,
    /// Passes over the pairs for the linear pairwise learner.
    pub epochs: usize,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            rounds: 100,
            max_depth: 6,
            learning_rate: 0.1,
            lambda: 1.0,
            min_child_weight: 1.0,
            epochs: 200,
            seed: 0,
        }
    }
}

impl Hyperparams {
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::LinearPointwise => Hyperparams {
                lambda: 1e-3,
                ..Default::default()
            },
            ModelKind::LinearPairwise => Hyperparams {
                lambda: 1e-8,
                ..Default::default()
            },
            ModelKind::GbtPointwise | ModelKind::GbtPairwise => Hyperparams::default(),
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = || Error::Model(format!("bad value `{value}` for hyperparameter `{key}`"));
        match key {
            "rounds" => self.rounds = value.parse().map_err(|_| bad())?,
            "max_depth" => self.max_depth = value.parse().map_err(|_| bad())?,
            "learning_rate" => self.learning_rate = value.parse().map_err(|_| bad())?,
            "lambda" => self.lambda = value.parse().map_err(|_| bad())?,
            "min_child_weight" => self.min_child_weight = value.parse().map_err(|_| bad())?,
            "epochs" => self.epochs = value.parse().map_err(|_| bad())?,
            "seed" => self.seed = value.parse().map_err(|_| bad())?,
            _ => return Err(Error::Model(format!("unknown hyperparameter `{key}`"))),
        }
        Ok(())
    }

    fn to_line(&self) -> String {
        format!(
            "rounds={} max_depth={} learning_rate={} lambda={} min_child_weight={} epochs={} seed={}",
            self.rounds,
            self.max_depth,
            self.learning_rate,
            self.lambda,
            self.min_child_weight,
            self.epochs,
            self.seed
        )
    }

    /// Expands a grid such as `max_depth=3,6;rounds=50,100` into the
    /// cartesian product over `base`. An empty grid yields `[base]`.
    pub fn grid(base: &Hyperparams, spec: &str) -> Result<Vec<Hyperparams>> {
        let mut out = vec![base.clone()];
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, values) = part
                .split_once('=')
                .ok_or_else(|| Error::Model(format!("grid entry `{part}` is not key=values")))?;
            let mut next = Vec::new();
            for hp in &out {
                for v in values.split(',').map(str::trim) {
                    let mut h = hp.clone();
                    h.set(key.trim(), v)?;
                    next.push(h);
                }
            }
            out = next;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Linear { weights: Vec<f64>, bias: f64 },
    Trees { base: f64, trees: Vec<Tree> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankModel {
    pub kind: ModelKind,
    pub schema: FeatureSchema,
    pub hyper: Hyperparams,
    pub params: Params,
}

/// One line of a training log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub round: usize,
    pub loss: f64,
    /// Fraction of training pairs ordered correctly by the current model.
    pub satisfied_pairs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trained {
    pub model: RankModel,
    pub log: Vec<LogRow>,
}

impl Trained {
    /// `round,loss,satisfied_pairs`
    pub fn log_csv(&self) -> String {
        let mut s = String::from("round,loss,satisfied_pairs\n");
        for r in &self.log {
            let _ = writeln!(s, "{},{},{}", r.round, r.loss, r.satisfied_pairs);
        }
        s
    }
}

/// Rows projected on a schema, with regression targets and ranking pairs.
pub(crate) struct TrainingSet {
    x: Vec<Vec<f64>>,
    /// Rank divided by group size.
    y: Vec<f64>,
    /// `(hi, lo)` row indices with `rank(hi) > rank(lo)` in the same group.
    pairs: Vec<(usize, usize)>,
}

impl TrainingSet {
    fn build(dataset: &RankingDataset, schema: FeatureSchema) -> Result<Self> {
        if dataset.is_empty() {
            return Err(Error::Empty("training dataset has no rows"));
        }
        let mut set = TrainingSet {
            x: Vec::new(),
            y: Vec::new(),
            pairs: Vec::new(),
        };
        for group in dataset.groups() {
            if group.len() < 2 {
                log::warn!("skipping single-row group `{}`", group[0].instance_id);
                continue;
            }
            let start = set.x.len();
            let n = group.len() as f64;
            for row in group {
                let label = row
                    .label
                    .ok_or_else(|| Error::MissingLabel(row.instance_id.clone()))?;
                set.x.push(row.features[..schema.width()].to_vec());
                set.y.push(label as f64 / n);
            }
            for a in start..set.x.len() {
                for b in start..set.x.len() {
                    if set.y[a] > set.y[b] {
                        set.pairs.push((a, b));
                    }
                }
            }
        }
        if set.x.is_empty() {
            return Err(Error::Empty("training dataset has no group with two or more rows"));
        }
        Ok(set)
    }

    fn satisfied_fraction(&self, pred: &[f64]) -> f64 {
        if self.pairs.is_empty() {
            return 1.0;
        }
        let ok = self.pairs.iter().filter(|&&(h, l)| pred[h] > pred[l]).count();
        ok as f64 / self.pairs.len() as f64
    }
}

pub fn train(
    dataset: &RankingDataset,
    kind: ModelKind,
    schema: FeatureSchema,
    hyper: &Hyperparams,
) -> Result<Trained> {
    let data = TrainingSet::build(dataset, schema)?;
    let (params, log) = match kind {
        ModelKind::LinearPointwise => {
            let (weights, bias, log) = linear::fit_pointwise(&data, hyper);
            (Params::Linear { weights, bias }, log)
        }
        ModelKind::LinearPairwise => {
            let (weights, bias, log) = linear::fit_pairwise(&data, hyper);
            (Params::Linear { weights, bias }, log)
        }
        ModelKind::GbtPointwise => {
            let (base, trees, log) = gbt::fit_pointwise(&data, hyper);
            (Params::Trees { base, trees }, log)
        }
        ModelKind::GbtPairwise => {
            let (base, trees, log) = gbt::fit_pairwise(&data, hyper);
            (Params::Trees { base, trees }, log)
        }
    };
    Ok(Trained {
        model: RankModel {
            kind,
            schema,
            hyper: hyper.clone(),
            params,
        },
        log,
    })
}

/// Regression on ranks: `linear` picks ridge regression over boosted trees.
pub fn train_pointwise(
    dataset: &RankingDataset,
    linear: bool,
    schema: FeatureSchema,
    hyper: &Hyperparams,
) -> Result<Trained> {
    let kind = if linear { ModelKind::LinearPointwise } else { ModelKind::GbtPointwise };
    train(dataset, kind, schema, hyper)
}

/// Pairwise ranking: `linear` picks the hinge ranker over RankNet-style trees.
pub fn train_pairwise(
    dataset: &RankingDataset,
    linear: bool,
    schema: FeatureSchema,
    hyper: &Hyperparams,
) -> Result<Trained> {
    let kind = if linear { ModelKind::LinearPairwise } else { ModelKind::GbtPairwise };
    train(dataset, kind, schema, hyper)
}

impl RankModel {
    /// Score of one 37-feature row.
    pub fn score(&self, features: &[f64]) -> Result<f64> {
        if features.len() != NUM_FEATURES {
            return Err(Error::Model(format!(
                "feature row has {} entries, model expects {NUM_FEATURES}",
                features.len()
            )));
        }
        let x = &features[..self.schema.width()];
        Ok(match &self.params {
            Params::Linear { weights, bias } => linear::dot(weights, x) + bias,
            Params::Trees { base, trees } => base + trees.iter().map(|t| t.predict(x)).sum::<f64>(),
        })
    }

    pub fn scores(&self, rows: &[FeatureRow]) -> Result<Vec<f64>> {
        rows.iter().map(|r| self.score(&r.features)).collect()
    }

    pub fn predict_order(&self, instance: &MkpInstance) -> Result<VariableOrder> {
        Ok(order_by_scores(&self.scores(&featurize(instance))?))
    }

    /// Linear weights plus bias, or total tree nodes.
    pub fn num_params(&self) -> usize {
        match &self.params {
            Params::Linear { weights, .. } => weights.len() + 1,
            Params::Trees { trees, .. } => trees.iter().map(|t| t.nodes.len()).sum(),
        }
    }

    /// Split counts per feature (all 37, in [`FEATURE_NAMES`] order) divided
    /// by the largest count. Only tree models have importances.
    pub fn feature_importance(&self) -> Result<Vec<f64>> {
        let Params::Trees { trees, .. } = &self.params else {
            return Err(Error::Model(format!(
                "feature importance needs a tree model, got {}",
                self.kind
            )));
        };
        let mut counts = vec![0usize; NUM_FEATURES];
        for f in trees.iter().flat_map(Tree::split_features) {
            counts[f] += 1;
        }
        let max = counts.iter().copied().max().unwrap_or(0);
        Ok(counts
            .into_iter()
            .map(|c| if max == 0 { 0.0 } else { c as f64 / max as f64 })
            .collect())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{FORMAT_HEADER}");
        let _ = writeln!(s, "kind {}", self.kind);
        let _ = writeln!(s, "schema {}", self.schema.name());
        let _ = writeln!(s, "hyper {}", self.hyper.to_line());
        match &self.params {
            Params::Linear { weights, bias } => {
                let _ = write!(s, "linear {bias}");
                for w in weights {
                    let _ = write!(s, " {w}");
                }
                s.push('\n');
            }
            Params::Trees { base, trees } => {
                let _ = writeln!(s, "base {base}");
                let _ = writeln!(s, "trees {}", trees.len());
                for t in trees {
                    let _ = writeln!(s, "tree {}", t.nodes.len());
                    for node in &t.nodes {
                        match node {
                            TreeNode::Split {
                                feature,
                                threshold,
                                left,
                                right,
                            } => {
                                let _ = writeln!(s, "split {feature} {threshold} {left} {right}");
                            }
                            TreeNode::Leaf { value } => {
                                let _ = writeln!(s, "leaf {value}");
                            }
                        }
                    }
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::Model(format!("model file ends before {what}")))
        };
        let (no, header) = next("header")?;
        if header != FORMAT_HEADER {
            return Err(Error::parse(no, format!("expected `{FORMAT_HEADER}`")));
        }
        let field = |(no, line): (usize, &str), key: &str| -> Result<String> {
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| Error::parse(no, format!("expected `{key} ...`")))
        };
        let kind: ModelKind = field(next("kind")?, "kind")?.parse()?;
        let schema: FeatureSchema = field(next("schema")?, "schema")?.parse()?;
        let hyper_line = next("hyper")?;
        let hyper_no = hyper_line.0;
        let mut hyper = Hyperparams::default();
        for kv in field(hyper_line, "hyper")?.split_whitespace() {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::parse(hyper_no, format!("bad hyperparameter `{kv}`")))?;
            hyper.set(k, v)?;
        }
        let num = |no: usize, tok: &str| -> Result<f64> {
            tok.parse().map_err(|_| Error::parse(no, format!("bad number `{tok}`")))
        };
        let idx = |no: usize, tok: &str| -> Result<usize> {
            tok.parse().map_err(|_| Error::parse(no, format!("bad index `{tok}`")))
        };
        let width = schema.width();

        let params = if kind.is_tree() {
            let (no, line) = next("base")?;
            let base = num(no, &field((no, line), "base")?)?;
            let (no, line) = next("trees")?;
            let count = idx(no, &field((no, line), "trees")?)?;
            let mut trees = Vec::with_capacity(count);
            for _ in 0..count {
                let (no, line) = next("tree")?;
                let size = idx(no, &field((no, line), "tree")?)?;
                let mut nodes = Vec::with_capacity(size);
                for _ in 0..size {
                    let (no, line) = next("tree node")?;
                    let toks: Vec<&str> = line.split_whitespace().collect();
                    let node = match toks[..] {
                        ["leaf", v] => TreeNode::Leaf { value: num(no, v)? },
                        ["split", f, t, l, r] => {
                            let feature = idx(no, f)?;
                            if feature >= width {
                                return Err(Error::parse(no, format!(
                                    "split on feature {feature} outside the {} schema",
                                    schema.name()
                                )));
                            }
                            let (left, right) = (idx(no, l)?, idx(no, r)?);
                            if left >= size || right >= size {
                                return Err(Error::parse(no, "child index out of range"));
                            }
                            TreeNode::Split { feature, threshold: num(no, t)?, left, right }
                        }
                        _ => return Err(Error::parse(no, "expected `leaf v` or `split f t l r`")),
                    };
                    nodes.push(node);
                }
                if nodes.is_empty() {
                    return Err(Error::Model("empty tree".into()));
                }
                trees.push(Tree { nodes });
            }
            Params::Trees { base, trees }
        } else {
            let (no, line) = next("linear")?;
            let vals = field((no, line), "linear")?
                .split_whitespace()
                .map(|t| num(no, t))
                .collect::<Result<Vec<f64>>>()?;
            if vals.len() != width + 1 {
                return Err(Error::parse(no, format!(
                    "linear model has {} weights, schema {} needs {width}",
                    vals.len().saturating_sub(1),
                    schema.name()
                )));
            }
            Params::Linear { bias: vals[0], weights: vals[1..].to_vec() }
        };
        Ok(RankModel { kind, schema, hyper, params })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        io::write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_text(&io::read_to_string(path)?)
    }
}

pub fn predict_order(model: &RankModel, instance: &MkpInstance) -> Result<VariableOrder> {
    model.predict_order(instance)
}

/// `feature,importance` rows for all 37 features.
pub fn importance_csv(model: &RankModel) -> Result<String> {
    let imp = model.feature_importance()?;
    let mut s = String::from("feature,importance\n");
    for (name, v) in FEATURE_NAMES.iter().zip(imp) {
        let _ = writeln!(s, "{name},{v}");
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_instance;
    use crate::ordering::Heuristic;
    use crate::{order_to_ranks, RankVector};
    use crate::VariableOrder;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Groups of random feature rows labeled by a planted linear utility.
    fn planted(groups: usize, n: usize, coef: &[(usize, f64)], seed: u64) -> RankingDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        for g in 0..groups {
            let feats: Vec<[f64; NUM_FEATURES]> = (0..n)
                .map(|_| std::array::from_fn(|_| rng.random::<f64>()))
                .collect();
            let util: Vec<f64> = feats
                .iter()
                .map(|f| coef.iter().map(|&(k, c)| c * f[k]).sum())
                .collect();
            let ranks = order_to_ranks(&order_by_scores(&util));
            for (i, f) in feats.into_iter().enumerate() {
                rows.push(FeatureRow {
                    instance_id: format!("g{g}"),
                    variable: i,
                    features: f,
                    label: Some(ranks.as_slice()[i]),
                });
            }
        }
        RankingDataset { rows }
    }

    fn mean_tau(model: &RankModel, ds: &RankingDataset) -> f64 {
        let groups = ds.groups();
        groups
            .iter()
            .map(|g| {
                let pred = order_to_ranks(&order_by_scores(&model.scores(g).unwrap()));
                let label = RankVector::new(g.iter().map(|r| r.label.unwrap()).collect()).unwrap();
                kendall_tau(&pred, &label).unwrap()
            })
            .sum::<f64>()
            / groups.len() as f64
    }

    const PLANT: [(usize, f64); 3] = [(0, 2.0), (3, -1.0), (9, 0.5)];

    #[test]
    fn linear_pointwise_recovers_linear_labels() {
        // feature 2 holds rank/n exactly, the rest is noise
        let mut ds = planted(20, 12, &[(2, 1.0)], 1);
        for r in &mut ds.rows {
            r.features[2] = r.label.unwrap() as f64 / 12.0;
        }
        let t = train_pointwise(&ds, true, FeatureSchema::Variable, &Hyperparams::default_for(ModelKind::LinearPointwise)).unwrap();
        assert_eq!(mean_tau(&t.model, &ds), 1.0);
    }

    #[test]
    fn linear_pairwise_separates_planted_pairs() {
        let ds = planted(30, 15, &PLANT, 2);
        let t = train_pairwise(&ds, true, FeatureSchema::Variable, &Hyperparams::default_for(ModelKind::LinearPairwise)).unwrap();
        assert_eq!(t.log.last().unwrap().satisfied_pairs, 1.0);
        assert_eq!(mean_tau(&t.model, &ds), 1.0);
        let test = planted(10, 15, &PLANT, 3);
        assert!(mean_tau(&t.model, &test) > 0.97);
    }

    #[test]
    fn two_item_group_is_ordered() {
        let ds = RankingDataset {
            rows: (0..2)
                .map(|i| FeatureRow {
                    instance_id: "g".into(),
                    variable: i,
                    features: std::array::from_fn(|k| if k == 4 { i as f64 } else { 0.5 }),
                    label: Some(if i == 0 { 2 } else { 1 }),
                })
                .collect(),
        };
        for kind in [ModelKind::LinearPairwise, ModelKind::GbtPairwise] {
            let hp = Hyperparams { min_child_weight: 0.0, ..Hyperparams::default_for(kind) };
            let t = train(&ds, kind, kind.default_schema(), &hp).unwrap();
            let s = t.model.scores(&ds.rows).unwrap();
            assert!(s[0] > s[1], "{kind}: {s:?}");
        }
    }

    #[test]
    fn reversed_labels_flip_tau() {
        let ds = planted(20, 10, &PLANT, 4);
        let mut rev = ds.clone();
        for r in &mut rev.rows {
            r.label = Some(10 + 1 - r.label.unwrap());
        }
        let hp = Hyperparams::default_for(ModelKind::GbtPairwise);
        let a = train(&ds, ModelKind::GbtPairwise, FeatureSchema::All, &hp).unwrap();
        let b = train(&rev, ModelKind::GbtPairwise, FeatureSchema::All, &hp).unwrap();
        assert!(mean_tau(&a.model, &ds) > 0.8);
        assert!(mean_tau(&b.model, &ds) < -0.8);
    }

    #[test]
    fn gbt_zero_rounds_predicts_label_mean() {
        let ds = planted(5, 8, &PLANT, 5);
        let hp = Hyperparams { rounds: 0, ..Default::default() };
        let t = train(&ds, ModelKind::GbtPointwise, FeatureSchema::All, &hp).unwrap();
        let mean = ds.rows.iter().map(|r| r.label.unwrap() as f64 / 8.0).sum::<f64>() / ds.len() as f64;
        for r in &ds.rows {
            assert!((t.model.score(&r.features).unwrap() - mean).abs() < 1e-12);
        }
    }

    #[test]
    fn gbt_losses_do_not_increase() {
        let ds = planted(20, 10, &PLANT, 6);
        for kind in [ModelKind::GbtPointwise, ModelKind::GbtPairwise] {
            let hp = Hyperparams { rounds: 30, ..Default::default() };
            let t = train(&ds, kind, FeatureSchema::All, &hp).unwrap();
            assert_eq!(t.log.len(), 31);
            for w in t.log.windows(2) {
                assert!(w[1].loss <= w[0].loss + 1e-12, "{kind}: {:?}", w);
            }
            assert!(t.log.last().unwrap().satisfied_pairs > t.log[0].satisfied_pairs);
            assert!(t.model.num_params() > 0);
            if let Params::Trees { trees, .. } = &t.model.params {
                assert!(trees.iter().all(|tr| tr.depth() <= hp.max_depth));
            }
        }
    }

    #[test]
    fn planted_single_feature_has_top_importance() {
        let ds = planted(20, 10, &[(5, 1.0)], 7);
        let t = train(&ds, ModelKind::GbtPairwise, FeatureSchema::All, &Hyperparams { rounds: 20, ..Default::default() }).unwrap();
        let imp = t.model.feature_importance().unwrap();
        assert_eq!(imp[5], 1.0);
        assert!(imp.iter().all(|v| (0.0..=1.0).contains(v)));
        let csv = importance_csv(&t.model).unwrap();
        assert!(csv.contains("\nmax-value-by-weight,1\n"), "{csv}");
    }

    #[test]
    fn single_split_importance() {
        let model = RankModel {
            kind: ModelKind::GbtPointwise,
            schema: FeatureSchema::All,
            hyper: Hyperparams::default(),
            params: Params::Trees {
                base: 0.0,
                trees: vec![Tree {
                    nodes: vec![
                        TreeNode::Split { feature: 8, threshold: 0.5, left: 1, right: 2 },
                        TreeNode::Leaf { value: -1.0 },
                        TreeNode::Leaf { value: 1.0 },
                    ],
                }],
            },
        };
        let imp = model.feature_importance().unwrap();
        assert_eq!(imp[8], 1.0);
        assert_eq!(imp.iter().sum::<f64>(), 1.0);
        let linear = RankModel {
            kind: ModelKind::LinearPointwise,
            schema: FeatureSchema::Variable,
            hyper: Hyperparams::default(),
            params: Params::Linear { weights: vec![0.0; 18], bias: 0.0 },
        };
        assert!(linear.feature_importance().is_err());
    }

    #[test]
    fn min_weight_passthrough_model() {
        // a linear model reading only the min_weight rank feature
        let mut weights = vec![0.0; NUM_VARIABLE_FEATURES];
        weights[8] = 1.0;
        let model = RankModel {
            kind: ModelKind::LinearPointwise,
            schema: FeatureSchema::Variable,
            hyper: Hyperparams::default(),
            params: Params::Linear { weights, bias: 0.0 },
        };
        for seed in 0..20 {
            let inst = generate_instance(seed, 3, 15);
            assert_eq!(predict_order(&model, &inst).unwrap(), Heuristic::MIN_WEIGHT.order(&inst));
        }
    }

    #[test]
    fn text_format_round_trip() {
        let ds = planted(6, 8, &PLANT, 8);
        for kind in ModelKind::ALL {
            let hp = Hyperparams { rounds: 5, epochs: 5, ..Hyperparams::default_for(kind) };
            let m = train(&ds, kind, kind.default_schema(), &hp).unwrap().model;
            let back = RankModel::from_text(&m.to_text()).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn malformed_model_files() {
        assert!(RankModel::from_text("nope").is_err());
        let bad_feature = "kpvo-rank-model 1\nkind gbt_pointwise\nschema variable\nhyper rounds=1\nbase 0\ntrees 1\ntree 3\nsplit 30 0.5 1 2\nleaf 0\nleaf 1\n";
        assert!(matches!(RankModel::from_text(bad_feature), Err(Error::Parse { line: 8, .. })));
        let short = "kpvo-rank-model 1\nkind linear_pairwise\nschema variable\nhyper seed=1\nlinear 0 1 2\n";
        assert!(RankModel::from_text(short).is_err());
    }

    #[test]
    fn errors_on_empty_and_unlabeled() {
        let hp = Hyperparams::default();
        assert!(train(&RankingDataset::default(), ModelKind::GbtPairwise, FeatureSchema::All, &hp).is_err());
        let mut ds = planted(2, 4, &PLANT, 9);
        ds.rows[1].label = None;
        assert!(matches!(train(&ds, ModelKind::GbtPairwise, FeatureSchema::All, &hp), Err(Error::MissingLabel(_))));
        // only single-row groups: nothing to learn from
        let single = RankingDataset { rows: vec![ds.rows[0].clone()] };
        assert!(train(&single, ModelKind::LinearPointwise, FeatureSchema::Variable, &hp).is_err());
    }

    #[test]
    fn grid_expansion() {
        let base = Hyperparams::default();
        let g = Hyperparams::grid(&base, "max_depth=3,6; rounds=10,20,30").unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!((g[0].max_depth, g[0].rounds), (3, 10));
        assert_eq!((g[5].max_depth, g[5].rounds), (6, 30));
        assert_eq!(Hyperparams::grid(&base, "").unwrap(), vec![base.clone()]);
        assert!(Hyperparams::grid(&base, "depth=3").is_err());
        assert!(Hyperparams::grid(&base, "rounds=x").is_err());
    }

    #[test]
    fn score_rejects_wrong_width() {
        let m = RankModel {
            kind: ModelKind::LinearPointwise,
            schema: FeatureSchema::Variable,
            hyper: Hyperparams::default(),
            params: Params::Linear { weights: vec![0.0; 18], bias: 0.0 },
        };
        assert!(m.score(&[0.0; 18]).is_err());
    }

    #[test]
    fn unified_model_accepts_unseen_sizes() {
        let insts: Vec<MkpInstance> = (0..6)
            .map(|s| if s % 2 == 0 { generate_instance(s, 3, 10) } else { generate_instance(s, 4, 8) })
            .collect();
        let labels = insts
            .iter()
            .map(|i| (i.id.clone(), order_to_ranks(&Heuristic::MIN_WEIGHT.order(i))))
            .collect();
        let ds = crate::features::build_dataset(&insts, &labels).unwrap();
        let hp = Hyperparams { rounds: 10, ..Default::default() };
        let m = train(&ds, ModelKind::GbtPairwise, FeatureSchema::All, &hp).unwrap().model;
        for (p, n) in [(2, 5), (5, 12), (7, 20)] {
            let inst = generate_instance(99, p, n);
            let order = m.predict_order(&inst).unwrap();
            assert!(VariableOrder::new(order.as_slice().to_vec()).is_ok());
            assert_eq!(order.len(), n);
        }
    }

    proptest::proptest! {
        #[test]
        fn predict_order_is_permutation_equivariant(seed in 0u64..500, coef in proptest::collection::vec(-1.0f64..1.0, 7)) {
            let inst = generate_instance(seed, 3, 10);
            let mut weights = vec![0.0; NUM_VARIABLE_FEATURES];
            weights[..7].copy_from_slice(&coef);
            let m = RankModel {
                kind: ModelKind::LinearPointwise,
                schema: FeatureSchema::Variable,
                hyper: Hyperparams::default(),
                params: Params::Linear { weights, bias: 0.0 },
            };
            let scores = m.scores(&featurize(&inst)).unwrap();
            let mut sorted = scores.clone();
            sorted.sort_by(f64::total_cmp);
            proptest::prop_assume!(sorted.windows(2).all(|w| w[1] - w[0] > 1e-9));
            let perm: Vec<usize> = (0..10).rev().collect();
            let permuted = inst.permuted(&perm);
            let a = m.predict_order(&inst).unwrap();
            let b = m.predict_order(&permuted).unwrap();
            // position k of the permuted instance holds original variable perm[k]
            let mapped: Vec<usize> = b.as_slice().iter().map(|&k| perm[k]).collect();
            proptest::prop_assert_eq!(mapped, a.as_slice().to_vec());
        }
    }
}
