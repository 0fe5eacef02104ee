//! End-to-end experiment plumbing: corpus generation, label tuning,
//! featurization, candidate training, model selection and evaluation.
//!
//! Output layout under `output_dir`:
//!
//! ```text
//! instances/{p}_{n}/{train,validation,test}/*.txt
//! labels/{p}_{n}/{train,validation}.csv    per-instance tuned labels
//! labels/{p}_{n}/smacd.csv                 shared weights tuned on train
//! datasets/{p}_{n}/train.csv
//! models/{p}_{n}/*.model, *.log.csv, selected.model
//! reports/*.csv
//! ```

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::features::{build_dataset, RankingDataset};
use crate::instance::{generate_with_split, read_corpus, write_instance};
use crate::metrics::{
    cumulative_csv, cumulative_intermediate, ratio_csv, ratio_vs_random, records_csv, relative_csv,
    relative_to_lex, run_method, summarize, summary_csv, MethodRunRecord, RatioRow, RelativeRow,
    SummaryRow,
};
use crate::ranker::{
    importance_csv, select_model, train, Candidate, FeatureSchema, Hyperparams, ModelKind, RankModel,
    SelectionReport, Trained,
};
use crate::tuner::{read_labels, tune_dataset, tune_instance, write_labels, LabelRecord, TunerConfig};
use crate::{
    io, order_to_ranks, score_order, CostMode, Error, Heuristic, MkpInstance, PropertyWeights,
    RankVector, Result, VariableOrder,
};

pub const SPLITS: [&str; 3] = ["train", "validation", "test"];

/// Sizes used when none are configured.
pub const DEFAULT_SIZES: [[usize; 2]; 4] = [[3, 15], [3, 20], [4, 15], [5, 12]];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TunerSection {
    pub budget: usize,
    pub seeds: Vec<u64>,
    pub perturbation_sd: f64,
    pub restart_fraction: f64,
}

impl Default for TunerSection {
    fn default() -> Self {
        let d = TunerConfig::default();
        TunerSection {
            budget: d.budget,
            seeds: d.seeds,
            perturbation_sd: d.perturbation_sd,
            restart_fraction: d.restart_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RankerSection {
    /// Model classes to train.
    pub kinds: Vec<String>,
    /// Hyperparameter grid for linear classes, e.g. `lambda=0.001,0.1`.
    pub linear_grid: String,
    /// Hyperparameter grid for tree classes, e.g. `max_depth=3,6;rounds=50,100`.
    pub gbt_grid: String,
}

impl Default for RankerSection {
    fn default() -> Self {
        RankerSection {
            kinds: ModelKind::ALL.iter().map(|k| k.name().to_string()).collect(),
            linear_grid: String::new(),
            gbt_grid: "max_depth=3,6".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    /// `[p, n]` pairs.
    pub sizes: Vec<[usize; 2]>,
    pub train: usize,
    pub validation: usize,
    pub test: usize,
    pub cost_mode: CostMode,
    pub output_dir: PathBuf,
    /// Runs spending more checks than this are reported as unsolved.
    pub check_limit: Option<u64>,
    /// Random orderings per instance in the heuristic ratio table.
    pub k_random: usize,
    /// Also train one size-independent model on all sizes (method `ml_unified`).
    pub unified: bool,
    pub tuner: TunerSection,
    pub ranker: RankerSection,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            seed: 0,
            sizes: DEFAULT_SIZES.to_vec(),
            train: 60,
            validation: 20,
            test: 20,
            cost_mode: CostMode::Checks,
            output_dir: PathBuf::from("out"),
            check_limit: None,
            k_random: 5,
            unified: false,
            tuner: TunerSection::default(),
            ranker: RankerSection::default(),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&io::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.train < 1 || self.validation < 1 || self.test < 1 {
            return Err(Error::Config("train, validation and test counts must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::Config("no sizes configured".into()));
        }
        if let Some([p, n]) = self.sizes.iter().find(|[p, n]| *p < 1 || *n < 2) {
            return Err(Error::Config(format!("size ({p},{n}) needs p >= 1 and n >= 2")));
        }
        if self.k_random < 1 {
            return Err(Error::Config("k_random must be at least 1".into()));
        }
        self.kinds()?;
        self.tuner_config().validate()
    }

    pub fn tuner_config(&self) -> TunerConfig {
        TunerConfig {
            budget: self.tuner.budget,
            seeds: self.tuner.seeds.clone(),
            perturbation_sd: self.tuner.perturbation_sd,
            restart_fraction: self.tuner.restart_fraction,
            objective: self.cost_mode,
            ..TunerConfig::default()
        }
    }

    pub fn kinds(&self) -> Result<Vec<ModelKind>> {
        if self.ranker.kinds.is_empty() {
            return Err(Error::Config("no model kinds configured".into()));
        }
        self.ranker.kinds.iter().map(|k| k.parse()).collect()
    }

    pub fn grid_for(&self, kind: ModelKind) -> &str {
        if kind.is_tree() {
            &self.ranker.gbt_grid
        } else {
            &self.ranker.linear_grid
        }
    }

    fn size_dir(&self, top: &str, [p, n]: [usize; 2]) -> PathBuf {
        self.output_dir.join(top).join(format!("{p}_{n}"))
    }

    pub fn corpus_dir(&self, size: [usize; 2], split: &str) -> PathBuf {
        self.size_dir("instances", size).join(split)
    }

    pub fn labels_path(&self, size: [usize; 2], split: &str) -> PathBuf {
        self.size_dir("labels", size).join(format!("{split}.csv"))
    }

    pub fn smacd_path(&self, size: [usize; 2]) -> PathBuf {
        self.size_dir("labels", size).join("smacd.csv")
    }

    pub fn dataset_path(&self, size: [usize; 2]) -> PathBuf {
        self.size_dir("datasets", size).join("train.csv")
    }

    pub fn models_dir(&self, size: [usize; 2]) -> PathBuf {
        self.size_dir("models", size)
    }

    pub fn reports_dir(&self) -> PathBuf {
        self.output_dir.join("reports")
    }

    fn split_count(&self, split: &str) -> usize {
        match split {
            "train" => self.train,
            "validation" => self.validation,
            _ => self.test,
        }
    }
}

/// Generator seed of the `index`-th instance of a split.
pub fn instance_seed(global: u64, split: &str, index: usize) -> u64 {
    let offset = SPLITS.iter().position(|s| *s == split).unwrap_or(SPLITS.len()) as u64;
    global
        .wrapping_mul(10_000_000)
        .wrapping_add(offset * 1_000_000)
        .wrapping_add(index as u64)
}

pub fn generate_split(global: u64, [p, n]: [usize; 2], split: &str, count: usize) -> Vec<MkpInstance> {
    (0..count)
        .map(|i| generate_with_split(instance_seed(global, split, i), p, n, split))
        .collect()
}

/// Writes `instances` into `dir` as `{id}.txt`.
pub fn write_corpus(instances: &[MkpInstance], dir: &Path) -> Result<()> {
    instances
        .par_iter()
        .try_for_each(|inst| write_instance(inst, &dir.join(format!("{}.txt", inst.id))))
}

pub fn cmd_gen(cfg: &PipelineConfig) -> Result<()> {
    cfg.validate()?;
    for &size in &cfg.sizes {
        for split in SPLITS {
            let insts = generate_split(cfg.seed, size, split, cfg.split_count(split));
            write_corpus(&insts, &cfg.corpus_dir(size, split))?;
        }
    }
    Ok(())
}

/// Per-instance tuning; one label record per instance.
pub fn tune_labels(instances: &[MkpInstance], config: &TunerConfig) -> Result<Vec<LabelRecord>> {
    instances
        .par_iter()
        .map(|inst| {
            let inc = tune_instance(inst, config)?;
            Ok(LabelRecord::from_incumbent(inst, &inc, inc.objective_value))
        })
        .collect()
}

/// Per-distribution tuning. Every record carries the shared weights; the
/// objective value is the mean over `instances`.
pub fn tune_shared(instances: &[MkpInstance], config: &TunerConfig) -> Result<Vec<LabelRecord>> {
    let inc = tune_dataset(instances, config)?;
    Ok(instances
        .iter()
        .map(|inst| LabelRecord::from_incumbent(inst, &inc, inc.objective_value))
        .collect())
}

pub fn label_map(records: &[LabelRecord]) -> HashMap<String, RankVector> {
    records
        .iter()
        .map(|r| (r.instance_id.clone(), order_to_ranks(&r.order)))
        .collect()
}

/// Shared weights of a dataset-mode label file (taken from its first row).
pub fn shared_weights(records: &[LabelRecord]) -> Result<PropertyWeights> {
    let first = records.first().ok_or(Error::Empty("label file has no rows"))?;
    if records.iter().any(|r| r.weights != first.weights) {
        log::warn!("label file rows carry different weights; using the first row");
    }
    Ok(first.weights)
}

/// Trains one candidate per kind and grid point, named `{kind}_{index}`.
pub fn train_candidates(
    dataset: &RankingDataset,
    kinds: &[ModelKind],
    grid_for: impl Fn(ModelKind) -> String,
    schema: Option<FeatureSchema>,
) -> Result<Vec<(Candidate, Trained)>> {
    let mut jobs = Vec::new();
    for &kind in kinds {
        let grid = Hyperparams::grid(&Hyperparams::default_for(kind), &grid_for(kind))?;
        for (i, hp) in grid.into_iter().enumerate() {
            jobs.push((format!("{kind}_{i}"), kind, hp));
        }
    }
    jobs.into_par_iter()
        .map(|(name, kind, hp)| {
            let trained = train(dataset, kind, schema.unwrap_or(kind.default_schema()), &hp)?;
            let cand = Candidate { name, model: trained.model.clone() };
            Ok((cand, trained))
        })
        .collect()
}

/// An evaluation method: a fixed heuristic, tuned shared weights or a
/// learned ranker.
#[derive(Debug, Clone)]
pub enum Method {
    Heuristic(Heuristic),
    SharedWeights(PropertyWeights),
    Model(Box<RankModel>),
}

#[derive(Debug, Clone)]
pub struct NamedMethod {
    pub name: String,
    pub method: Method,
}

impl NamedMethod {
    pub fn new(name: impl Into<String>, method: Method) -> Self {
        NamedMethod { name: name.into(), method }
    }

    /// Parses `lex`, `min_weight`, `max_ratio`, any heuristic name,
    /// `smacd:<label file>` or `ml:<model file>`.
    pub fn parse(spec: &str) -> Result<Self> {
        if let Some(path) = spec.strip_prefix("smacd:") {
            let records = read_labels(Path::new(path))?;
            return Ok(NamedMethod::new("smacd", Method::SharedWeights(shared_weights(&records)?)));
        }
        if let Some(path) = spec.strip_prefix("ml:") {
            let model = RankModel::load(Path::new(path))?;
            return Ok(NamedMethod::new("ml", Method::Model(Box::new(model))));
        }
        let h: Heuristic = spec.parse().map_err(|_| Error::UnknownOrdering {
            name: spec.to_string(),
            valid: format!("{}, smacd:<label file>, ml:<model file>", Heuristic::valid_names().join(", ")),
        })?;
        Ok(NamedMethod::new(spec, Method::Heuristic(h)))
    }

    pub fn order(&self, instance: &MkpInstance) -> Result<VariableOrder> {
        match &self.method {
            Method::Heuristic(h) => Ok(h.order(instance)),
            Method::SharedWeights(w) => Ok(score_order(instance, w)),
            Method::Model(m) => m.predict_order(instance),
        }
    }
}

impl fmt::Display for NamedMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Runs every method on every instance. Wall-clock runs are sequential so
/// timings do not compete for cores.
pub fn evaluate(
    instances: &[MkpInstance],
    methods: &[NamedMethod],
    check_limit: Option<u64>,
    mode: CostMode,
) -> Result<Vec<MethodRunRecord>> {
    let record_time = mode == CostMode::WallTime;
    let one = |inst: &MkpInstance| -> Result<Vec<MethodRunRecord>> {
        methods
            .iter()
            .map(|m| run_method(inst, &m.name, &m.order(inst)?, check_limit, record_time))
            .collect()
    };
    let nested: Vec<Vec<MethodRunRecord>> = if record_time {
        instances.iter().map(one).collect::<Result<_>>()?
    } else {
        instances.par_iter().map(one).collect::<Result<_>>()?
    };
    Ok(nested.into_iter().flatten().collect())
}

/// Ratio of each feature-set heuristic's cost to random orderings.
pub fn heuristic_ratios(
    instances: &[MkpInstance],
    size: [usize; 2],
    k_random: usize,
    seed: u64,
    mode: CostMode,
) -> Result<Vec<RatioRow>> {
    Heuristic::FEATURE_SET
        .par_iter()
        .map(|h| {
            Ok(RatioRow {
                heuristic: h.to_string(),
                size: (size[0], size[1]),
                ratio: ratio_vs_random(instances, h, k_random, seed, mode)?,
            })
        })
        .collect()
}

/// Aggregated tables computed from run records.
#[derive(Debug, Clone)]
pub struct Report {
    pub summary: Vec<SummaryRow>,
    pub relative: Vec<RelativeRow>,
}

/// Writes `records.csv`, `summary.csv`, `relative.csv`, `cumulative.csv` and, when
/// ratios are given, `heuristic_ratios.csv` into `dir`.
pub fn write_reports(
    records: &[MethodRunRecord],
    ratios: Option<&[RatioRow]>,
    mode: CostMode,
    dir: &Path,
) -> Result<Report> {
    let summary = summarize(records, mode)?;
    let relative = relative_to_lex(records, mode)?;
    io::write_atomic(&dir.join("records.csv"), records_csv(records)?.as_bytes())?;
    io::write_atomic(&dir.join("summary.csv"), summary_csv(&summary)?.as_bytes())?;
    io::write_atomic(&dir.join("relative.csv"), relative_csv(&relative)?.as_bytes())?;
    io::write_atomic(
        &dir.join("cumulative.csv"),
        cumulative_csv(&cumulative_intermediate(records))?.as_bytes(),
    )?;
    if let Some(r) = ratios {
        io::write_atomic(&dir.join("heuristic_ratios.csv"), ratio_csv(r)?.as_bytes())?;
    }
    Ok(Report { summary, relative })
}

/// What one size produced.
#[derive(Debug, Clone)]
pub struct SizeOutcome {
    pub size: [usize; 2],
    pub selection: SelectionReport,
    pub selected: RankModel,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub sizes: Vec<SizeOutcome>,
    pub records: Vec<MethodRunRecord>,
    pub report: Report,
}

/// Runs every stage for every configured size and writes the reports.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let tuner = cfg.tuner_config();
    let kinds = cfg.kinds()?;
    let reports = cfg.reports_dir();
    let mut outcomes = Vec::new();
    let mut records = Vec::new();
    let mut ratios = Vec::new();
    let mut unified_train = Vec::new();
    let mut tests = Vec::new();

    for &size in &cfg.sizes {
        let [p, n] = size;
        log::info!("size ({p},{n}): generating corpus");
        let mut split_insts = HashMap::new();
        for split in SPLITS {
            let insts = generate_split(cfg.seed, size, split, cfg.split_count(split));
            write_corpus(&insts, &cfg.corpus_dir(size, split))?;
            split_insts.insert(split, insts);
        }
        let (train_i, val_i, test_i) =
            (&split_insts["train"], &split_insts["validation"], &split_insts["test"]);

        log::info!("size ({p},{n}): tuning labels");
        let train_labels = tune_labels(train_i, &tuner)?;
        let val_labels = tune_labels(val_i, &tuner)?;
        let smacd = tune_shared(train_i, &tuner)?;
        write_labels(&train_labels, &cfg.labels_path(size, "train"))?;
        write_labels(&val_labels, &cfg.labels_path(size, "validation"))?;
        write_labels(&smacd, &cfg.smacd_path(size))?;

        let dataset = build_dataset(train_i, &label_map(&train_labels))?;
        dataset.write(&cfg.dataset_path(size))?;
        if cfg.unified {
            unified_train.extend(dataset.rows.iter().cloned());
        }

        log::info!("size ({p},{n}): training candidates");
        let trained = train_candidates(&dataset, &kinds, |k| cfg.grid_for(k).to_string(), None)?;
        let models_dir = cfg.models_dir(size);
        for (c, t) in &trained {
            c.model.save(&models_dir.join(format!("{}.model", c.name)))?;
            io::write_atomic(&models_dir.join(format!("{}.log.csv", c.name)), t.log_csv().as_bytes())?;
        }
        let candidates: Vec<Candidate> = trained.into_iter().map(|(c, _)| c).collect();

        log::info!("size ({p},{n}): selecting");
        let selection = select_model(&candidates, val_i, &label_map(&val_labels), cfg.cost_mode)?;
        io::write_atomic(&reports.join(format!("selection_{p}_{n}.csv")), selection.to_csv().as_bytes())?;
        let selected = candidates[selection.winner].model.clone();
        selected.save(&models_dir.join("selected.model"))?;
        // importance of the best tree model, selected or not
        if let Some(&t) = selection
            .class_winners
            .iter()
            .filter(|&&i| candidates[i].model.kind.is_tree())
            .min_by(|&&a, &&b| {
                let (x, y) = (&selection.candidates[a], &selection.candidates[b]);
                x.mean_cost.unwrap().total_cmp(&y.mean_cost.unwrap())
            })
        {
            io::write_atomic(
                &reports.join(format!("importance_{p}_{n}.csv")),
                importance_csv(&candidates[t].model)?.as_bytes(),
            )?;
        }

        log::info!("size ({p},{n}): evaluating");
        let methods = vec![
            NamedMethod::new("lex", Method::Heuristic(Heuristic::Lex)),
            NamedMethod::new("min_weight", Method::Heuristic(Heuristic::MIN_WEIGHT)),
            NamedMethod::new("max_ratio", Method::Heuristic(Heuristic::MAX_RATIO)),
            NamedMethod::new("smacd", Method::SharedWeights(shared_weights(&smacd)?)),
            NamedMethod::new("ml", Method::Model(Box::new(selected.clone()))),
        ];
        records.extend(evaluate(test_i, &methods, cfg.check_limit, cfg.cost_mode)?);
        ratios.extend(heuristic_ratios(test_i, size, cfg.k_random, cfg.seed, cfg.cost_mode)?);
        tests.push(test_i.clone());
        outcomes.push(SizeOutcome { size, selection, selected });
    }

    if cfg.unified {
        log::info!("training the size-independent model");
        let data = RankingDataset { rows: unified_train };
        let model = train(
            &data,
            ModelKind::GbtPairwise,
            FeatureSchema::All,
            &Hyperparams::default_for(ModelKind::GbtPairwise),
        )?
        .model;
        model.save(&cfg.output_dir.join("models").join("unified.model"))?;
        let method = [NamedMethod::new("ml_unified", Method::Model(Box::new(model)))];
        for insts in &tests {
            records.extend(evaluate(insts, &method, cfg.check_limit, cfg.cost_mode)?);
        }
    }

    let report = write_reports(&records, Some(&ratios), cfg.cost_mode, &reports)?;
    Ok(PipelineOutcome { sizes: outcomes, records, report })
}

/// Reads a corpus written by [`cmd_gen`] or [`write_corpus`].
pub fn load_corpus(dir: &Path) -> Result<Vec<MkpInstance>> {
    let insts = read_corpus(dir)?;
    if insts.is_empty() {
        return Err(Error::Config(format!("no *.txt instances in {}", dir.display())));
    }
    Ok(insts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn micro(dir: &Path) -> PipelineConfig {
        PipelineConfig {
            seed: 3,
            sizes: vec![[2, 8]],
            train: 6,
            validation: 3,
            test: 3,
            output_dir: dir.to_path_buf(),
            tuner: TunerSection { budget: 10, ..Default::default() },
            ranker: RankerSection { gbt_grid: "rounds=5".into(), ..Default::default() },
            ..Default::default()
        }
    }

    #[test]
    fn config_toml_round_trip_and_validation() {
        let cfg = PipelineConfig::default();
        let text = cfg.to_toml().unwrap();
        assert_eq!(PipelineConfig::from_toml(&text).unwrap(), cfg);
        let partial = PipelineConfig::from_toml("seed = 9\nsizes = [[3, 15]]\ncost_mode = \"time\"\n").unwrap();
        assert_eq!(partial.seed, 9);
        assert_eq!(partial.cost_mode, CostMode::WallTime);
        assert_eq!(partial.train, 60);
        assert!(PipelineConfig::from_toml("train = 0").is_err());
        assert!(PipelineConfig::from_toml("bogus = 1").is_err());
        assert!(PipelineConfig::from_toml("[ranker]\nkinds = [\"svm\"]").is_err());
    }

    #[test]
    fn seeds_are_distinct_across_splits() {
        let a = instance_seed(1, "train", 5);
        let b = instance_seed(1, "validation", 5);
        let c = instance_seed(2, "train", 5);
        assert!(a != b && a != c && b != c);
        let insts = generate_split(1, [3, 10], "test", 4);
        assert_eq!(insts.len(), 4);
        assert!(insts[0].id.ends_with("_test"));
    }

    #[test]
    fn method_parsing() {
        assert!(matches!(NamedMethod::parse("lex").unwrap().method, Method::Heuristic(Heuristic::Lex)));
        assert_eq!(NamedMethod::parse("max_ratio").unwrap().name, "max_ratio");
        assert!(matches!(NamedMethod::parse("nope"), Err(Error::UnknownOrdering { .. })));
        assert!(NamedMethod::parse("ml:/does/not/exist").is_err());
    }

    #[test]
    fn lex_only_eval_is_all_100() {
        let insts = generate_split(0, [3, 10], "test", 4);
        let recs = evaluate(&insts, &[NamedMethod::parse("lex").unwrap()], None, CostMode::Checks).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let report = write_reports(&recs, None, CostMode::Checks, dir.path()).unwrap();
        let r = &report.relative[0];
        assert_eq!((r.nodes_pct, r.width_pct, r.checks_pct, r.gmean_pct), (100.0, 100.0, 100.0, 100.0));
        assert!(dir.path().join("cumulative.csv").exists());
        assert!(!dir.path().join("heuristic_ratios.csv").exists());
    }

    #[test]
    fn micro_pipeline_writes_everything() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = micro(dir.path());
        let out = run_pipeline(&cfg).unwrap();
        assert_eq!(out.sizes.len(), 1);
        let reports = cfg.reports_dir();
        for f in ["records.csv", "heuristic_ratios.csv", "summary.csv", "relative.csv", "cumulative.csv", "selection_2_8.csv", "importance_2_8.csv"] {
            assert!(reports.join(f).exists(), "{f}");
        }
        assert!(cfg.models_dir([2, 8]).join("selected.model").exists());
        assert_eq!(load_corpus(&cfg.corpus_dir([2, 8], "train")).unwrap().len(), 6);
        let smacd = read_labels(&cfg.smacd_path([2, 8])).unwrap();
        assert!(smacd.windows(2).all(|w| w[0].weights == w[1].weights));
        // 3 test instances x 5 methods
        assert_eq!(out.records.len(), 15);
    }
}
