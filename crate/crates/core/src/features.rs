//! Per-variable and per-instance features for learning orderings.
//!
//! Each variable gets 37 features: 18 variable features followed by 19
//! context features shared by all variables of the instance. The layout is
//! fixed by [`FEATURE_NAMES`] and does not depend on `p` or `n`.

use std::collections::HashMap;
use std::path::Path;

use crate::ordering::{normalized_property_matrix, Heuristic, NUM_PROPERTIES};
use crate::{io, order_to_ranks, Error, MkpInstance, RankVector, Result};

pub const NUM_VARIABLE_FEATURES: usize = 18;
pub const NUM_CONTEXT_FEATURES: usize = 19;
pub const NUM_FEATURES: usize = NUM_VARIABLE_FEATURES + NUM_CONTEXT_FEATURES;

pub const FEATURE_NAMES: [&str; NUM_FEATURES] = [
    "weight",
    "avg-value",
    "max-value",
    "min-value",
    "avg-value-by-weight",
    "max-value-by-weight",
    "min-value-by-weight",
    "rank_max_weight",
    "rank_min_weight",
    "rank_max_avg-value",
    "rank_min_avg-value",
    "rank_max_max-value",
    "rank_min_max-value",
    "rank_max_min-value",
    "rank_min_min-value",
    "rank_max_avg-value-by-weight",
    "rank_max_max-value-by-weight",
    "value_sd",
    "n_objectives",
    "n_items",
    "capacity",
    "weight_mean",
    "weight_min",
    "weight_max",
    "weight_sd",
    "value_mean_mean",
    "value_mean_min",
    "value_mean_max",
    "value_min_mean",
    "value_min_min",
    "value_min_max",
    "value_max_mean",
    "value_max_min",
    "value_max_max",
    "value_sd_mean",
    "value_sd_min",
    "value_sd_max",
];

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub instance_id: String,
    /// 0-based variable index.
    pub variable: usize,
    pub features: [f64; NUM_FEATURES],
    pub label: Option<usize>,
}

impl FeatureRow {
    pub fn variable_features(&self) -> &[f64] {
        &self.features[..NUM_VARIABLE_FEATURES]
    }

    pub fn context_features(&self) -> &[f64] {
        &self.features[NUM_VARIABLE_FEATURES..]
    }
}

/// mean, min, max and population standard deviation.
fn summary(xs: impl IntoIterator<Item = f64>) -> [f64; 4] {
    let xs: Vec<f64> = xs.into_iter().collect();
    let len = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / len;
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / len;
    [mean, min, max, var.sqrt()]
}

fn context_features(instance: &MkpInstance) -> [f64; NUM_CONTEXT_FEATURES] {
    let mut out = [0.0; NUM_CONTEXT_FEATURES];
    out[0] = instance.p() as f64;
    out[1] = instance.n() as f64;
    out[2] = instance.capacity as f64;
    let ws = summary(instance.weights.iter().map(|&w| w as f64));
    out[3..7].copy_from_slice(&ws);
    // per objective: [mean, min, max, sd] over items
    let per_objective: Vec<[f64; 4]> = instance
        .values
        .iter()
        .map(|row| summary(row.iter().map(|&v| v as f64)))
        .collect();
    for stat in 0..4 {
        let [mean, min, max, _] = summary(per_objective.iter().map(|s| s[stat]));
        out[7 + 3 * stat..7 + 3 * stat + 3].copy_from_slice(&[mean, min, max]);
    }
    out
}

/// One unlabeled row per variable.
pub fn featurize(instance: &MkpInstance) -> Vec<FeatureRow> {
    let n = instance.n();
    let props = normalized_property_matrix(instance);
    let ranks: Vec<RankVector> = Heuristic::FEATURE_SET
        .iter()
        .map(|h| order_to_ranks(&h.order(instance)))
        .collect();
    let context = context_features(instance);

    (0..n)
        .map(|i| {
            let mut f = [0.0; NUM_FEATURES];
            f[..NUM_PROPERTIES].copy_from_slice(&props[i]);
            for (k, r) in ranks.iter().enumerate() {
                f[NUM_PROPERTIES + k] = r.as_slice()[i] as f64 / n as f64;
            }
            f[NUM_VARIABLE_FEATURES - 1] = summary(instance.item_values(i).iter().map(|&v| v as f64))[3];
            f[NUM_VARIABLE_FEATURES..].copy_from_slice(&context);
            FeatureRow {
                instance_id: instance.id.clone(),
                variable: i,
                features: f,
                label: None,
            }
        })
        .collect()
}

/// Rows grouped contiguously by instance; each group is one ranking query.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankingDataset {
    pub rows: Vec<FeatureRow>,
}

impl RankingDataset {
    /// Contiguous runs of rows sharing an instance id.
    pub fn groups(&self) -> Vec<&[FeatureRow]> {
        self.rows
            .chunk_by(|a, b| a.instance_id == b.instance_id)
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["instance_id".to_string(), "var_index".to_string()];
        header.extend((1..=NUM_FEATURES).map(|k| format!("f{k}")));
        header.push("label".into());
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.instance_id.clone(), (r.variable + 1).to_string()];
            rec.extend(r.features.iter().map(f64::to_string));
            rec.push(r.label.map(|l| l.to_string()).unwrap_or_default());
            w.write_record(&rec)?;
        }
        w.into_inner()
            .map_err(|e| Error::Config(format!("csv buffer: {e}")))
    }

    pub fn from_csv(data: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(data.as_bytes());
        let header = rdr.headers()?.clone();
        if header.len() != NUM_FEATURES + 3 || &header[0] != "instance_id" || &header[1] != "var_index" {
            return Err(Error::parse(1, "unexpected dataset header"));
        }
        let mut rows = Vec::new();
        for (k, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let line = k + 2;
            let bad = |what: &str| Error::parse(line, format!("bad {what}"));
            let variable: usize = rec[1].parse().map_err(|_| bad("var_index"))?;
            if variable == 0 {
                return Err(bad("var_index"));
            }
            let mut features = [0.0; NUM_FEATURES];
            for (j, f) in features.iter_mut().enumerate() {
                *f = rec[j + 2].parse().map_err(|_| bad(&format!("f{}", j + 1)))?;
            }
            let label = match rec[NUM_FEATURES + 2].trim() {
                "" => None,
                s => Some(s.parse().map_err(|_| bad("label"))?),
            };
            rows.push(FeatureRow {
                instance_id: rec[0].to_string(),
                variable: variable - 1,
                features,
                label,
            });
        }
        Ok(RankingDataset { rows })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        io::write_atomic(path, &self.to_csv()?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_csv(&io::read_to_string(path)?)
    }
}

/// Joins features with label ranks; every instance needs a label of length `n`.
pub fn build_dataset(
    instances: &[MkpInstance],
    labels: &HashMap<String, RankVector>,
) -> Result<RankingDataset> {
    let mut rows = Vec::new();
    for inst in instances {
        let ranks = labels
            .get(&inst.id)
            .filter(|r| r.len() == inst.n())
            .ok_or_else(|| Error::MissingLabel(inst.id.clone()))?;
        for mut row in featurize(inst) {
            row.label = Some(ranks.as_slice()[row.variable]);
            rows.push(row);
        }
    }
    Ok(RankingDataset { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::generate_instance;
    use crate::instance::tests::t2;
    use crate::VariableOrder;
    use proptest::prelude::*;

    #[test]
    fn thirty_seven_features_for_every_size() {
        for (p, n) in [(2, 3), (3, 20), (5, 12), (7, 40)] {
            let rows = featurize(&generate_instance(1, p, n));
            assert_eq!(rows.len(), n);
            assert!(rows.iter().all(|r| r.features.len() == 37));
        }
        assert_eq!(FEATURE_NAMES.len(), 37);
    }

    #[test]
    fn t2_rank_and_value_features() {
        let rows = featurize(&t2());
        // min_weight order is (1,2,3): variable 1 gets rank 3 of 3
        assert_eq!(rows[0].features[8], 1.0);
        assert_eq!(rows[2].features[8], 1.0 / 3.0);
        // values (3,1) -> population sd 1
        assert_eq!(rows[0].features[17], 1.0);
        assert_eq!(rows[2].features[17], 0.0);
        // context
        let c = rows[0].context_features();
        assert_eq!(&c[..3], &[2.0, 3.0, 5.0]);
        assert_eq!(c[3], 10.0 / 3.0);
        assert_eq!(c[4], 3.0);
        assert_eq!(c[5], 4.0);
        // value_mean over objectives: both objectives average 2
        assert_eq!(&c[7..10], &[2.0, 2.0, 2.0]);
        // per-objective min is 1 for both, max is 3 for both
        assert_eq!(&c[10..13], &[1.0, 1.0, 1.0]);
        assert_eq!(&c[13..16], &[3.0, 3.0, 3.0]);
    }

    #[test]
    fn identical_variables_differ_only_in_rank_features() {
        let inst = MkpInstance::new("s", vec![4; 4], vec![vec![7; 4], vec![2; 4]], 9).unwrap();
        let rows = featurize(&inst);
        for r in &rows[1..] {
            for k in 0..NUM_FEATURES {
                if !(7..17).contains(&k) {
                    assert_eq!(r.features[k], rows[0].features[k], "feature {k}");
                }
            }
        }
        // ties broken by index: variable 1 leads every max_ ordering
        assert_eq!(rows[0].features[7], 1.0);
        assert_eq!(rows[3].features[7], 0.25);
    }

    #[test]
    fn dataset_groups_and_labels() {
        let instances: Vec<_> = (0..3).map(|s| generate_instance(s, 3, 20)).collect();
        let labels: HashMap<_, _> = instances
            .iter()
            .map(|i| (i.id.clone(), order_to_ranks(&VariableOrder::identity(20))))
            .collect();
        let ds = build_dataset(&instances, &labels).unwrap();
        assert_eq!(ds.len(), 60);
        assert_eq!(ds.groups().len(), 3);
        assert!(ds.groups().iter().all(|g| g.len() == 20));
    }

    #[test]
    fn worked_example_label() {
        let inst = generate_instance(4, 2, 4);
        let order = VariableOrder::new(vec![1, 0, 3, 2]).unwrap();
        let labels = HashMap::from([(inst.id.clone(), order_to_ranks(&order))]);
        let ds = build_dataset(&[inst], &labels).unwrap();
        let got: Vec<usize> = ds.rows.iter().map(|r| r.label.unwrap()).collect();
        assert_eq!(got, vec![3, 4, 1, 2]);
    }

    #[test]
    fn missing_or_mismatched_label_names_instance() {
        let inst = generate_instance(4, 2, 4);
        let err = build_dataset(std::slice::from_ref(&inst), &HashMap::new()).unwrap_err();
        assert!(err.to_string().contains(&inst.id));
        let wrong = HashMap::from([(inst.id.clone(), order_to_ranks(&VariableOrder::identity(5)))]);
        assert!(matches!(build_dataset(&[inst], &wrong), Err(Error::MissingLabel(_))));
    }

    #[test]
    fn csv_round_trip() {
        let instances: Vec<_> = (0..2).map(|s| generate_instance(s, 4, 7)).collect();
        let labels: HashMap<_, _> = instances
            .iter()
            .map(|i| (i.id.clone(), order_to_ranks(&crate::Heuristic::Random(3).order(i))))
            .collect();
        let mut ds = build_dataset(&instances, &labels).unwrap();
        ds.rows[3].label = None;
        let text = String::from_utf8(ds.to_csv().unwrap()).unwrap();
        assert!(text.starts_with("instance_id,var_index,f1,f2,"));
        assert!(text.lines().next().unwrap().ends_with(",f37,label"));
        assert_eq!(RankingDataset::from_csv(&text).unwrap(), ds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn normalized_properties_sum_to_one(seed in 0u64..10_000, p in 1usize..8, n in 1usize..40) {
            let rows = featurize(&generate_instance(seed, p, n));
            for k in 0..NUM_PROPERTIES {
                let s: f64 = rows.iter().map(|r| r.features[k]).sum();
                prop_assert!((s - 1.0).abs() < 1e-9);
            }
            for r in &rows {
                for k in 7..17 {
                    prop_assert!(r.features[k] > 0.0 && r.features[k] <= 1.0);
                }
            }
        }

        #[test]
        fn permuting_variables_permutes_rows(seed in 0u64..10_000, n in 2usize..25, pseed in 0u64..100) {
            let inst = generate_instance(seed, 3, n);
            let perm = crate::Heuristic::Random(pseed).order(&inst);
            let permuted = inst.permuted(perm.as_slice());
            let a = featurize(&inst);
            let b = featurize(&permuted);
            for (j, &i) in perm.as_slice().iter().enumerate() {
                for k in (0..NUM_FEATURES).filter(|k| !(7..17).contains(k)) {
                    let (x, y) = (a[i].features[k], b[j].features[k]);
                    prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "feature {}", k);
                }
            }
        }
    }

    #[test]
    fn permutation_moves_rank_features_without_ties() {
        // all seven properties distinct across variables
        let inst = MkpInstance::new(
            "d",
            vec![10, 20, 35, 50],
            vec![vec![5, 40, 70, 90], vec![11, 30, 60, 95], vec![8, 45, 66, 99]],
            57,
        )
        .unwrap();
        let perm = [2, 0, 3, 1];
        let a = featurize(&inst);
        let b = featurize(&inst.permuted(&perm));
        for (j, &i) in perm.iter().enumerate() {
            assert_eq!(&a[i].features[7..17], &b[j].features[7..17]);
        }
    }
}
