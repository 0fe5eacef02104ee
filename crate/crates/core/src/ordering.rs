//! Variable properties, score-based orderings and heuristic orderings.
//!
//! Variables are 0-based everywhere in the API. Text formats (label files,
//! CLI output) print them 1-based.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, MkpInstance, Result};

pub const NUM_PROPERTIES: usize = 7;

/// Per-variable properties, in the fixed column order used by
/// [`PropertyWeights`] and [`property_matrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Weight,
    AvgValue,
    MaxValue,
    MinValue,
    AvgValueByWeight,
    MaxValueByWeight,
    MinValueByWeight,
}

impl Property {
    pub const ALL: [Property; NUM_PROPERTIES] = [
        Property::Weight,
        Property::AvgValue,
        Property::MaxValue,
        Property::MinValue,
        Property::AvgValueByWeight,
        Property::MaxValueByWeight,
        Property::MinValueByWeight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Weight => "weight",
            Property::AvgValue => "avg-value",
            Property::MaxValue => "max-value",
            Property::MinValue => "min-value",
            Property::AvgValueByWeight => "avg-value-by-weight",
            Property::MaxValueByWeight => "max-value-by-weight",
            Property::MinValueByWeight => "min-value-by-weight",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Exact value of the property for variable `i` as `(numerator, denominator)`.
    fn rational(self, instance: &MkpInstance, i: usize) -> (i64, i64) {
        let p = instance.p() as i64;
        let w = instance.weights[i];
        let col = || instance.values.iter().map(move |row| row[i]);
        let sum: i64 = col().sum();
        let max = col().max().unwrap_or(0);
        let min = col().min().unwrap_or(0);
        match self {
            Property::Weight => (w, 1),
            Property::AvgValue => (sum, p),
            Property::MaxValue => (max, 1),
            Property::MinValue => (min, 1),
            Property::AvgValueByWeight => (sum, p * w),
            Property::MaxValueByWeight => (max, w),
            Property::MinValueByWeight => (min, w),
        }
    }

    pub fn value(self, instance: &MkpInstance, i: usize) -> f64 {
        let (num, den) = self.rational(instance, i);
        num as f64 / den as f64
    }

    /// Exact comparison of the property between two variables.
    fn compare(self, instance: &MkpInstance, a: usize, b: usize) -> Ordering {
        let (na, da) = self.rational(instance, a);
        let (nb, db) = self.rational(instance, b);
        (na as i128 * db as i128).cmp(&(nb as i128 * da as i128))
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown property `{s}`")))
    }
}

/// `n x 7` matrix of variable properties, rows indexed by variable.
pub fn property_matrix(instance: &MkpInstance) -> Vec<[f64; NUM_PROPERTIES]> {
    (0..instance.n())
        .map(|i| Property::ALL.map(|prop| prop.value(instance, i)))
        .collect()
}

/// Each property column divided by its sum over variables.
pub fn normalized_property_matrix(instance: &MkpInstance) -> Vec<[f64; NUM_PROPERTIES]> {
    let mut g = property_matrix(instance);
    let mut sums = [0.0; NUM_PROPERTIES];
    for row in &g {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
    }
    for row in &mut g {
        for (v, s) in row.iter_mut().zip(&sums) {
            *v /= s;
        }
    }
    g
}

/// A static variable ordering: `order[k]` is the variable placed at layer `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableOrder(Vec<usize>);

impl VariableOrder {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        check_permutation(&order, 0)?;
        Ok(VariableOrder(order))
    }

    pub fn identity(n: usize) -> Self {
        VariableOrder((0..n).collect())
    }

    /// Parses a whitespace-separated 1-based variable sequence.
    pub fn parse_one_based(text: &str) -> Result<Self> {
        let order = text
            .split_whitespace()
            .map(|t| match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::InvalidPermutation(format!("bad entry `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        VariableOrder::new(order)
    }

    pub fn to_one_based_string(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|v| (v + 1).to_string()).collect();
        parts.join(" ")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `position[i]` is the layer index of variable `i`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            pos[v] = k;
        }
        pos
    }
}

impl fmt::Display for VariableOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_one_based_string())
    }
}

/// `ranks[i]` is the rank of variable `i`; the first-placed variable has rank `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankVector(Vec<usize>);

impl RankVector {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        check_permutation(&ranks, 1)?;
        Ok(RankVector(ranks))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_permutation(xs: &[usize], base: usize) -> Result<()> {
    let n = xs.len();
    let mut seen = vec![false; n];
    for &x in xs {
        if x < base || x - base >= n || std::mem::replace(&mut seen[x - base], true) {
            return Err(Error::InvalidPermutation(format!(
                "{xs:?} is not a permutation of {base}..{}",
                n + base
            )));
        }
    }
    Ok(())
}

pub fn order_to_ranks(order: &VariableOrder) -> RankVector {
    let n = order.len();
    let mut ranks = vec![0; n];
    for (k, &v) in order.as_slice().iter().enumerate() {
        ranks[v] = n - k;
    }
    RankVector(ranks)
}

pub fn ranks_to_order(ranks: &RankVector) -> VariableOrder {
    let n = ranks.len();
    let mut order = vec![0; n];
    for (v, &r) in ranks.as_slice().iter().enumerate() {
        order[n - r] = v;
    }
    VariableOrder(order)
}

/// Sorts variables by decreasing score, ties by ascending index.
pub fn order_by_scores(scores: &[f64]) -> VariableOrder {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    VariableOrder(idx)
}

/// Weights on the seven properties, each clipped to `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyWeights(pub [f64; NUM_PROPERTIES]);

impl PropertyWeights {
    pub fn new(weights: [f64; NUM_PROPERTIES]) -> Self {
        PropertyWeights(weights.map(|w| if w.is_nan() { 0.0 } else { w.clamp(-1.0, 1.0) }))
    }

    pub fn zero() -> Self {
        PropertyWeights([0.0; NUM_PROPERTIES])
    }

    /// Every weight zero except `weight = -1`: reproduces ascending weight.
    pub fn min_weight_warm_start() -> Self {
        let mut w = [0.0; NUM_PROPERTIES];
        w[Property::Weight.index()] = -1.0;
        PropertyWeights(w)
    }

    pub fn as_array(&self) -> &[f64; NUM_PROPERTIES] {
        &self.0
    }
}

/// `s_i = sum_k pw_k * g_ik / sum_j g_jk`.
pub fn variable_scores(instance: &MkpInstance, pw: &PropertyWeights) -> Vec<f64> {
    normalized_property_matrix(instance)
        .iter()
        .map(|row| row.iter().zip(pw.0.iter()).map(|(g, w)| w * g).sum())
        .collect()
}

pub fn score_order(instance: &MkpInstance, pw: &PropertyWeights) -> VariableOrder {
    order_by_scores(&variable_scores(instance, pw))
}

/// Named orderings accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Heuristic {
    /// Sort by a property; `descending` is the `max_` prefix.
    Sorted { property: Property, descending: bool },
    Lex,
    Random(u64),
}

impl Heuristic {
    /// The ten property orderings used as rank features, in fixed order.
    pub const FEATURE_SET: [Heuristic; 10] = [
        Heuristic::max(Property::Weight),
        Heuristic::min(Property::Weight),
        Heuristic::max(Property::AvgValue),
        Heuristic::min(Property::AvgValue),
        Heuristic::max(Property::MaxValue),
        Heuristic::min(Property::MaxValue),
        Heuristic::max(Property::MinValue),
        Heuristic::min(Property::MinValue),
        Heuristic::max(Property::AvgValueByWeight),
        Heuristic::max(Property::MaxValueByWeight),
    ];

    /// Decreasing min-value-by-weight.
    pub const MAX_RATIO: Heuristic = Heuristic::max(Property::MinValueByWeight);
    pub const MIN_WEIGHT: Heuristic = Heuristic::min(Property::Weight);
    pub const MAX_WEIGHT: Heuristic = Heuristic::max(Property::Weight);

    pub const fn max(property: Property) -> Self {
        Heuristic::Sorted {
            property,
            descending: true,
        }
    }

    pub const fn min(property: Property) -> Self {
        Heuristic::Sorted {
            property,
            descending: false,
        }
    }

    pub fn valid_names() -> Vec<String> {
        let mut names: Vec<String> = Self::FEATURE_SET.iter().map(|h| h.to_string()).collect();
        names.push(Self::MAX_RATIO.to_string());
        names.push("lex".into());
        names.push("random(<seed>)".into());
        names
    }

    pub fn order(&self, instance: &MkpInstance) -> VariableOrder {
        let n = instance.n();
        match *self {
            Heuristic::Lex => VariableOrder::identity(n),
            Heuristic::Random(seed) => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                VariableOrder(idx)
            }
            Heuristic::Sorted {
                property,
                descending,
            } => {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| {
                    let c = property.compare(instance, a, b);
                    let c = if descending { c.reverse() } else { c };
                    c.then(a.cmp(&b))
                });
                VariableOrder(idx)
            }
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Heuristic::Lex => f.write_str("lex"),
            Heuristic::Random(seed) => write!(f, "random({seed})"),
            Heuristic::Sorted {
                property,
                descending,
            } => write!(
                f,
                "{}_{}",
                if *descending { "max" } else { "min" },
                property.name()
            ),
        }
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownOrdering {
            name: s.to_string(),
            valid: Heuristic::valid_names().join(", "),
        };
        if s == "lex" {
            return Ok(Heuristic::Lex);
        }
        if let Some(rest) = s.strip_prefix("random") {
            let seed = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .or_else(|| rest.strip_prefix(':'))
                .ok_or_else(unknown)?;
            return seed.parse().map(Heuristic::Random).map_err(|_| unknown());
        }
        if s == "max_ratio" {
            return Ok(Heuristic::MAX_RATIO);
        }
        if s == "min_wt" || s == "minwt" {
            return Ok(Heuristic::MIN_WEIGHT);
        }
        Self::FEATURE_SET
            .into_iter()
            .chain([Self::MAX_RATIO])
            .find(|h| h.to_string() == s)
            .ok_or_else(unknown)
    }
}

pub fn heuristic_order(instance: &MkpInstance, name: &str) -> Result<VariableOrder> {
    Ok(name.parse::<Heuristic>()?.order(instance))
}
