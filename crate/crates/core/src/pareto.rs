//! Pareto dominance, non-dominated filtering and frontier enumeration.
//!
//! Enumeration propagates label sets top-down through a compiled [`Bdd`]: the
//! label set of a node is the non-dominated subset of every incoming arc's
//! tail labels shifted by the arc value. The terminal's label set is the
//! Pareto frontier. Every pairwise comparison made by the filter is counted;
//! that count ("checks") is the hardware-independent enumeration cost.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::{Bdd, Error, MkpInstance, Result};

pub type ObjectiveVector = Vec<i64>;

/// Largest `n` accepted by [`brute_force_pf`].
pub const BRUTE_FORCE_MAX_N: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sense {
    #[default]
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostMode {
    #[default]
    Checks,
    #[serde(alias = "time")]
    WallTime,
}

impl FromStr for CostMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "checks" => Ok(CostMode::Checks),
            "time" | "wall_time" => Ok(CostMode::WallTime),
            _ => Err(Error::Config(format!(
                "unknown cost mode `{s}` (expected checks or time)"
            ))),
        }
    }
}

impl std::fmt::Display for CostMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CostMode::Checks => "checks",
            CostMode::WallTime => "time",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    Equal,
    /// The first argument dominates the second.
    Dominates,
    DominatedBy,
    Incomparable,
}

#[inline]
fn relation(a: &[i64], b: &[i64], sense: Sense) -> Relation {
    let (mut a_better, mut b_better) = (false, false);
    for (x, y) in a.iter().zip(b) {
        if x != y {
            if (x > y) == (sense == Sense::Maximize) {
                a_better = true;
            } else {
                b_better = true;
            }
            if a_better && b_better {
                return Relation::Incomparable;
            }
        }
    }
    match (a_better, b_better) {
        (false, false) => Relation::Equal,
        (true, false) => Relation::Dominates,
        (false, true) => Relation::DominatedBy,
        (true, true) => Relation::Incomparable,
    }
}

/// `a` dominates `b`: at least as good in every objective and strictly better
/// in one. Under [`Sense::Minimize`] "better" means smaller.
pub fn dominates(a: &[i64], b: &[i64], sense: Sense) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "comparing vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(relation(a, b, sense) == Relation::Dominates)
}

/// Keep-list non-dominated filter over flat vectors of fixed stride.
///
/// Each candidate is compared against the current survivors in order; it is
/// dropped as soon as a survivor dominates or equals it, and survivors it
/// dominates are removed. One comparison counts as one check.
struct KeepList {
    p: usize,
    sense: Sense,
    survivors: Vec<i64>,
    checks: u64,
}

impl KeepList {
    fn new(p: usize, sense: Sense) -> Self {
        KeepList {
            p,
            sense,
            survivors: Vec::new(),
            checks: 0,
        }
    }

    fn offer(&mut self, cand: &[i64]) {
        let p = self.p;
        if p == 0 {
            if self.survivors.is_empty() {
                self.survivors.push(0);
            }
            return;
        }
        let mut k = 0;
        while k * p < self.survivors.len() {
            self.checks += 1;
            let s = &self.survivors[k * p..(k + 1) * p];
            match relation(s, cand, self.sense) {
                Relation::Dominates | Relation::Equal => return,
                Relation::DominatedBy => {
                    let last = self.survivors.len() - p;
                    if k * p != last {
                        self.survivors.copy_within(last.., k * p);
                    }
                    self.survivors.truncate(last);
                }
                Relation::Incomparable => k += 1,
            }
        }
        self.survivors.extend_from_slice(cand);
    }

    fn take(&mut self) -> Vec<i64> {
        std::mem::take(&mut self.survivors)
    }
}

/// Returns the non-dominated subset of `vectors` with duplicates collapsed,
/// adding the number of comparisons performed to `counter`.
pub fn nd_filter(vectors: &[ObjectiveVector], sense: Sense, counter: &mut u64) -> Vec<ObjectiveVector> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let p = first.len();
    let mut keep = KeepList::new(p, sense);
    for v in vectors {
        assert_eq!(v.len(), p, "nd_filter: vectors of unequal length");
        keep.offer(v);
    }
    *counter += keep.checks;
    if p == 0 {
        return vec![Vec::new()];
    }
    keep.take().chunks(p).map(<[i64]>::to_vec).collect()
}

/// A set of mutually non-dominated objective vectors, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParetoFrontier {
    points: Vec<ObjectiveVector>,
}

impl ParetoFrontier {
    /// Canonicalises `points`, which must already be mutually non-dominated.
    pub fn from_points(mut points: Vec<ObjectiveVector>) -> Self {
        points.sort();
        points.dedup();
        ParetoFrontier { points }
    }

    pub fn points(&self) -> &[ObjectiveVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV with a header `obj_1..obj_p` and one row per vector.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let p = self.points.first().map_or(0, Vec::len);
        let header: Vec<String> = (1..=p).map(|k| format!("obj_{k}")).collect();
        let _ = writeln!(s, "{}", header.join(","));
        for pt in &self.points {
            let row: Vec<String> = pt.iter().map(i64::to_string).collect();
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub frontier: ParetoFrontier,
    /// Pairwise dominance comparisons performed.
    pub checks: u64,
    /// `intermediate_per_layer[l]` is the total label-set size over the nodes
    /// of layer `l + 1`, i.e. after variable `order[l]` has been processed.
    pub intermediate_per_layer: Vec<usize>,
    pub elapsed: Duration,
}

impl EnumerationReport {
    pub fn cost(&self, mode: CostMode) -> f64 {
        match mode {
            CostMode::Checks => self.checks as f64,
            CostMode::WallTime => self.elapsed.as_secs_f64(),
        }
    }
}

/// Outcome of an enumeration run under a check budget.
#[derive(Debug, Clone, PartialEq)]
pub enum Enumeration {
    Complete(EnumerationReport),
    /// The check budget ran out; `checks` were spent before stopping.
    Aborted { checks: u64 },
}

/// Enumerates the Pareto frontier of `instance` over `bdd`.
pub fn enumerate_pf(bdd: &Bdd, instance: &MkpInstance) -> Result<EnumerationReport> {
    match enumerate_pf_limited(bdd, instance, None)? {
        Enumeration::Complete(r) => Ok(r),
        Enumeration::Aborted { .. } => unreachable!("no limit was set"),
    }
}

/// Like [`enumerate_pf`] but stops once more than `max_checks` comparisons
/// have been made (checked after every node).
pub fn enumerate_pf_limited(
    bdd: &Bdd,
    instance: &MkpInstance,
    max_checks: Option<u64>,
) -> Result<Enumeration> {
    if bdd.p() != instance.p() || bdd.n() != instance.n() {
        return Err(Error::DimensionMismatch(format!(
            "BDD is for p={}, n={} but instance has p={}, n={}",
            bdd.p(),
            bdd.n(),
            instance.p(),
            instance.n()
        )));
    }
    let start = Instant::now();
    let p = bdd.p();
    let n = bdd.n();
    let mut checks = 0u64;
    let mut intermediate = Vec::with_capacity(n);
    let mut labels: Vec<Vec<i64>> = vec![vec![0; p]];
    let mut shifted = vec![0i64; p];

    for l in 0..n {
        let width = bdd.layer_states(l + 1).len();
        let mut incoming: Vec<Vec<(u32, bool)>> = vec![Vec::new(); width];
        for a in bdd.layer_arcs(l) {
            incoming[a.head as usize].push((a.tail, a.take));
        }
        let take = bdd.take_value(l);
        let mut next = Vec::with_capacity(width);
        for arcs in &incoming {
            let mut keep = KeepList::new(p, Sense::Maximize);
            for &(tail, is_take) in arcs {
                for lab in labels[tail as usize].chunks(p) {
                    if is_take {
                        for ((dst, x), y) in shifted.iter_mut().zip(lab).zip(take) {
                            *dst = x + y;
                        }
                        keep.offer(&shifted);
                    } else {
                        keep.offer(lab);
                    }
                }
            }
            checks += keep.checks;
            next.push(keep.take());
            if max_checks.is_some_and(|m| checks > m) {
                return Ok(Enumeration::Aborted { checks });
            }
        }
        intermediate.push(next.iter().map(|v| v.len() / p).sum());
        labels = next;
    }

    let points = labels[0].chunks(p).map(<[i64]>::to_vec).collect();
    Ok(Enumeration::Complete(EnumerationReport {
        frontier: ParetoFrontier::from_points(points),
        checks,
        intermediate_per_layer: intermediate,
        elapsed: start.elapsed(),
    }))
}

/// Exhaustive oracle: filters the images of all feasible assignments.
pub fn brute_force_pf(instance: &MkpInstance) -> Result<ParetoFrontier> {
    let n = instance.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let p = instance.p();
    let mut keep = KeepList::new(p, Sense::Maximize);
    let mut image = vec![0i64; p];
    for mask in 0u32..(1u32 << n) {
        let weight: i64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| instance.weights[i])
            .sum();
        if weight > instance.capacity {
            continue;
        }
        for (k, row) in instance.values.iter().enumerate() {
            image[k] = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| row[i]).sum();
        }
        keep.offer(&image);
    }
    Ok(ParetoFrontier::from_points(
        keep.take().chunks(p).map(<[i64]>::to_vec).collect(),
    ))
}
