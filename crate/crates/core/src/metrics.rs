//! Evaluation statistics: shifted geometric means, heuristic-vs-random
//! ratios, percentages relative to the lexicographic ordering and
//! per-layer intermediate-solution series.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use crate::bdd::compile;
use crate::pareto::{enumerate_pf_limited, Enumeration};
use crate::tuner::evaluate_order;
use crate::{io, CostMode, Error, Heuristic, MkpInstance, Result, VariableOrder};

/// Shift used for all reported geometric means.
pub const GMEAN_SHIFT: f64 = 5.0;

/// Name of the baseline every relative table is measured against.
pub const LEX: &str = "lex";

/// `exp(mean(ln(v + shift))) - shift`.
pub fn shifted_gmean(values: &[f64], shift: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("shifted geometric mean of no values"));
    }
    if shift <= 0.0 || values.iter().any(|&v| v.is_nan() || v < 0.0) {
        return Err(Error::Config(format!(
            "shifted geometric mean needs values >= 0 and shift > 0 (shift {shift})"
        )));
    }
    let mean_log = values.iter().map(|v| (v + shift).ln()).sum::<f64>() / values.len() as f64;
    // keep rounding from leaving [min, max]
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((mean_log.exp() - shift).clamp(lo, hi))
}

/// One method run on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodRunRecord {
    pub instance_id: String,
    pub p: usize,
    pub n: usize,
    pub method: String,
    /// False when the check budget ran out.
    pub solved: bool,
    pub checks: u64,
    /// Wall-clock enumeration time, only recorded when asked for.
    pub seconds: Option<f64>,
    pub nodes: usize,
    pub arcs: usize,
    pub width: usize,
    pub frontier_size: usize,
    pub intermediate_per_layer: Vec<usize>,
}

impl MethodRunRecord {
    pub fn cost(&self, mode: CostMode) -> f64 {
        match mode {
            CostMode::Checks => self.checks as f64,
            CostMode::WallTime => self.seconds.unwrap_or(f64::NAN),
        }
    }

    pub fn size(&self) -> (usize, usize) {
        (self.p, self.n)
    }
}

/// Compiles and enumerates `instance` under `order`. A run exceeding
/// `check_limit` is recorded as unsolved.
pub fn run_method(
    instance: &MkpInstance,
    method: &str,
    order: &VariableOrder,
    check_limit: Option<u64>,
    record_time: bool,
) -> Result<MethodRunRecord> {
    let bdd = compile(instance, order)?;
    let stats = bdd.stats();
    let mut rec = MethodRunRecord {
        instance_id: instance.id.clone(),
        p: instance.p(),
        n: instance.n(),
        method: method.to_string(),
        solved: false,
        checks: 0,
        seconds: None,
        nodes: stats.num_nodes,
        arcs: stats.num_arcs,
        width: stats.width,
        frontier_size: 0,
        intermediate_per_layer: Vec::new(),
    };
    match enumerate_pf_limited(&bdd, instance, check_limit)? {
        Enumeration::Complete(r) => {
            rec.solved = true;
            rec.checks = r.checks;
            rec.seconds = record_time.then_some(r.elapsed.as_secs_f64());
            rec.frontier_size = r.frontier.len();
            rec.intermediate_per_layer = r.intermediate_per_layer;
        }
        Enumeration::Aborted { checks } => rec.checks = checks,
    }
    Ok(rec)
}

/// Mean cost of `heuristic` over `instances` divided by the mean cost of
/// `k_random` random orderings (seeds `seed..seed + k_random`) averaged
/// over instances.
pub fn ratio_vs_random(
    instances: &[MkpInstance],
    heuristic: &Heuristic,
    k_random: usize,
    seed: u64,
    mode: CostMode,
) -> Result<f64> {
    if instances.is_empty() {
        return Err(Error::Empty("ratio against random orderings needs instances"));
    }
    if k_random == 0 {
        return Err(Error::Config("k_random must be at least 1".into()));
    }
    let mut heur = 0.0;
    let mut random = 0.0;
    for inst in instances {
        heur += evaluate_order(inst, &heuristic.order(inst), mode)?;
        let mut sum = 0.0;
        for j in 0..k_random as u64 {
            let order = Heuristic::Random(seed.wrapping_add(j)).order(inst);
            sum += evaluate_order(inst, &order, mode)?;
        }
        random += sum / k_random as f64;
    }
    Ok(heur / random)
}

fn size_label((p, n): (usize, usize)) -> String {
    format!("({p},{n})")
}

/// Methods in order of first appearance.
fn method_order(records: &[MethodRunRecord]) -> Vec<String> {
    let mut seen = Vec::new();
    for r in records {
        if !seen.contains(&r.method) {
            seen.push(r.method.clone());
        }
    }
    seen
}

fn by_size(records: &[MethodRunRecord]) -> BTreeMap<(usize, usize), Vec<&MethodRunRecord>> {
    let mut map: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for r in records {
        map.entry(r.size()).or_default().push(r);
    }
    map
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub size: (usize, usize),
    pub method: String,
    /// Solved runs.
    pub count: usize,
    pub gmean: f64,
    pub min: f64,
    pub max: f64,
}

/// Per size and method: solved count and shifted geometric mean, min and
/// max of the cost over solved runs.
pub fn summarize(records: &[MethodRunRecord], mode: CostMode) -> Result<Vec<SummaryRow>> {
    let methods = method_order(records);
    let mut out = Vec::new();
    for (size, recs) in by_size(records) {
        for m in &methods {
            let costs: Vec<f64> = recs
                .iter()
                .filter(|r| &r.method == m && r.solved)
                .map(|r| r.cost(mode))
                .collect();
            if !recs.iter().any(|r| &r.method == m) {
                continue;
            }
            let (gmean, min, max) = if costs.is_empty() {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                (
                    shifted_gmean(&costs, GMEAN_SHIFT)?,
                    costs.iter().copied().fold(f64::INFINITY, f64::min),
                    costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                )
            };
            out.push(SummaryRow { size, method: m.clone(), count: costs.len(), gmean, min, max });
        }
    }
    Ok(out)
}

/// `size,method,count,gmean,min,max`
pub fn summary_csv(rows: &[SummaryRow]) -> Result<String> {
    csv_string(
        &["size", "method", "count", "gmean", "min", "max"],
        rows.iter()
            .map(|r| {
                vec![
                    size_label(r.size),
                    r.method.clone(),
                    r.count.to_string(),
                    r.gmean.to_string(),
                    r.min.to_string(),
                    r.max.to_string(),
                ]
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub heuristic: String,
    pub size: (usize, usize),
    pub ratio: f64,
}

/// `heuristic,size,ratio`
pub fn ratio_csv(rows: &[RatioRow]) -> Result<String> {
    csv_string(
        &["heuristic", "size", "ratio"],
        rows.iter()
            .map(|r| vec![r.heuristic.clone(), size_label(r.size), r.ratio.to_string()])
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelativeRow {
    pub size: (usize, usize),
    pub method: String,
    /// Instances solved by both the method and the baseline.
    pub count: usize,
    pub nodes_pct: f64,
    pub width_pct: f64,
    pub checks_pct: f64,
    pub gmean_pct: f64,
}

fn pct(value: f64, base: f64) -> f64 {
    if value == base {
        100.0
    } else {
        100.0 * value / base
    }
}

/// For each size and method, 100 times the ratio of mean nodes, mean width,
/// mean checks and shifted geometric mean of cost to those of `lex`,
/// over the instances solved by both.
pub fn relative_to_lex(records: &[MethodRunRecord], mode: CostMode) -> Result<Vec<RelativeRow>> {
    let methods = method_order(records);
    let mut out = Vec::new();
    for (size, recs) in by_size(records) {
        let lex: HashMap<&str, &MethodRunRecord> = recs
            .iter()
            .filter(|r| r.method == LEX)
            .map(|r| (r.instance_id.as_str(), *r))
            .collect();
        if lex.is_empty() {
            return Err(Error::Config(format!(
                "no `{LEX}` baseline records for size {}",
                size_label(size)
            )));
        }
        for m in &methods {
            let mut pairs = Vec::new();
            for r in recs.iter().filter(|r| &r.method == m && r.solved) {
                let base = lex.get(r.instance_id.as_str()).ok_or_else(|| {
                    Error::Config(format!("no `{LEX}` record for instance {}", r.instance_id))
                })?;
                if base.solved {
                    pairs.push((*r, *base));
                }
            }
            if pairs.is_empty() {
                continue;
            }
            let mean = |f: &dyn Fn(&MethodRunRecord) -> f64, side: usize| {
                pairs
                    .iter()
                    .map(|pr| f(if side == 0 { pr.0 } else { pr.1 }))
                    .sum::<f64>()
                    / pairs.len() as f64
            };
            let nodes = |r: &MethodRunRecord| r.nodes as f64;
            let width = |r: &MethodRunRecord| r.width as f64;
            let checks = |r: &MethodRunRecord| r.checks as f64;
            let gm = |side: usize| {
                let costs: Vec<f64> = pairs
                    .iter()
                    .map(|pr| if side == 0 { pr.0 } else { pr.1 }.cost(mode))
                    .collect();
                shifted_gmean(&costs, GMEAN_SHIFT)
            };
            out.push(RelativeRow {
                size,
                method: m.clone(),
                count: pairs.len(),
                nodes_pct: pct(mean(&nodes, 0), mean(&nodes, 1)),
                width_pct: pct(mean(&width, 0), mean(&width, 1)),
                checks_pct: pct(mean(&checks, 0), mean(&checks, 1)),
                gmean_pct: pct(gm(0)?, gm(1)?),
            });
        }
    }
    Ok(out)
}

/// `size,method,nodes_pct,width_pct,checks_pct,gmean_pct`
pub fn relative_csv(rows: &[RelativeRow]) -> Result<String> {
    csv_string(
        &["size", "method", "nodes_pct", "width_pct", "checks_pct", "gmean_pct"],
        rows.iter()
            .map(|r| {
                vec![
                    size_label(r.size),
                    r.method.clone(),
                    r.nodes_pct.to_string(),
                    r.width_pct.to_string(),
                    r.checks_pct.to_string(),
                    r.gmean_pct.to_string(),
                ]
            })
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeSeries {
    pub method: String,
    pub n: usize,
    /// Mean cumulative label count after each layer (index 0 is layer 1).
    pub mean_cumulative: Vec<f64>,
    pub instances: usize,
}

/// Cumulative sums of the per-layer intermediate counts of solved runs,
/// averaged per method and number of variables.
pub fn cumulative_intermediate(records: &[MethodRunRecord]) -> Vec<CumulativeSeries> {
    let methods = method_order(records);
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut out = Vec::new();
    for m in &methods {
        for &n in &ns {
            let runs: Vec<&MethodRunRecord> = records
                .iter()
                .filter(|r| &r.method == m && r.n == n && r.solved)
                .collect();
            if runs.is_empty() {
                continue;
            }
            let mut sum = vec![0.0; n];
            for r in &runs {
                let mut acc = 0usize;
                for (s, &c) in sum.iter_mut().zip(&r.intermediate_per_layer) {
                    acc += c;
                    *s += acc as f64;
                }
            }
            out.push(CumulativeSeries {
                method: m.clone(),
                n,
                mean_cumulative: sum.into_iter().map(|s| s / runs.len() as f64).collect(),
                instances: runs.len(),
            });
        }
    }
    out
}

/// `method,n,layer,mean_cumulative` with layers counted from 1.
pub fn cumulative_csv(series: &[CumulativeSeries]) -> Result<String> {
    let mut rows = Vec::new();
    for s in series {
        for (l, v) in s.mean_cumulative.iter().enumerate() {
            rows.push(vec![s.method.clone(), s.n.to_string(), (l + 1).to_string(), v.to_string()]);
        }
    }
    csv_string(&["method", "n", "layer", "mean_cumulative"], rows)
}

const RECORD_HEADER: [&str; 12] = [
    "instance_id",
    "p",
    "n",
    "method",
    "solved",
    "checks",
    "seconds",
    "nodes",
    "arcs",
    "width",
    "frontier_size",
    "intermediate",
];

/// Raw run records; `seconds` is empty when not recorded and
/// `intermediate` is a space-separated list.
pub fn records_csv(records: &[MethodRunRecord]) -> Result<String> {
    csv_string(
        &RECORD_HEADER,
        records
            .iter()
            .map(|r| {
                vec![
                    r.instance_id.clone(),
                    r.p.to_string(),
                    r.n.to_string(),
                    r.method.clone(),
                    r.solved.to_string(),
                    r.checks.to_string(),
                    r.seconds.map(|s| s.to_string()).unwrap_or_default(),
                    r.nodes.to_string(),
                    r.arcs.to_string(),
                    r.width.to_string(),
                    r.frontier_size.to_string(),
                    r.intermediate_per_layer
                        .iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(" "),
                ]
            })
            .collect(),
    )
}

pub fn records_from_csv(data: &str) -> Result<Vec<MethodRunRecord>> {
    let mut rdr = csv::Reader::from_reader(data.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header != RECORD_HEADER {
        return Err(Error::parse(1, format!("expected header {}", RECORD_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let line = k + 2;
        let rec = rec?;
        let num = |i: usize| -> Result<u64> {
            rec[i]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad {} `{}`", RECORD_HEADER[i], &rec[i])))
        };
        let solved = match &rec[4] {
            "true" => true,
            "false" => false,
            other => return Err(Error::parse(line, format!("bad solved flag `{other}`"))),
        };
        let seconds = if rec[6].is_empty() {
            None
        } else {
            Some(rec[6].parse().map_err(|_| Error::parse(line, "bad seconds"))?)
        };
        let intermediate = rec[11]
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(line, format!("bad layer count `{t}`"))))
            .collect::<Result<Vec<usize>>>()?;
        out.push(MethodRunRecord {
            instance_id: rec[0].to_string(),
            p: num(1)? as usize,
            n: num(2)? as usize,
            method: rec[3].to_string(),
            solved,
            checks: num(5)?,
            seconds,
            nodes: num(7)? as usize,
            arcs: num(8)? as usize,
            width: num(9)? as usize,
            frontier_size: num(10)? as usize,
            intermediate_per_layer: intermediate,
        });
    }
    Ok(out)
}

pub fn write_records(records: &[MethodRunRecord], path: &Path) -> Result<()> {
    io::write_atomic(path, records_csv(records)?.as_bytes())
}

pub fn read_records(path: &Path) -> Result<Vec<MethodRunRecord>> {
    records_from_csv(&io::read_to_string(path)?)
}
