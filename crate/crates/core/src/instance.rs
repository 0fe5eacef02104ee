//! Multiobjective 0/1 knapsack instances.
//!
//! All objectives are maximised subject to a single capacity constraint
//! `sum_i w_i x_i <= W`. Coefficients are strictly positive integers.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{io, Error, Result};

/// Upper end of the uniform coefficient distribution used by the generator.
pub const MAX_COEFFICIENT: i64 = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MkpInstance {
    pub id: String,
    /// `w_i`, one per variable.
    pub weights: Vec<i64>,
    /// `values[k][i]` is the profit of variable `i` in objective `k`.
    pub values: Vec<Vec<i64>>,
    pub capacity: i64,
}

impl MkpInstance {
    /// Builds an instance after checking dimensions and positivity.
    pub fn new(
        id: impl Into<String>,
        weights: Vec<i64>,
        values: Vec<Vec<i64>>,
        capacity: i64,
    ) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::Empty("instance has no variables"));
        }
        if values.is_empty() {
            return Err(Error::Empty("instance has no objectives"));
        }
        if let Some(row) = values.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "objective row has {} entries, expected {n}",
                row.len()
            )));
        }
        if weights.iter().chain(values.iter().flatten()).any(|&c| c < 1) {
            return Err(Error::Config("coefficients must be positive".into()));
        }
        if capacity < 1 {
            return Err(Error::Config("capacity must be positive".into()));
        }
        Ok(MkpInstance {
            id: id.into(),
            weights,
            values,
            capacity,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn p(&self) -> usize {
        self.values.len()
    }

    /// Profit vector of variable `i` across all objectives.
    pub fn item_values(&self, i: usize) -> Vec<i64> {
        self.values.iter().map(|row| row[i]).collect()
    }

    pub fn total_weight(&self) -> i64 {
        self.weights.iter().sum()
    }

    /// Returns a copy whose variable `j` is variable `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> MkpInstance {
        MkpInstance {
            id: self.id.clone(),
            weights: perm.iter().map(|&i| self.weights[i]).collect(),
            values: self
                .values
                .iter()
                .map(|row| perm.iter().map(|&i| row[i]).collect())
                .collect(),
            capacity: self.capacity,
        }
    }

    /// Serialises into the whitespace-separated text format:
    ///
    /// ```text
    /// p n
    /// W
    /// w_1 ... w_n
    /// a^1_1 ... a^1_n
    /// ...
    /// a^p_1 ... a^p_n
    /// ```
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.p(), self.n());
        let _ = writeln!(s, "{}", self.capacity);
        push_row(&mut s, &self.weights);
        for row in &self.values {
            push_row(&mut s, row);
        }
        s
    }

    /// Parses the text format. Blank lines are ignored; line numbers in
    /// errors refer to the physical line in `text`.
    pub fn from_text(id: impl Into<String>, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut last_line = 0;
        let mut next = |what: &str| -> Result<(usize, Vec<i64>)> {
            match lines.next() {
                Some((no, l)) => {
                    last_line = no;
                    let nums = l
                        .split_whitespace()
                        .map(|tok| {
                            tok.parse::<i64>()
                                .map_err(|_| Error::parse(no, format!("invalid integer `{tok}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok((no, nums))
                }
                None => Err(Error::parse(last_line + 1, format!("missing {what}"))),
            }
        };

        let (no, header) = next("header `p n`")?;
        let [p, n] = header[..] else {
            return Err(Error::parse(no, "header must be `p n`"));
        };
        if p < 1 || n < 1 {
            return Err(Error::parse(no, "p and n must be positive"));
        }
        let (p, n) = (p as usize, n as usize);

        let (no, cap) = next("capacity line")?;
        let [capacity] = cap[..] else {
            return Err(Error::parse(no, "capacity line must hold one integer"));
        };
        if capacity < 1 {
            return Err(Error::parse(no, "capacity must be positive"));
        }

        let mut read_row = |what: &str| -> Result<Vec<i64>> {
            let (no, row) = next(what)?;
            if row.len() != n {
                return Err(Error::parse(
                    no,
                    format!("dimension mismatch: {what} has {} entries, expected {n}", row.len()),
                ));
            }
            if row.iter().any(|&c| c < 1) {
                return Err(Error::parse(no, format!("{what} entries must be positive")));
            }
            Ok(row)
        };
        let weights = read_row("weight row")?;
        let values = (1..=p)
            .map(|k| read_row(&format!("objective row {k}")))
            .collect::<Result<Vec<_>>>()?;
        if let Some((no, _)) = lines.next() {
            return Err(Error::parse(
                no,
                format!("dimension mismatch: more than {p} objective rows"),
            ));
        }
        MkpInstance::new(id, weights, values, capacity)
    }
}

fn push_row(s: &mut String, row: &[i64]) {
    let mut first = true;
    for v in row {
        if !first {
            s.push(' ');
        }
        first = false;
        let _ = write!(s, "{v}");
    }
    s.push('\n');
}

/// `ceil(0.5 * sum(weights))`.
pub fn half_capacity(weights: &[i64]) -> i64 {
    let total: i64 = weights.iter().sum();
    (total + 1) / 2
}

/// Canonical identifier `kp_{p}_{n}_{seed}_{split}`.
pub fn instance_id(p: usize, n: usize, seed: u64, split: &str) -> String {
    format!("kp_{p}_{n}_{seed}_{split}")
}

/// Draws an instance with weights and profits i.i.d. uniform on `{1..100}` and
/// capacity `ceil(0.5 * sum w)`. Identical arguments give identical instances.
pub fn generate_instance(seed: u64, p: usize, n: usize) -> MkpInstance {
    generate_with_split(seed, p, n, "gen")
}

pub fn generate_with_split(seed: u64, p: usize, n: usize, split: &str) -> MkpInstance {
    assert!(p >= 1 && n >= 1, "need p >= 1 and n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<i64> = (0..n)
        .map(|_| rng.random_range(1..=MAX_COEFFICIENT))
        .collect();
    let values = (0..p)
        .map(|_| {
            (0..n)
                .map(|_| rng.random_range(1..=MAX_COEFFICIENT))
                .collect()
        })
        .collect();
    let capacity = half_capacity(&weights);
    MkpInstance {
        id: instance_id(p, n, seed, split),
        weights,
        values,
        capacity,
    }
}

/// Reads an instance file; the id is the file stem.
pub fn read_instance(path: &Path) -> Result<MkpInstance> {
    let text = io::read_to_string(path)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    MkpInstance::from_text(id, &text)
}

pub fn write_instance(instance: &MkpInstance, path: &Path) -> Result<()> {
    io::write_atomic(path, instance.to_text().as_bytes())
}

/// Reads every `*.txt` instance under `dir`, sorted by file name.
pub fn read_corpus(dir: &Path) -> Result<Vec<MkpInstance>> {
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "txt") {
            paths.push(path);
        }
    }
    paths.sort();
    paths.iter().map(|p| read_instance(p)).collect()
}
