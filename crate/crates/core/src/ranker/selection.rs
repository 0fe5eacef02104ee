//! Two-step model selection: ranking agreement first, enumeration cost second.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::{kendall_tau, ModelKind, RankModel};
use crate::tuner::evaluate_order;
use crate::{order_to_ranks, CostMode, Error, MkpInstance, RankVector, Result};

#[derive(Debug, Clone)]
pub struct Candidate {
    pub name: String,
    pub model: RankModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    pub name: String,
    pub kind: ModelKind,
    pub num_params: usize,
    pub mean_tau: f64,
    /// Only measured for class winners.
    pub mean_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub candidates: Vec<CandidateScore>,
    /// Indices into `candidates`, one per class present, in class order.
    pub class_winners: Vec<usize>,
    pub winner: usize,
    pub cost_mode: CostMode,
}

impl SelectionReport {
    pub fn winner(&self) -> &CandidateScore {
        &self.candidates[self.winner]
    }

    pub fn winner_cost(&self) -> f64 {
        self.winner().mean_cost.expect("winner cost is always measured")
    }

    /// `name,kind,num_params,mean_tau,mean_cost,class_winner,selected`
    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,kind,num_params,mean_tau,mean_cost,class_winner,selected\n");
        for (i, c) in self.candidates.iter().enumerate() {
            let cost = c.mean_cost.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                c.name,
                c.kind,
                c.num_params,
                c.mean_tau,
                cost,
                self.class_winners.contains(&i),
                i == self.winner
            );
        }
        s
    }
}

fn mean_tau(model: &RankModel, instances: &[MkpInstance], labels: &HashMap<String, RankVector>) -> Result<f64> {
    let mut sum = 0.0;
    for inst in instances {
        let label = labels
            .get(&inst.id)
            .ok_or_else(|| Error::MissingLabel(inst.id.clone()))?;
        let pred = order_to_ranks(&model.predict_order(inst)?);
        sum += kendall_tau(&pred, label)?;
    }
    Ok(sum / instances.len() as f64)
}

fn mean_cost(model: &RankModel, instances: &[MkpInstance], mode: CostMode) -> Result<f64> {
    let one = |inst: &MkpInstance| evaluate_order(inst, &model.predict_order(inst)?, mode);
    // wall-clock costs are measured one at a time
    let costs: Vec<f64> = match mode {
        CostMode::Checks => instances.par_iter().map(one).collect::<Result<_>>()?,
        CostMode::WallTime => instances.iter().map(one).collect::<Result<_>>()?,
    };
    Ok(costs.iter().sum::<f64>() / costs.len() as f64)
}

/// Picks the best candidate per model class by mean validation Kendall's
/// tau, then the class winner with the lowest mean enumeration cost. Ties
/// go to fewer parameters, then to the name (step 1) or class name (step 2).
pub fn select_model(
    candidates: &[Candidate],
    instances: &[MkpInstance],
    labels: &HashMap<String, RankVector>,
    cost_mode: CostMode,
) -> Result<SelectionReport> {
    if candidates.is_empty() {
        return Err(Error::Empty("no candidate models"));
    }
    if instances.is_empty() {
        return Err(Error::Empty("no validation instances"));
    }
    let taus = candidates
        .par_iter()
        .map(|c| mean_tau(&c.model, instances, labels))
        .collect::<Result<Vec<f64>>>()?;
    let mut scores: Vec<CandidateScore> = candidates
        .iter()
        .zip(&taus)
        .map(|(c, &tau)| CandidateScore {
            name: c.name.clone(),
            kind: c.model.kind,
            num_params: c.model.num_params(),
            mean_tau: tau,
            mean_cost: None,
        })
        .collect();

    let mut class_winners = Vec::new();
    for kind in ModelKind::ALL {
        let best = (0..scores.len()).filter(|&i| scores[i].kind == kind).min_by(|&a, &b| {
            let (x, y) = (&scores[a], &scores[b]);
            y.mean_tau
                .total_cmp(&x.mean_tau)
                .then(x.num_params.cmp(&y.num_params))
                .then(x.name.cmp(&y.name))
        });
        class_winners.extend(best);
    }

    for &i in &class_winners {
        scores[i].mean_cost = Some(mean_cost(&candidates[i].model, instances, cost_mode)?);
    }
    let winner = *class_winners
        .iter()
        .min_by(|&&a, &&b| {
            let (x, y) = (&scores[a], &scores[b]);
            x.mean_cost
                .unwrap()
                .total_cmp(&y.mean_cost.unwrap())
                .then(x.num_params.cmp(&y.num_params))
                .then(x.kind.name().cmp(y.kind.name()))
        })
        .expect("at least one class winner");
    for s in &scores {
        log::info!("candidate {} ({}): tau {:.4}", s.name, s.kind, s.mean_tau);
    }
    Ok(SelectionReport {
        candidates: scores,
        class_winners,
        winner,
        cost_mode,
    })
}
