//! Exact Pareto frontier enumeration for multiobjective 0/1 knapsack problems
//! over layered binary decision diagrams, together with the machinery to learn
//! efficient static variable orderings for those diagrams.
//!
//! The crate is organised bottom-up:
//!
//! - [`instance`]: the knapsack instance, its seeded generator and file format.
//! - [`ordering`]: variable properties, score-based and heuristic orderings,
//!   and the order/rank mapping.
//! - [`bdd`]: exact top-down compilation under a given ordering.
//! - [`pareto`]: dominance, non-dominated filtering and instrumented frontier
//!   enumeration (plus a brute-force oracle).
//! - [`tuner`]: black-box search over property weights, per instance or per
//!   instance set.
//! - [`features`]: per-variable and per-instance features for ranking.
//! - [`ranker`]: pointwise and pairwise ranking models, Kendall's tau, model
//!   selection and split-count feature importance.
//! - [`metrics`]: shifted geometric mean and the comparison tables.
//! - [`pipeline`]: the end-to-end stages driven by the `kpvo` binary.

pub mod bdd;
mod error;
pub mod features;
pub mod instance;
pub mod io;
pub mod metrics;
pub mod ordering;
pub mod pareto;
pub mod pipeline;
pub mod ranker;
pub mod tuner;

pub use bdd::{compile, Bdd, BddStats};
pub use error::{Error, Result};
pub use instance::{generate_instance, MkpInstance};
pub use ordering::{
    heuristic_order, order_to_ranks, property_matrix, ranks_to_order, score_order, Heuristic,
    Property, PropertyWeights, RankVector, VariableOrder,
};
pub use pareto::{
    brute_force_pf, dominates, enumerate_pf, nd_filter, CostMode, EnumerationReport,
    ObjectiveVector, ParetoFrontier, Sense,
};
