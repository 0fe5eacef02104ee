//! Exact top-down compilation of a knapsack instance into a layered BDD.
//!
//! Layer `l` (0-based, `0..n`) decides variable `order[l]`. A node's state is
//! the weight accumulated along any path reaching it; nodes with equal state
//! in a layer are merged, so paths from the root to the terminal are in
//! bijection with feasible 0/1 assignments.

use std::fmt::Write as _;

use crate::{Error, MkpInstance, Result, VariableOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    /// Index of the tail node within its layer.
    pub tail: u32,
    /// Index of the head node within the next layer.
    pub head: u32,
    /// `true` for the 1-arc (item taken).
    pub take: bool,
}

#[derive(Debug, Clone)]
pub struct Bdd {
    order: VariableOrder,
    p: usize,
    capacity: i64,
    /// `n + 1` layers of node states, each strictly increasing. The single
    /// terminal node in the last layer carries the smallest merged state.
    states: Vec<Vec<i64>>,
    /// `arcs[l]` leave layer `l`, sorted by tail then 0-arc before 1-arc.
    arcs: Vec<Vec<Arc>>,
    /// Profit vector carried by the 1-arcs of layer `l`.
    take_values: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BddStats {
    pub num_nodes: usize,
    pub num_arcs: usize,
    pub width: usize,
    pub nodes_per_layer: Vec<usize>,
}

impl Bdd {
    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn capacity(&self) -> i64 {
        self.capacity
    }

    pub fn order(&self) -> &VariableOrder {
        &self.order
    }

    /// Number of layers, `n + 1`.
    pub fn num_layers(&self) -> usize {
        self.states.len()
    }

    pub fn layer_states(&self, layer: usize) -> &[i64] {
        &self.states[layer]
    }

    pub fn layer_arcs(&self, layer: usize) -> &[Arc] {
        &self.arcs[layer]
    }

    /// Value vector of an arc leaving `layer`.
    pub fn arc_value(&self, layer: usize, arc: &Arc) -> Vec<i64> {
        if arc.take {
            self.take_values[layer].clone()
        } else {
            vec![0; self.p]
        }
    }

    pub(crate) fn take_value(&self, layer: usize) -> &[i64] {
        &self.take_values[layer]
    }

    pub fn stats(&self) -> BddStats {
        let nodes_per_layer: Vec<usize> = self.states.iter().map(Vec::len).collect();
        BddStats {
            num_nodes: nodes_per_layer.iter().sum(),
            num_arcs: self.arcs.iter().map(Vec::len).sum(),
            width: nodes_per_layer.iter().copied().max().unwrap_or(0),
            nodes_per_layer,
        }
    }

    /// Number of root-to-terminal paths.
    pub fn count_paths(&self) -> u128 {
        let mut counts = vec![1u128];
        for (l, arcs) in self.arcs.iter().enumerate() {
            let mut next = vec![0u128; self.states[l + 1].len()];
            for a in arcs {
                next[a.head as usize] += counts[a.tail as usize];
            }
            counts = next;
        }
        counts[0]
    }

    /// Debug dump: `layer state` per node, then
    /// `tail_layer tail_state label head_state v_1 .. v_p` per arc.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (l, states) in self.states.iter().enumerate() {
            for st in states {
                let _ = writeln!(s, "{} {}", l + 1, st);
            }
        }
        for (l, arcs) in self.arcs.iter().enumerate() {
            for a in arcs {
                let _ = write!(
                    s,
                    "{} {} {} {}",
                    l + 1,
                    self.states[l][a.tail as usize],
                    u8::from(a.take),
                    self.states[l + 1][a.head as usize]
                );
                for v in self.arc_value(l, a) {
                    let _ = write!(s, " {v}");
                }
                s.push('\n');
            }
        }
        s
    }
}

/// Compiles the exact reduced-by-state BDD of `instance` under `order`.
pub fn compile(instance: &MkpInstance, order: &VariableOrder) -> Result<Bdd> {
    let n = instance.n();
    if order.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "order has {} variables, instance has {n}",
            order.len()
        )));
    }
    let cap = instance.capacity;
    let mut states: Vec<Vec<i64>> = Vec::with_capacity(n + 1);
    let mut arcs: Vec<Vec<Arc>> = Vec::with_capacity(n);
    let mut take_values = Vec::with_capacity(n);
    // slot[s] = index of state s in the layer under construction
    let mut slot = vec![u32::MAX; (cap.max(0) + 1) as usize];

    states.push(vec![0]);
    for (l, &var) in order.as_slice().iter().enumerate() {
        let w = instance.weights[var];
        let current = &states[l];
        let last = l + 1 == n;

        let mut next: Vec<i64> = Vec::with_capacity(current.len() * 2);
        for &s in current {
            next.push(s);
            if s + w <= cap {
                next.push(s + w);
            }
        }
        next.sort_unstable();
        next.dedup();
        if last {
            next.truncate(1);
        } else {
            for (k, &s) in next.iter().enumerate() {
                slot[s as usize] = k as u32;
            }
        }

        let head_of = |s: i64| if last { 0 } else { slot[s as usize] };
        let mut layer_arcs = Vec::with_capacity(current.len() * 2);
        for (t, &s) in current.iter().enumerate() {
            layer_arcs.push(Arc {
                tail: t as u32,
                head: head_of(s),
                take: false,
            });
            if s + w <= cap {
                layer_arcs.push(Arc {
                    tail: t as u32,
                    head: head_of(s + w),
                    take: true,
                });
            }
        }
        if !last {
            for &s in &next {
                slot[s as usize] = u32::MAX;
            }
        }

        arcs.push(layer_arcs);
        take_values.push(instance.item_values(var));
        states.push(next);
    }

    Ok(Bdd {
        order: order.clone(),
        p: instance.p(),
        capacity: cap,
        states,
        arcs,
        take_values,
    })
}

pub fn bdd_stats(bdd: &Bdd) -> BddStats {
    bdd.stats()
}
