//! c-component partition of a graph.
//!
//! Latent nodes are related when joined by an edge or when they share an
//! observable child; the transitive closure partitions the latents. Each
//! observable joins the class of its latent parents, or forms a singleton
//! block when it has none.

use std::collections::BTreeMap;

use crate::graph::{CausalGraph, NodeId, VarSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CComponentPartition {
    /// Blocks ordered by their smallest member index.
    pub blocks: Vec<VarSet>,
    index: BTreeMap<NodeId, usize>,
}

impl CComponentPartition {
    /// Ordinal of the block holding `v`.
    pub fn block_of(&self, v: NodeId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect() }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn c_components(g: &CausalGraph) -> CComponentPartition {
    let mut dsu = DisjointSets::new(g.universe_len());
    for u in g.latents().iter() {
        for &c in g.children(u) {
            if !g.is_observable(c) {
                dsu.union(u.index(), c.index());
            }
        }
    }
    for v in g.observables().iter() {
        let latent_parents: Vec<NodeId> = g.parents(v).iter().copied().filter(|&p| !g.is_observable(p)).collect();
        if let Some((&first, rest)) = latent_parents.split_first() {
            for &p in rest {
                dsu.union(first.index(), p.index());
            }
            dsu.union(first.index(), v.index());
        }
    }
    let mut by_root: BTreeMap<usize, VarSet> = BTreeMap::new();
    for v in g.nodes().iter() {
        by_root.entry(dsu.find(v.index())).or_default().insert(v);
    }
    let mut blocks: Vec<VarSet> = by_root.into_values().collect();
    blocks.sort_by_key(|b| b.first());
    let index = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, b)| b.iter().map(move |v| (v, i)))
        .collect();
    CComponentPartition { blocks, index }
}

/// Each block intersected with the observables of `g`; empty intersections dropped.
pub fn observable_blocks(p: &CComponentPartition, g: &CausalGraph) -> Vec<VarSet> {
    let obs = g.observables();
    p.blocks.iter().map(|b| b.intersection(&obs)).filter(|b| !b.is_empty()).collect()
}
