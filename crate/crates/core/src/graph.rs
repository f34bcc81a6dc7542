//! Causal graphs over observable and latent nodes.
//!
//! A [`CausalGraph`] owns a fixed node universe. Derived graphs (latent
//! subgraphs, mutilations, barren-node removal) keep the universe and the
//! node indices of their source and only mark nodes absent, so a [`VarSet`]
//! computed on one graph stays meaningful on every graph derived from it.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of a node inside its graph's universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// An ordered set of nodes. Iteration follows ascending node index.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSet(BTreeSet<NodeId>);

impl VarSet {
    pub fn new() -> Self {
        VarSet(BTreeSet::new())
    }

    pub fn singleton(v: NodeId) -> Self {
        let mut s = VarSet::new();
        s.insert(v);
        s
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: NodeId) -> bool {
        self.0.remove(&v)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.0.contains(&v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn first(&self) -> Option<NodeId> {
        self.0.first().copied()
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VarSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

impl FromIterator<NodeId> for VarSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        VarSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VarSet {
    type Item = NodeId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, NodeId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Directed acyclic graph over observable (`N`) and unobservable (`U`) nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalGraph {
    names: Vec<String>,
    observable: Vec<bool>,
    present: Vec<bool>,
    parents: Vec<Vec<NodeId>>,
    children: Vec<Vec<NodeId>>,
}

/// Incremental constructor; validation happens in [`GraphBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    nodes: Vec<(String, bool)>,
    edges: Vec<(String, String)>,
}

impl GraphBuilder {
    pub fn observable(mut self, name: &str) -> Self {
        self.nodes.push((name.to_string(), true));
        self
    }

    pub fn latent(mut self, name: &str) -> Self {
        self.nodes.push((name.to_string(), false));
        self
    }

    pub fn node(mut self, name: &str, observable: bool) -> Self {
        self.nodes.push((name.to_string(), observable));
        self
    }

    pub fn edge(mut self, parent: &str, child: &str) -> Self {
        self.edges.push((parent.to_string(), child.to_string()));
        self
    }

    pub fn build(self) -> Result<CausalGraph> {
        let mut g = CausalGraph::empty();
        for (name, obs) in &self.nodes {
            g.add_node(name, *obs)?;
        }
        for (p, c) in &self.edges {
            g.add_edge(p, c)?;
        }
        g.check_acyclic()?;
        Ok(g)
    }
}

impl CausalGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Builds a graph from `(name, observable)` pairs and `(parent, child)` edges.
    pub fn new(nodes: &[(&str, bool)], edges: &[(&str, &str)]) -> Result<CausalGraph> {
        let mut b = GraphBuilder::default();
        for (n, o) in nodes {
            b = b.node(n, *o);
        }
        for (p, c) in edges {
            b = b.edge(p, c);
        }
        b.build()
    }

    fn empty() -> CausalGraph {
        CausalGraph {
            names: Vec::new(),
            observable: Vec::new(),
            present: Vec::new(),
            parents: Vec::new(),
            children: Vec::new(),
        }
    }

    pub(crate) fn add_node(&mut self, name: &str, observable: bool) -> Result<NodeId> {
        if name.is_empty() {
            return Err(Error::Input("empty node name".into()));
        }
        if self.names.iter().any(|n| n == name) {
            return Err(Error::DuplicateNode(name.to_string()));
        }
        self.names.push(name.to_string());
        self.observable.push(observable);
        self.present.push(true);
        self.parents.push(Vec::new());
        self.children.push(Vec::new());
        Ok(NodeId(self.names.len() - 1))
    }

    pub(crate) fn add_edge(&mut self, parent: &str, child: &str) -> Result<()> {
        let p = self.node(parent)?;
        let c = self.node(child)?;
        if p == c {
            return Err(Error::SelfLoop(parent.to_string()));
        }
        if self.parents[c.0].contains(&p) {
            return Err(Error::DuplicateEdge(parent.to_string(), child.to_string()));
        }
        insert_sorted(&mut self.parents[c.0], p);
        insert_sorted(&mut self.children[p.0], c);
        Ok(())
    }

    pub(crate) fn check_acyclic(&self) -> Result<()> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let n = self.universe_len();
        let mut color = vec![0u8; n];
        let mut stack_path: Vec<NodeId> = Vec::new();
        for start in self.nodes().iter() {
            if color[start.0] != 0 {
                continue;
            }
            let mut stack: Vec<(NodeId, usize)> = vec![(start, 0)];
            color[start.0] = 1;
            stack_path.push(start);
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < self.children[v.0].len() {
                    let w = self.children[v.0][*i];
                    *i += 1;
                    match color[w.0] {
                        0 => {
                            color[w.0] = 1;
                            stack.push((w, 0));
                            stack_path.push(w);
                        }
                        1 => {
                            let pos = stack_path.iter().position(|&x| x == w).unwrap_or(0);
                            let mut cycle: Vec<String> =
                                stack_path[pos..].iter().map(|&x| self.name(x).to_string()).collect();
                            cycle.push(self.name(w).to_string());
                            return Err(Error::Cycle(cycle));
                        }
                        _ => {}
                    }
                } else {
                    color[v.0] = 2;
                    stack.pop();
                    stack_path.pop();
                }
            }
        }
        Ok(())
    }

    /// Size of the node universe (including nodes absent from a derived graph).
    pub fn universe_len(&self) -> usize {
        self.names.len()
    }

    pub fn node(&self, name: &str) -> Result<NodeId> {
        self.names
            .iter()
            .position(|n| n == name)
            .filter(|&i| self.present[i])
            .map(NodeId)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Resolves a list of names into a set.
    pub fn set<S: AsRef<str>>(&self, names: &[S]) -> Result<VarSet> {
        names.iter().map(|n| self.node(n.as_ref())).collect()
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    pub fn names_of(&self, s: &VarSet) -> Vec<String> {
        s.iter().map(|v| self.name(v).to_string()).collect()
    }

    /// `{A, B}` rendering of a set, for diagnostics.
    pub fn fmt_set(&self, s: &VarSet) -> String {
        format!("{{{}}}", self.names_of(s).join(", "))
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.present.len() && self.present[v.0]
    }

    pub fn is_observable(&self, v: NodeId) -> bool {
        self.observable[v.0]
    }

    pub fn nodes(&self) -> VarSet {
        (0..self.universe_len()).filter(|&i| self.present[i]).map(NodeId).collect()
    }

    pub fn observables(&self) -> VarSet {
        self.nodes().iter().filter(|&v| self.observable[v.0]).collect()
    }

    pub fn latents(&self) -> VarSet {
        self.nodes().iter().filter(|&v| !self.observable[v.0]).collect()
    }

    pub fn parents(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v.0]
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.children[v.0]
    }

    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for p in self.nodes().iter() {
            for &c in &self.children[p.0] {
                out.push((p, c));
            }
        }
        out
    }

    pub fn has_edge(&self, parent: NodeId, child: NodeId) -> bool {
        self.contains(child) && self.parents[child.0].contains(&parent)
    }

    pub(crate) fn check_members(&self, s: &VarSet) -> Result<()> {
        for v in s.iter() {
            if !self.contains(v) {
                return Err(if v.0 < self.universe_len() {
                    Error::UnknownNode(self.name(v).to_string())
                } else {
                    Error::UnknownIndex(v.0)
                });
            }
        }
        Ok(())
    }

    pub(crate) fn check_observable(&self, s: &VarSet) -> Result<()> {
        self.check_members(s)?;
        match s.iter().find(|&v| !self.is_observable(v)) {
            Some(v) => Err(Error::NotObservable(self.name(v).to_string())),
            None => Ok(()),
        }
    }

    /// `An(C)`: `C` together with every node that has a directed path into `C`.
    pub fn ancestors(&self, c: &VarSet) -> Result<VarSet> {
        self.check_members(c)?;
        Ok(self.reach(c, |v| &self.parents[v.0]))
    }

    /// `De(C)`: `C` together with every node reachable from `C`.
    pub fn descendants(&self, c: &VarSet) -> Result<VarSet> {
        self.check_members(c)?;
        Ok(self.reach(c, |v| &self.children[v.0]))
    }

    fn reach<'a, F>(&'a self, seeds: &VarSet, next: F) -> VarSet
    where
        F: Fn(NodeId) -> &'a [NodeId],
    {
        let mut seen = vec![false; self.universe_len()];
        let mut queue: VecDeque<NodeId> = seeds.iter().collect();
        for v in seeds.iter() {
            seen[v.0] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &w in next(v) {
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).map(NodeId).collect()
    }

    /// `DUP(C)`: latent nodes with a directed path into `C` whose internal nodes are all latent.
    pub fn dup(&self, c: &VarSet) -> Result<VarSet> {
        self.check_observable(c)?;
        let mut out = VarSet::new();
        let mut queue: VecDeque<NodeId> = c.iter().collect();
        while let Some(v) = queue.pop_front() {
            for &p in &self.parents[v.0] {
                if !self.observable[p.0] && out.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        Ok(out)
    }

    /// `G_C`: the subgraph induced by `C ∪ DUP(C)`.
    pub fn latent_subgraph(&self, c: &VarSet) -> Result<CausalGraph> {
        let keep = c.union(&self.dup(c)?);
        Ok(self.induced(&keep))
    }

    /// Subgraph induced by `keep` (which must already consist of present nodes).
    pub(crate) fn induced(&self, keep: &VarSet) -> CausalGraph {
        let mut g = self.clone();
        for i in 0..g.universe_len() {
            g.present[i] = self.present[i] && keep.contains(NodeId(i));
        }
        for i in 0..g.universe_len() {
            if g.present[i] {
                let present = &g.present;
                g.parents[i] = self.parents[i].iter().copied().filter(|p| present[p.0]).collect();
                g.children[i] = self.children[i].iter().copied().filter(|c| present[c.0]).collect();
            } else {
                g.parents[i].clear();
                g.children[i].clear();
            }
        }
        g
    }

    /// `G_{\overline{X}}`: every arrow into `X` deleted.
    pub fn cut_incoming(&self, x: &VarSet) -> Result<CausalGraph> {
        self.check_members(x)?;
        let mut g = self.clone();
        for v in x.iter() {
            for p in std::mem::take(&mut g.parents[v.0]) {
                g.children[p.0].retain(|&c| c != v);
            }
        }
        Ok(g)
    }

    /// `G_{\underline{X}}`: every arrow out of `X` deleted.
    pub fn cut_outgoing(&self, x: &VarSet) -> Result<CausalGraph> {
        self.check_members(x)?;
        let mut g = self.clone();
        for v in x.iter() {
            for c in std::mem::take(&mut g.children[v.0]) {
                g.parents[c.0].retain(|&p| p != v);
            }
        }
        Ok(g)
    }

    /// Deletes latent nodes without observable descendants until none remain.
    pub fn remove_barren_latents(&self) -> CausalGraph {
        let mut g = self.clone();
        loop {
            let obs = g.observables();
            let barren: Vec<NodeId> = g
                .latents()
                .iter()
                .filter(|&u| {
                    let de = g.reach(&VarSet::singleton(u), |v| &g.children[v.0]);
                    de.is_disjoint(&obs)
                })
                .collect();
            if barren.is_empty() {
                return g;
            }
            let keep = g.nodes().difference(&barren.into_iter().collect());
            g = g.induced(&keep);
        }
    }

    /// Topological order of `scope`, where `a` precedes `b` whenever `g` has a
    /// directed path from `a` to `b`. Ties go to the smaller node index.
    pub fn topo_order(&self, scope: &VarSet) -> Result<Vec<NodeId>> {
        self.check_members(scope)?;
        let anc: HashMap<NodeId, VarSet> = scope
            .iter()
            .map(|v| {
                let mut a = self.reach(&VarSet::singleton(v), |w| &self.parents[w.0]).intersection(scope);
                a.remove(v);
                (v, a)
            })
            .collect();
        let mut placed = VarSet::new();
        let mut order = Vec::with_capacity(scope.len());
        while order.len() < scope.len() {
            let next = scope
                .iter()
                .find(|&v| !placed.contains(v) && anc[&v].is_subset(&placed))
                .ok_or_else(|| Error::Cycle(self.names_of(&scope.difference(&placed))))?;
            placed.insert(next);
            order.push(next);
        }
        Ok(order)
    }

    /// True iff `s = An(s) ∩ N` inside `G_within`.
    pub fn is_ancestral(&self, s: &VarSet, within: &VarSet) -> Result<bool> {
        self.check_observable(within)?;
        if !s.is_subset(within) {
            return Err(Error::Precondition(format!(
                "{} is not a subset of {}",
                self.fmt_set(s),
                self.fmt_set(within)
            )));
        }
        let gw = self.latent_subgraph(within)?;
        let an = gw.ancestors(s)?;
        Ok(an.intersection(&gw.observables()) == *s)
    }

    /// Graph text format: `node <name> obs|lat` and `edge <parent> <child>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.nodes().iter() {
            let kind = if self.observable[v.0] { "obs" } else { "lat" };
            out.push_str(&format!("node {} {}\n", self.name(v), kind));
        }
        for (p, c) in self.edges() {
            out.push_str(&format!("edge {} {}\n", self.name(p), self.name(c)));
        }
        out
    }

    /// Parses the line-oriented graph text format. `#` starts a comment.
    pub fn parse(text: &str) -> Result<CausalGraph> {
        let mut g = CausalGraph::empty();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let err = |message: String| Error::Parse { line, message };
            match fields.as_slice() {
                ["node", name, kind] => {
                    let obs = match *kind {
                        "obs" => true,
                        "lat" => false,
                        other => return Err(err(format!("expected `obs` or `lat`, found `{other}`"))),
                    };
                    g.add_node(name, obs).map_err(|e| err(e.to_string()))?;
                }
                ["edge", p, c] => {
                    for n in [p, c] {
                        if g.node(n).is_err() {
                            return Err(err(format!("edge references undeclared node `{n}`")));
                        }
                    }
                    g.add_edge(p, c).map_err(|e| err(e.to_string()))?;
                }
                _ => return Err(err(format!("unrecognized directive `{content}`"))),
            }
        }
        if g.universe_len() == 0 {
            return Err(Error::EmptyGraph);
        }
        g.check_acyclic()?;
        Ok(g)
    }

    /// DOT rendering with latent nodes (and their outgoing arrows) dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for v in self.nodes().iter() {
            if self.observable[v.0] {
                out.push_str(&format!("  \"{}\";\n", self.name(v)));
            } else {
                out.push_str(&format!("  \"{}\" [style=dashed];\n", self.name(v)));
            }
        }
        for (p, c) in self.edges() {
            let style = if self.observable[p.0] { "" } else { " [style=dashed]" };
            out.push_str(&format!("  \"{}\" -> \"{}\"{};\n", self.name(p), self.name(c), style));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            nodes: self
                .nodes()
                .iter()
                .map(|v| NodeJson { name: self.name(v).to_string(), observable: self.observable[v.0] })
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(p, c)| [self.name(p).to_string(), self.name(c).to_string()])
                .collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<CausalGraph> {
        let mut b = GraphBuilder::default();
        for n in &j.nodes {
            b = b.node(&n.name, n.observable);
        }
        for [p, c] in &j.edges {
            b = b.edge(p, c);
        }
        b.build()
    }
}

impl fmt::Display for CausalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn insert_sorted(v: &mut Vec<NodeId>, x: NodeId) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub name: String,
    pub observable: bool,
}

/// JSON form of a graph: `{"nodes": [{"name", "observable"}], "edges": [[parent, child]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<[String; 2]>,
}

/// The small graphs used throughout the docs, tests and examples.
pub mod fixtures {
    use super::CausalGraph;

    /// X → Z → Y
    pub fn chain() -> CausalGraph {
        CausalGraph::new(&[("X", true), ("Z", true), ("Y", true)], &[("X", "Z"), ("Z", "Y")]).unwrap()
    }

    /// X → Z ← Y
    pub fn collider() -> CausalGraph {
        CausalGraph::new(&[("X", true), ("Z", true), ("Y", true)], &[("X", "Z"), ("Y", "Z")]).unwrap()
    }

    /// Z → X, Z → Y, X → Y
    pub fn back_door() -> CausalGraph {
        CausalGraph::new(
            &[("X", true), ("Z", true), ("Y", true)],
            &[("Z", "X"), ("Z", "Y"), ("X", "Y")],
        )
        .unwrap()
    }

    /// X → Z → Y with a latent U confounding X and Y.
    pub fn front_door() -> CausalGraph {
        CausalGraph::new(
            &[("X", true), ("Z", true), ("Y", true), ("U", false)],
            &[("X", "Z"), ("Z", "Y"), ("U", "X"), ("U", "Y")],
        )
        .unwrap()
    }

    /// X → Y with a latent U confounding X and Y.
    pub fn bow() -> CausalGraph {
        CausalGraph::new(&[("X", true), ("Y", true), ("U", false)], &[("X", "Y"), ("U", "X"), ("U", "Y")])
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn set(g: &CausalGraph, names: &[&str]) -> VarSet {
        g.set(names).unwrap()
    }

    #[test]
    fn ancestors_examples() {
        let fd = front_door();
        assert_eq!(fd.ancestors(&set(&fd, &["Y"])).unwrap(), set(&fd, &["X", "Z", "Y", "U"]));
        let ch = chain();
        assert_eq!(ch.ancestors(&set(&ch, &["X"])).unwrap(), set(&ch, &["X"]));
        let bow = bow();
        assert_eq!(bow.ancestors(&set(&bow, &["Y"])).unwrap(), set(&bow, &["X", "Y", "U"]));
    }

    #[test]
    fn descendants_examples() {
        let ch = chain();
        assert_eq!(ch.descendants(&set(&ch, &["X"])).unwrap(), set(&ch, &["X", "Z", "Y"]));
        assert_eq!(ch.descendants(&set(&ch, &["Y"])).unwrap(), set(&ch, &["Y"]));
        let fd = front_door();
        assert_eq!(fd.descendants(&set(&fd, &["U"])).unwrap(), set(&fd, &["U", "X", "Z", "Y"]));
    }

    #[test]
    fn unknown_node_is_an_input_error() {
        let g = chain();
        assert_eq!(g.node("Q"), Err(Error::UnknownNode("Q".into())));
        let bogus = VarSet::singleton(NodeId(17));
        assert!(g.ancestors(&bogus).is_err());
    }

    #[test]
    fn dup_examples() {
        let fd = front_door();
        assert_eq!(fd.dup(&set(&fd, &["X", "Y"])).unwrap(), set(&fd, &["U"]));
        assert!(fd.dup(&set(&fd, &["Z"])).unwrap().is_empty());
        let bd = back_door();
        assert!(bd.dup(&bd.nodes()).unwrap().is_empty());
        assert_eq!(fd.dup(&set(&fd, &["U"])), Err(Error::NotObservable("U".into())));
    }

    #[test]
    fn dup_follows_latent_chains_only() {
        let g = CausalGraph::new(
            &[("A", true), ("U1", false), ("U2", false), ("B", true), ("U3", false)],
            &[("U1", "U2"), ("U2", "B"), ("U3", "A"), ("A", "B")],
        )
        .unwrap();
        assert_eq!(g.dup(&set(&g, &["B"])).unwrap(), set(&g, &["U1", "U2"]));
    }

    #[test]
    fn latent_subgraph_examples() {
        let fd = front_door();
        let gzy = fd.latent_subgraph(&set(&fd, &["Z", "Y"])).unwrap();
        assert_eq!(gzy.nodes(), set(&fd, &["Z", "Y", "U"]));
        let edges: Vec<(&str, &str)> = gzy.edges().iter().map(|&(p, c)| (fd.name(p), fd.name(c))).collect();
        assert_eq!(edges, vec![("Z", "Y"), ("U", "Y")]);
        assert_eq!(fd.latent_subgraph(&fd.observables()).unwrap(), fd);
        let bow = bow();
        let gy = bow.latent_subgraph(&set(&bow, &["Y"])).unwrap();
        assert_eq!(gy.nodes(), set(&bow, &["Y", "U"]));
        assert_eq!(gy.edges().len(), 1);
        assert!(gy.has_edge(bow.node("U").unwrap(), bow.node("Y").unwrap()));
    }

    #[test]
    fn cut_examples() {
        let bd = back_door();
        let x = set(&bd, &["X"]);
        let cin = bd.cut_incoming(&x).unwrap();
        assert!(!cin.has_edge(bd.node("Z").unwrap(), bd.node("X").unwrap()));
        assert_eq!(cin.edges().len(), 2);
        let cout = bd.cut_outgoing(&x).unwrap();
        assert!(!cout.has_edge(bd.node("X").unwrap(), bd.node("Y").unwrap()));
        assert_eq!(cout.edges().len(), 2);
        assert_eq!(bd.cut_incoming(&VarSet::new()).unwrap(), bd);
        assert_eq!(bd.cut_outgoing(&VarSet::new()).unwrap(), bd);

        let bow = bow();
        let b = bow.cut_incoming(&set(&bow, &["X"])).unwrap();
        assert_eq!(b.edges().len(), 2);
        assert!(b.has_edge(bow.node("U").unwrap(), bow.node("Y").unwrap()));

        let ch = chain();
        let c = ch.cut_outgoing(&set(&ch, &["Z"])).unwrap();
        assert_eq!(c.edges(), vec![(ch.node("X").unwrap(), ch.node("Z").unwrap())]);
    }

    #[test]
    fn barren_latents() {
        let with_w = CausalGraph::new(
            &[("X", true), ("Y", true), ("U", false), ("W", false)],
            &[("X", "Y"), ("U", "X"), ("U", "Y")],
        )
        .unwrap();
        let pruned = with_w.remove_barren_latents();
        assert_eq!(pruned.names_of(&pruned.nodes()), vec!["X", "Y", "U"]);
        assert_eq!(pruned.edges().len(), 3);

        let fd = front_door();
        assert_eq!(fd.remove_barren_latents(), fd);

        let chain_u = CausalGraph::new(&[("A", true), ("U1", false), ("U2", false)], &[("U1", "U2")]).unwrap();
        let p = chain_u.remove_barren_latents();
        assert_eq!(p.nodes(), set(&chain_u, &["A"]));
    }

    #[test]
    fn topo_examples() {
        let fd = front_door();
        let order = fd.topo_order(&fd.observables()).unwrap();
        let names: Vec<&str> = order.iter().map(|&v| fd.name(v)).collect();
        assert_eq!(names, vec!["X", "Z", "Y"]);
        assert!(fd.topo_order(&VarSet::new()).unwrap().is_empty());

        let coll = CausalGraph::new(&[("X", true), ("Y", true), ("Z", true)], &[("X", "Z"), ("Y", "Z")]).unwrap();
        let o: Vec<&str> = coll.topo_order(&coll.nodes()).unwrap().iter().map(|&v| coll.name(v)).collect();
        assert_eq!(o, vec!["X", "Y", "Z"]);
    }

    #[test]
    fn topo_order_respects_paths_through_excluded_nodes() {
        // B is declared first but sits downstream of A through the latent U.
        let g = CausalGraph::new(&[("B", true), ("U", false), ("A", true)], &[("A", "U"), ("U", "B")]).unwrap();
        let o: Vec<&str> = g.topo_order(&g.observables()).unwrap().iter().map(|&v| g.name(v)).collect();
        assert_eq!(o, vec!["A", "B"]);
    }

    #[test]
    fn ancestral_examples() {
        let fd = front_door();
        let zy = set(&fd, &["Z", "Y"]);
        assert!(fd.is_ancestral(&zy, &zy).unwrap());
        assert!(fd.is_ancestral(&set(&fd, &["Y"]), &set(&fd, &["X", "Y"])).unwrap());
        let bow = bow();
        assert!(!bow.is_ancestral(&set(&bow, &["Y"]), &set(&bow, &["X", "Y"])).unwrap());
        let all = bow.observables();
        assert!(bow.is_ancestral(&all, &all).unwrap());
        assert!(bow.is_ancestral(&set(&bow, &["X", "Y"]), &set(&bow, &["Y"])).is_err());
    }

    #[test]
    fn builder_rejects_bad_graphs() {
        assert_eq!(
            CausalGraph::new(&[("A", true), ("A", false)], &[]),
            Err(Error::DuplicateNode("A".into()))
        );
        assert_eq!(
            CausalGraph::new(&[("A", true), ("B", true)], &[("A", "B"), ("A", "B")]),
            Err(Error::DuplicateEdge("A".into(), "B".into()))
        );
        assert_eq!(CausalGraph::new(&[("A", true)], &[("A", "A")]), Err(Error::SelfLoop("A".into())));
        match CausalGraph::new(&[("A", true), ("B", true), ("C", true)], &[("A", "B"), ("B", "C"), ("C", "A")]) {
            Err(Error::Cycle(c)) => assert_eq!(c, vec!["A", "B", "C", "A"]),
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn parse_text_format() {
        let text = "# bow graph\nnode X obs\nnode Y obs\nnode U lat\nedge X Y\nedge U X\nedge U Y # confounder\n";
        let g = CausalGraph::parse(text).unwrap();
        assert_eq!(g, bow());
        assert_eq!(CausalGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let e = CausalGraph::parse("edge X Y\nnode X obs\nnode Y obs\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }), "{e}");
        assert!(e.to_string().contains("undeclared"));

        let e = CausalGraph::parse("node X obs\nedge X X\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(e.to_string().contains("self-loop"));

        let e = CausalGraph::parse("node X obs\nnode X lat\n").unwrap_err();
        assert!(e.to_string().contains("duplicate node"));

        let e = CausalGraph::parse("node X obs\nnode Y obs\nedge X Y\nedge Y X\n").unwrap_err();
        assert!(matches!(e, Error::Cycle(_)));

        assert_eq!(CausalGraph::parse("# nothing\n\n"), Err(Error::EmptyGraph));
        assert!(CausalGraph::parse("node X maybe\n").is_err());
        assert!(CausalGraph::parse("vertex X\n").is_err());
    }

    #[test]
    fn dot_marks_latents_dashed() {
        let dot = front_door().to_dot();
        assert!(dot.contains("\"U\" [style=dashed]"));
        assert!(dot.contains("\"U\" -> \"X\" [style=dashed]"));
        assert!(dot.contains("\"X\" -> \"Z\";"));
    }

    #[test]
    fn json_round_trip() {
        let g = front_door();
        let j = serde_json::to_string(&g.to_json()).unwrap();
        let back: GraphJson = serde_json::from_str(&j).unwrap();
        assert_eq!(CausalGraph::from_json(&back).unwrap(), g);
    }
}
