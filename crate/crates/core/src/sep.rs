//! d-separation and the applicability tests of the three do-calculus rules.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CausalGraph, NodeId, VarSet};

/// "Is `x` independent of `y` given `z` in `graph`?"
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationQuery {
    pub x: VarSet,
    pub y: VarSet,
    pub z: VarSet,
    pub graph: CausalGraph,
}

impl SeparationQuery {
    pub fn new(graph: CausalGraph, x: VarSet, y: VarSet, z: VarSet) -> Self {
        SeparationQuery { x, y, z, graph }
    }
}

fn check_disjoint(g: &CausalGraph, sets: &[(&str, &VarSet)]) -> Result<()> {
    for (i, (na, a)) in sets.iter().enumerate() {
        g.check_members(a)?;
        for (nb, b) in &sets[i + 1..] {
            if !a.is_disjoint(b) {
                return Err(Error::Overlap(format!(
                    "{na} and {nb} share {}",
                    g.fmt_set(&a.intersection(b))
                )));
            }
        }
    }
    Ok(())
}

pub fn d_separated(q: &SeparationQuery) -> Result<bool> {
    d_separated_in(&q.graph, &q.x, &q.y, &q.z)
}

/// Active-trail reachability ("Bayes ball"). Visit states are a node plus the
/// direction the trail entered it from.
pub fn d_separated_in(g: &CausalGraph, x: &VarSet, y: &VarSet, z: &VarSet) -> Result<bool> {
    check_disjoint(g, &[("x", x), ("y", y), ("z", z)])?;
    if x.is_empty() || y.is_empty() {
        return Ok(true);
    }
    // Colliders are open iff they have a descendant in z, i.e. they are in An(z).
    let an_z = g.ancestors(z)?;
    let n = g.universe_len();
    // index 0: arrived from a child (moving up), 1: arrived from a parent (moving down)
    let mut visited = vec![[false; 2]; n];
    let mut queue: VecDeque<(NodeId, usize)> = VecDeque::new();
    for v in x.iter() {
        visited[v.index()][0] = true;
        queue.push_back((v, 0));
    }
    while let Some((v, dir)) = queue.pop_front() {
        let observed = z.contains(v);
        if !observed && y.contains(v) {
            return Ok(false);
        }
        let mut push = |w: NodeId, d: usize, queue: &mut VecDeque<(NodeId, usize)>| {
            if !visited[w.index()][d] {
                visited[w.index()][d] = true;
                queue.push_back((w, d));
            }
        };
        if dir == 0 {
            if !observed {
                for &p in g.parents(v) {
                    push(p, 0, &mut queue);
                }
                for &c in g.children(v) {
                    push(c, 1, &mut queue);
                }
            }
        } else {
            if !observed {
                for &c in g.children(v) {
                    push(c, 1, &mut queue);
                }
            }
            if an_z.contains(v) {
                for &p in g.parents(v) {
                    push(p, 0, &mut queue);
                }
            }
        }
    }
    Ok(true)
}

/// `Z(W)`: members of `z` that are not ancestors of any `w` node in `G_{\overline{X}}`.
pub fn z_w(g: &CausalGraph, x: &VarSet, z: &VarSet, w: &VarSet) -> Result<VarSet> {
    check_disjoint(g, &[("x", x), ("z", z), ("w", w)])?;
    let gx = g.cut_incoming(x)?;
    let an_w = gx.ancestors(w)?;
    Ok(z.difference(&an_w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    One,
    Two,
    Three,
}

impl Rule {
    pub fn number(self) -> u8 {
        match self {
            Rule::One => 1,
            Rule::Two => 2,
            Rule::Three => 3,
        }
    }

    pub fn from_number(n: u8) -> Result<Rule> {
        match n {
            1 => Ok(Rule::One),
            2 => Ok(Rule::Two),
            3 => Ok(Rule::Three),
            _ => Err(Error::Input(format!("no do-calculus rule {n}"))),
        }
    }
}

/// A candidate rule application on `P(y | do(x), z, w)`-shaped sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub rule: Rule,
    pub x: VarSet,
    pub y: VarSet,
    pub z: VarSet,
    pub w: VarSet,
}

/// What was actually checked for a rule instance: `y ⊥ z | x ∪ w` in the
/// graph with arrows into `cut_incoming` and out of `cut_outgoing` removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleEvidence {
    pub instance: RuleInstance,
    pub cut_incoming: VarSet,
    pub cut_outgoing: VarSet,
    pub holds: bool,
}

impl RuleEvidence {
    /// The separation query on the mutilated graph.
    pub fn query(&self, g: &CausalGraph) -> Result<SeparationQuery> {
        let m = g.cut_incoming(&self.cut_incoming)?.cut_outgoing(&self.cut_outgoing)?;
        let r = &self.instance;
        Ok(SeparationQuery::new(m, r.y.clone(), r.z.clone(), r.x.union(&r.w)))
    }

    pub fn to_json(&self, g: &CausalGraph) -> EvidenceJson {
        let r = &self.instance;
        EvidenceJson {
            rule: r.rule.number(),
            x: g.names_of(&r.x),
            y: g.names_of(&r.y),
            z: g.names_of(&r.z),
            w: g.names_of(&r.w),
            cut_incoming: g.names_of(&self.cut_incoming),
            cut_outgoing: g.names_of(&self.cut_outgoing),
            holds: self.holds,
        }
    }

    pub fn from_json(j: &EvidenceJson, g: &CausalGraph) -> Result<RuleEvidence> {
        Ok(RuleEvidence {
            instance: RuleInstance {
                rule: Rule::from_number(j.rule)?,
                x: g.set(&j.x)?,
                y: g.set(&j.y)?,
                z: g.set(&j.z)?,
                w: g.set(&j.w)?,
            },
            cut_incoming: g.set(&j.cut_incoming)?,
            cut_outgoing: g.set(&j.cut_outgoing)?,
            holds: j.holds,
        })
    }
}

/// Serialized rule evidence, node sets by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceJson {
    pub rule: u8,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub w: Vec<String>,
    pub cut_incoming: Vec<String>,
    pub cut_outgoing: Vec<String>,
    pub holds: bool,
}

/// Decides whether the rule applies and returns the exact test performed.
///
/// - rule 1: `(y ⊥ z | x, w)` in `G_{\overline{X}}`
/// - rule 2: `(y ⊥ z | x, w)` in `G_{\overline{X}\underline{Z}}`
/// - rule 3: `(y ⊥ z | x, w)` in `G_{\overline{X, Z(W)}}`
pub fn rule_applicable(g: &CausalGraph, r: &RuleInstance) -> Result<RuleEvidence> {
    check_disjoint(g, &[("x", &r.x), ("y", &r.y), ("z", &r.z), ("w", &r.w)])?;
    let (cut_incoming, cut_outgoing) = match r.rule {
        Rule::One => (r.x.clone(), VarSet::new()),
        Rule::Two => (r.x.clone(), r.z.clone()),
        Rule::Three => (r.x.union(&z_w(g, &r.x, &r.z, &r.w)?), VarSet::new()),
    };
    let m = g.cut_incoming(&cut_incoming)?.cut_outgoing(&cut_outgoing)?;
    let holds = d_separated_in(&m, &r.y, &r.z, &r.x.union(&r.w))?;
    Ok(RuleEvidence { instance: r.clone(), cut_incoming, cut_outgoing, holds })
}
