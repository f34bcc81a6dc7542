//! Machine-checkable do-calculus derivations.
//!
//! A derivation rewrites `P(s | do(t))` step by step into an expression free
//! of interventions. Each step rewrites one subexpression `lhs` into `rhs`
//! and is one of a fixed set of kinds: rule 2 or rule 3 of the do-calculus
//! (with the d-separation evidence that licenses it), or one of four
//! probability manipulations. Steps that reuse an earlier equality carry
//! the nested derivation that proves it.

mod eval;
mod generate;
mod rewrite;
mod verify;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, ExprJson, Leaf};
use crate::graph::{CausalGraph, GraphJson, NodeId, VarSet};
use crate::sep::{rule_applicable, EvidenceJson, Rule, RuleEvidence, RuleInstance};

pub use eval::SentenceEvaluator;
pub use generate::derive_effect;
pub use rewrite::{apply_at, find_first};
pub use verify::{verify_derivation, verify_derivation_with, verify_fragment, Verdict, VerifyConfig};

/// `P(outcome | observations, do(interventions))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DoSentence {
    pub outcome: VarSet,
    pub interventions: VarSet,
    pub observations: VarSet,
}

impl DoSentence {
    pub fn new(outcome: VarSet, interventions: VarSet, observations: VarSet) -> Self {
        DoSentence { outcome, interventions, observations }
    }

    /// `Q[h] = P(h | do(n \ h))`.
    pub fn q(h: &VarSet, n: &VarSet) -> Self {
        DoSentence::new(h.clone(), n.difference(h), VarSet::new())
    }

    pub fn is_observational(&self) -> bool {
        self.interventions.is_empty()
    }

    pub fn is_well_formed(&self) -> bool {
        !self.outcome.is_empty()
            && self.outcome.is_disjoint(&self.interventions)
            && self.outcome.is_disjoint(&self.observations)
            && self.interventions.is_disjoint(&self.observations)
    }
}

impl Leaf for DoSentence {
    fn vars(&self) -> VarSet {
        self.outcome.union(&self.interventions).union(&self.observations)
    }

    fn render(&self, name: &dyn Fn(NodeId) -> String) -> String {
        let list = |s: &VarSet| s.iter().map(name).collect::<Vec<_>>().join(",");
        let mut cond = Vec::new();
        if !self.interventions.is_empty() {
            cond.push(format!("do({})", list(&self.interventions)));
        }
        if !self.observations.is_empty() {
            cond.push(list(&self.observations));
        }
        if cond.is_empty() {
            format!("P({})", list(&self.outcome))
        } else {
            format!("P({} | {})", list(&self.outcome), cond.join(", "))
        }
    }

    fn write_json(&self, g: &CausalGraph) -> ExprJson {
        ExprJson {
            outcome: Some(g.names_of(&self.outcome)),
            intervene: Some(g.names_of(&self.interventions)),
            given: Some(g.names_of(&self.observations)),
            ..ExprJson::kind("sentence")
        }
    }

    fn read_json(j: &ExprJson, g: &CausalGraph) -> Result<Self> {
        if j.kind != "sentence" {
            return Err(Error::Json(format!("unknown expression kind `{}`", j.kind)));
        }
        let set = |f: &Option<Vec<String>>| -> Result<VarSet> {
            match f {
                Some(names) => g.set(names),
                None => Ok(VarSet::new()),
            }
        };
        let s = DoSentence::new(set(&j.outcome)?, set(&j.intervene)?, set(&j.given)?);
        if !s.is_well_formed() {
            return Err(Error::Json("sentence sets must be nonempty outcome and pairwise disjoint".into()));
        }
        Ok(s)
    }
}

pub type DoExpr = Expr<DoSentence>;

pub fn sentence(outcome: VarSet, interventions: VarSet, observations: VarSet) -> DoExpr {
    Expr::Leaf(DoSentence::new(outcome, interventions, observations))
}

/// True when no leaf carries an intervention.
pub fn is_observational(e: &DoExpr) -> bool {
    e.leaves().iter().all(|l| l.is_observational())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    Rule1,
    Rule2,
    Rule3,
    ChainRule,
    Marginalize,
    NormalizeToOne,
    FactorSubstitute,
}

impl StepKind {
    pub fn rule(self) -> Option<Rule> {
        match self {
            StepKind::Rule1 => Some(Rule::One),
            StepKind::Rule2 => Some(Rule::Two),
            StepKind::Rule3 => Some(Rule::Three),
            _ => None,
        }
    }
}

/// A derivation that starts from an arbitrary expression. Used both for the
/// top-level query and for equalities reused by `FactorSubstitute`.
#[derive(Clone, Debug, PartialEq)]
pub struct Fragment {
    pub start: DoExpr,
    pub steps: Vec<DerivationStep>,
}

impl Fragment {
    pub fn result(&self) -> &DoExpr {
        self.steps.last().map(|s| &s.after).unwrap_or(&self.start)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Detail {
    None,
    Rule(RuleEvidence),
    Nested(Box<Fragment>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Justification {
    /// Locations of `lhs` in `before`. A product `lhs` may match a subset of
    /// a larger product's factors.
    pub paths: Vec<Vec<usize>>,
    pub lhs: DoExpr,
    pub rhs: DoExpr,
    pub detail: Detail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivationStep {
    pub kind: StepKind,
    pub before: DoExpr,
    pub after: DoExpr,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    pub graph: CausalGraph,
    pub t: VarSet,
    pub s: VarSet,
    pub steps: Vec<DerivationStep>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DeriveResult {
    Derived(Box<Derivation>),
    NotIdentifiable { c: VarSet, t: VarSet },
}

impl Derivation {
    pub fn query(&self) -> DoExpr {
        sentence(self.s.clone(), self.t.clone(), VarSet::new())
    }

    pub fn result(&self) -> DoExpr {
        self.steps.last().map(|s| s.after.clone()).unwrap_or_else(|| self.query())
    }

    pub fn fragment(&self) -> Fragment {
        Fragment { start: self.query(), steps: self.steps.clone() }
    }

    /// Every step, nested fragments included, in preorder.
    pub fn all_steps(&self) -> Vec<&DerivationStep> {
        fn walk<'a>(steps: &'a [DerivationStep], out: &mut Vec<&'a DerivationStep>) {
            for s in steps {
                out.push(s);
                if let Detail::Nested(f) = &s.justification.detail {
                    walk(&f.steps, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.steps, &mut out);
        out
    }

    pub fn kinds(&self) -> Vec<StepKind> {
        self.all_steps().iter().map(|s| s.kind).collect()
    }

    pub fn contains_rule1(&self) -> bool {
        self.kinds().contains(&StepKind::Rule1)
    }

    pub fn to_json(&self) -> DerivationJson {
        DerivationJson {
            graph: self.graph.to_json(),
            query: QueryJson { intervene: self.graph.names_of(&self.t), on: self.graph.names_of(&self.s) },
            steps: self.steps.iter().map(|s| step_json(s, &self.graph)).collect(),
        }
    }

    pub fn from_json(j: &DerivationJson) -> Result<Derivation> {
        let graph = CausalGraph::from_json(&j.graph)?;
        let steps = j.steps.iter().map(|s| step_from_json(s, &graph)).collect::<Result<_>>()?;
        Ok(Derivation { t: graph.set(&j.query.intervene)?, s: graph.set(&j.query.on)?, graph, steps })
    }

    /// Pretty listing, one line per top-level step.
    pub fn pretty(&self) -> String {
        let mut out = format!("{}\n", self.query().pretty(&self.graph));
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{:>3}. {:<16} = {}\n", i + 1, format!("{:?}", s.kind), s.after.pretty(&self.graph)));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryJson {
    #[serde(rename = "do")]
    pub intervene: Vec<String>,
    pub on: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JustificationJson {
    pub paths: Vec<Vec<usize>>,
    pub lhs: ExprJson,
    pub rhs: ExprJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nested: Option<Box<FragmentJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepJson {
    pub kind: StepKind,
    pub before: ExprJson,
    pub after: ExprJson,
    pub justification: JustificationJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FragmentJson {
    pub start: ExprJson,
    pub steps: Vec<StepJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub graph: GraphJson,
    pub query: QueryJson,
    pub steps: Vec<StepJson>,
}

fn step_json(s: &DerivationStep, g: &CausalGraph) -> StepJson {
    let j = &s.justification;
    let (evidence, nested) = match &j.detail {
        Detail::None => (None, None),
        Detail::Rule(ev) => (Some(ev.to_json(g)), None),
        Detail::Nested(f) => (None, Some(Box::new(fragment_json(f, g)))),
    };
    StepJson {
        kind: s.kind,
        before: s.before.to_json(g),
        after: s.after.to_json(g),
        justification: JustificationJson {
            paths: j.paths.clone(),
            lhs: j.lhs.to_json(g),
            rhs: j.rhs.to_json(g),
            evidence,
            nested,
        },
    }
}

pub(crate) fn fragment_json(f: &Fragment, g: &CausalGraph) -> FragmentJson {
    FragmentJson { start: f.start.to_json(g), steps: f.steps.iter().map(|s| step_json(s, g)).collect() }
}

fn fragment_from_json(j: &FragmentJson, g: &CausalGraph) -> Result<Fragment> {
    Ok(Fragment {
        start: DoExpr::from_json(&j.start, g)?,
        steps: j.steps.iter().map(|s| step_from_json(s, g)).collect::<Result<_>>()?,
    })
}

fn step_from_json(j: &StepJson, g: &CausalGraph) -> Result<DerivationStep> {
    let jj = &j.justification;
    let detail = match (&jj.evidence, &jj.nested) {
        (Some(ev), _) => Detail::Rule(RuleEvidence::from_json(ev, g)?),
        (None, Some(f)) => Detail::Nested(Box::new(fragment_from_json(f, g)?)),
        (None, None) => Detail::None,
    };
    Ok(DerivationStep {
        kind: j.kind,
        before: DoExpr::from_json(&j.before, g)?,
        after: DoExpr::from_json(&j.after, g)?,
        justification: Justification {
            paths: jj.paths.clone(),
            lhs: DoExpr::from_json(&jj.lhs, g)?,
            rhs: DoExpr::from_json(&jj.rhs, g)?,
            detail,
        },
    })
}

/// Replaces a rule-1 application by the rule-2 and rule-3 instances over the
/// same sets. Both hold whenever the rule-1 instance does.
pub fn expand_rule1(g: &CausalGraph, r: &RuleInstance) -> Result<(RuleInstance, RuleInstance)> {
    if r.rule != Rule::One {
        return Err(Error::Precondition("expand_rule1 needs a rule-1 instance".into()));
    }
    if !rule_applicable(g, r)?.holds {
        return Err(Error::Precondition("rule 1 does not apply to this instance".into()));
    }
    let two = RuleInstance { rule: Rule::Two, ..r.clone() };
    let three = RuleInstance { rule: Rule::Three, ..r.clone() };
    Ok((two, three))
}
