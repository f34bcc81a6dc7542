//! Independent checker for derivations.
//!
//! Every step is re-checked from scratch: the graph evidence of rule steps
//! is recomputed, manipulations are matched against their shape, nested
//! fragments are verified recursively, `after` must be the rewrite of
//! `before`, and both sides must agree numerically on random models.

use std::cell::RefCell;
use std::collections::HashMap;

use super::rewrite::{apply_at, disjoint_sets, manipulation_shape, rule_shape, well_formed};
use super::{is_observational, Derivation, DerivationStep, Detail, DoExpr, Fragment, SentenceEvaluator, StepKind};
use crate::graph::{CausalGraph, VarSet};
use crate::oracle::{random_model, trial_seed, DiscreteModel, CHECK_TOLERANCE};
use crate::sep::rule_applicable;
use crate::table::Domains;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Random models each step is evaluated on; 0 skips numeric checks.
    pub models: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { models: 5, tolerance: CHECK_TOLERANCE, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Accept,
    /// `step` indexes the top-level steps; `steps.len()` flags the final
    /// expression.
    Reject { step: usize, reason: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

pub fn verify_derivation(d: &Derivation) -> Verdict {
    verify_derivation_with(d, &VerifyConfig::default())
}

pub fn verify_derivation_with(d: &Derivation, cfg: &VerifyConfig) -> Verdict {
    let reject = |step: usize, reason: String| Verdict::Reject { step, reason };
    let g = &d.graph;
    if d.s.is_empty() || !disjoint_sets(&[&d.s, &d.t]) {
        return reject(0, "malformed query".into());
    }
    if let Err(e) = g.check_observable(&d.s.union(&d.t)) {
        return reject(0, e.to_string());
    }
    if let Verdict::Reject { step, reason } = verify_fragment(g, &d.fragment(), cfg) {
        return reject(step, reason);
    }
    if !is_observational(&d.result()) {
        return reject(d.steps.len(), "final expression still contains interventions".into());
    }
    Verdict::Accept
}

/// Checks a standalone fragment on `g`. Unlike a derivation its start is
/// arbitrary and its result need not be observational.
pub fn verify_fragment(g: &CausalGraph, f: &Fragment, cfg: &VerifyConfig) -> Verdict {
    let domains = Domains::uniform(g.universe_len(), 2);
    let models: Vec<DiscreteModel> = match (0..cfg.models)
        .map(|i| random_model(g, &domains, trial_seed(cfg.seed, i as u64)))
        .collect()
    {
        Ok(m) => m,
        Err(e) => return Verdict::Reject { step: 0, reason: e.to_string() },
    };
    let v = Checker::new(g, &models, cfg);
    match v.fragment(f) {
        Ok(()) => Verdict::Accept,
        Err((step, reason)) => Verdict::Reject { step, reason },
    }
}

struct Checker<'a> {
    g: &'a CausalGraph,
    evals: Vec<SentenceEvaluator<'a>>,
    tolerance: f64,
    cache: RefCell<HashMap<(usize, DoExpr, VarSet), Vec<f64>>>,
}

impl<'a> Checker<'a> {
    fn new(g: &'a CausalGraph, models: &'a [DiscreteModel], cfg: &VerifyConfig) -> Self {
        Checker {
            g,
            evals: models.iter().map(SentenceEvaluator::new).collect(),
            tolerance: cfg.tolerance,
            cache: RefCell::default(),
        }
    }

    fn fragment(&self, f: &Fragment) -> Result<(), (usize, String)> {
        if f.start != f.start.canonicalize() {
            return Err((0, "start is not in canonical form".into()));
        }
        let mut prev = &f.start;
        for (i, st) in f.steps.iter().enumerate() {
            self.step(st, prev).map_err(|r| (i, r))?;
            prev = &st.after;
        }
        Ok(())
    }

    fn step(&self, st: &DerivationStep, prev: &DoExpr) -> Result<(), String> {
        let j = &st.justification;
        if st.before != *prev {
            return Err("does not continue from the previous expression".into());
        }
        if ![&st.before, &st.after, &j.lhs, &j.rhs].iter().all(|e| well_formed(e)) {
            return Err("malformed sentence".into());
        }
        match st.kind {
            StepKind::Rule1 | StepKind::Rule2 | StepKind::Rule3 => {
                let Detail::Rule(ev) = &j.detail else { return Err("rule step without evidence".into()) };
                let r = &ev.instance;
                if Some(r.rule) != st.kind.rule() {
                    return Err("evidence names a different rule".into());
                }
                if !rule_shape(r, &j.lhs, &j.rhs) {
                    return Err(format!("rewrite does not have the shape of rule {}", r.rule.number()));
                }
                let fresh = rule_applicable(self.g, r).map_err(|e| e.to_string())?;
                if !fresh.holds {
                    return Err(format!("separation required by rule {} does not hold", r.rule.number()));
                }
            }
            StepKind::ChainRule | StepKind::Marginalize | StepKind::NormalizeToOne => {
                if !manipulation_shape(st.kind, &j.lhs, &j.rhs) {
                    return Err(format!("rewrite does not have the shape of {:?}", st.kind));
                }
            }
            StepKind::FactorSubstitute => {
                let Detail::Nested(f) = &j.detail else { return Err("substitution without a derivation".into()) };
                self.fragment(f).map_err(|(i, r)| format!("nested step {i}: {r}"))?;
                let (a, b) = (&f.start, f.result());
                if !((j.lhs == *a && j.rhs == *b) || (j.lhs == *b && j.rhs == *a)) {
                    return Err("substituted equality differs from the nested derivation".into());
                }
            }
        }
        let expected = apply_at(&st.before, &j.paths, &j.lhs, &j.rhs)?;
        if expected != st.after {
            return Err("result is not the stated rewrite".into());
        }
        self.numeric(&st.before, &st.after)
    }

    fn values(&self, m: usize, e: &DoExpr, vars: &VarSet) -> Result<Vec<f64>, String> {
        let key = (m, e.clone(), vars.clone());
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = self.evals[m].values(e, vars).map_err(|e| e.to_string())?;
        self.cache.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn numeric(&self, before: &DoExpr, after: &DoExpr) -> Result<(), String> {
        let vars = before.free_vars().union(&after.free_vars());
        for m in 0..self.evals.len() {
            let (a, b) = (self.values(m, before, &vars)?, self.values(m, after, &vars)?);
            let gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            if gap > self.tolerance {
                return Err(format!("sides differ by {gap:.3e} on model {m}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::docalc::{derive_effect, sentence, DeriveResult, Justification};
    use crate::expr::Expr;
    use crate::sep::{Rule, RuleInstance};
    use crate::graph::fixtures::*;

    fn derive(g: &CausalGraph, t: &[&str], s: &[&str]) -> Derivation {
        match derive_effect(&g.set(t).unwrap(), &g.set(s).unwrap(), g).unwrap() {
            DeriveResult::Derived(d) => *d,
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn accepts_generated_derivations() {
        for g in [front_door(), back_door(), chain()] {
            let names = g.names_of(&g.observables());
            let d = derive(&g, &[names[0].as_str()], &[names[names.len() - 1].as_str()]);
            assert_eq!(verify_derivation(&d), Verdict::Accept, "{}", d.pretty());
        }
    }

    #[test]
    fn rejects_a_tampered_step() {
        let g = front_door();
        let mut d = derive(&g, &["X"], &["Y"]);
        let bogus = sentence(g.set(&["Y"]).unwrap(), VarSet::new(), g.set(&["X"]).unwrap());
        d.steps[1].justification.rhs = bogus;
        assert!(matches!(verify_derivation(&d), Verdict::Reject { step: 1, .. }));
    }

    #[test]
    fn rejects_a_fabricated_separation() {
        let g = bow();
        let (x, y) = (g.set(&["X"]).unwrap(), g.set(&["Y"]).unwrap());
        let instance = RuleInstance { rule: Rule::Three, x: VarSet::new(), y: y.clone(), z: x.clone(), w: VarSet::new() };
        let mut ev = rule_applicable(&g, &instance).unwrap();
        assert!(!ev.holds);
        ev.holds = true;
        let (lhs, rhs) = (sentence(y.clone(), x.clone(), VarSet::new()), sentence(y.clone(), VarSet::new(), VarSet::new()));
        let step = DerivationStep {
            kind: StepKind::Rule3,
            before: lhs.clone(),
            after: rhs.clone(),
            justification: Justification { paths: vec![vec![]], lhs, rhs, detail: Detail::Rule(ev) },
        };
        let d = Derivation { graph: g, t: x, s: y, steps: vec![step] };
        match verify_derivation(&d) {
            Verdict::Reject { step: 0, reason } => assert!(reason.contains("does not hold"), "{reason}"),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn accepts_a_lone_normalization() {
        let g = front_door();
        let y = g.set(&["Y"]).unwrap();
        let start = Expr::sum(y.clone(), sentence(y, VarSet::new(), VarSet::new()));
        let step = DerivationStep {
            kind: StepKind::NormalizeToOne,
            before: start.clone(),
            after: Expr::One,
            justification: Justification { paths: vec![vec![]], lhs: start.clone(), rhs: Expr::One, detail: Detail::None },
        };
        let f = Fragment { start, steps: vec![step] };
        assert_eq!(verify_fragment(&g, &f, &VerifyConfig::default()), Verdict::Accept);
    }

    #[test]
    fn back_door_rule2_involves_the_treatment() {
        let g = back_door();
        let d = derive(&g, &["X"], &["Y"]);
        let (x, y) = (g.node("X").unwrap(), g.set(&["Y"]).unwrap());
        let found = d.all_steps().into_iter().any(|st| match &st.justification.detail {
            Detail::Rule(ev) if st.kind == StepKind::Rule2 && ev.instance.y == y => {
                ev.holds && (ev.cut_outgoing.contains(x) || ev.instance.z.contains(x))
            }
            _ => false,
        });
        assert!(found, "{}", d.pretty());
    }

    #[test]
    fn rejects_an_unlicensed_rule() {
        let g = bow();
        let (x, y) = (g.set(&["X"]).unwrap(), g.set(&["Y"]).unwrap());
        let mut d = derive(&back_door(), &["X"], &["Y"]);
        d.graph = g;
        d.t = x;
        d.s = y;
        assert!(!verify_derivation(&d).is_accept());
    }
}
