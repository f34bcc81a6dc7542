//! Compiles the identification recursion into a do-calculus derivation.
//!
//! Working forms are `Q[H] = P(H | do(N \ H))`. Each identification step
//! becomes a fragment proving an equality about such sentences:
//!
//! - [`Gen::decompose`]: `Q[H] = Π_i Q[H_i]` over the c-components of `G_H`.
//! - [`Gen::ancestral`]: `Q[W] = Σ_{C\W} Q[C]` for `W` ancestral in `G_C`.
//! - [`Gen::component`]: `Q[H_i]` as a product of ratios of sums of `Q[H]`.
//!
//! Fragments are spliced into the main derivation with `FactorSubstitute`.

use super::rewrite::{apply_at, find_all, find_first};
use super::{
    is_observational, sentence, Derivation, DerivationStep, DeriveResult, Detail, DoExpr, DoSentence, Fragment,
    Justification, StepKind,
};
use crate::ccomp::{c_components, observable_blocks};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::graph::{CausalGraph, NodeId, VarSet};
use crate::ident::{check_effect_query, effect_support};
use crate::sep::{rule_applicable, Rule, RuleInstance};

type Failure = (VarSet, VarSet);

struct Gen<'g> {
    /// Graph with barren latents removed; drives the recursion.
    g: CausalGraph,
    /// Graph the rule evidence is computed on.
    input: &'g CausalGraph,
    n: VarSet,
}

struct Builder<'a, 'g> {
    gen: &'a Gen<'g>,
    start: DoExpr,
    current: DoExpr,
    steps: Vec<DerivationStep>,
}

fn internal(msg: &str) -> Error {
    Error::Precondition(format!("derivation generator: {msg}"))
}

impl<'a, 'g> Builder<'a, 'g> {
    fn new(gen: &'a Gen<'g>, start: DoExpr) -> Self {
        let start = start.canonicalize();
        Builder { gen, current: start.clone(), start, steps: Vec::new() }
    }

    fn resume(gen: &'a Gen<'g>, f: Fragment) -> Self {
        Builder { gen, current: f.result().clone(), start: f.start, steps: f.steps }
    }

    fn finish(self) -> Fragment {
        Fragment { start: self.start, steps: self.steps }
    }

    fn push(&mut self, kind: StepKind, paths: Vec<Vec<usize>>, lhs: DoExpr, rhs: DoExpr, detail: Detail) -> Result<()> {
        let after = apply_at(&self.current, &paths, &lhs, &rhs).map_err(|e| internal(&e))?;
        let before = std::mem::replace(&mut self.current, after.clone());
        self.steps.push(DerivationStep { kind, before, after, justification: Justification { paths, lhs, rhs, detail } });
        Ok(())
    }

    fn rewrite(&mut self, kind: StepKind, lhs: DoExpr, rhs: DoExpr) -> Result<()> {
        let (lhs, rhs) = (lhs.canonicalize(), rhs.canonicalize());
        let path = find_first(&self.current, &lhs).ok_or_else(|| internal("rewrite target not found"))?;
        self.push(kind, vec![path], lhs, rhs, Detail::None)
    }

    /// Rule 2 or 3 between `P(y | w, do(x ∪ z))` and its rewritten form;
    /// `from_do` selects the direction.
    fn rule(&mut self, rule: Rule, x: &VarSet, y: &VarSet, z: &VarSet, w: &VarSet, from_do: bool) -> Result<()> {
        let inst = RuleInstance { rule, x: x.clone(), y: y.clone(), z: z.clone(), w: w.clone() };
        let ev = rule_applicable(self.gen.input, &inst)?;
        if !ev.holds {
            return Err(internal(&format!("rule {} does not hold", rule.number())));
        }
        let with_do = sentence(y.clone(), x.union(z), w.clone());
        let other = match rule {
            Rule::Two => sentence(y.clone(), x.clone(), w.union(z)),
            _ => sentence(y.clone(), x.clone(), w.clone()),
        };
        let (lhs, rhs) = if from_do { (with_do, other) } else { (other, with_do) };
        let path = find_first(&self.current, &lhs).ok_or_else(|| internal("rule target not found"))?;
        let kind = if rule == Rule::Two { StepKind::Rule2 } else { StepKind::Rule3 };
        self.push(kind, vec![path], lhs, rhs, Detail::Rule(ev))
    }

    /// Replaces every occurrence of the fragment's start by its result, or
    /// with `reverse` one occurrence of the result by the start.
    fn substitute(&mut self, f: Fragment, reverse: bool) -> Result<()> {
        if f.steps.is_empty() {
            return Ok(());
        }
        let (lhs, rhs) = if reverse { (f.result().clone(), f.start.clone()) } else { (f.start.clone(), f.result().clone()) };
        let paths = if reverse {
            vec![find_first(&self.current, &lhs).ok_or_else(|| internal("grouped factors not found"))?]
        } else {
            find_all(&self.current, &lhs)
        };
        if paths.is_empty() {
            return Ok(());
        }
        self.push(StepKind::FactorSubstitute, paths, lhs, rhs, Detail::Nested(Box::new(f)))
    }
}

impl<'g> Gen<'g> {
    fn q(&self, h: &VarSet) -> DoExpr {
        Expr::Leaf(DoSentence::q(h, &self.n))
    }

    fn blocks(&self, h: &VarSet) -> Result<Vec<VarSet>> {
        let gh = self.g.latent_subgraph(h)?;
        Ok(observable_blocks(&c_components(&gh), &gh))
    }

    fn order(&self, h: &VarSet) -> Result<Vec<NodeId>> {
        self.g.latent_subgraph(h)?.topo_order(h)
    }

    fn block_of(&self, h: &VarSet, v: NodeId) -> Result<VarSet> {
        self.blocks(h)?.into_iter().find(|b| b.contains(v)).ok_or_else(|| internal("node outside every block"))
    }

    /// `Q[H] = Π_i Q[H_i]`, by induction on `H` minus its last node.
    fn decompose(&self, h: &VarSet) -> Result<Fragment> {
        let mut b = Builder::new(self, self.q(h));
        if self.blocks(h)?.len() <= 1 {
            return Ok(b.finish());
        }
        let order = self.order(h)?;
        let x = *order.last().ok_or_else(|| internal("empty set"))?;
        let xs = VarSet::singleton(x);
        let rest = h.difference(&xs);
        let y = self.n.difference(h);
        let none = VarSet::new();

        b.rewrite(
            StepKind::ChainRule,
            self.q(h),
            Expr::Product(vec![sentence(xs.clone(), y.clone(), rest.clone()), sentence(rest.clone(), y.clone(), none.clone())]),
        )?;
        b.rule(Rule::Three, &y, &rest, &xs, &none, false)?;
        b.substitute(self.decompose(&rest)?, false)?;

        let h1 = self.block_of(h, x)?;
        let h1_rest = h1.difference(&xs);
        let k = h.difference(&h1);
        let outside = self.n.difference(&h1);
        if !h1_rest.is_empty() {
            b.substitute(self.decompose(&h1_rest)?, true)?;
            b.rule(Rule::Three, &outside, &h1_rest, &xs, &none, true)?;
        }
        if !k.is_empty() {
            b.rule(Rule::Two, &y, &xs, &k, &h1_rest, false)?;
        }
        if !h1_rest.is_empty() {
            b.rewrite(
                StepKind::ChainRule,
                Expr::Product(vec![
                    sentence(xs.clone(), outside.clone(), h1_rest.clone()),
                    sentence(h1_rest.clone(), outside.clone(), none),
                ]),
                self.q(&h1),
            )?;
        }
        let expected = Expr::Product(self.blocks(h)?.iter().map(|c| self.q(c)).collect()).canonicalize();
        if b.current != expected {
            return Err(internal("decomposition did not end in the component product"));
        }
        Ok(b.finish())
    }

    /// `Q[W] = Σ_{C\W} Q[C]`, adding one node of `C \ W` at a time.
    fn ancestral(&self, w: &VarSet, c: &VarSet) -> Result<Fragment> {
        let mut b = Builder::new(self, self.q(w));
        let none = VarSet::new();
        let mut r = w.clone();
        let mut bound = VarSet::new();
        for xi in self.order(c)?.into_iter().filter(|v| !w.contains(*v)) {
            let xs = VarSet::singleton(xi);
            let z = self.n.difference(&r).difference(&xs);
            b.rule(Rule::Three, &z, &r, &xs, &none, true)?;
            let grown = bound.union(&xs);
            let rhs = Expr::sum(
                grown.clone(),
                Expr::Product(vec![sentence(xs.clone(), z.clone(), r.clone()), sentence(r.clone(), z.clone(), none.clone())]),
            );
            let lhs = b.current.clone();
            b.rewrite(StepKind::NormalizeToOne, lhs, rhs)?;
            b.rewrite(
                StepKind::ChainRule,
                Expr::Product(vec![sentence(xs.clone(), z.clone(), r.clone()), sentence(r.clone(), z.clone(), none.clone())]),
                sentence(r.union(&xs), z, none.clone()),
            )?;
            r = r.union(&xs);
            bound = grown;
        }
        Ok(b.finish())
    }

    /// `Q[H_i] = Π_{j ∈ H_i} Q[H^(j)] / Q[H^(j-1)]` with `Q[H^(j)] = Σ_{H\H^(j)} Q[H]`.
    fn component(&self, hi: &VarSet, h: &VarSet) -> Result<Fragment> {
        let mut b = Builder::new(self, self.q(hi));
        let order = self.order(h)?;
        let a: Vec<NodeId> = order.iter().copied().filter(|v| hi.contains(*v)).collect();
        let y = self.n.difference(h);
        let zi = self.n.difference(hi);
        let none = VarSet::new();
        let prefix = |k: usize| -> VarSet { a[..k].iter().copied().collect() };
        for l in (1..a.len()).rev() {
            let (before, head) = (prefix(l), VarSet::singleton(a[l]));
            b.rewrite(
                StepKind::ChainRule,
                sentence(prefix(l + 1), zi.clone(), none.clone()),
                Expr::Product(vec![sentence(head, zi.clone(), before.clone()), sentence(before, zi.clone(), none.clone())]),
            )?;
        }
        for (l, &v) in a.iter().enumerate() {
            let j = order.iter().position(|&o| o == v).ok_or_else(|| internal("order mismatch"))?;
            let earlier: VarSet = order[..j].iter().copied().collect();
            let upto = earlier.union(&VarSet::singleton(v));
            let e = earlier.difference(hi);
            let later = h.difference(&upto).difference(hi);
            let mine = prefix(l);
            let vs = VarSet::singleton(v);
            if !later.is_empty() {
                b.rule(Rule::Three, &y.union(&e), &vs, &later, &mine, true)?;
            }
            if !e.is_empty() {
                b.rule(Rule::Two, &y, &vs, &e, &mine, true)?;
            }
            if !earlier.is_empty() {
                b.rewrite(
                    StepKind::ChainRule,
                    sentence(vs, y.clone(), earlier.clone()),
                    Expr::quotient(sentence(upto.clone(), y.clone(), none.clone()), sentence(earlier.clone(), y.clone(), none.clone())),
                )?;
            }
            if !y.is_empty() {
                for part in [&upto, &earlier] {
                    if !part.is_empty() && part != h {
                        b.rewrite(
                            StepKind::Marginalize,
                            sentence(part.clone(), y.clone(), none.clone()),
                            Expr::sum(h.difference(part), self.q(h)),
                        )?;
                    }
                }
            }
        }
        Ok(b.finish())
    }

    /// Mirrors `identify`: `Q[C]` in terms of `Q[T]`, or the failing pair.
    fn identify(&self, c: &VarSet, t: &VarSet) -> Result<std::result::Result<Fragment, Failure>> {
        let gt = self.g.latent_subgraph(t)?;
        let a = gt.ancestors(c)?.intersection(t);
        if a == *c {
            return Ok(Ok(self.ancestral(c, t)?));
        }
        if a == *t {
            return Ok(Err((c.clone(), t.clone())));
        }
        let c0 = c.first().ok_or_else(|| internal("empty target"))?;
        let t1 = self.block_of(&a, c0)?;
        let inner = match self.identify(c, &t1)? {
            Ok(f) => f,
            fail => return Ok(fail),
        };
        let mut b = Builder::resume(self, inner);
        if t1 != a {
            b.substitute(self.component(&t1, &a)?, false)?;
        }
        b.substitute(self.ancestral(&a, t)?, false)?;
        Ok(Ok(b.finish()))
    }
}

/// Derives `P(s | do(t))` into an intervention-free expression, or reports
/// the pair on which identification fails.
pub fn derive_effect(t: &VarSet, s: &VarSet, g: &CausalGraph) -> Result<DeriveResult> {
    check_effect_query(t, s, g)?;
    let gb = g.remove_barren_latents();
    let gen = Gen { n: gb.observables(), g: gb, input: g };
    let steps = match derive_steps(&gen, t, s, &VarSet::new())? {
        Ok(steps) => {
            // Variables the estimand reads but the query does not fix are
            // averaged out under their observed marginal.
            let last = steps.last().map(|st| st.after.free_vars()).unwrap_or_default();
            let extra = last.difference(&s.union(t));
            if extra.is_empty() {
                steps
            } else {
                derive_steps(&gen, t, s, &extra)?.map_err(|_| internal("second pass failed"))?
            }
        }
        Err((c, t)) => return Ok(DeriveResult::NotIdentifiable { c, t }),
    };
    Ok(DeriveResult::Derived(Box::new(Derivation { graph: g.clone(), t: t.clone(), s: s.clone(), steps })))
}

fn derive_steps(gen: &Gen, t: &VarSet, s: &VarSet, avg: &VarSet) -> Result<std::result::Result<Vec<DerivationStep>, Failure>> {
    let n = gen.n.clone();
    let d = effect_support(t, s, &gen.g)?;
    let none = VarSet::new();

    let mut b = Builder::new(gen, sentence(s.clone(), t.clone(), none.clone()));
    if d != *s {
        b.rewrite(
            StepKind::Marginalize,
            sentence(s.clone(), t.clone(), none.clone()),
            Expr::sum(d.difference(s), sentence(d.clone(), t.clone(), none.clone())),
        )?;
    }
    if !avg.is_empty() {
        let lhs = b.current.clone();
        let rhs = Expr::sum(avg.clone(), Expr::Product(vec![sentence(avg.clone(), none.clone(), none.clone()), lhs.clone()]));
        b.rewrite(StepKind::NormalizeToOne, lhs, rhs)?;
    }
    let z = n.difference(t).difference(&d);
    if !z.is_empty() {
        b.rule(Rule::Three, t, &d, &z, &none, false)?;
    }
    b.substitute(gen.decompose(&d)?, false)?;

    let n_blocks = gen.blocks(&n)?;
    for sj in gen.blocks(&d)? {
        let first = sj.first().ok_or_else(|| internal("empty block"))?;
        let nj = n_blocks.iter().find(|blk| blk.contains(first)).ok_or_else(|| internal("no block of N"))?;
        if sj == *nj {
            continue;
        }
        match gen.identify(&sj, nj)? {
            Ok(f) => b.substitute(f, false)?,
            Err(fail) => return Ok(Err(fail)),
        }
    }
    if n_blocks.len() > 1 {
        for nj in &n_blocks {
            b.substitute(gen.component(nj, &n)?, false)?;
        }
    }
    if !is_observational(&b.current) {
        return Err(internal("derivation did not reach an observational expression"));
    }
    Ok(Ok(b.finish().steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn s(g: &CausalGraph, n: &[&str]) -> VarSet {
        g.set(n).unwrap()
    }

    #[test]
    fn bow_is_not_identifiable() {
        let g = bow();
        let r = derive_effect(&s(&g, &["X"]), &s(&g, &["Y"]), &g).unwrap();
        assert_eq!(r, DeriveResult::NotIdentifiable { c: s(&g, &["Y"]), t: s(&g, &["X", "Y"]) });
    }

    #[test]
    fn front_door_uses_both_rules() {
        let g = front_door();
        let DeriveResult::Derived(d) = derive_effect(&s(&g, &["X"]), &s(&g, &["Y"]), &g).unwrap() else {
            panic!("front door should be identifiable");
        };
        let kinds = d.kinds();
        assert!(kinds.contains(&StepKind::Rule2));
        assert!(kinds.contains(&StepKind::Rule3));
        assert!(!d.contains_rule1());
        assert!(is_observational(&d.result()));
    }

    #[test]
    fn back_door_derivation_ends_observational() {
        let g = back_door();
        let DeriveResult::Derived(d) = derive_effect(&s(&g, &["X"]), &s(&g, &["Y"]), &g).unwrap() else {
            panic!("back door should be identifiable");
        };
        assert!(is_observational(&d.result()));
        assert!(d.kinds().contains(&StepKind::Rule2));
    }
}
