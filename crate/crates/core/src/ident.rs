//! Identification of `Q[S] = P_{N\S}(S)` and of causal effects `P_T(S)`.
//!
//! Every estimand bottoms out in marginals of the observational joint `P(n)`.

use crate::ccomp::{c_components, observable_blocks};
use crate::error::{Error, Result};
use crate::expr::{Expr, ProbExpr};
use crate::graph::{CausalGraph, NodeId, VarSet};

/// `Q[scope]` together with its identified form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFactor {
    pub scope: VarSet,
    pub estimand: ProbExpr,
}

impl QFactor {
    /// `Q[N] = P(n)`.
    pub fn observational(g: &CausalGraph) -> QFactor {
        let n = g.observables();
        QFactor { estimand: ProbExpr::marginal(n.clone()), scope: n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentResult {
    Identifiable(ProbExpr),
    /// The innermost `(C, T)` pair on which the recursion failed.
    NotIdentifiable { c: VarSet, t: VarSet },
}

impl IdentResult {
    pub fn is_identifiable(&self) -> bool {
        matches!(self, IdentResult::Identifiable(_))
    }

    pub fn estimand(&self) -> Option<&ProbExpr> {
        match self {
            IdentResult::Identifiable(e) => Some(e),
            IdentResult::NotIdentifiable { .. } => None,
        }
    }
}

/// `Q[W] = Σ_{C\W} Q[C]` for `W` ancestral in `G_C`.
pub fn lemma1_sum(q: &QFactor, w: &VarSet, g: &CausalGraph) -> Result<QFactor> {
    if !g.is_ancestral(w, &q.scope)? {
        return Err(Error::Precondition(format!(
            "{} is not ancestral in the subgraph over {}",
            g.fmt_set(w),
            g.fmt_set(&q.scope)
        )));
    }
    Ok(QFactor { scope: w.clone(), estimand: ProbExpr::sum_out(&q.scope.difference(w), q.estimand.clone()) })
}

/// Splits `Q[H]` into one factor per c-component of `G_H`, using the default
/// topological order of `G_H`.
pub fn lemma2_decompose(h: &VarSet, q: &QFactor, g: &CausalGraph) -> Result<Vec<QFactor>> {
    let gh = g.latent_subgraph(h)?;
    let order = gh.topo_order(h)?;
    lemma2_decompose_with_order(h, q, g, &order)
}

/// As [`lemma2_decompose`], with an explicit topological order of `h` in `G_H`.
pub fn lemma2_decompose_with_order(h: &VarSet, q: &QFactor, g: &CausalGraph, order: &[NodeId]) -> Result<Vec<QFactor>> {
    if q.scope != *h {
        return Err(Error::Precondition(format!("factor scope {} differs from {}", g.fmt_set(&q.scope), g.fmt_set(h))));
    }
    let gh = g.latent_subgraph(h)?;
    check_topological(&gh, h, order)?;
    let prefix = |j: usize| -> ProbExpr {
        let kept: VarSet = order[..j].iter().copied().collect();
        ProbExpr::sum_out(&h.difference(&kept), q.estimand.clone())
    };
    let blocks = observable_blocks(&c_components(&gh), &gh);
    Ok(blocks
        .into_iter()
        .map(|block| {
            let factors = order
                .iter()
                .enumerate()
                .filter(|(_, v)| block.contains(**v))
                .map(|(j, _)| Expr::quotient(prefix(j + 1), prefix(j)))
                .collect();
            QFactor { scope: block, estimand: Expr::product(factors) }
        })
        .collect())
}

fn check_topological(gh: &CausalGraph, h: &VarSet, order: &[NodeId]) -> Result<()> {
    let as_set: VarSet = order.iter().copied().collect();
    if as_set != *h || order.len() != h.len() {
        return Err(Error::Precondition("order is not a permutation of the scope".into()));
    }
    for (i, &v) in order.iter().enumerate() {
        let later: VarSet = order[i + 1..].iter().copied().collect();
        if !gh.ancestors(&VarSet::singleton(v))?.is_disjoint(&later) {
            return Err(Error::Precondition(format!("order is not topological at {}", gh.name(v))));
        }
    }
    Ok(())
}

fn single_component(g: &CausalGraph, s: &VarSet) -> Result<bool> {
    let gs = g.latent_subgraph(s)?;
    Ok(observable_blocks(&c_components(&gs), &gs).len() == 1)
}

/// Computes `Q[C]` from `Q[T]` for `C ⊆ T`, both single c-components.
pub fn identify(c: &VarSet, t: &VarSet, q_t: &QFactor, g: &CausalGraph) -> Result<IdentResult> {
    if !c.is_subset(t) || c.is_empty() || q_t.scope != *t {
        return Err(Error::Input(format!("identify needs nonempty {} within {}", g.fmt_set(c), g.fmt_set(t))));
    }
    if !single_component(g, t)? || !single_component(g, c)? {
        return Err(Error::Input(format!(
            "identify needs single c-components, got {} and {}",
            g.fmt_set(c),
            g.fmt_set(t)
        )));
    }
    let gt = g.latent_subgraph(t)?;
    let a = gt.ancestors(c)?.intersection(t);
    if a == *c {
        return Ok(IdentResult::Identifiable(ProbExpr::sum_out(&t.difference(c), q_t.estimand.clone())));
    }
    if a == *t {
        return Ok(IdentResult::NotIdentifiable { c: c.clone(), t: t.clone() });
    }
    let q_a = lemma1_sum(q_t, &a, g)?;
    let c0 = c.first().ok_or_else(|| Error::Input("empty target".into()))?;
    let q_t1 = lemma2_decompose(&a, &q_a, g)?
        .into_iter()
        .find(|q| q.scope.contains(c0))
        .ok_or_else(|| Error::Input("no block of G_A contains the target".into()))?;
    identify(c, &q_t1.scope.clone(), &q_t1, g)
}

/// Computes `Q[S]` from the observational joint, or reports the failing pair.
pub fn compute_q(s: &VarSet, g: &CausalGraph) -> Result<IdentResult> {
    g.check_observable(s)?;
    if s.is_empty() {
        return Ok(IdentResult::Identifiable(ProbExpr::One));
    }
    let g = g.remove_barren_latents();
    let n = g.observables();
    let n_blocks = lemma2_decompose(&n, &QFactor::observational(&g), &g)?;
    let gs = g.latent_subgraph(s)?;
    let mut factors = Vec::new();
    for s_j in observable_blocks(&c_components(&gs), &gs) {
        let q_n = n_blocks
            .iter()
            .find(|q| s_j.is_subset(&q.scope))
            .ok_or_else(|| Error::Input("block of S is not inside a block of N".into()))?;
        match identify(&s_j, &q_n.scope, q_n, &g)? {
            IdentResult::Identifiable(e) => factors.push(e),
            fail => return Ok(fail),
        }
    }
    Ok(IdentResult::Identifiable(Expr::product(factors)))
}

/// `D = An(S)` in `G_{N\T}`, restricted to observables.
pub fn effect_support(t: &VarSet, s: &VarSet, g: &CausalGraph) -> Result<VarSet> {
    let n = g.observables();
    let g_rest = g.latent_subgraph(&n.difference(t))?;
    Ok(g_rest.ancestors(s)?.intersection(&n))
}

pub(crate) fn check_effect_query(t: &VarSet, s: &VarSet, g: &CausalGraph) -> Result<()> {
    g.check_observable(s)?;
    g.check_observable(t)?;
    if s.is_empty() {
        return Err(Error::Input("the outcome set is empty".into()));
    }
    if let Some(v) = s.intersection(t).first() {
        return Err(Error::Overlap(g.name(v).to_string()));
    }
    Ok(())
}

/// Identifies `P_t(s)`. The estimand's free variables lie within `S ∪ T`.
pub fn causal_effect(t: &VarSet, s: &VarSet, g: &CausalGraph) -> Result<IdentResult> {
    check_effect_query(t, s, g)?;
    let g = g.remove_barren_latents();
    let d = effect_support(t, s, &g)?;
    let est = match compute_q(&d, &g)? {
        IdentResult::Identifiable(e) => ProbExpr::sum_out(&d.difference(s), e),
        fail => return Ok(fail),
    };
    Ok(IdentResult::Identifiable(close_over(est, &s.union(t))))
}

/// Rebinds free variables outside `keep` as `Σ_E P(e) · est`. The estimand
/// does not depend on them, so the value is unchanged.
pub(crate) fn close_over(est: ProbExpr, keep: &VarSet) -> ProbExpr {
    let extra = est.free_vars().difference(keep);
    if extra.is_empty() {
        est
    } else {
        Expr::sum(extra.clone(), Expr::Product(vec![ProbExpr::marginal(extra), est]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn s(g: &CausalGraph, n: &[&str]) -> VarSet {
        g.set(n).unwrap()
    }

    fn m(g: &CausalGraph, n: &[&str]) -> ProbExpr {
        ProbExpr::marginal(s(g, n))
    }

    fn q(num: ProbExpr, den: ProbExpr) -> ProbExpr {
        Expr::quotient(num, den)
    }

    #[test]
    fn decompose_front_door() {
        let g = front_door();
        let n = g.observables();
        let parts = lemma2_decompose(&n, &QFactor::observational(&g), &g).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].scope, s(&g, &["X", "Y"]));
        assert_eq!(
            parts[0].estimand,
            Expr::Product(vec![m(&g, &["X"]), q(m(&g, &["X", "Z", "Y"]), m(&g, &["X", "Z"]))])
        );
        assert_eq!(parts[1].scope, s(&g, &["Z"]));
        assert_eq!(parts[1].estimand, q(m(&g, &["X", "Z"]), m(&g, &["X"])));
    }

    #[test]
    fn decompose_back_door_singletons() {
        let g = back_door();
        let parts = lemma2_decompose(&g.observables(), &QFactor::observational(&g), &g).unwrap();
        let by_scope = |n: &str| parts.iter().find(|p| p.scope == s(&g, &[n])).unwrap().estimand.clone();
        assert_eq!(by_scope("Z"), m(&g, &["Z"]));
        assert_eq!(by_scope("X"), q(m(&g, &["X", "Z"]), m(&g, &["Z"])));
        assert_eq!(by_scope("Y"), q(m(&g, &["X", "Z", "Y"]), m(&g, &["X", "Z"])));
    }

    #[test]
    fn decompose_single_node() {
        let g = chain();
        let x = s(&g, &["X"]);
        let qx = QFactor { scope: x.clone(), estimand: m(&g, &["X"]) };
        let parts = lemma2_decompose(&x, &qx, &g).unwrap();
        assert_eq!(parts, vec![qx]);
    }

    #[test]
    fn decompose_rejects_bad_orders() {
        let g = back_door();
        let n = g.observables();
        let bad = vec![g.node("Y").unwrap(), g.node("X").unwrap(), g.node("Z").unwrap()];
        assert!(lemma2_decompose_with_order(&n, &QFactor::observational(&g), &g, &bad).is_err());
    }

    #[test]
    fn ancestral_sum_examples() {
        let g = back_door();
        let zy = s(&g, &["Z", "Y"]);
        let qzy = QFactor { scope: zy.clone(), estimand: m(&g, &["Z", "Y"]) };
        assert_eq!(lemma1_sum(&qzy, &zy, &g).unwrap(), qzy);
        let qz = lemma1_sum(&qzy, &s(&g, &["Z"]), &g).unwrap();
        assert_eq!(qz.estimand, m(&g, &["Z"]));
        assert!(matches!(lemma1_sum(&qzy, &s(&g, &["Y"]), &g), Err(Error::Precondition(_))));
    }

    #[test]
    fn identify_examples() {
        let g = front_door();
        let xy = s(&g, &["X", "Y"]);
        let parts = lemma2_decompose(&g.observables(), &QFactor::observational(&g), &g).unwrap();
        let r = identify(&s(&g, &["Y"]), &xy, &parts[0], &g).unwrap();
        let expected = Expr::sum(s(&g, &["X"]), parts[0].estimand.clone());
        assert_eq!(r, IdentResult::Identifiable(expected));
        assert_eq!(identify(&xy, &xy, &parts[0], &g).unwrap(), IdentResult::Identifiable(parts[0].estimand.clone()));

        let b = bow();
        let bxy = b.observables();
        let r = identify(&s(&b, &["Y"]), &bxy, &QFactor::observational(&b), &b).unwrap();
        assert_eq!(r, IdentResult::NotIdentifiable { c: s(&b, &["Y"]), t: bxy });
    }

    #[test]
    fn identify_checks_single_component() {
        let g = front_door();
        let n = g.observables();
        assert!(identify(&s(&g, &["Y"]), &n, &QFactor::observational(&g), &g).is_err());
    }

    #[test]
    fn compute_q_examples() {
        let g = front_door();
        let r = compute_q(&s(&g, &["Z", "Y"]), &g).unwrap();
        let qz = q(m(&g, &["X", "Z"]), m(&g, &["X"]));
        let qy = Expr::sum(
            s(&g, &["X"]),
            Expr::Product(vec![m(&g, &["X"]), q(m(&g, &["X", "Z", "Y"]), m(&g, &["X", "Z"]))]),
        );
        assert_eq!(r, IdentResult::Identifiable(Expr::Product(vec![qz, qy])));
        assert!(!compute_q(&s(&bow(), &["Y"]), &bow()).unwrap().is_identifiable());
        let b = back_door();
        let r = compute_q(&b.observables(), &b).unwrap();
        assert!(r.is_identifiable());
    }

    #[test]
    fn causal_effect_examples() {
        let g = front_door();
        let r = causal_effect(&s(&g, &["X"]), &s(&g, &["Y"]), &g).unwrap();
        let e = r.estimand().unwrap();
        assert_eq!(e.free_vars(), s(&g, &["X", "Y"]));
        assert!(e.pretty(&g).starts_with("Σ_{z}"));

        let b = bow();
        assert_eq!(
            causal_effect(&s(&b, &["X"]), &s(&b, &["Y"]), &b).unwrap(),
            IdentResult::NotIdentifiable { c: s(&b, &["Y"]), t: s(&b, &["X", "Y"]) }
        );

        let bd = back_door();
        let r = causal_effect(&s(&bd, &["X"]), &s(&bd, &["Y"]), &bd).unwrap();
        assert_eq!(r.estimand().unwrap().free_vars(), s(&bd, &["X", "Y"]));
    }

    #[test]
    fn causal_effect_rejects_bad_queries() {
        let g = front_door();
        assert!(matches!(causal_effect(&s(&g, &["X"]), &s(&g, &["X"]), &g), Err(Error::Overlap(_))));
        assert!(matches!(causal_effect(&s(&g, &["X"]), &VarSet::new(), &g), Err(Error::Input(_))));
        assert!(matches!(causal_effect(&s(&g, &["X"]), &s(&g, &["U"]), &g), Err(Error::NotObservable(_))));
    }
}
