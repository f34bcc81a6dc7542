//! Locating and replacing subexpressions, and the local shape of each step kind.

use super::{DoExpr, DoSentence, StepKind};
use crate::expr::Expr;
use crate::graph::VarSet;
use crate::sep::{Rule, RuleInstance};

/// True when `part`'s factors form a sub-multiset of `whole`'s.
fn sub_multiset(part: &[DoExpr], whole: &[DoExpr]) -> bool {
    let mut used = vec![false; whole.len()];
    part.iter().all(|p| match (0..whole.len()).find(|&i| !used[i] && whole[i] == *p) {
        Some(i) => {
            used[i] = true;
            true
        }
        None => false,
    })
}

fn matches(node: &DoExpr, lhs: &DoExpr) -> bool {
    if node == lhs {
        return true;
    }
    match (node, lhs) {
        (Expr::Product(whole), Expr::Product(part)) => sub_multiset(part, whole),
        _ => false,
    }
}

fn children(e: &DoExpr) -> Vec<&DoExpr> {
    match e {
        Expr::One | Expr::Leaf(_) => Vec::new(),
        Expr::Sum { body, .. } => vec![body],
        Expr::Product(fs) => fs.iter().collect(),
        Expr::Quotient(n, d) => vec![n, d],
    }
}

/// Path of the first match of `lhs` in preorder.
pub fn find_first(e: &DoExpr, lhs: &DoExpr) -> Option<Vec<usize>> {
    if matches(e, lhs) {
        return Some(Vec::new());
    }
    for (i, c) in children(e).into_iter().enumerate() {
        if let Some(mut p) = find_first(c, lhs) {
            p.insert(0, i);
            return Some(p);
        }
    }
    None
}

/// Paths of every subexpression equal to `lhs`, outermost matches only.
pub fn find_all(e: &DoExpr, lhs: &DoExpr) -> Vec<Vec<usize>> {
    if e == lhs {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, c) in children(e).into_iter().enumerate() {
        for mut p in find_all(c, lhs) {
            p.insert(0, i);
            out.push(p);
        }
    }
    out
}

/// Replaces `lhs` by `rhs` at each path and canonicalizes. A product `lhs`
/// may match part of the product at its path.
pub fn apply_at(e: &DoExpr, paths: &[Vec<usize>], lhs: &DoExpr, rhs: &DoExpr) -> Result<DoExpr, String> {
    let mut out = e.clone();
    let mut sorted: Vec<&Vec<usize>> = paths.iter().collect();
    sorted.sort();
    sorted.dedup();
    if sorted.is_empty() {
        return Err("no location given".into());
    }
    for w in sorted.windows(2) {
        if w[1].starts_with(w[0]) {
            return Err("nested locations".into());
        }
    }
    for path in sorted.into_iter().rev() {
        let node = out.at_mut(path).ok_or_else(|| format!("no subexpression at {path:?}"))?;
        if *node == *lhs {
            *node = rhs.clone();
            continue;
        }
        match (&mut *node, lhs) {
            (Expr::Product(whole), Expr::Product(part)) if sub_multiset(part, whole) => {
                for p in part {
                    if let Some(i) = whole.iter().position(|f| f == p) {
                        whole.remove(i);
                    }
                }
                whole.push(rhs.clone());
            }
            _ => return Err(format!("lhs does not occur at {path:?}")),
        }
    }
    Ok(out.canonicalize())
}

fn leaf(e: &DoExpr) -> Option<&DoSentence> {
    match e {
        Expr::Leaf(s) => Some(s),
        _ => None,
    }
}

fn same_context(a: &DoSentence, b: &DoSentence) -> bool {
    a.interventions == b.interventions && a.observations == b.observations
}

/// `P(A ∪ B | G, do X)` against `P(A | B ∪ G, do X) · P(B | G, do X)` or
/// `P(A | B ∪ G, do X)` against `P(A ∪ B | G, do X) / P(B | G, do X)`.
fn chain_rule(single: &DoExpr, composite: &DoExpr) -> bool {
    let Some(one) = leaf(single) else { return false };
    match composite {
        Expr::Product(fs) if fs.len() == 2 => {
            let (Some(f0), Some(f1)) = (leaf(&fs[0]), leaf(&fs[1])) else { return false };
            [(f0, f1), (f1, f0)].iter().any(|(a, b)| {
                a.interventions == b.interventions
                    && a.observations == b.outcome.union(&b.observations)
                    && b.outcome.is_disjoint(&b.observations)
                    && *one
                        == DoSentence::new(
                            a.outcome.union(&b.outcome),
                            b.interventions.clone(),
                            b.observations.clone(),
                        )
            })
        }
        Expr::Quotient(n, d) => {
            let (Some(n), Some(d)) = (leaf(n), leaf(d)) else { return false };
            same_context(n, d)
                && d.outcome.is_subset(&n.outcome)
                && d.outcome != n.outcome
                && *one
                    == DoSentence::new(
                        n.outcome.difference(&d.outcome),
                        n.interventions.clone(),
                        n.observations.union(&d.outcome),
                    )
        }
        _ => false,
    }
}

/// `P(A | G, do X)` against `Σ_B P(A ∪ B | G, do X)`.
fn marginalize(small: &DoExpr, big: &DoExpr) -> bool {
    let (Some(s), Expr::Sum { bound, body }) = (leaf(small), big) else { return false };
    let Some(b) = leaf(body) else { return false };
    same_context(s, b) && bound.is_subset(&b.outcome) && s.outcome == b.outcome.difference(bound)
}

/// `Σ_{B ∪ C} [P(B | G, do X) · F]` against `Σ_C F` when `F` does not read
/// `B`, or `Σ_B P(B | G, do X)` against `1`.
fn normalize(small: &DoExpr, big: &DoExpr) -> bool {
    let Expr::Sum { bound, body } = big else { return false };
    match &**body {
        Expr::Leaf(s) => s.outcome == *bound && *small == Expr::One,
        Expr::Product(fs) => (0..fs.len()).any(|i| {
            let Some(s) = leaf(&fs[i]) else { return false };
            if !s.outcome.is_subset(bound) {
                return false;
            }
            let rest: Vec<DoExpr> = fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, f)| f.clone()).collect();
            let rest = Expr::product(rest);
            rest.free_vars().is_disjoint(&s.outcome)
                && *small == Expr::sum(bound.difference(&s.outcome), rest).canonicalize()
        }),
        _ => false,
    }
}

/// Whether `lhs = rhs` has the shape of the given rule instance, in either
/// orientation.
pub(crate) fn rule_shape(r: &RuleInstance, lhs: &DoExpr, rhs: &DoExpr) -> bool {
    let (Some(a), Some(b)) = (leaf(lhs), leaf(rhs)) else { return false };
    if r.y.is_empty() || r.z.is_empty() {
        return false;
    }
    let with_do = DoSentence::new(r.y.clone(), r.x.union(&r.z), r.w.clone());
    let observed = DoSentence::new(r.y.clone(), r.x.clone(), r.w.union(&r.z));
    let dropped = DoSentence::new(r.y.clone(), r.x.clone(), r.w.clone());
    let (p, q) = match r.rule {
        Rule::One => (observed, dropped),
        Rule::Two => (with_do, observed),
        Rule::Three => (with_do, dropped),
    };
    (*a == p && *b == q) || (*a == q && *b == p)
}

/// Structural check of a manipulation step, either orientation.
pub(crate) fn manipulation_shape(kind: StepKind, lhs: &DoExpr, rhs: &DoExpr) -> bool {
    let either = |f: fn(&DoExpr, &DoExpr) -> bool| f(lhs, rhs) || f(rhs, lhs);
    match kind {
        StepKind::ChainRule => either(chain_rule),
        StepKind::Marginalize => either(marginalize),
        StepKind::NormalizeToOne => either(normalize),
        _ => false,
    }
}

pub(crate) fn well_formed(e: &DoExpr) -> bool {
    e.leaves().iter().all(|l| l.is_well_formed())
}

pub(crate) fn disjoint_sets(sets: &[&VarSet]) -> bool {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(sets[j]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::docalc::sentence;
    use crate::graph::fixtures::*;
    use crate::graph::CausalGraph;

    fn p(g: &CausalGraph, o: &[&str], x: &[&str], w: &[&str]) -> DoExpr {
        sentence(g.set(o).unwrap(), g.set(x).unwrap(), g.set(w).unwrap())
    }

    #[test]
    fn chain_rule_shapes() {
        let g = front_door();
        let joint = p(&g, &["Z", "Y"], &["X"], &[]);
        let split = Expr::Product(vec![p(&g, &["Y"], &["X"], &["Z"]), p(&g, &["Z"], &["X"], &[])]);
        assert!(manipulation_shape(StepKind::ChainRule, &joint, &split));
        assert!(manipulation_shape(StepKind::ChainRule, &split, &joint));
        let cond = p(&g, &["Y"], &["X"], &["Z"]);
        let ratio = Expr::quotient(joint.clone(), p(&g, &["Z"], &["X"], &[]));
        assert!(manipulation_shape(StepKind::ChainRule, &cond, &ratio));
        let wrong = Expr::Product(vec![p(&g, &["Y"], &["X"], &[]), p(&g, &["Z"], &["X"], &[])]);
        assert!(!manipulation_shape(StepKind::ChainRule, &joint, &wrong));
    }

    #[test]
    fn marginalize_and_normalize_shapes() {
        let g = front_door();
        let y = p(&g, &["Y"], &["X"], &[]);
        let zs = g.set(&["Z"]).unwrap();
        let summed = Expr::sum(zs.clone(), p(&g, &["Z", "Y"], &["X"], &[]));
        assert!(manipulation_shape(StepKind::Marginalize, &y, &summed));
        assert!(!manipulation_shape(StepKind::Marginalize, &p(&g, &["Z"], &["X"], &[]), &summed));

        let norm = Expr::sum(zs.clone(), p(&g, &["Z"], &["X"], &[]));
        assert!(manipulation_shape(StepKind::NormalizeToOne, &norm, &Expr::One));
        let f = p(&g, &["Y"], &["X"], &[]);
        let big = Expr::sum(zs.clone(), Expr::Product(vec![p(&g, &["Z"], &["X"], &[]), f.clone()])).canonicalize();
        assert!(manipulation_shape(StepKind::NormalizeToOne, &big, &f));
        let reads_z = p(&g, &["Y"], &["X"], &["Z"]);
        let bad = Expr::sum(zs, Expr::Product(vec![p(&g, &["Z"], &["X"], &[]), reads_z.clone()])).canonicalize();
        assert!(!manipulation_shape(StepKind::NormalizeToOne, &bad, &reads_z));
    }

    #[test]
    fn apply_replaces_part_of_a_product() {
        let g = front_door();
        let a = p(&g, &["Y"], &["X"], &["Z"]);
        let b = p(&g, &["Z"], &["X"], &[]);
        let c = p(&g, &["X"], &[], &[]);
        let e = Expr::Product(vec![a.clone(), b.clone(), c.clone()]).canonicalize();
        let lhs = Expr::Product(vec![a, b]).canonicalize();
        let rhs = p(&g, &["Z", "Y"], &["X"], &[]);
        let path = find_first(&e, &lhs).unwrap();
        let out = apply_at(&e, &[path], &lhs, &rhs).unwrap();
        assert_eq!(out, Expr::Product(vec![c, rhs]).canonicalize());
    }

    #[test]
    fn find_all_occurrences() {
        let g = front_door();
        let q = p(&g, &["Y"], &["X", "Z"], &[]);
        let e = Expr::quotient(q.clone(), Expr::sum(g.set(&["Y"]).unwrap(), q.clone()));
        assert_eq!(find_all(&e, &q), vec![vec![0], vec![1, 0]]);
    }
}
