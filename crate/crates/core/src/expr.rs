//! Symbolic probability expressions.
//!
//! [`Expr`] is a tree of sums, products and quotients over leaves. With
//! [`Marginal`] leaves it is a [`ProbExpr`]: an estimand over marginals of
//! the observational joint. The docalc module reuses the same tree with
//! interventional sentence leaves.
//!
//! Sums bind their variables lexically: a `Sum` over `x` inside a context
//! where `x` is already assigned shadows that value for its body only.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CausalGraph, NodeId, VarSet};
use crate::table::{Assignment, Domains, JointTable};

/// A leaf of an expression tree.
pub trait Leaf: Clone + Debug + PartialEq + Eq + PartialOrd + Ord + Hash {
    /// Variables whose values the leaf reads.
    fn vars(&self) -> VarSet;
    /// Textbook rendering, given a renderer for variable instances.
    fn render(&self, name: &dyn Fn(NodeId) -> String) -> String;
    fn write_json(&self, g: &CausalGraph) -> ExprJson;
    fn read_json(j: &ExprJson, g: &CausalGraph) -> Result<Self>;
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr<L> {
    One,
    Leaf(L),
    Sum { bound: VarSet, body: Box<Expr<L>> },
    Product(Vec<Expr<L>>),
    Quotient(Box<Expr<L>>, Box<Expr<L>>),
}

/// Observational marginal `P(vars)`, read at the current assignment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marginal(pub VarSet);

pub type ProbExpr = Expr<Marginal>;

impl ProbExpr {
    pub fn marginal(vars: VarSet) -> ProbExpr {
        if vars.is_empty() {
            Expr::One
        } else {
            Expr::Leaf(Marginal(vars))
        }
    }

    /// `Σ_bound body`, folding sums of a plain marginal into a smaller marginal.
    pub fn sum_out(bound: &VarSet, body: ProbExpr) -> ProbExpr {
        match body {
            Expr::Leaf(Marginal(vars)) if bound.is_subset(&vars) => ProbExpr::marginal(vars.difference(bound)),
            body => Expr::sum(bound.clone(), body),
        }
    }

    /// True when the only leaves are observational marginals (always the case
    /// for this type; kept for symmetry with interventional expressions).
    pub fn is_observational(&self) -> bool {
        true
    }
}

impl<L: Leaf> Expr<L> {
    pub fn sum(bound: VarSet, body: Expr<L>) -> Expr<L> {
        if bound.is_empty() {
            body
        } else {
            Expr::Sum { bound, body: Box::new(body) }
        }
    }

    /// Product that drops `One` factors and unwraps a single factor.
    pub fn product(factors: Vec<Expr<L>>) -> Expr<L> {
        let mut fs: Vec<Expr<L>> = factors.into_iter().filter(|f| *f != Expr::One).collect();
        match fs.len() {
            0 => Expr::One,
            1 => fs.pop().unwrap_or(Expr::One),
            _ => Expr::Product(fs),
        }
    }

    pub fn quotient(num: Expr<L>, den: Expr<L>) -> Expr<L> {
        if den == Expr::One {
            num
        } else {
            Expr::Quotient(Box::new(num), Box::new(den))
        }
    }

    pub fn free_vars(&self) -> VarSet {
        match self {
            Expr::One => VarSet::new(),
            Expr::Leaf(l) => l.vars(),
            Expr::Sum { bound, body } => body.free_vars().difference(bound),
            Expr::Product(fs) => fs.iter().fold(VarSet::new(), |acc, f| acc.union(&f.free_vars())),
            Expr::Quotient(n, d) => n.free_vars().union(&d.free_vars()),
        }
    }

    /// Every variable mentioned anywhere, bound or free.
    pub fn all_vars(&self) -> VarSet {
        match self {
            Expr::One => VarSet::new(),
            Expr::Leaf(l) => l.vars(),
            Expr::Sum { bound, body } => body.all_vars().union(bound),
            Expr::Product(fs) => fs.iter().fold(VarSet::new(), |acc, f| acc.union(&f.all_vars())),
            Expr::Quotient(n, d) => n.all_vars().union(&d.all_vars()),
        }
    }

    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            Expr::One => {}
            Expr::Leaf(l) => out.push(l),
            Expr::Sum { body, .. } => body.collect_leaves(out),
            Expr::Product(fs) => fs.iter().for_each(|f| f.collect_leaves(out)),
            Expr::Quotient(n, d) => {
                n.collect_leaves(out);
                d.collect_leaves(out);
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::One | Expr::Leaf(_) => 1,
            Expr::Sum { body, .. } => 1 + body.size(),
            Expr::Product(fs) => 1 + fs.iter().map(|f| f.size()).sum::<usize>(),
            Expr::Quotient(n, d) => 1 + n.size() + d.size(),
        }
    }

    /// Evaluates with `leaf` supplying leaf values. `a` must cover the free
    /// variables; it is restored before returning.
    pub fn eval_with<F>(&self, a: &mut Assignment, domains: &Domains, leaf: &mut F) -> Result<f64>
    where
        F: FnMut(&L, &Assignment) -> Result<f64>,
    {
        match self {
            Expr::One => Ok(1.0),
            Expr::Leaf(l) => leaf(l, a),
            Expr::Product(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval_with(a, domains, leaf)?;
                }
                Ok(acc)
            }
            Expr::Quotient(n, d) => {
                let den = d.eval_with(a, domains, leaf)?;
                if den == 0.0 {
                    return Err(Error::Positivity { assignment: a.restricted(&d.free_vars()) });
                }
                Ok(n.eval_with(a, domains, leaf)? / den)
            }
            Expr::Sum { bound, body } => {
                let vars = bound.to_vec();
                let saved: Vec<Option<usize>> = vars.iter().map(|&v| a.get(v)).collect();
                let result = sum_over(&vars, 0, a, domains, &mut |a| body.eval_with(a, domains, leaf));
                for (&v, s) in vars.iter().zip(saved) {
                    a.replace(v, s);
                }
                result
            }
        }
    }

    /// Deterministic normal form: nested products flattened, `One` factors
    /// dropped, factors sorted structurally, empty sums removed. Sums are
    /// never merged or reordered. Evaluation is preserved.
    pub fn canonicalize(&self) -> Expr<L> {
        match self {
            Expr::One | Expr::Leaf(_) => self.clone(),
            Expr::Sum { bound, body } => {
                let body = body.canonicalize();
                Expr::sum(bound.clone(), body)
            }
            Expr::Product(fs) => {
                let mut flat = Vec::new();
                for f in fs {
                    match f.canonicalize() {
                        Expr::One => {}
                        Expr::Product(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort();
                Expr::product(flat)
            }
            Expr::Quotient(n, d) => Expr::quotient(n.canonicalize(), d.canonicalize()),
        }
    }

    /// Cancels factors that appear verbatim in both numerator and denominator
    /// of a quotient (after canonicalization).
    pub fn cancel_common_factors(&self) -> Expr<L> {
        match self.canonicalize() {
            Expr::Quotient(n, d) => {
                let n = n.cancel_common_factors();
                let d = d.cancel_common_factors();
                let mut nf = factors_of(n);
                let mut df = factors_of(d);
                let mut i = 0;
                while i < nf.len() {
                    if let Some(j) = df.iter().position(|f| *f == nf[i]) {
                        df.remove(j);
                        nf.remove(i);
                    } else {
                        i += 1;
                    }
                }
                Expr::quotient(Expr::product(nf), Expr::product(df)).canonicalize()
            }
            Expr::Sum { bound, body } => Expr::sum(bound, body.cancel_common_factors()),
            Expr::Product(fs) => Expr::product(fs.iter().map(|f| f.cancel_common_factors()).collect()).canonicalize(),
            e => e,
        }
    }

    /// Subexpression at `path` (child indices: sum body = 0, quotient num/den = 0/1).
    pub fn at(&self, path: &[usize]) -> Option<&Expr<L>> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(self);
        };
        match self {
            Expr::Sum { body, .. } if i == 0 => body.at(rest),
            Expr::Product(fs) => fs.get(i)?.at(rest),
            Expr::Quotient(n, _) if i == 0 => n.at(rest),
            Expr::Quotient(_, d) if i == 1 => d.at(rest),
            _ => None,
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Expr<L>> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(self);
        };
        match self {
            Expr::Sum { body, .. } if i == 0 => body.at_mut(rest),
            Expr::Product(fs) => fs.get_mut(i)?.at_mut(rest),
            Expr::Quotient(n, _) if i == 0 => n.at_mut(rest),
            Expr::Quotient(_, d) if i == 1 => d.at_mut(rest),
            _ => None,
        }
    }

    /// Textbook rendering. Summation indices that shadow a variable already in
    /// scope are primed.
    pub fn pretty(&self, g: &CausalGraph) -> String {
        let mut primes: BTreeMap<NodeId, usize> = BTreeMap::new();
        let free = self.free_vars();
        let mut in_scope: BTreeMap<NodeId, usize> = free.iter().map(|v| (v, 1)).collect();
        self.render(g, &mut primes, &mut in_scope)
    }

    fn render(
        &self,
        g: &CausalGraph,
        primes: &mut BTreeMap<NodeId, usize>,
        in_scope: &mut BTreeMap<NodeId, usize>,
    ) -> String {
        match self {
            Expr::One => "1".to_string(),
            Expr::Leaf(l) => {
                let p = primes.clone();
                l.render(&|v| instance_name(g, v, p.get(&v).copied().unwrap_or(0)))
            }
            Expr::Product(fs) => fs
                .iter()
                .map(|f| {
                    let s = f.render(g, primes, in_scope);
                    match f {
                        Expr::Sum { .. } | Expr::Quotient(..) => format!("[{s}]"),
                        _ => s,
                    }
                })
                .collect::<Vec<_>>()
                .join(" · "),
            Expr::Quotient(n, d) => {
                let ns = n.render(g, primes, in_scope);
                let ds = d.render(g, primes, in_scope);
                let wrap = |e: &Expr<L>, s: String| match e {
                    Expr::Leaf(_) | Expr::One => s,
                    _ => format!("({s})"),
                };
                format!("{} / {}", wrap(n, ns), wrap(d, ds))
            }
            Expr::Sum { bound, body } => {
                let saved: Vec<(NodeId, Option<usize>)> = bound.iter().map(|v| (v, primes.get(&v).copied())).collect();
                for v in bound.iter() {
                    let depth = in_scope.get(&v).copied().unwrap_or(0);
                    if depth > 0 {
                        primes.insert(v, primes.get(&v).copied().unwrap_or(0) + 1);
                    }
                    *in_scope.entry(v).or_insert(0) += 1;
                }
                let idx: Vec<String> = bound
                    .iter()
                    .map(|v| instance_name(g, v, primes.get(&v).copied().unwrap_or(0)))
                    .collect();
                let inner = body.render(g, primes, in_scope);
                for (v, p) in saved {
                    match p {
                        Some(p) => primes.insert(v, p),
                        None => primes.remove(&v),
                    };
                    if let Some(d) = in_scope.get_mut(&v) {
                        *d -= 1;
                    }
                }
                format!("Σ_{{{}}} {}", idx.join(","), inner)
            }
        }
    }

    pub fn to_json(&self, g: &CausalGraph) -> ExprJson {
        match self {
            Expr::One => ExprJson::kind("one"),
            Expr::Leaf(l) => l.write_json(g),
            Expr::Sum { bound, body } => ExprJson {
                bound: Some(g.names_of(bound)),
                num: Some(Box::new(body.to_json(g))),
                ..ExprJson::kind("sum")
            },
            Expr::Product(fs) => {
                ExprJson { factors: Some(fs.iter().map(|f| f.to_json(g)).collect()), ..ExprJson::kind("product") }
            }
            Expr::Quotient(n, d) => ExprJson {
                num: Some(Box::new(n.to_json(g))),
                den: Some(Box::new(d.to_json(g))),
                ..ExprJson::kind("quotient")
            },
        }
    }

    pub fn from_json(j: &ExprJson, g: &CausalGraph) -> Result<Expr<L>> {
        let missing = |field: &str| Error::Json(format!("`{}` node is missing `{field}`", j.kind));
        Ok(match j.kind.as_str() {
            "one" => Expr::One,
            "sum" => Expr::Sum {
                bound: g.set(j.bound.as_ref().ok_or_else(|| missing("bound"))?)?,
                body: Box::new(Expr::from_json(j.num.as_ref().ok_or_else(|| missing("num"))?, g)?),
            },
            "product" => Expr::Product(
                j.factors
                    .as_ref()
                    .ok_or_else(|| missing("factors"))?
                    .iter()
                    .map(|f| Expr::from_json(f, g))
                    .collect::<Result<_>>()?,
            ),
            "quotient" => Expr::Quotient(
                Box::new(Expr::from_json(j.num.as_ref().ok_or_else(|| missing("num"))?, g)?),
                Box::new(Expr::from_json(j.den.as_ref().ok_or_else(|| missing("den"))?, g)?),
            ),
            _ => Expr::Leaf(L::read_json(j, g)?),
        })
    }
}

fn factors_of<L: Leaf>(e: Expr<L>) -> Vec<Expr<L>> {
    match e {
        Expr::One => Vec::new(),
        Expr::Product(fs) => fs,
        e => vec![e],
    }
}

fn sum_over<F>(vars: &[NodeId], i: usize, a: &mut Assignment, domains: &Domains, f: &mut F) -> Result<f64>
where
    F: FnMut(&mut Assignment) -> Result<f64>,
{
    if i == vars.len() {
        return f(a);
    }
    let mut acc = 0.0;
    for x in 0..domains.arity(vars[i]) {
        a.set(vars[i], x);
        acc += sum_over(vars, i + 1, a, domains, f)?;
    }
    Ok(acc)
}

fn instance_name(g: &CausalGraph, v: NodeId, primes: usize) -> String {
    format!("{}{}", g.name(v).to_lowercase(), "'".repeat(primes))
}

impl Leaf for Marginal {
    fn vars(&self) -> VarSet {
        self.0.clone()
    }

    fn render(&self, name: &dyn Fn(NodeId) -> String) -> String {
        format!("P({})", self.0.iter().map(name).collect::<Vec<_>>().join(","))
    }

    fn write_json(&self, g: &CausalGraph) -> ExprJson {
        ExprJson { vars: Some(g.names_of(&self.0)), ..ExprJson::kind("marginal") }
    }

    fn read_json(j: &ExprJson, g: &CausalGraph) -> Result<Self> {
        if j.kind != "marginal" {
            return Err(Error::Json(format!("unknown expression kind `{}`", j.kind)));
        }
        Ok(Marginal(g.set(j.vars.as_ref().ok_or_else(|| Error::Json("marginal is missing `vars`".into()))?)?))
    }
}

/// Serialized expression node. Which fields are present depends on `kind`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<ExprJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num: Option<Box<ExprJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<Box<ExprJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Vec<String>>,
    #[serde(default, rename = "do", skip_serializing_if = "Option::is_none")]
    pub intervene: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub given: Option<Vec<String>>,
}

impl ExprJson {
    pub fn kind(kind: &str) -> Self {
        ExprJson { kind: kind.to_string(), ..Default::default() }
    }
}

/// Evaluates estimands against one observational joint, caching marginals.
pub struct Evaluator<'a> {
    joint: &'a JointTable,
    domains: Domains,
    universe: usize,
    cache: RefCell<HashMap<VarSet, JointTable>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(joint: &'a JointTable) -> Self {
        let vars = joint.vars();
        let universe = vars.iter().map(|v| v.index() + 1).max().unwrap_or(0);
        let mut d = vec![0; universe];
        for v in vars.iter() {
            d[v.index()] = joint.arity_of(v).unwrap_or(0);
        }
        Evaluator { joint, domains: Domains(d), universe, cache: RefCell::new(HashMap::new()) }
    }

    pub fn domains(&self) -> &Domains {
        &self.domains
    }

    fn marginal_at(&self, vars: &VarSet, a: &Assignment) -> Result<f64> {
        let mut cache = self.cache.borrow_mut();
        if !cache.contains_key(vars) {
            cache.insert(vars.clone(), self.joint.marginal(vars)?);
        }
        cache[vars].get(a)
    }

    pub fn evaluate(&self, e: &ProbExpr, a: &Assignment) -> Result<f64> {
        let free = e.free_vars();
        if !free.is_subset(&self.joint.vars()) {
            return Err(Error::Input("expression mentions variables outside the joint table".into()));
        }
        if !a.covers(&free) {
            return Err(Error::Input("assignment does not cover the free variables".into()));
        }
        let mut a = a.clone();
        if a.pairs().iter().any(|&(i, _)| i >= self.universe) {
            // values for variables outside the table are irrelevant
            let mut b = Assignment::new(self.universe);
            for (i, x) in a.pairs() {
                if i < self.universe {
                    b.set(NodeId(i), x);
                }
            }
            a = b;
        }
        e.eval_with(&mut a, &self.domains, &mut |m: &Marginal, a| self.marginal_at(&m.0, a))
    }
}

/// One-shot evaluation of an estimand against an observational joint table.
pub fn evaluate(e: &ProbExpr, joint: &JointTable, a: &Assignment) -> Result<f64> {
    Evaluator::new(joint).evaluate(e, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn m(g: &CausalGraph, names: &[&str]) -> ProbExpr {
        ProbExpr::marginal(g.set(names).unwrap())
    }

    fn uniform(vars: &VarSet, arity: usize) -> JointTable {
        let universe = vars.iter().map(|v| v.index() + 1).max().unwrap();
        let mut t = JointTable::zeros(vars, &Domains::uniform(universe, arity)).unwrap();
        let n = t.len() as f64;
        t.data_mut().iter_mut().for_each(|p| *p = 1.0 / n);
        t
    }

    #[test]
    fn free_vars_examples() {
        let g = chain();
        assert_eq!(m(&g, &["X", "Z"]).free_vars(), g.set(&["X", "Z"]).unwrap());
        let e = Expr::sum(g.set(&["Z"]).unwrap(), Expr::Product(vec![m(&g, &["X", "Z"]), m(&g, &["Z", "Y"])]));
        assert_eq!(e.free_vars(), g.set(&["X", "Y"]).unwrap());
        assert!(ProbExpr::One.free_vars().is_empty());
    }

    #[test]
    fn evaluate_examples() {
        let g = chain();
        let xz = g.set(&["X", "Z"]).unwrap();
        let joint = uniform(&xz, 2);
        let a = Assignment::from_pairs(3, &[(g.node("X").unwrap(), 0)]);
        assert_eq!(evaluate(&ProbExpr::One, &joint, &a).unwrap(), 1.0);
        assert!((evaluate(&m(&g, &["X"]), &joint, &a).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn conditional_normalizes() {
        let g = chain();
        let all = g.nodes();
        let mut joint = JointTable::zeros(&all, &Domains::uniform(3, 2)).unwrap();
        let raw = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let total: f64 = raw.iter().sum();
        for (p, r) in joint.data_mut().iter_mut().zip(raw) {
            *p = r / total;
        }
        let cond = Expr::quotient(m(&g, &["X", "Z", "Y"]), m(&g, &["X", "Z"]));
        let (x, z, y) = (g.node("X").unwrap(), g.node("Z").unwrap(), g.node("Y").unwrap());
        for xv in 0..2 {
            for zv in 0..2 {
                let mut s = 0.0;
                for yv in 0..2 {
                    let a = Assignment::from_pairs(3, &[(x, xv), (z, zv), (y, yv)]);
                    s += evaluate(&cond, &joint, &a).unwrap();
                }
                assert!((s - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_denominator_is_an_error() {
        let g = chain();
        let x = g.set(&["X"]).unwrap();
        let mut joint = JointTable::zeros(&x, &Domains::uniform(3, 2)).unwrap();
        joint.data_mut().copy_from_slice(&[1.0, 0.0]);
        let e = Expr::quotient(ProbExpr::One, m(&g, &["X"]));
        let a = Assignment::from_pairs(3, &[(g.node("X").unwrap(), 1)]);
        match evaluate(&e, &joint, &a) {
            Err(Error::Positivity { assignment }) => assert_eq!(assignment, vec![(0, 1)]),
            other => panic!("expected positivity error, got {other:?}"),
        }
    }

    #[test]
    fn sums_shadow_outer_bindings() {
        // Σ_x P(x) evaluated with x already assigned is still 1.
        let g = chain();
        let x = g.set(&["X"]).unwrap();
        let joint = uniform(&x, 2);
        let e = Expr::Product(vec![m(&g, &["X"]), Expr::sum(x.clone(), m(&g, &["X"]))]);
        let a = Assignment::from_pairs(3, &[(g.node("X").unwrap(), 1)]);
        assert!((evaluate(&e, &joint, &a).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sum_out_folds_marginals() {
        let g = front_door();
        let all = g.observables();
        let e = ProbExpr::sum_out(&g.set(&["Z", "Y"]).unwrap(), ProbExpr::marginal(all.clone()));
        assert_eq!(e, m(&g, &["X"]));
        assert_eq!(ProbExpr::sum_out(&all, ProbExpr::marginal(all.clone())), ProbExpr::One);
    }

    #[test]
    fn canonicalize_examples() {
        let g = front_door();
        let (a, b, c) = (m(&g, &["X"]), m(&g, &["Z"]), m(&g, &["Y"]));
        assert_eq!(Expr::Product(vec![Expr::One, a.clone()]).canonicalize(), a);
        let nested = Expr::Product(vec![c.clone(), Expr::Product(vec![b.clone(), a.clone()])]);
        let flat = nested.canonicalize();
        let mut expected = vec![a.clone(), b.clone(), c.clone()];
        expected.sort();
        assert_eq!(flat, Expr::Product(expected));
        assert_eq!(Expr::Quotient(Box::new(a.clone()), Box::new(Expr::One)).canonicalize(), a);
    }

    #[test]
    fn cancellation() {
        let g = front_door();
        let (a, b) = (m(&g, &["X"]), m(&g, &["X", "Z"]));
        let e = Expr::quotient(Expr::Product(vec![a.clone(), b.clone()]), b.clone());
        assert_eq!(e.cancel_common_factors(), a);
    }

    #[test]
    fn pretty_primes_shadowed_indices() {
        let g = front_door();
        let x = g.set(&["X"]).unwrap();
        let inner = Expr::sum(
            x.clone(),
            Expr::Product(vec![m(&g, &["X"]), Expr::quotient(m(&g, &["X", "Z", "Y"]), m(&g, &["X", "Z"]))]),
        );
        let e = Expr::Product(vec![Expr::quotient(m(&g, &["X", "Z"]), m(&g, &["X"])), inner]);
        let s = e.pretty(&g);
        assert_eq!(s, "[P(x,z) / P(x)] · [Σ_{x'} P(x') · [P(x',z,y) / P(x',z)]]");
    }

    #[test]
    fn json_round_trip() {
        let g = front_door();
        let e = Expr::sum(
            g.set(&["Z"]).unwrap(),
            Expr::Product(vec![Expr::quotient(m(&g, &["X", "Z"]), m(&g, &["X"])), Expr::One]),
        );
        let j = serde_json::to_string(&e.to_json(&g)).unwrap();
        assert!(j.contains("\"kind\":\"sum\""));
        let back: ExprJson = serde_json::from_str(&j).unwrap();
        assert_eq!(ProbExpr::from_json(&back, &g).unwrap(), e);
    }
}
