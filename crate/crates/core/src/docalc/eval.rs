//! Numerical semantics of do-expressions under one discrete model:
//! `P(y | do(x), w) = P_x(y, w) / P_x(w)`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{DoExpr, DoSentence};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::graph::VarSet;
use crate::oracle::{DiscreteModel, Interventions};
use crate::table::{Assignment, Domains};

/// A leaf's value for every assignment of the variables it reads.
struct LeafTable {
    vars: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<f64>,
}

impl LeafTable {
    fn get(&self, vals: &[usize]) -> f64 {
        let idx: usize = self.vars.iter().zip(&self.strides).map(|(&v, &s)| vals[v] * s).sum();
        self.data[idx]
    }
}

enum Compiled {
    One,
    Leaf(Rc<LeafTable>),
    Sum(Vec<(usize, usize)>, Box<Compiled>),
    Product(Vec<Compiled>),
    Quotient(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn eval(&self, vals: &mut [usize]) -> f64 {
        match self {
            Compiled::One => 1.0,
            Compiled::Leaf(t) => t.get(vals),
            Compiled::Product(fs) => fs.iter().map(|f| f.eval(vals)).product(),
            Compiled::Quotient(n, d) => n.eval(vals) / d.eval(vals),
            Compiled::Sum(bound, body) => {
                let saved: Vec<usize> = bound.iter().map(|&(v, _)| vals[v]).collect();
                let total = sum_rec(bound, 0, vals, body);
                for (&(v, _), s) in bound.iter().zip(saved) {
                    vals[v] = s;
                }
                total
            }
        }
    }
}

fn sum_rec(bound: &[(usize, usize)], i: usize, vals: &mut [usize], body: &Compiled) -> f64 {
    if i == bound.len() {
        return body.eval(vals);
    }
    let (v, arity) = bound[i];
    let mut acc = 0.0;
    for x in 0..arity {
        vals[v] = x;
        acc += sum_rec(bound, i + 1, vals, body);
    }
    acc
}

/// Evaluates do-expressions against the post-intervention distributions of
/// one model, caching one table per distinct sentence.
pub struct SentenceEvaluator<'m> {
    iv: Interventions<'m>,
    tables: RefCell<HashMap<DoSentence, Rc<LeafTable>>>,
}

impl<'m> SentenceEvaluator<'m> {
    pub fn new(model: &'m DiscreteModel) -> Self {
        SentenceEvaluator { iv: Interventions::new(model), tables: RefCell::default() }
    }

    fn domains(&self) -> &Domains {
        &self.iv.model().domains
    }

    fn leaf_table(&self, s: &DoSentence) -> Result<Rc<LeafTable>> {
        if let Some(t) = self.tables.borrow().get(s) {
            return Ok(t.clone());
        }
        let g = &self.iv.model().graph;
        if !s.is_well_formed() {
            return Err(Error::Input("malformed sentence".into()));
        }
        g.check_observable(&s.outcome.union(&s.interventions).union(&s.observations))?;
        let vars: VarSet = s.outcome.union(&s.interventions).union(&s.observations);
        let order = vars.to_vec();
        let mut strides = vec![1usize; order.len()];
        for i in (0..order.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.domains().arity(order[i + 1]);
        }
        let data = self
            .domains()
            .enumerate(&vars, g.universe_len())?
            .iter()
            .map(|a| self.iv.conditional(&s.outcome, &s.interventions, &s.observations, a))
            .collect::<Result<Vec<f64>>>()?;
        let t = Rc::new(LeafTable { vars: order.iter().map(|v| v.index()).collect(), strides, data });
        self.tables.borrow_mut().insert(s.clone(), t.clone());
        Ok(t)
    }

    fn compile(&self, e: &DoExpr) -> Result<Compiled> {
        Ok(match e {
            Expr::One => Compiled::One,
            Expr::Leaf(s) => Compiled::Leaf(self.leaf_table(s)?),
            Expr::Sum { bound, body } => Compiled::Sum(
                bound.iter().map(|v| (v.index(), self.domains().arity(v))).collect(),
                Box::new(self.compile(body)?),
            ),
            Expr::Product(fs) => Compiled::Product(fs.iter().map(|f| self.compile(f)).collect::<Result<_>>()?),
            Expr::Quotient(n, d) => Compiled::Quotient(Box::new(self.compile(n)?), Box::new(self.compile(d)?)),
        })
    }

    /// Value of `e` for every assignment of `vars` (last variable fastest).
    /// `vars` must cover the free variables of `e`.
    pub fn values(&self, e: &DoExpr, vars: &VarSet) -> Result<Vec<f64>> {
        if !e.free_vars().is_subset(vars) {
            return Err(Error::Input("assignment does not cover the free variables".into()));
        }
        let c = self.compile(e)?;
        let universe = self.iv.model().graph.universe_len();
        let mut vals = vec![0usize; universe];
        let mut out = Vec::new();
        for a in self.domains().enumerate(vars, universe)? {
            for v in vars.iter() {
                vals[v.index()] = a.get(v).unwrap_or(0);
            }
            let x = c.eval(&mut vals);
            if !x.is_finite() {
                return Err(Error::Positivity { assignment: a.pairs() });
            }
            out.push(x);
        }
        Ok(out)
    }

    pub fn evaluate(&self, e: &DoExpr, a: &Assignment) -> Result<f64> {
        let free = e.free_vars();
        if !a.covers(&free) {
            return Err(Error::Input("assignment does not cover the free variables".into()));
        }
        let c = self.compile(e)?;
        let mut vals = vec![0usize; self.iv.model().graph.universe_len()];
        for v in free.iter() {
            vals[v.index()] = a.get(v).unwrap_or(0);
        }
        Ok(c.eval(&mut vals))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::docalc::sentence;
    use crate::graph::fixtures::*;
    use crate::oracle::random_model;

    #[test]
    fn interventional_sentence_matches_truncated_factorization() {
        let g = front_door();
        let m = random_model(&g, &Domains::uniform(4, 2), 4).unwrap();
        let ev = SentenceEvaluator::new(&m);
        let (x, y) = (g.node("X").unwrap(), g.node("Y").unwrap());
        let e = sentence(VarSet::singleton(y), VarSet::singleton(x), VarSet::new());
        for xv in 0..2 {
            let t = Assignment::from_pairs(4, &[(x, xv)]);
            let truth = m.interventional_truth(&t, &VarSet::singleton(y)).unwrap();
            for yv in 0..2 {
                let a = Assignment::from_pairs(4, &[(x, xv), (y, yv)]);
                assert!((ev.evaluate(&e, &a).unwrap() - truth.get(&a).unwrap()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sums_of_conditionals_normalize() {
        let g = front_door();
        let m = random_model(&g, &Domains::uniform(4, 2), 5).unwrap();
        let ev = SentenceEvaluator::new(&m);
        let ys = g.set(&["Y"]).unwrap();
        let e = Expr::sum(ys.clone(), sentence(ys, g.set(&["X"]).unwrap(), g.set(&["Z"]).unwrap()));
        let vals = ev.values(&e, &g.set(&["X", "Z"]).unwrap()).unwrap();
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }
}
