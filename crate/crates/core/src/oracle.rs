//! Exact numerical ground truth by enumeration.
//!
//! Discrete models on a causal graph, their observational and
//! post-intervention distributions, estimand checking, conditional
//! independence checks and a search for unidentifiability witnesses.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Evaluator, ProbExpr};
use crate::graph::{CausalGraph, NodeId, VarSet};
use crate::sep::SeparationQuery;
use crate::table::{Assignment, Domains, JointTable};

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const CHECK_TOLERANCE: f64 = 1e-9;

/// `P(v | pa(v))` for one node. Rows are parent configurations in mixed
/// radix over `parents` (last fastest); each row holds `arity` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Cpt {
    pub parents: Vec<NodeId>,
    pub arity: usize,
    pub probs: Vec<f64>,
}

impl Cpt {
    fn row(&self, vals: &[usize], domains: &Domains) -> usize {
        self.parents.iter().fold(0, |acc, &p| acc * domains.arity(p) + vals[p.index()])
    }

    pub fn rows(&self) -> usize {
        self.probs.len() / self.arity.max(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteModel {
    pub graph: CausalGraph,
    pub domains: Domains,
    /// Indexed by node index; absent nodes carry an empty table.
    pub cpts: Vec<Cpt>,
}

/// Positive row: `ε + (1 - kε)·w/Σw` for uniform draws `w`.
fn positive_row<R: Rng>(rng: &mut R, k: usize, eps: f64) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(1e-3..1.0)).collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| eps + (1.0 - k as f64 * eps) * x / total).collect()
}

pub fn random_model(g: &CausalGraph, domains: &Domains, seed: u64) -> Result<DiscreteModel> {
    random_model_with(g, domains, DEFAULT_EPSILON, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_model_with<R: Rng>(g: &CausalGraph, domains: &Domains, eps: f64, rng: &mut R) -> Result<DiscreteModel> {
    if domains.0.len() < g.universe_len() {
        return Err(Error::Input("domain list is shorter than the node universe".into()));
    }
    domains.states(&g.nodes())?;
    let mut cpts = Vec::with_capacity(g.universe_len());
    for i in 0..g.universe_len() {
        let v = NodeId(i);
        if !g.contains(v) {
            cpts.push(Cpt { parents: Vec::new(), arity: 0, probs: Vec::new() });
            continue;
        }
        let k = domains.arity(v);
        if k < 2 || k as f64 * eps >= 1.0 {
            return Err(Error::Input(format!("arity of {} must be at least 2 and below 1/ε", g.name(v))));
        }
        let parents = g.parents(v).to_vec();
        let rows: usize = parents.iter().map(|&p| domains.arity(p)).product();
        let probs = (0..rows).flat_map(|_| positive_row(rng, k, eps)).collect();
        cpts.push(Cpt { parents, arity: k, probs });
    }
    Ok(DiscreteModel { graph: g.clone(), domains: domains.clone(), cpts })
}

/// Seed of the `i`th trial derived from a base seed.
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl DiscreteModel {
    pub fn prob(&self, v: NodeId, vals: &[usize]) -> f64 {
        let cpt = &self.cpts[v.index()];
        cpt.probs[cpt.row(vals, &self.domains) * cpt.arity + vals[v.index()]]
    }

    pub fn min_entry(&self) -> f64 {
        self.cpts.iter().flat_map(|c| c.probs.iter().copied()).fold(f64::INFINITY, f64::min)
    }

    /// Truncated product over every node, with the nodes in `t` clamped to
    /// their assigned values and their factors removed.
    fn truncated(&self, t: &Assignment) -> Result<JointTable> {
        let all = self.graph.nodes();
        let mut joint = JointTable::zeros(&all, &self.domains)?;
        let order = all.to_vec();
        let clamped: Vec<bool> = (0..self.graph.universe_len()).map(|i| t.get(NodeId(i)).is_some()).collect();
        let mut vals = vec![0usize; self.graph.universe_len()];
        for idx in 0..joint.len() {
            let digits = joint.decode(idx);
            let mut consistent = true;
            for (&v, &d) in order.iter().zip(&digits) {
                vals[v.index()] = d;
                if let Some(x) = t.get(v) {
                    consistent &= x == d;
                }
            }
            if !consistent {
                continue;
            }
            let p: f64 = order.iter().filter(|v| !clamped[v.index()]).map(|&v| self.prob(v, &vals)).product();
            joint.data_mut()[idx] = p;
        }
        Ok(joint)
    }

    /// Joint over every node, latent ones included.
    pub fn full_joint(&self) -> Result<JointTable> {
        self.truncated(&Assignment::new(self.graph.universe_len()))
    }

    pub fn observational_joint(&self) -> Result<JointTable> {
        self.full_joint()?.marginal(&self.graph.observables())
    }

    /// `P_t(n)`: zero wherever `n` disagrees with `t`.
    pub fn interventional_joint(&self, t: &Assignment) -> Result<JointTable> {
        self.check_intervention(t)?;
        self.truncated(t)?.marginal(&self.graph.observables())
    }

    /// `P_t(s)` by truncated factorization.
    pub fn interventional_truth(&self, t: &Assignment, s: &VarSet) -> Result<JointTable> {
        self.graph.check_members(s)?;
        self.check_intervention(t)?;
        self.truncated(t)?.marginal(s)
    }

    fn check_intervention(&self, t: &Assignment) -> Result<()> {
        for (i, x) in t.pairs() {
            let v = NodeId(i);
            if i >= self.graph.universe_len() || !self.graph.contains(v) {
                return Err(Error::UnknownIndex(i));
            }
            if !self.graph.is_observable(v) {
                return Err(Error::NotObservable(self.graph.name(v).to_string()));
            }
            if x >= self.domains.arity(v) {
                return Err(Error::Input(format!("value {x} out of range for {}", self.graph.name(v))));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> ModelJson {
        let nodes = self
            .graph
            .nodes()
            .iter()
            .map(|v| {
                let c = &self.cpts[v.index()];
                CptJson {
                    node: self.graph.name(v).to_string(),
                    arity: c.arity,
                    parents: c.parents.iter().map(|&p| self.graph.name(p).to_string()).collect(),
                    probs: c.probs.clone(),
                }
            })
            .collect();
        ModelJson { nodes }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CptJson {
    pub node: String,
    pub arity: usize,
    pub parents: Vec<String>,
    pub probs: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelJson {
    pub nodes: Vec<CptJson>,
}

type Setting = Vec<(usize, usize)>;
type Cache<K> = RefCell<HashMap<K, Rc<JointTable>>>;

/// Post-intervention distributions of one model, cached per intervention.
pub struct Interventions<'m> {
    model: &'m DiscreteModel,
    joints: Cache<Setting>,
    marginals: Cache<(Setting, VarSet)>,
}

impl<'m> Interventions<'m> {
    pub fn new(model: &'m DiscreteModel) -> Self {
        Interventions { model, joints: RefCell::default(), marginals: RefCell::default() }
    }

    pub fn model(&self) -> &DiscreteModel {
        self.model
    }

    fn key(&self, t: &VarSet, a: &Assignment) -> Result<Vec<(usize, usize)>> {
        t.iter()
            .map(|v| {
                a.get(v)
                    .map(|x| (v.index(), x))
                    .ok_or_else(|| Error::Input(format!("no value for intervened {}", self.model.graph.name(v))))
            })
            .collect()
    }

    /// `P_t(vars)` as a table, `t` read from `a`.
    pub fn marginal(&self, t: &VarSet, vars: &VarSet, a: &Assignment) -> Result<Rc<JointTable>> {
        let key = self.key(t, a)?;
        if let Some(m) = self.marginals.borrow().get(&(key.clone(), vars.clone())) {
            return Ok(m.clone());
        }
        let joint = {
            let cached = self.joints.borrow().get(&key).cloned();
            match cached {
                Some(j) => j,
                None => {
                    let mut ta = Assignment::new(self.model.graph.universe_len());
                    for &(i, x) in &key {
                        ta.set(NodeId(i), x);
                    }
                    let j = Rc::new(self.model.interventional_joint(&ta)?);
                    self.joints.borrow_mut().insert(key.clone(), j.clone());
                    j
                }
            }
        };
        let m = Rc::new(joint.marginal(vars)?);
        self.marginals.borrow_mut().insert((key, vars.clone()), m.clone());
        Ok(m)
    }

    /// `P(outcome | given, do(t))` at assignment `a`.
    pub fn conditional(&self, outcome: &VarSet, t: &VarSet, given: &VarSet, a: &Assignment) -> Result<f64> {
        let num = self.marginal(t, &outcome.union(given), a)?.get(a)?;
        if given.is_empty() {
            return Ok(num);
        }
        let den = self.marginal(t, given, a)?.get(a)?;
        if den == 0.0 {
            return Err(Error::Positivity { assignment: a.restricted(&given.union(t)) });
        }
        Ok(num / den)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub trials: usize,
    pub max_error: f64,
    pub per_model: Vec<f64>,
    pub passed: bool,
}

/// Compares `e` with `P_t(s)` on `trials` random positive models.
pub fn check_estimand(
    e: &ProbExpr,
    g: &CausalGraph,
    t: &VarSet,
    s: &VarSet,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    check_estimand_with(e, g, &Domains::uniform(g.universe_len(), 2), t, s, trials, seed)
}

pub fn check_estimand_with(
    e: &ProbExpr,
    g: &CausalGraph,
    domains: &Domains,
    t: &VarSet,
    s: &VarSet,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    if !e.free_vars().is_subset(&s.union(t)) {
        return Err(Error::Input("estimand has free variables outside the query".into()));
    }
    let errors: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let m = random_model(g, domains, trial_seed(seed, i))?;
            estimand_error(e, &m, t, s)
        })
        .collect::<Result<_>>()?;
    let max_error = errors.iter().copied().fold(0.0, f64::max);
    Ok(CheckReport { trials, max_error, passed: max_error <= CHECK_TOLERANCE, per_model: errors })
}

/// Largest deviation of `e` from `P_t(s)` over every assignment of `t ∪ s`.
pub fn estimand_error(e: &ProbExpr, m: &DiscreteModel, t: &VarSet, s: &VarSet) -> Result<f64> {
    let obs = m.observational_joint()?;
    let ev = Evaluator::new(&obs);
    let universe = m.graph.universe_len();
    let mut worst: f64 = 0.0;
    for ta in m.domains.enumerate(t, universe)? {
        let truth = m.interventional_truth(&ta, s)?;
        for sa in m.domains.enumerate(s, universe)? {
            let mut a = ta.clone();
            for (i, x) in sa.pairs() {
                a.set(NodeId(i), x);
            }
            let got = ev.evaluate(e, &a)?;
            worst = worst.max((got - truth.get(&a)?).abs());
        }
    }
    Ok(worst)
}

/// True iff `x ⊥ y | z` holds numerically in `m`.
pub fn ci_check(m: &DiscreteModel, q: &SeparationQuery) -> Result<bool> {
    let g = &m.graph;
    for set in [&q.x, &q.y, &q.z] {
        g.check_members(set)?;
    }
    let full = m.full_joint()?;
    let xyz = full.marginal(&q.x.union(&q.y).union(&q.z))?;
    let xz = xyz.marginal(&q.x.union(&q.z))?;
    let yz = xyz.marginal(&q.y.union(&q.z))?;
    let z = xyz.marginal(&q.z)?;
    let universe = g.universe_len();
    for idx in 0..xyz.len() {
        let mut a = Assignment::new(universe);
        for (v, d) in xyz.vars().iter().zip(xyz.decode(idx)) {
            a.set(v, d);
        }
        let pz = z.get(&a)?;
        if pz <= 0.0 {
            continue;
        }
        let lhs = xyz.data()[idx] / pz;
        let rhs = xz.get(&a)? / pz * (yz.get(&a)? / pz);
        if (lhs - rhs).abs() > CHECK_TOLERANCE {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Random DAG over `n_obs` observables `V1..` and `n_lat` latents `U1..`,
/// each forward pair in a random order joined with probability `p`.
pub fn random_graph(n_obs: usize, n_lat: usize, p: f64, seed: u64) -> Result<CausalGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names: Vec<(String, bool)> = (1..=n_obs).map(|i| (format!("V{i}"), true)).collect();
    names.extend((1..=n_lat).map(|i| (format!("U{i}"), false)));
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.shuffle(&mut rng);
    let mut b = CausalGraph::builder();
    for (name, obs) in &names {
        b = b.node(name, *obs);
    }
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if rng.gen_bool(p) {
                b = b.edge(&names[order[i]].0, &names[order[j]].0);
            }
        }
    }
    b.build()
}

#[derive(Clone, Debug)]
pub struct Witness {
    pub m1: DiscreteModel,
    pub m2: DiscreteModel,
    pub observational_gap: f64,
    pub causal_gap: f64,
}

pub const WITNESS_OBS_GAP: f64 = 1e-6;
pub const WITNESS_CAUSAL_GAP: f64 = 1e-2;
pub const DEFAULT_WITNESS_BUDGET: usize = 400_000;

/// Softmax rows with the positivity floor, one logit per table entry.
struct Parametrization {
    template: DiscreteModel,
    eps: f64,
}

impl Parametrization {
    fn dim(&self) -> usize {
        self.template.cpts.iter().map(|c| c.probs.len()).sum()
    }

    fn model(&self, theta: &[f64]) -> DiscreteModel {
        let mut m = self.template.clone();
        let mut off = 0;
        for c in m.cpts.iter_mut() {
            let k = c.arity;
            for row in c.probs.chunks_mut(k.max(1)) {
                let logits = &theta[off..off + row.len()];
                off += row.len();
                let mx = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let exps: Vec<f64> = logits.iter().map(|l| (l - mx).exp()).collect();
                let total: f64 = exps.iter().sum();
                for (p, e) in row.iter_mut().zip(exps) {
                    *p = self.eps + (1.0 - k as f64 * self.eps) * e / total;
                }
            }
        }
        m
    }
}

struct Gaps {
    obs_sq: f64,
    obs_max: f64,
    causal: f64,
}

fn gaps(m1_obs: &JointTable, m1_causal: &[JointTable], m2: &DiscreteModel, t: &VarSet, s: &VarSet) -> Result<Gaps> {
    let obs = m2.observational_joint()?;
    let (mut obs_sq, mut obs_max) = (0.0, 0.0f64);
    for (a, b) in m1_obs.data().iter().zip(obs.data()) {
        obs_sq += (a - b) * (a - b);
        obs_max = obs_max.max((a - b).abs());
    }
    let mut causal = 0.0f64;
    for (ta, truth1) in m2.domains.enumerate(t, m2.graph.universe_len())?.iter().zip(m1_causal) {
        let truth2 = m2.interventional_truth(ta, s)?;
        for (a, b) in truth1.data().iter().zip(truth2.data()) {
            causal = causal.max((a - b).abs());
        }
    }
    Ok(Gaps { obs_sq, obs_max, causal })
}

/// Searches for two positive models that agree on `P(n)` within 1e-6 but
/// differ on `P_t(s)` by at least 1e-2. `budget` bounds model evaluations.
pub fn witness_search(g: &CausalGraph, t: &VarSet, s: &VarSet, budget: usize, seed: u64) -> Result<Option<Witness>> {
    g.check_observable(t)?;
    g.check_observable(s)?;
    let domains = Domains::uniform(g.universe_len(), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spent = 0usize;
    let mu = 10.0;
    let target = 2.0 * WITNESS_CAUSAL_GAP;
    while spent < budget {
        let m1 = random_model_with(g, &domains, DEFAULT_EPSILON, &mut rng)?;
        let m1_obs = m1.observational_joint()?;
        let m1_causal: Vec<JointTable> = domains
            .enumerate(t, g.universe_len())?
            .iter()
            .map(|ta| m1.interventional_truth(ta, s))
            .collect::<Result<_>>()?;
        let param = Parametrization { template: m1.clone(), eps: DEFAULT_EPSILON };
        let mut theta: Vec<f64> = (0..param.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let objective = |theta: &[f64], spent: &mut usize| -> Result<(f64, Gaps)> {
            *spent += 1;
            let gp = gaps(&m1_obs, &m1_causal, &param.model(theta), t, s)?;
            let hinge = (target - gp.causal).max(0.0);
            Ok((gp.obs_sq + mu * hinge * hinge, gp))
        };
        let (mut best, mut best_gaps) = objective(&theta, &mut spent)?;
        let mut step = 0.5;
        let restart_budget = spent + budget.min(40_000);
        while step > 1e-12 && spent < restart_budget.min(budget) {
            if best_gaps.obs_max <= WITNESS_OBS_GAP && best_gaps.causal >= WITNESS_CAUSAL_GAP {
                return Ok(Some(Witness {
                    m2: param.model(&theta),
                    m1,
                    observational_gap: best_gaps.obs_max,
                    causal_gap: best_gaps.causal,
                }));
            }
            // exploratory moves
            let base = theta.clone();
            for i in 0..theta.len() {
                for dir in [step, -step] {
                    theta[i] += dir;
                    let (f, gp) = objective(&theta, &mut spent)?;
                    if f < best {
                        best = f;
                        best_gaps = gp;
                        break;
                    }
                    theta[i] -= dir;
                }
            }
            if theta == base {
                step *= 0.5;
                continue;
            }
            // pattern move along the improvement direction
            let trial: Vec<f64> = theta.iter().zip(&base).map(|(a, b)| a + (a - b)).collect();
            let (f, gp) = objective(&trial, &mut spent)?;
            if f < best {
                best = f;
                best_gaps = gp;
                theta = trial;
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn binary(g: &CausalGraph) -> Domains {
        Domains::uniform(g.universe_len(), 2)
    }

    #[test]
    fn models_are_reproducible_and_positive() {
        let g = bow();
        let a = random_model(&g, &binary(&g), 7).unwrap();
        let b = random_model(&g, &binary(&g), 7).unwrap();
        assert_eq!(a, b);
        assert!(a.min_entry() >= DEFAULT_EPSILON);
        for c in a.cpts.iter() {
            for row in c.probs.chunks(c.arity) {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
        let obs = a.observational_joint().unwrap();
        assert!(obs.data().iter().all(|&p| p > 0.0));
        assert!((obs.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bow_with_noisy_copies() {
        let g = bow();
        let mut m = random_model(&g, &binary(&g), 0).unwrap();
        let (x, y, u) = (g.node("X").unwrap(), g.node("Y").unwrap(), g.node("U").unwrap());
        m.cpts[u.index()].probs = vec![0.5, 0.5];
        m.cpts[x.index()].probs = vec![0.9, 0.1, 0.1, 0.9];
        // Y's parents are in edge order; make Y copy U regardless of X.
        let yc = &mut m.cpts[y.index()];
        let ui = yc.parents.iter().position(|&p| p == u).unwrap();
        let rows = yc.rows();
        for r in 0..rows {
            let uval = if ui == 0 { r / 2 } else { r % 2 };
            yc.probs[2 * r..2 * r + 2].copy_from_slice(if uval == 0 { &[0.9, 0.1] } else { &[0.1, 0.9] });
        }
        let obs = m.observational_joint().unwrap();
        let same = obs.data()[0] + obs.data()[3];
        assert!((same - 0.82).abs() < 1e-12);
    }

    #[test]
    fn chain_intervention_is_conditional() {
        let g = chain();
        let m = random_model(&g, &binary(&g), 3).unwrap();
        let (x, z) = (g.node("X").unwrap(), g.node("Z").unwrap());
        let obs = m.observational_joint().unwrap();
        let pxz = obs.marginal(&g.set(&["X", "Z"]).unwrap()).unwrap();
        let px = obs.marginal(&g.set(&["X"]).unwrap()).unwrap();
        for xv in 0..2 {
            let t = Assignment::from_pairs(3, &[(x, xv)]);
            let pz = m.interventional_truth(&t, &VarSet::singleton(z)).unwrap();
            assert!((pz.total() - 1.0).abs() < 1e-12);
            for zv in 0..2 {
                let a = Assignment::from_pairs(3, &[(x, xv), (z, zv)]);
                let cond = pxz.get(&a).unwrap() / px.get(&a).unwrap();
                assert!((pz.get(&a).unwrap() - cond).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_intervention_is_observational() {
        let g = front_door();
        let m = random_model(&g, &binary(&g), 1).unwrap();
        let s = g.set(&["Z", "Y"]).unwrap();
        let a = m.interventional_truth(&Assignment::new(4), &s).unwrap();
        let b = m.observational_joint().unwrap().marginal(&s).unwrap();
        for (p, q) in a.data().iter().zip(b.data()) {
            assert!((p - q).abs() < 1e-15);
        }
    }

    #[test]
    fn inconsistent_assignments_get_zero() {
        let g = chain();
        let m = random_model(&g, &binary(&g), 2).unwrap();
        let x = g.node("X").unwrap();
        let t = Assignment::from_pairs(3, &[(x, 1)]);
        let px = m.interventional_truth(&t, &VarSet::singleton(x)).unwrap();
        assert_eq!(px.data(), &[0.0, 1.0]);
    }

    #[test]
    fn wrong_estimand_fails_on_front_door() {
        let g = front_door();
        let (t, s) = (g.set(&["X"]).unwrap(), g.set(&["Y"]).unwrap());
        let naive = crate::expr::Expr::quotient(
            ProbExpr::marginal(g.set(&["X", "Y"]).unwrap()),
            ProbExpr::marginal(g.set(&["X"]).unwrap()),
        );
        let r = check_estimand(&naive, &g, &t, &s, 10, 0).unwrap();
        assert!(!r.passed);
        assert!(r.max_error > 1e-3);
    }

    #[test]
    fn ci_check_examples() {
        let c = collider();
        let m = random_model(&c, &binary(&c), 5).unwrap();
        let (x, y, z) = (c.node("X").unwrap(), c.node("Y").unwrap(), c.node("Z").unwrap());
        let q = |zs: VarSet| SeparationQuery::new(c.clone(), VarSet::singleton(x), VarSet::singleton(y), zs);
        assert!(ci_check(&m, &q(VarSet::new())).unwrap());
        assert!(!ci_check(&m, &q(VarSet::singleton(z))).unwrap());

        let g = CausalGraph::new(&[("A", true), ("B", true), ("C", true)], &[]).unwrap();
        let m = random_model(&g, &binary(&g), 9).unwrap();
        let q = SeparationQuery::new(g.clone(), g.set(&["A"]).unwrap(), g.set(&["B"]).unwrap(), g.set(&["C"]).unwrap());
        assert!(ci_check(&m, &q).unwrap());
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let a = random_graph(5, 3, 0.4, 11).unwrap();
        let b = random_graph(5, 3, 0.4, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.observables().len(), 5);
        assert_eq!(a.latents().len(), 3);
    }

    #[test]
    fn zero_budget_finds_nothing() {
        let g = bow();
        let (t, s) = (g.set(&["X"]).unwrap(), g.set(&["Y"]).unwrap());
        assert!(witness_search(&g, &t, &s, 0, 0).unwrap().is_none());
    }
}
