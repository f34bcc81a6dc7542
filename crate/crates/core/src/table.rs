//! Dense tables over finite-domain variables and partial assignments.

use crate::error::{Error, Result};
use crate::graph::{NodeId, VarSet};

/// Largest product domain a single table may span.
pub const MAX_TABLE_STATES: usize = 1 << 20;

/// Partial map from node to value index. Indexed by node universe position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<Option<usize>>,
}

impl Assignment {
    pub fn new(universe: usize) -> Self {
        Assignment { values: vec![None; universe] }
    }

    pub fn from_pairs(universe: usize, pairs: &[(NodeId, usize)]) -> Self {
        let mut a = Assignment::new(universe);
        for &(v, x) in pairs {
            a.set(v, x);
        }
        a
    }

    pub fn get(&self, v: NodeId) -> Option<usize> {
        self.values.get(v.index()).copied().flatten()
    }

    pub fn set(&mut self, v: NodeId, value: usize) {
        if v.index() >= self.values.len() {
            self.values.resize(v.index() + 1, None);
        }
        self.values[v.index()] = Some(value);
    }

    /// Replaces the value of `v`, returning the previous one.
    pub fn replace(&mut self, v: NodeId, value: Option<usize>) -> Option<usize> {
        if v.index() >= self.values.len() {
            self.values.resize(v.index() + 1, None);
        }
        std::mem::replace(&mut self.values[v.index()], value)
    }

    pub fn covers(&self, s: &VarSet) -> bool {
        s.iter().all(|v| self.get(v).is_some())
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|x| (i, x))).collect()
    }

    pub fn restricted(&self, s: &VarSet) -> Vec<(usize, usize)> {
        s.iter().filter_map(|v| self.get(v).map(|x| (v.index(), x))).collect()
    }
}

/// Arity of every node in a graph universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domains(pub Vec<usize>);

impl Domains {
    pub fn uniform(universe: usize, arity: usize) -> Self {
        Domains(vec![arity; universe])
    }

    pub fn arity(&self, v: NodeId) -> usize {
        self.0[v.index()]
    }

    pub fn states(&self, s: &VarSet) -> Result<usize> {
        let mut n: usize = 1;
        for v in s.iter() {
            n = n
                .checked_mul(self.arity(v))
                .filter(|&n| n <= MAX_TABLE_STATES)
                .ok_or_else(|| Error::Resource(format!("product domain exceeds {MAX_TABLE_STATES} states")))?;
        }
        Ok(n)
    }

    /// Every assignment of `s`, last variable varying fastest.
    pub fn enumerate(&self, s: &VarSet, universe: usize) -> Result<Vec<Assignment>> {
        let vars = s.to_vec();
        let n = self.states(s)?;
        let mut out = Vec::with_capacity(n);
        let mut digits = vec![0usize; vars.len()];
        for _ in 0..n {
            let mut a = Assignment::new(universe);
            for (v, &d) in vars.iter().zip(&digits) {
                a.set(*v, d);
            }
            out.push(a);
            for i in (0..vars.len()).rev() {
                digits[i] += 1;
                if digits[i] < self.arity(vars[i]) {
                    break;
                }
                digits[i] = 0;
            }
        }
        Ok(out)
    }
}

/// Flat table over a variable set in ascending node order (mixed radix,
/// last variable fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct JointTable {
    vars: Vec<NodeId>,
    arity: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<f64>,
}

impl JointTable {
    pub fn zeros(vars: &VarSet, domains: &Domains) -> Result<Self> {
        let n = domains.states(vars)?;
        let vars: Vec<NodeId> = vars.to_vec();
        let arity: Vec<usize> = vars.iter().map(|&v| domains.arity(v)).collect();
        let mut strides = vec![1usize; vars.len()];
        for i in (0..vars.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * arity[i + 1];
        }
        Ok(JointTable { vars, arity, strides, data: vec![0.0; n] })
    }

    pub fn vars(&self) -> VarSet {
        self.vars.iter().copied().collect()
    }

    pub fn arity_of(&self, v: NodeId) -> Option<usize> {
        self.vars.iter().position(|&w| w == v).map(|i| self.arity[i])
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Value digits of flat position `idx`, one per table variable.
    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        self.strides
            .iter()
            .map(|&s| {
                let d = idx / s;
                idx %= s;
                d
            })
            .collect()
    }

    pub fn position(&self, a: &Assignment) -> Option<usize> {
        let mut idx = 0;
        for (i, &v) in self.vars.iter().enumerate() {
            let x = a.get(v)?;
            if x >= self.arity[i] {
                return None;
            }
            idx += x * self.strides[i];
        }
        Some(idx)
    }

    pub fn get(&self, a: &Assignment) -> Result<f64> {
        self.position(a).map(|i| self.data[i]).ok_or_else(|| {
            Error::Input(format!("assignment {:?} does not cover the table variables", a.pairs()))
        })
    }

    pub fn set(&mut self, a: &Assignment, value: f64) -> Result<()> {
        let i = self
            .position(a)
            .ok_or_else(|| Error::Input("assignment does not cover the table variables".into()))?;
        self.data[i] = value;
        Ok(())
    }

    /// Sums out every variable not in `keep`.
    pub fn marginal(&self, keep: &VarSet) -> Result<JointTable> {
        if !keep.is_subset(&self.vars()) {
            return Err(Error::Input("marginal over variables outside the table".into()));
        }
        let domains = {
            let max = self.vars.iter().map(|v| v.index() + 1).max().unwrap_or(0);
            let mut d = vec![0; max];
            for (v, a) in self.vars.iter().zip(&self.arity) {
                d[v.index()] = *a;
            }
            Domains(d)
        };
        let mut out = JointTable::zeros(keep, &domains)?;
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| out.vars.iter().position(|w| w == v).map(|j| out.strides[j]))
            .collect();
        for (idx, &p) in self.data.iter().enumerate() {
            let digits = self.decode(idx);
            let mut o = 0;
            for (d, m) in digits.iter().zip(&map) {
                if let Some(s) = m {
                    o += d * s;
                }
            }
            out.data[o] += p;
        }
        Ok(out)
    }
}
