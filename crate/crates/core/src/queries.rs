//! Implicant check, consistency, validity and model enumeration.

use std::collections::HashMap;

use thiserror::Error;

use crate::counter::{ct, CountError, ModelCount};
use crate::diagram::{Diagram, Node, NodeId};
use crate::formula::{Assignment, Lit, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("term contains both {0} and its negation")]
    InconsistentTerm(Lit),
    #[error("term mentions {0} outside the diagram's {1} variables")]
    OutOfScope(Var, u32),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// A consistent conjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    lits: Vec<Lit>,
}

impl Term {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Result<Term, QueryError> {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        if let Some(w) = lits.windows(2).find(|w| w[0].var() == w[1].var()) {
            return Err(QueryError::InconsistentTerm(w[0]));
        }
        Ok(Term { lits })
    }

    pub fn from_dimacs(values: &[i32]) -> Result<Term, QueryError> {
        Term::new(values.iter().map(|&v| Lit::from_dimacs(v)))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    fn assignment(&self, num_vars: u32) -> Result<Assignment, QueryError> {
        if let Some(l) = self.lits.iter().find(|l| l.var().index() > num_vars) {
            return Err(QueryError::OutOfScope(l.var(), num_vars));
        }
        Ok(Assignment::from_lits(num_vars, &self.lits))
    }
}

/// Whether every extension of `term` satisfies the diagram's root.
pub fn implicant_check(d: &Diagram, term: &Term) -> Result<bool, QueryError> {
    let t = term.assignment(d.num_vars())?;
    let mut memo = vec![None; d.len()];
    Ok(implied_by(d, d.root(), &t, &mut memo))
}

fn implied_by(d: &Diagram, u: NodeId, t: &Assignment, memo: &mut [Option<bool>]) -> bool {
    if let Some(r) = memo[u.index()] {
        return r;
    }
    let r = match d.node(u) {
        Node::False => false,
        Node::True => true,
        // x ↔ l abbreviates a decision on x between ¬l and l
        Node::Equiv { var, lit } => match t.get(*var) {
            Some(b) => t.lit_value(*lit) == Some(b),
            None => false,
        },
        Node::Decision { var, lo, hi } => match t.get(*var) {
            Some(false) => implied_by(d, *lo, t, memo),
            Some(true) => implied_by(d, *hi, t, memo),
            None => implied_by(d, *lo, t, memo) && implied_by(d, *hi, t, memo),
        },
        Node::DecomposedAnd(children) => children.iter().all(|&c| implied_by(d, c, t, memo)),
        Node::KernelizedAnd { core, equivs } => {
            implied_by(d, *core, t, memo) && equivs.iter().all(|&c| implied_by(d, c, t, memo))
        }
    };
    memo[u.index()] = Some(r);
    r
}

/// True iff the diagram has a model.
pub fn consistency(d: &Diagram) -> Result<bool, QueryError> {
    Ok(!ct(d, d.num_vars())?.get(d.root()).is_zero())
}

/// True iff every assignment to the declared variables is a model.
pub fn validity(d: &Diagram) -> Result<bool, QueryError> {
    Ok(*ct(d, d.num_vars())?.get(d.root()) == ModelCount::pow2(d.num_vars() as i64))
}

/// Whether some extension of a partial assignment satisfies node `u`.
struct Extender<'d> {
    d: &'d Diagram,
    terms: HashMap<Assignment, usize>,
    memo: HashMap<(NodeId, usize), bool>,
}

impl<'d> Extender<'d> {
    fn new(d: &'d Diagram) -> Extender<'d> {
        Extender { d, terms: HashMap::new(), memo: HashMap::new() }
    }

    fn check(&mut self, t: &Assignment) -> bool {
        self.terms.clear();
        self.memo.clear();
        self.extendable(self.d.root(), t)
    }

    fn intern(&mut self, t: &Assignment) -> usize {
        if let Some(&id) = self.terms.get(t) {
            return id;
        }
        let id = self.terms.len();
        self.terms.insert(t.clone(), id);
        id
    }

    fn extendable(&mut self, u: NodeId, t: &Assignment) -> bool {
        let key = (u, self.intern(t));
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let r = match self.d.node(u) {
            Node::False => false,
            Node::True => true,
            Node::Equiv { var, lit } => match (t.get(*var), t.lit_value(*lit)) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            },
            Node::Decision { var, lo, hi } => match t.get(*var) {
                Some(false) => self.extendable(*lo, t),
                Some(true) => self.extendable(*hi, t),
                None => self.extendable(*lo, t) || self.extendable(*hi, t),
            },
            // children share no variables
            Node::DecomposedAnd(children) => children.iter().all(|&c| self.extendable(c, t)),
            Node::KernelizedAnd { core, equivs } => {
                // bound right-hand literals fix the left-hand variables
                let mut extended = t.clone();
                let mut ok = true;
                for &e in equivs {
                    let Node::Equiv { var, lit } = *self.d.node(e) else {
                        unreachable!("validated kernelized node");
                    };
                    if let Some(b) = t.lit_value(lit) {
                        match extended.get(var) {
                            Some(a) if a != b => ok = false,
                            _ => extended.set(var, b),
                        }
                    }
                }
                ok && self.extendable(*core, &extended)
            }
        };
        self.memo.insert(key, r);
        r
    }
}

/// Models of the diagram over its declared variables in lexicographic
/// order (`x1` first, false before true), stopping after `limit`.
pub fn enumerate_models(d: &Diagram, limit: Option<usize>) -> ModelIter<'_> {
    let mut extender = Extender::new(d);
    let start = Assignment::new(d.num_vars());
    let stack = if extender.check(&start) { vec![(1, start)] } else { Vec::new() };
    ModelIter { extender, stack, remaining: limit }
}

/// Depth-first expansion of consistent partial assignments.
pub struct ModelIter<'d> {
    extender: Extender<'d>,
    /// Next variable to bind and a partial assignment with a model.
    stack: Vec<(u32, Assignment)>,
    remaining: Option<usize>,
}

impl Iterator for ModelIter<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.remaining == Some(0) {
            return None;
        }
        let n = self.extender.d.num_vars();
        while let Some((v, partial)) = self.stack.pop() {
            if v > n {
                if let Some(r) = self.remaining.as_mut() {
                    *r -= 1;
                }
                return Some(partial);
            }
            for value in [true, false] {
                let mut next = partial.clone();
                next.set(Var::new(v), value);
                if self.extender.check(&next) {
                    self.stack.push((v + 1, next));
                }
            }
        }
        None
    }
}
