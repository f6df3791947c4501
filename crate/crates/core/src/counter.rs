//! Model counting: linear-time counting on compiled diagrams and direct
//! counting by search without materializing nodes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::compiler::{CompileError, CompilerConfig, Search, TraceBuilder};
use crate::diagram::{Diagram, Node, NodeId};
use crate::formula::{CnfFormula, Lit, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("count at node {0} is not an integer")]
    Inexact(NodeId),
    #[error("variable {0} is outside the counting scope of {1} variables")]
    ScopeViolation(Var, u32),
    #[error("count {0} is not an integer")]
    NotIntegral(String),
}

/// Non-negative rational `mantissa * 2^exp2`, normalized so the mantissa
/// is odd (or zero with exponent zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelCount {
    mantissa: BigUint,
    exp2: i64,
}

impl ModelCount {
    pub fn zero() -> ModelCount {
        ModelCount { mantissa: BigUint::zero(), exp2: 0 }
    }

    pub fn one() -> ModelCount {
        ModelCount::pow2(0)
    }

    pub fn pow2(k: i64) -> ModelCount {
        ModelCount { mantissa: BigUint::one(), exp2: k }
    }

    pub fn from_biguint(n: BigUint) -> ModelCount {
        ModelCount { mantissa: n, exp2: 0 }.normalized()
    }

    fn normalized(mut self) -> ModelCount {
        if self.mantissa.is_zero() {
            self.exp2 = 0;
            return self;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exp2 += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.exp2 >= 0
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    /// Mantissas of `self` and `other` over the common exponent.
    fn aligned(&self, other: &ModelCount) -> (BigUint, BigUint, i64) {
        let e = self.exp2.min(other.exp2);
        (
            &self.mantissa << (self.exp2 - e) as u64,
            &other.mantissa << (other.exp2 - e) as u64,
            e,
        )
    }

    pub fn add(&self, other: &ModelCount) -> ModelCount {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        ModelCount { mantissa: a + b, exp2: e }.normalized()
    }

    pub fn mul(&self, other: &ModelCount) -> ModelCount {
        if self.is_zero() || other.is_zero() {
            return ModelCount::zero();
        }
        ModelCount {
            mantissa: &self.mantissa * &other.mantissa,
            exp2: self.exp2 + other.exp2,
        }
    }

    /// Multiplies by `2^k`.
    pub fn shift(&self, k: i64) -> ModelCount {
        if self.is_zero() {
            return ModelCount::zero();
        }
        ModelCount { mantissa: self.mantissa.clone(), exp2: self.exp2 + k }
    }

    pub fn to_biguint(&self) -> Result<BigUint, CountError> {
        if !self.is_integral() {
            return Err(CountError::NotIntegral(format!("{}/2^{}", self.mantissa, -self.exp2)));
        }
        Ok(&self.mantissa << self.exp2 as u64)
    }

    /// Decimal representation of an integral count.
    pub fn materialize(&self) -> Result<String, CountError> {
        self.to_biguint().map(|n| n.to_str_radix(10))
    }

    /// Lossy conversion, saturating to infinity.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (&self.mantissa >> shift as u64).iter_u64_digits().next().unwrap_or(0) as f64;
        top * 2f64.powi((self.exp2 + shift).clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }
}

impl Ord for ModelCount {
    fn cmp(&self, other: &ModelCount) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => {
                let (a, b, _) = self.aligned(other);
                a.cmp(&b)
            }
        }
    }
}

impl PartialOrd for ModelCount {
    fn partial_cmp(&self, other: &ModelCount) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for ModelCount {
    fn from(n: u64) -> ModelCount {
        ModelCount::from_biguint(BigUint::from(n))
    }
}

impl fmt::Display for ModelCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_biguint() {
            Ok(n) => write!(f, "{n}"),
            Err(CountError::NotIntegral(s)) => f.write_str(&s),
            Err(e) => write!(f, "{e}"),
        }
    }
}

/// Counts of every node of a diagram over the scope `{x1..x_scope}`.
#[derive(Clone, Debug)]
pub struct CountAnnotation {
    scope: u32,
    counts: Vec<ModelCount>,
}

impl CountAnnotation {
    pub fn scope(&self) -> u32 {
        self.scope
    }

    pub fn get(&self, id: NodeId) -> &ModelCount {
        &self.counts[id.index()]
    }
}

/// Annotates every node with its model count over `{x1..x_scope}` in one
/// bottom-up pass.
pub fn ct(diagram: &Diagram, scope: u32) -> Result<CountAnnotation, CountError> {
    let x = scope as i64;
    let mut counts: Vec<ModelCount> = Vec::with_capacity(diagram.len());
    for id in diagram.ids() {
        if let Some(v) = diagram.vars(id).iter().find(|v| v.index() > scope) {
            return Err(CountError::ScopeViolation(*v, scope));
        }
        let c = match diagram.node(id) {
            Node::False => ModelCount::zero(),
            Node::True => ModelCount::pow2(x),
            Node::Equiv { .. } => ModelCount::pow2(x - 1),
            Node::Decision { lo, hi, .. } => counts[lo.index()].add(&counts[hi.index()]).shift(-1),
            Node::DecomposedAnd(parts) => {
                let mut c = ModelCount::one();
                for p in parts {
                    c = c.mul(&counts[p.index()]);
                }
                c.shift(-((parts.len() as i64 - 1) * x))
            }
            Node::KernelizedAnd { core, equivs } => counts[core.index()].shift(-(equivs.len() as i64)),
        };
        if !c.is_integral() {
            return Err(CountError::Inexact(id));
        }
        counts.push(c);
    }
    Ok(CountAnnotation { scope, counts })
}

/// Model count of the diagram's root over its declared variables.
pub fn count(diagram: &Diagram) -> Result<ModelCount, CountError> {
    let annotation = ct(diagram, diagram.num_vars())?;
    Ok(annotation.get(diagram.root()).clone())
}

/// Folds counts over the search trace instead of building nodes.
struct CountBuilder {
    scope: i64,
}

impl TraceBuilder for CountBuilder {
    type Out = ModelCount;

    fn falsum(&mut self) -> ModelCount {
        ModelCount::zero()
    }

    fn verum(&mut self) -> ModelCount {
        ModelCount::pow2(self.scope)
    }

    fn implied(&mut self, lits: &[Lit], rest: ModelCount) -> Result<ModelCount, CompileError> {
        Ok(rest.shift(-(lits.len() as i64)))
    }

    fn decision(&mut self, _: Var, lo: ModelCount, hi: ModelCount) -> Result<ModelCount, CompileError> {
        Ok(lo.add(&hi).shift(-1))
    }

    fn decomposed(&mut self, parts: Vec<ModelCount>) -> Result<ModelCount, CompileError> {
        let k = parts.len() as i64;
        let mut c = ModelCount::one();
        for p in &parts {
            c = c.mul(p);
        }
        Ok(c.shift(-(k - 1) * self.scope))
    }

    fn kernelized(&mut self, core: ModelCount, equivs: &[(Var, Lit)]) -> Result<ModelCount, CompileError> {
        Ok(core.shift(-(equivs.len() as i64)))
    }
}

/// Counts the models of `phi` over its declared variables by search, with
/// the same decomposition, caching and kernelization as compilation.
pub fn exact_mc(phi: &CnfFormula, cfg: &CompilerConfig) -> Result<ModelCount, CompileError> {
    let mut search = Search::new(cfg, phi, CountBuilder { scope: phi.num_vars() as i64 });
    let c = search.run(phi.clone())?;
    if !c.is_integral() {
        return Err(CompileError::Inexact(c.to_string()));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile;
    use crate::diagram::figure_one;

    #[test]
    fn arithmetic_normalizes() {
        let six = ModelCount::from(6);
        assert_eq!(six.mantissa(), &BigUint::from(3u32));
        assert_eq!(six.exp2(), 1);
        assert_eq!(six.add(&ModelCount::from(2)), ModelCount::from(8));
        assert_eq!(six.mul(&ModelCount::from(5)), ModelCount::from(30));
        assert_eq!(six.shift(-1), ModelCount::from(3));
        assert!(!ModelCount::from(3).shift(-1).is_integral());
        assert_eq!(ModelCount::from(3).shift(-1).to_string(), "3/2^1");
        assert_eq!(ModelCount::zero().shift(-5), ModelCount::zero());
        assert!(ModelCount::from(3) < ModelCount::from(4));
        assert!(ModelCount::from(3).shift(-1) < ModelCount::one().shift(1));
        assert_eq!(ModelCount::pow2(100).materialize().unwrap(), BigUint::from(2u32).pow(100).to_string());
        assert_eq!(ModelCount::from(12345).to_f64(), 12345.0);
    }

    #[test]
    fn constants_over_scope() {
        let mut d = Diagram::new(5);
        let t = d.true_node();
        d.set_root(t);
        assert_eq!(count(&d).unwrap(), ModelCount::from(32));
        let mut d = Diagram::new(5);
        let f = d.false_node();
        d.set_root(f);
        assert_eq!(count(&d).unwrap(), ModelCount::zero());
    }

    #[test]
    fn example_diagram_has_eight_models() {
        let d = figure_one();
        assert_eq!(count(&d).unwrap(), ModelCount::from(8));
    }

    #[test]
    fn scope_is_checked() {
        let d = figure_one();
        assert!(matches!(ct(&d, 4), Err(CountError::ScopeViolation(..))));
        let wide = ct(&d, 8).unwrap();
        assert_eq!(wide.get(d.root()), &ModelCount::from(32));
    }

    #[test]
    fn equivalence_counts_half() {
        let mut d = Diagram::new(3);
        let e = d.make_node(Node::Equiv { var: Var::new(1), lit: Var::new(3).neg() }).unwrap();
        d.set_root(e);
        assert_eq!(count(&d).unwrap(), ModelCount::from(4));
    }

    #[test]
    fn direct_and_compiled_counts_agree() {
        let phi = CnfFormula::from_dimacs_clauses(
            5,
            &[&[1, 4], &[-1, -4], &[2, 5], &[-2, -5], &[1, 2, 3], &[1, -2, -3], &[-1, 2, -3], &[-1, -2, 3]],
        )
        .unwrap();
        let cfg = CompilerConfig::default();
        let d = compile(&phi, &cfg).unwrap();
        assert_eq!(count(&d).unwrap(), ModelCount::from(4));
        assert_eq!(exact_mc(&phi, &CompilerConfig::counting()).unwrap(), ModelCount::from(4));
        assert_eq!(exact_mc(&phi, &CompilerConfig::without_kernelization()).unwrap(), ModelCount::from(4));
    }

    #[test]
    fn unsat_and_trivial_formulas() {
        let cfg = CompilerConfig::counting();
        let unsat = CnfFormula::from_dimacs_clauses(2, &[&[1], &[-1, 2], &[-2]]).unwrap();
        assert!(exact_mc(&unsat, &cfg).unwrap().is_zero());
        let empty = CnfFormula::from_dimacs_clauses(7, &[]).unwrap();
        assert_eq!(exact_mc(&empty, &cfg).unwrap(), ModelCount::from(128));
    }
}
