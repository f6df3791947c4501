//! Brute-force reference implementations for testing.
//!
//! Nothing here uses the compiler, counter or sampler.

use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

use crate::diagram::{Diagram, Node, NodeId};
use crate::formula::{Assignment, CnfFormula, FormulaError, Lit, Var};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{vars} variables exceed the enumeration limit of {max}")]
    LimitExceeded { vars: u32, max: u32 },
    #[error("degenerate histogram: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Largest variable count the oracle will enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_vars: u32,
}

impl Default for OracleLimit {
    fn default() -> OracleLimit {
        OracleLimit { max_vars: 24 }
    }
}

impl OracleLimit {
    fn check(&self, vars: u32) -> Result<(), OracleError> {
        if vars > self.max_vars || vars > 63 {
            return Err(OracleError::LimitExceeded { vars, max: self.max_vars.min(63) });
        }
        Ok(())
    }
}

/// Clause as bit masks: bit `n - v` stands for variable `v`, so counting up
/// through the masks walks assignments in lexicographic order.
struct MaskClause {
    pos: u64,
    neg: u64,
}

fn masks(phi: &CnfFormula) -> Vec<MaskClause> {
    let n = phi.num_vars();
    phi.clauses()
        .iter()
        .map(|c| {
            let mut m = MaskClause { pos: 0, neg: 0 };
            for l in c.lits() {
                let bit = 1u64 << (n - l.var().index());
                if l.is_positive() {
                    m.pos |= bit;
                } else {
                    m.neg |= bit;
                }
            }
            m
        })
        .collect()
}

fn satisfied(clauses: &[MaskClause], omega: u64) -> bool {
    clauses.iter().all(|c| omega & c.pos != 0 || !omega & c.neg != 0)
}

fn to_assignment(n: u32, omega: u64) -> Assignment {
    let lits: Vec<Lit> = (1..=n)
        .map(|v| Lit::new(Var::new(v), omega >> (n - v) & 1 == 1))
        .collect();
    Assignment::from_lits(n, &lits)
}

/// Number of models of `phi` over its declared variables.
pub fn brute_count(phi: &CnfFormula, limit: OracleLimit) -> Result<u64, OracleError> {
    let n = phi.num_vars();
    limit.check(n)?;
    if phi.is_false() {
        return Ok(0);
    }
    let clauses = masks(phi);
    Ok((0..1u64 << n).filter(|&omega| satisfied(&clauses, omega)).count() as u64)
}

/// Models of `phi` over its declared variables in lexicographic order.
pub fn brute_models(phi: &CnfFormula, limit: OracleLimit) -> Result<Vec<Assignment>, OracleError> {
    let n = phi.num_vars();
    limit.check(n)?;
    if phi.is_false() {
        return Ok(Vec::new());
    }
    let clauses = masks(phi);
    Ok((0..1u64 << n)
        .filter(|&omega| satisfied(&clauses, omega))
        .map(|omega| to_assignment(n, omega))
        .collect())
}

/// Every total assignment to `1..=n` in lexicographic order.
pub fn all_assignments(n: u32, limit: OracleLimit) -> Result<impl Iterator<Item = Assignment>, OracleError> {
    limit.check(n)?;
    Ok((0..1u64 << n).map(move |omega| to_assignment(n, omega)))
}

/// Models of node `u` over the diagram's declared variables, by evaluating
/// the node on every assignment.
pub fn brute_count_node(d: &Diagram, u: NodeId, limit: OracleLimit) -> Result<u64, OracleError> {
    let mut count = 0;
    for omega in all_assignments(d.num_vars(), limit)? {
        if d.evaluate(u, &omega)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Models of every node over the diagram's declared variables, by
/// evaluating all nodes on 64 assignments at a time.
pub fn brute_count_nodes(d: &Diagram, limit: OracleLimit) -> Result<Vec<u64>, OracleError> {
    let n = d.num_vars();
    limit.check(n)?;
    let total = 1u64 << n;
    let words = total.div_ceil(64);
    let valid = if total >= 64 { u64::MAX } else { (1u64 << total) - 1 };
    // bit i of word w is assignment 64w + i; variable v is bit n - v of it
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let var_word = |v: Var, w: u64| -> u64 {
        let p = (n - v.index()) as u64;
        if p < 6 {
            PATTERNS[p as usize]
        } else if (w << 6) >> p & 1 == 1 {
            u64::MAX
        } else {
            0
        }
    };
    let mut counts = vec![0u64; d.len()];
    let mut value = vec![0u64; d.len()];
    for w in 0..words {
        for id in d.ids() {
            value[id.index()] = match d.node(id) {
                Node::False => 0,
                Node::True => u64::MAX,
                Node::Equiv { var, lit } => {
                    let l = var_word(lit.var(), w);
                    let l = if lit.is_positive() { l } else { !l };
                    !(var_word(*var, w) ^ l)
                }
                Node::Decision { var, lo, hi } => {
                    let x = var_word(*var, w);
                    (!x & value[lo.index()]) | (x & value[hi.index()])
                }
                Node::DecomposedAnd(children) => children.iter().fold(u64::MAX, |acc, c| acc & value[c.index()]),
                Node::KernelizedAnd { core, equivs } => equivs
                    .iter()
                    .fold(value[core.index()], |acc, c| acc & value[c.index()]),
            };
            counts[id.index()] += (value[id.index()] & valid).count_ones() as u64;
        }
    }
    Ok(counts)
}

/// Whether `t` implies the root: every extension of `t` is a model.
pub fn brute_implies(d: &Diagram, t: &[Lit], limit: OracleLimit) -> Result<bool, OracleError> {
    for omega in all_assignments(d.num_vars(), limit)? {
        if t.iter().all(|&l| omega.lit_value(l) == Some(true)) && !d.evaluate(d.root(), &omega)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    /// 0.999 quantile for `m - 1` degrees of freedom.
    pub critical: f64,
    pub reject: bool,
}

/// Pearson goodness-of-fit of `counts` against the uniform distribution,
/// rejecting at significance 0.001.
pub fn chi_square_uniform(counts: &[u64]) -> Result<ChiSquare, OracleError> {
    let m = counts.len();
    if m < 2 {
        return Err(OracleError::Degenerate(format!("{m} categories")));
    }
    let total: u64 = counts.iter().sum();
    if total < 10 * m as u64 {
        return Err(OracleError::Degenerate(format!("{total} draws over {m} categories")));
    }
    let expected = total as f64 / m as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum::<f64>();
    let critical = ChiSquared::new((m - 1) as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.999);
    Ok(ChiSquare { statistic, critical, reject: statistic > critical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::figure_one;
    use crate::formula::{condition, evaluate};

    fn f(n: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
    }

    fn parity_example() -> CnfFormula {
        f(
            5,
            &[&[1, 4], &[-1, -4], &[2, 5], &[-2, -5], &[1, 2, 3], &[1, -2, -3], &[-1, 2, -3], &[-1, -2, 3]],
        )
    }

    /// (x1 ∧ x3↔¬x4 ∧ x3↔x5 ∧ x5↔x6) ∨ (¬x1 ∧ x5 ∧ (x2 → x3↔¬x4) ∧ (¬x2 → x4) ∧ x5↔x6)
    fn example_diagram_formula() -> CnfFormula {
        f(
            6,
            &[
                &[-1, 3, 4], &[-1, -3, -4], &[-1, -3, 5], &[-1, 3, -5],
                &[-5, 6], &[5, -6], &[1, 5], &[1, 2, 4], &[1, -2, 3, 4], &[1, -2, -3, -4],
            ],
        )
    }

    #[test]
    fn golden_counts() {
        let lim = OracleLimit::default();
        assert_eq!(brute_count(&parity_example(), lim).unwrap(), 4);
        assert_eq!(brute_count(&example_diagram_formula(), lim).unwrap(), 8);
        assert_eq!(brute_count(&f(3, &[]), lim).unwrap(), 8);
    }

    #[test]
    fn figure_diagram_matches_its_formula() {
        let d = figure_one();
        let phi = example_diagram_formula();
        for omega in all_assignments(6, OracleLimit::default()).unwrap() {
            assert_eq!(d.evaluate(d.root(), &omega).unwrap(), evaluate(&phi, &omega).unwrap());
        }
        assert_eq!(brute_count_node(&d, d.root(), OracleLimit::default()).unwrap(), 8);
        let all = brute_count_nodes(&d, OracleLimit::default()).unwrap();
        for id in d.ids() {
            assert_eq!(all[id.index()], brute_count_node(&d, id, OracleLimit::default()).unwrap());
        }
    }

    #[test]
    fn bit_parallel_counts_on_small_and_wide_scopes() {
        for n in [1u32, 3, 7, 9] {
            let mut d = Diagram::new(n);
            let (f, t) = (d.false_node(), d.true_node());
            let x = d.make_node(Node::Decision { var: Var::new(n), lo: f, hi: t }).unwrap();
            d.set_root(x);
            let counts = brute_count_nodes(&d, OracleLimit::default()).unwrap();
            assert_eq!(counts[t.index()], 1 << n);
            assert_eq!(counts[x.index()], 1 << (n - 1));
            assert_eq!(counts[x.index()], brute_count_node(&d, x, OracleLimit::default()).unwrap());
        }
    }

    #[test]
    fn model_lists() {
        let lim = OracleLimit::default();
        assert!(brute_models(&f(1, &[&[1], &[-1]]), lim).unwrap().is_empty());
        let one: Vec<String> = brute_models(&f(1, &[&[1]]), lim).unwrap().iter().map(|a| a.to_dimacs_line()).collect();
        assert_eq!(one, vec!["1"]);
        let eq: Vec<String> = brute_models(&f(2, &[&[1, -2], &[-1, 2]]), lim)
            .unwrap()
            .iter()
            .map(|a| a.to_dimacs_line())
            .collect();
        assert_eq!(eq, vec!["-1 -2", "1 2"]);
    }

    #[test]
    fn count_matches_models_and_evaluate() {
        let phi = example_diagram_formula();
        let lim = OracleLimit::default();
        let models = brute_models(&phi, lim).unwrap();
        assert_eq!(models.len() as u64, brute_count(&phi, lim).unwrap());
        assert!(models.windows(2).all(|w| w[0] < w[1]));
        for m in &models {
            assert!(evaluate(&phi, m).unwrap());
        }
    }

    #[test]
    fn conditioning_splits_count() {
        // each conditioned formula still ranges over all six variables, so
        // x1 is free in both halves and each count is doubled
        let phi = example_diagram_formula();
        let lim = OracleLimit::default();
        let lo = brute_count(&condition(&phi, &[Var::new(1).neg()]).unwrap(), lim).unwrap();
        let hi = brute_count(&condition(&phi, &[Var::new(1).pos()]).unwrap(), lim).unwrap();
        assert_eq!(lo + hi, 2 * brute_count(&phi, lim).unwrap());
    }

    #[test]
    fn limit_is_enforced() {
        let wide = CnfFormula::from_dimacs_clauses(25, &[]).unwrap();
        assert_eq!(
            brute_count(&wide, OracleLimit::default()),
            Err(OracleError::LimitExceeded { vars: 25, max: 24 })
        );
    }

    #[test]
    fn chi_square_examples() {
        let flat = chi_square_uniform(&[25, 25, 25, 25]).unwrap();
        assert_eq!(flat.statistic, 0.0);
        assert!(!flat.reject);
        let spike = chi_square_uniform(&[1000, 0, 0, 0]).unwrap();
        assert_eq!(spike.statistic, 3000.0);
        assert!(spike.reject);
        let coin = chi_square_uniform(&[60, 40]).unwrap();
        assert!((coin.statistic - 4.0).abs() < 1e-12);
        assert!(!coin.reject);
        assert!((coin.critical - 10.8276).abs() < 1e-3);
        assert!(chi_square_uniform(&[5]).is_err());
        assert!(chi_square_uniform(&[3, 4]).is_err());
    }
}
