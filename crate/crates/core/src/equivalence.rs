//! Literal equivalences: detection by implicit unit propagation, a
//! negation-symmetric union-find yielding prime equivalences, and core
//! construction by literal substitution.

use thiserror::Error;

use crate::compiler::dlcp_scores;
use crate::formula::{bcp, condition, Clause, CnfFormula, Lit, Propagator, Var};

/// Number of non-binary-clause variables probed, chosen by DLCP score.
pub const EXTRA_PROBES: usize = 64;

/// Components with more clauses than this are not probed.
pub const PROBE_CLAUSE_LIMIT: usize = 50_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EquivalenceError {
    #[error("equivalence system merges a literal with its negation")]
    Contradiction,
    #[error("({0}, {1}) is not a prime equivalence")]
    NotPrime(Var, Lit),
    #[error("substituted variable {0} still occurs in the core")]
    SubstitutionLeak(Var),
}

/// Union-find over signed literals.
///
/// Every class is rooted at its literal of smallest variable, and classes
/// come in mirrored pairs, so `find(¬l) = ¬find(l)` holds after any
/// sequence of merges.
#[derive(Clone, Debug)]
pub struct EquivalenceSystem {
    parent: Vec<u32>,
    contradiction: bool,
}

impl EquivalenceSystem {
    pub fn new(num_vars: u32) -> EquivalenceSystem {
        let n = 2 * (num_vars as usize + 1);
        EquivalenceSystem {
            parent: (0..n as u32).collect(),
            contradiction: false,
        }
    }

    pub fn from_pairs(num_vars: u32, pairs: &[(Lit, Lit)]) -> EquivalenceSystem {
        let mut sys = EquivalenceSystem::new(num_vars);
        for &(a, b) in pairs {
            sys.merge(a, b);
        }
        sys
    }

    pub fn num_vars(&self) -> u32 {
        (self.parent.len() / 2 - 1) as u32
    }

    pub fn find(&mut self, lit: Lit) -> Lit {
        let mut x = lit.code();
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        Lit::from_code(x)
    }

    /// Records `a ↔ b` together with `¬a ↔ ¬b`.
    pub fn merge(&mut self, a: Lit, b: Lit) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if ra == !rb {
            self.contradiction = true;
            return;
        }
        let (root, child) = if ra.var() < rb.var() { (ra, rb) } else { (rb, ra) };
        self.parent[child.code()] = root.code() as u32;
        self.parent[(!child).code()] = (!root).code() as u32;
    }

    pub fn is_contradictory(&self) -> bool {
        self.contradiction
    }

    /// Prime equivalences: for each class whose smallest variable is `x`,
    /// one pair `x ↔ l` per other member, sorted by `x` then `var(l)`.
    pub fn prime(&mut self) -> Result<Vec<(Var, Lit)>, EquivalenceError> {
        if self.contradiction {
            return Err(EquivalenceError::Contradiction);
        }
        let mut out = Vec::new();
        for v in 1..=self.num_vars() {
            let var = Var::new(v);
            let root = self.find(var.pos());
            if root.var() == var {
                continue;
            }
            // var ≡ root, so root.var() ≡ var with the sign of root
            let lit = if root.is_positive() { var.pos() } else { var.neg() };
            out.push((root.var(), lit));
        }
        out.sort();
        Ok(out)
    }
}

/// Result of probing a formula for literal equivalences.
#[derive(Clone, Debug)]
pub struct Detection {
    pub system: EquivalenceSystem,
    /// Literals implied by the formula (root units and failed-literal
    /// consequences), in discovery order.
    pub forced: Vec<Lit>,
    /// The formula was found unsatisfiable.
    pub conflict: bool,
}

fn probe_candidates(phi: &CnfFormula) -> Vec<Var> {
    let n = phi.num_vars() as usize;
    let mut in_binary = vec![false; n + 1];
    for clause in phi.clauses().iter().filter(|c| c.len() == 2) {
        for lit in clause.lits() {
            in_binary[lit.var().index() as usize] = true;
        }
    }
    let scores = dlcp_scores(phi);
    let mut rest: Vec<Var> = phi
        .vars()
        .into_iter()
        .filter(|v| !in_binary[v.index() as usize])
        .collect();
    rest.sort_by(|a, b| {
        scores[b.index() as usize]
            .total_cmp(&scores[a.index() as usize])
            .then(a.cmp(b))
    });
    rest.truncate(EXTRA_PROBES);
    let mut out: Vec<Var> = (1..=n as u32)
        .filter(|&v| in_binary[v as usize])
        .map(Var::new)
        .collect();
    out.extend(rest);
    out.sort();
    out
}

/// Probes each candidate variable `x` with unit propagation on `x` and on
/// `¬x`. A literal `l` implied by `x` whose negation is implied by `¬x`
/// yields `x ↔ l`; a probe that conflicts forces the opposite literal.
pub fn detect_lit_equ(phi: &CnfFormula) -> Detection {
    let mut system = EquivalenceSystem::new(phi.num_vars());
    let mut forced = Vec::new();
    let root = bcp(phi, &[]);
    if root.is_conflict() {
        return Detection {
            system,
            forced,
            conflict: true,
        };
    }
    forced.extend_from_slice(&root.implied);
    let reduced = condition(phi, &root.implied).expect("propagated literals are consistent");
    if reduced.is_constant() || reduced.clauses().len() > PROBE_CLAUSE_LIMIT {
        return Detection {
            system,
            forced,
            conflict: reduced.is_false(),
        };
    }

    let n = phi.num_vars() as usize;
    let mut mark = vec![false; 2 * (n + 1)];
    let mut propagator = Propagator::new(&reduced);
    for x in probe_candidates(&reduced) {
        let pos = propagator.propagate(&[x.pos()]);
        let neg = propagator.propagate(&[x.neg()]);
        match (pos.is_conflict(), neg.is_conflict()) {
            (true, true) => {
                return Detection {
                    system,
                    forced,
                    conflict: true,
                }
            }
            (true, false) => forced.extend_from_slice(&neg.implied),
            (false, true) => forced.extend_from_slice(&pos.implied),
            (false, false) => {
                for lit in &neg.implied {
                    mark[lit.code()] = true;
                }
                for &lit in pos.implied.iter().skip(1) {
                    if mark[(!lit).code()] {
                        system.merge(x.pos(), lit);
                    }
                }
                for lit in &neg.implied {
                    mark[lit.code()] = false;
                }
            }
        }
    }

    let mut seen = vec![false; 2 * (n + 1)];
    let mut conflict = false;
    forced.retain(|l| {
        conflict |= seen[(!*l).code()];
        !std::mem::replace(&mut seen[l.code()], true)
    });
    Detection {
        system,
        forced,
        conflict,
    }
}

/// A formula factored as `core ∧ ⋀ (x ↔ l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelizationResult {
    pub core: CnfFormula,
    pub equivalences: Vec<(Var, Lit)>,
}

fn check_prime(num_vars: u32, primes: &[(Var, Lit)]) -> Result<(), EquivalenceError> {
    let mut right = vec![false; num_vars as usize + 1];
    for &(x, l) in primes {
        if x >= l.var() || l.var().index() > num_vars || right[l.var().index() as usize] {
            return Err(EquivalenceError::NotPrime(x, l));
        }
        right[l.var().index() as usize] = true;
    }
    if let Some(&(x, l)) = primes.iter().find(|(x, _)| right[x.index() as usize]) {
        return Err(EquivalenceError::NotPrime(x, l));
    }
    Ok(())
}

/// Substitutes every `l` (resp. `¬l`) by `x` (resp. `¬x`) for each prime
/// pair `x ↔ l`, then normalizes: tautologies and repeated literals and
/// clauses are dropped and implied units are propagated into the rest.
/// Implied units stay in the core as unit clauses.
pub fn construct_core(
    phi: &CnfFormula,
    primes: &[(Var, Lit)],
) -> Result<KernelizationResult, EquivalenceError> {
    let n = phi.num_vars();
    check_prime(n, primes)?;
    if phi.is_false() {
        return Ok(KernelizationResult {
            core: phi.clone(),
            equivalences: primes.to_vec(),
        });
    }
    // image of the positive literal of each variable
    let mut image: Vec<Lit> = (0..=n as usize).map(|v| Lit::from_code(v << 1)).collect();
    for &(x, l) in primes {
        image[l.var().index() as usize] = if l.is_positive() { x.pos() } else { x.neg() };
    }
    let substituted = phi.clauses().iter().filter_map(|clause| {
        Clause::normalized(clause.lits().iter().map(|&lit| {
            let img = image[lit.var().index() as usize];
            if lit.is_positive() {
                img
            } else {
                !img
            }
        }))
    });
    let mut core = CnfFormula::new(n, substituted).expect("substitution stays in range");
    core.canonicalize();

    let units = bcp(&core, &[]);
    let mut core = if units.is_conflict() {
        CnfFormula::constant_false(n)
    } else {
        condition(&core, &units.implied)
            .expect("propagated literals are consistent")
            .with_units(&units.implied)
    };
    core.canonicalize();

    for &(_, l) in primes {
        if core.clauses().iter().any(|c| c.iter().any(|m| m.var() == l.var())) {
            return Err(EquivalenceError::SubstitutionLeak(l.var()));
        }
    }
    Ok(KernelizationResult {
        core,
        equivalences: primes.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(v: i32) -> Lit {
        Lit::from_dimacs(v)
    }

    fn f(n: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
    }

    fn example_one() -> CnfFormula {
        // (x1 ∨ ¬x3 ∨ x4 ∨ x7) ∧ (x1 ∨ x3 ∨ x5) ∧ (¬x1 ↔ x3) ∧ (¬x4 ↔ x3)
        //   ∧ (¬x2 ↔ ¬x6) ∧ (x5 ↔ x5)
        f(
            7,
            &[
                &[1, -3, 4, 7],
                &[1, 3, 5],
                &[1, 3],
                &[-1, -3],
                &[4, 3],
                &[-4, -3],
                &[2, -6],
                &[-2, 6],
                &[5, -5],
            ],
        )
    }

    fn expected_primes() -> Vec<(Var, Lit)> {
        vec![
            (Var::new(1), lit(-3)),
            (Var::new(1), lit(4)),
            (Var::new(2), lit(6)),
        ]
    }

    #[test]
    fn prime_of_listed_system() {
        let mut sys = EquivalenceSystem::from_pairs(
            6,
            &[(lit(-1), lit(3)), (lit(-4), lit(3)), (lit(-2), lit(-6)), (lit(5), lit(5))],
        );
        assert_eq!(sys.prime().unwrap(), expected_primes());
    }

    #[test]
    fn prime_trivial_cases() {
        assert!(EquivalenceSystem::new(3).prime().unwrap().is_empty());
        let mut sys = EquivalenceSystem::from_pairs(2, &[(lit(2), lit(1))]);
        assert_eq!(sys.prime().unwrap(), vec![(Var::new(1), lit(2))]);
    }

    #[test]
    fn contradiction_is_flagged() {
        let mut sys = EquivalenceSystem::from_pairs(2, &[(lit(1), lit(2)), (lit(2), lit(-1))]);
        assert!(sys.is_contradictory());
        assert_eq!(sys.prime(), Err(EquivalenceError::Contradiction));
    }

    #[test]
    fn negation_symmetry_holds() {
        let mut sys = EquivalenceSystem::from_pairs(
            5,
            &[(lit(3), lit(-5)), (lit(-4), lit(2)), (lit(5), lit(4)), (lit(1), lit(-2))],
        );
        for v in 1..=5 {
            let l = lit(v);
            let r = sys.find(l);
            assert_eq!(sys.find(!l), !r);
        }
    }

    #[test]
    fn detects_binary_equivalence() {
        let det = detect_lit_equ(&f(2, &[&[-1, 2], &[1, -2]]));
        assert!(!det.conflict);
        let mut sys = det.system;
        assert_eq!(sys.prime().unwrap(), vec![(Var::new(1), lit(2))]);
    }

    #[test]
    fn no_equivalence_in_single_clause() {
        let mut det = detect_lit_equ(&f(2, &[&[1, 2]]));
        assert!(det.system.prime().unwrap().is_empty());
        assert!(det.forced.is_empty());
    }

    #[test]
    fn example_one_detection_and_core() {
        let phi = example_one();
        let mut det = detect_lit_equ(&phi);
        assert!(!det.conflict && det.forced.is_empty());
        let primes = det.system.prime().unwrap();
        assert_eq!(primes, expected_primes());
        let kr = construct_core(&phi, &primes).unwrap();
        assert_eq!(kr.core, f(7, &[&[1, 7]]));
    }

    #[test]
    fn failed_literal_is_forced() {
        // x1 → x2, x1 → ¬x2: x1 fails
        let det = detect_lit_equ(&f(3, &[&[-1, 2], &[-1, -2], &[1, 3, 2]]));
        assert!(!det.conflict);
        assert_eq!(det.forced[0], lit(-1));
    }

    #[test]
    fn unsat_detected() {
        let det = detect_lit_equ(&f(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]));
        assert!(det.conflict);
    }

    #[test]
    fn core_identity_without_equivalences() {
        let phi = f(3, &[&[3, 1], &[2, -1]]);
        let kr = construct_core(&phi, &[]).unwrap();
        let mut expected = phi.clone();
        expected.canonicalize();
        assert_eq!(kr.core, expected);
    }

    #[test]
    fn example_four_core_is_parity() {
        let phi = f(
            5,
            &[&[-1, -2, 3], &[-1, 2, -3], &[1, -2, -3], &[1, 2, 3], &[-1, -4], &[1, 4], &[-2, -5], &[2, 5]],
        );
        let mut det = detect_lit_equ(&phi);
        let primes = det.system.prime().unwrap();
        assert_eq!(primes, vec![(Var::new(1), lit(-4)), (Var::new(2), lit(-5))]);
        let kr = construct_core(&phi, &primes).unwrap();
        let mut parity = f(5, &[&[1, 2, 3], &[1, -2, -3], &[-1, 2, -3], &[-1, -2, 3]]);
        parity.canonicalize();
        assert_eq!(kr.core, parity);
    }

    #[test]
    fn core_rejects_non_prime_input() {
        let phi = f(3, &[&[1, 2]]);
        assert!(matches!(
            construct_core(&phi, &[(Var::new(2), lit(1))]),
            Err(EquivalenceError::NotPrime(..))
        ));
        assert!(matches!(
            construct_core(&phi, &[(Var::new(1), lit(2)), (Var::new(2), lit(3))]),
            Err(EquivalenceError::NotPrime(..))
        ));
    }
}
