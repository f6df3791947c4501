#![allow(dead_code)]

use ccdd::formula::{Clause, CnfFormula, Lit, Var};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::Rng;

pub fn f(n: u32, clauses: &[&[i32]]) -> CnfFormula {
    CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
}

/// Parity x1 ⊕ x2 ⊕ x3 with x1 ↔ ¬x4 and x2 ↔ ¬x5.
pub fn parity_example() -> CnfFormula {
    f(
        5,
        &[&[-1, -2, 3], &[-1, 2, -3], &[1, -2, -3], &[1, 2, 3], &[-1, -4], &[1, 4], &[-2, -5], &[2, 5]],
    )
}

/// (x1 ∨ ¬x3 ∨ x4 ∨ x7) ∧ (x1 ∨ x3 ∨ x5) ∧ (¬x1 ↔ x3) ∧ (¬x4 ↔ x3) ∧ (¬x2 ↔ ¬x6)
pub fn substitution_example() -> CnfFormula {
    f(
        7,
        &[&[1, -3, 4, 7], &[1, 3, 5], &[1, 3], &[-1, -3], &[4, 3], &[-4, -3], &[2, -6], &[-2, 6], &[5, -5]],
    )
}

/// Formula of the six-variable example diagram: with x1, x3 ↔ ¬x4 and
/// x3 ↔ x5; without x1, x5 and (x2 → x3 ↔ ¬x4) and (¬x2 → x4); always
/// x5 ↔ x6.
pub fn example_diagram_formula() -> CnfFormula {
    f(
        6,
        &[
            &[-1, 3, 4], &[-1, -3, -4], &[-1, -3, 5], &[-1, 3, -5],
            &[-5, 6], &[5, -6], &[1, 5], &[1, 2, 4], &[1, -2, 3, 4], &[1, -2, -3, -4],
        ],
    )
}

/// `m` clauses over `n` variables, widths uniform in `widths`, distinct
/// variables per clause, uniform signs.
pub fn random_cnf<R: Rng>(rng: &mut R, n: u32, m: usize, widths: std::ops::RangeInclusive<usize>) -> CnfFormula {
    let clauses: Vec<Clause> = (0..m)
        .map(|_| {
            let w = rng.random_range(widths.clone()).min(n as usize);
            let lits = sample(rng, n as usize, w)
                .into_iter()
                .map(|i| Lit::new(Var::new(i as u32 + 1), rng.random_bool(0.5)))
                .collect();
            Clause::new(lits)
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

/// Uniform random k-SAT.
pub fn random_ksat<R: Rng>(rng: &mut R, n: u32, m: usize, k: usize) -> CnfFormula {
    random_cnf(rng, n, m, k..=k)
}

/// `x_i ↔ ¬x_{i+k}` for every `i ≤ n - k`, plus `extra` random 3-clauses
/// over `x1..xk`.
pub fn equivalence_chain<R: Rng>(rng: &mut R, k: u32, blocks: u32, extra: usize) -> CnfFormula {
    let n = k * blocks;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    for i in 1..=(n - k) as i32 {
        let j = i + k as i32;
        clauses.push(vec![i, j]);
        clauses.push(vec![-i, -j]);
    }
    let core = random_ksat(rng, k, extra, 3);
    for c in core.clauses() {
        clauses.push(c.iter().map(|l| l.to_dimacs()).collect());
    }
    let refs: Vec<&[i32]> = clauses.iter().map(Vec::as_slice).collect();
    f(n, &refs)
}

/// Small CNFs for property tests.
pub fn arb_cnf(max_vars: u32, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let lit = (1..=n as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        let clause = prop::collection::vec(lit, 1..=4);
        prop::collection::vec(clause, 0..=max_clauses).prop_map(move |cs| {
            let refs: Vec<&[i32]> = cs.iter().map(Vec::as_slice).collect();
            f(n, &refs)
        })
    })
}

/// CNFs rich in binary equivalences, to exercise kernelization.
pub fn arb_equivalence_cnf(max_vars: u32) -> impl Strategy<Value = CnfFormula> {
    (3..=max_vars).prop_flat_map(move |n| {
        let v = 1..=n as i32;
        let eq = (v.clone(), v.clone(), any::<bool>()).prop_map(|(a, b, s)| {
            let b = if s { b } else { -b };
            vec![vec![a, -b], vec![-a, b]]
        });
        let lit = (v, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
        (
            prop::collection::vec(eq, 0..=n as usize),
            prop::collection::vec(prop::collection::vec(lit, 2..=3), 0..=2 * n as usize),
        )
            .prop_map(move |(eqs, rest)| {
                let mut cs: Vec<Vec<i32>> = eqs.into_iter().flatten().collect();
                cs.extend(rest);
                let refs: Vec<&[i32]> = cs.iter().map(Vec::as_slice).collect();
                f(n, &refs)
            })
    })
}
