//! Branching and kernelization heuristics.

use crate::formula::{CnfFormula, Var};

use super::CompilerConfig;

/// Above this many variables the static minfill order is not computed and
/// branching falls back to DLCP.
pub const MINFILL_VAR_LIMIT: usize = 4000;

/// Counters along the search path since the last kernelized node (or the
/// root).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PathStats {
    /// Literals forced by unit propagation.
    pub units: usize,
    pub decisions: usize,
}

/// `min(easy_bound_cap, root_non_unit_vars / 2)`
pub fn easy_bound(cfg: &CompilerConfig, root_non_unit_vars: usize) -> usize {
    cfg.easy_bound_cap.min(root_non_unit_vars / 2)
}

/// Formulas with at most `easy_bound` variables are never kernelized.
/// Otherwise kernelize when the path since the last kernelization has seen
/// more than `unit_threshold` implied units and more than
/// `unit_decision_ratio` times as many units as decisions.
pub fn should_kernelize(
    cfg: &CompilerConfig,
    root_non_unit_vars: usize,
    formula_vars: usize,
    path: PathStats,
) -> bool {
    if formula_vars <= easy_bound(cfg, root_non_unit_vars) {
        return false;
    }
    path.units > cfg.unit_threshold && path.units > cfg.unit_decision_ratio * path.decisions
}

/// DLCP score of every variable (index 0 unused): the product of the
/// weighted positive and negative occurrence counts. Binary clauses weigh
/// 2, longer clauses of length `m` weigh `1/m`, unit clauses weigh 0.
pub fn dlcp_scores(phi: &CnfFormula) -> Vec<f64> {
    let n = phi.num_vars() as usize;
    let mut pos = vec![0.0f64; n + 1];
    let mut neg = vec![0.0f64; n + 1];
    for clause in phi.clauses() {
        let weight = match clause.len() {
            0 | 1 => continue,
            2 => 2.0,
            m => 1.0 / m as f64,
        };
        for lit in clause.lits() {
            let v = lit.var().index() as usize;
            if lit.is_positive() {
                pos[v] += weight;
            } else {
                neg[v] += weight;
            }
        }
    }
    pos.iter().zip(&neg).map(|(p, q)| p * q).collect()
}

pub fn dlcp_score(phi: &CnfFormula, x: Var) -> f64 {
    dlcp_scores(phi)[x.index() as usize]
}

/// Variable of maximum DLCP score among those occurring in `phi`, ties
/// going to the smallest index.
pub fn dlcp_pick(phi: &CnfFormula) -> Option<Var> {
    let scores = dlcp_scores(phi);
    let mut best: Option<(Var, f64)> = None;
    for v in phi.vars() {
        let s = scores[v.index() as usize];
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((v, s));
        }
    }
    best.map(|(v, _)| v)
}

/// Greedy minimum-fill elimination order of the primal graph, ties broken
/// by smallest index. Variables not occurring in `phi` are appended in
/// index order. Returns the order and its induced width.
pub fn minfill_order(phi: &CnfFormula) -> (Vec<Var>, usize) {
    let n = phi.num_vars() as usize;
    let present = phi.vars();
    let mut adjacent = vec![vec![false; n + 1]; n + 1];
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for clause in phi.clauses() {
        for (i, a) in clause.iter().enumerate() {
            for b in &clause[i + 1..] {
                let (a, b) = (a.var().index() as usize, b.var().index() as usize);
                if a != b && !adjacent[a][b] {
                    adjacent[a][b] = true;
                    adjacent[b][a] = true;
                    neighbours[a].push(b);
                    neighbours[b].push(a);
                }
            }
        }
    }
    let mut occurs = vec![false; n + 1];
    for v in &present {
        occurs[v.index() as usize] = true;
    }
    let fill = |v: usize, adjacent: &Vec<Vec<bool>>, neighbours: &Vec<Vec<usize>>| {
        let ns = &neighbours[v];
        let mut missing = 0usize;
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !adjacent[a][b] {
                    missing += 1;
                }
            }
        }
        missing
    };

    let mut order = Vec::with_capacity(n);
    let mut width = 0;
    let mut remaining: Vec<usize> = present.iter().map(|v| v.index() as usize).collect();
    while !remaining.is_empty() {
        let (pos, &v) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| (fill(v, &adjacent, &neighbours), v))
            .expect("non-empty");
        remaining.remove(pos);
        let ns = std::mem::take(&mut neighbours[v]);
        width = width.max(ns.len());
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                if !adjacent[a][b] {
                    adjacent[a][b] = true;
                    adjacent[b][a] = true;
                    neighbours[a].push(b);
                    neighbours[b].push(a);
                }
            }
        }
        for &a in &ns {
            neighbours[a].retain(|&b| b != v);
            adjacent[a][v] = false;
        }
        order.push(Var::new(v as u32));
    }
    order.extend((1..=n).filter(|&v| !occurs[v]).map(|v| Var::new(v as u32)));
    (order, width)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
    }

    fn vars(v: &[u32]) -> Vec<Var> {
        v.iter().map(|&i| Var::new(i)).collect()
    }

    #[test]
    fn easy_formulas_are_not_kernelized() {
        let cfg = CompilerConfig::default();
        let path = PathStats { units: 60, decisions: 10 };
        assert_eq!(easy_bound(&cfg, 300), 128);
        assert!(!should_kernelize(&cfg, 300, 100, path));
    }

    #[test]
    fn unit_rich_paths_are_kernelized() {
        let cfg = CompilerConfig::default();
        assert!(should_kernelize(&cfg, 300, 200, PathStats { units: 60, decisions: 10 }));
        assert!(!should_kernelize(&cfg, 300, 200, PathStats { units: 60, decisions: 40 }));
        assert!(!should_kernelize(&cfg, 300, 200, PathStats { units: 48, decisions: 0 }));
    }

    #[test]
    fn dlcp_weights() {
        let phi = f(3, &[&[1, 2], &[-1, 3], &[1, -2, -3]]);
        assert!((dlcp_score(&phi, Var::new(1)) - 14.0 / 3.0).abs() < 1e-12);
        // x3: positive 2, negative 1/3
        assert!((dlcp_score(&phi, Var::new(3)) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(dlcp_pick(&phi), Some(Var::new(1)));
        let pure = f(2, &[&[1, 2], &[1, -2]]);
        assert_eq!(dlcp_score(&pure, Var::new(1)), 0.0);
        let unit = f(2, &[&[1], &[-1, 2, 2]]);
        assert_eq!(dlcp_score(&f(2, &[&[1], &[-1]]), Var::new(1)), 0.0);
        assert_eq!(dlcp_score(&unit, Var::new(1)), 0.0);
    }

    #[test]
    fn dlcp_ties_go_to_smallest_index() {
        let phi = f(3, &[&[3, 2, 1], &[-3, -2, -1]]);
        assert_eq!(dlcp_pick(&phi), Some(Var::new(1)));
    }

    #[test]
    fn minfill_on_small_graphs() {
        let (order, width) = minfill_order(&f(3, &[&[1, 2], &[2, 3]]));
        assert_eq!(width, 1);
        assert_eq!(order, vars(&[1, 2, 3]));
        let (_, width) = minfill_order(&f(3, &[&[1, 2], &[2, 3], &[1, 3]]));
        assert_eq!(width, 2);
        let (order, _) = minfill_order(&f(5, &[&[2, 3]]));
        assert_eq!(order, vars(&[2, 3, 1, 4, 5]));
    }

    #[test]
    fn minfill_cycle() {
        // 4-cycle needs one fill edge: width 2
        let (order, width) = minfill_order(&f(4, &[&[1, 2], &[2, 3], &[3, 4], &[4, 1]]));
        assert_eq!(width, 2);
        assert_eq!(order[0], Var::new(1));
    }
}
