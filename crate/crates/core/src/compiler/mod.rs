//! Top-down compilation of CNF formulas into diagrams.
//!
//! The search is generic over a [`TraceBuilder`]: the same recursion either
//! builds diagram nodes or folds model counts.

mod heuristics;

use std::collections::HashMap;

use log::debug;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Node, NodeId};
use crate::equivalence::{construct_core, detect_lit_equ, EquivalenceError};
use crate::formula::{bcp, condition, decompose, non_unit_var_count, Clause, CnfFormula, FormulaError, Lit, Var};

pub use heuristics::{
    dlcp_pick, dlcp_score, dlcp_scores, easy_bound, minfill_order, should_kernelize, PathStats,
    MINFILL_VAR_LIMIT,
};

/// Branching variable selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrderMode {
    /// Static minfill order when the root width is small, DLCP otherwise.
    #[default]
    Auto,
    Minfill,
    Dlcp,
}

#[derive(Clone, Debug)]
pub struct CompilerConfig {
    pub kernelization_enabled: bool,
    /// Kernelize once at the root regardless of the heuristic.
    pub pre_kernelize: bool,
    /// Attempt kernelization at every node.
    pub always_kernelize: bool,
    pub order_mode: OrderMode,
    /// Minfill is used when its width is at most
    /// `min(128, root_non_unit_vars / crossover_divisor)`.
    pub crossover_divisor: usize,
    pub easy_bound_cap: usize,
    pub unit_threshold: usize,
    pub unit_decision_ratio: usize,
    /// Maximum number of edges in the node table.
    pub node_budget: usize,
}

impl Default for CompilerConfig {
    fn default() -> CompilerConfig {
        CompilerConfig {
            kernelization_enabled: true,
            pre_kernelize: true,
            always_kernelize: false,
            order_mode: OrderMode::Auto,
            crossover_divisor: 5,
            easy_bound_cap: 128,
            unit_threshold: 48,
            unit_decision_ratio: 2,
            node_budget: 50_000_000,
        }
    }
}

impl CompilerConfig {
    /// Settings used for direct model counting.
    pub fn counting() -> CompilerConfig {
        CompilerConfig {
            crossover_divisor: 7,
            ..CompilerConfig::default()
        }
    }

    pub fn without_kernelization() -> CompilerConfig {
        CompilerConfig {
            kernelization_enabled: false,
            pre_kernelize: false,
            ..CompilerConfig::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("node budget of {budget} edges exceeded")]
    Resource { budget: usize },
    #[error("internal invariant violated: {0}")]
    Diagram(#[from] DiagramError),
    #[error("internal invariant violated: {0}")]
    Equivalence(#[from] EquivalenceError),
    #[error("internal invariant violated: {0}")]
    Formula(#[from] FormulaError),
    #[error("count is not an integer at {0}")]
    Inexact(String),
}

/// Receives the shape of the search trace bottom-up.
pub(crate) trait TraceBuilder {
    type Out: Clone;

    fn falsum(&mut self) -> Self::Out;
    fn verum(&mut self) -> Self::Out;
    /// `rest` conjoined with literals implied by unit propagation.
    fn implied(&mut self, lits: &[Lit], rest: Self::Out) -> Result<Self::Out, CompileError>;
    fn decision(&mut self, var: Var, lo: Self::Out, hi: Self::Out) -> Result<Self::Out, CompileError>;
    fn decomposed(&mut self, parts: Vec<Self::Out>) -> Result<Self::Out, CompileError>;
    fn kernelized(&mut self, core: Self::Out, equivs: &[(Var, Lit)]) -> Result<Self::Out, CompileError>;
}

/// Counters collected during a search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub decisions: usize,
    pub kernelizations: usize,
    pub cache_hits: usize,
}

pub(crate) struct Search<'c, B: TraceBuilder> {
    cfg: &'c CompilerConfig,
    pub(crate) builder: B,
    cache: HashMap<Vec<Clause>, B::Out>,
    root_non_unit_vars: usize,
    order: Vec<Var>,
    use_dlcp: bool,
    pre_pending: bool,
    pub(crate) stats: SearchStats,
}

impl<'c, B: TraceBuilder> Search<'c, B> {
    pub(crate) fn new(cfg: &'c CompilerConfig, phi: &CnfFormula, builder: B) -> Search<'c, B> {
        let root_non_unit_vars = non_unit_var_count(phi);
        let crossover = 128.min(root_non_unit_vars / cfg.crossover_divisor.max(1));
        let (order, use_dlcp) = match cfg.order_mode {
            OrderMode::Dlcp => (Vec::new(), true),
            _ if phi.num_vars() as usize > MINFILL_VAR_LIMIT => (Vec::new(), true),
            OrderMode::Minfill => (minfill_order(phi).0, false),
            OrderMode::Auto => {
                let (order, width) = minfill_order(phi);
                let use_dlcp = width > crossover;
                debug!("minfill width {width}, crossover {crossover}, dlcp {use_dlcp}");
                (order, use_dlcp)
            }
        };
        Search {
            cfg,
            builder,
            cache: HashMap::new(),
            root_non_unit_vars,
            order,
            use_dlcp,
            pre_pending: cfg.kernelization_enabled && cfg.pre_kernelize,
            stats: SearchStats::default(),
        }
    }

    pub(crate) fn run(&mut self, phi: CnfFormula) -> Result<B::Out, CompileError> {
        self.solve(phi, PathStats::default())
    }

    fn solve(&mut self, phi: CnfFormula, mut path: PathStats) -> Result<B::Out, CompileError> {
        if phi.is_false() {
            return Ok(self.builder.falsum());
        }
        if phi.is_true() {
            return Ok(self.builder.verum());
        }
        let prop = bcp(&phi, &[]);
        if prop.is_conflict() {
            return Ok(self.builder.falsum());
        }
        if prop.implied.is_empty() {
            return self.solve_residual(phi, path);
        }
        let rest = condition(&phi, &prop.implied)?;
        path.units += prop.implied.len();
        let out = self.solve_residual(rest, path)?;
        self.builder.implied(&prop.implied, out)
    }

    /// `phi` has no unit clauses.
    fn solve_residual(&mut self, mut phi: CnfFormula, path: PathStats) -> Result<B::Out, CompileError> {
        if phi.is_false() {
            return Ok(self.builder.falsum());
        }
        if phi.is_true() {
            return Ok(self.builder.verum());
        }
        phi.canonicalize();
        if let Some(hit) = self.cache.get(phi.clauses()) {
            self.stats.cache_hits += 1;
            return Ok(hit.clone());
        }
        let out = self.expand(&phi, path)?;
        self.cache.insert(phi.into_clauses(), out.clone());
        Ok(out)
    }

    fn kernelize_here(&mut self, phi: &CnfFormula, path: PathStats) -> bool {
        if !self.cfg.kernelization_enabled {
            return false;
        }
        if std::mem::take(&mut self.pre_pending) || self.cfg.always_kernelize {
            return true;
        }
        should_kernelize(self.cfg, self.root_non_unit_vars, phi.vars().len(), path)
    }

    fn expand(&mut self, phi: &CnfFormula, path: PathStats) -> Result<B::Out, CompileError> {
        if self.kernelize_here(phi, path) {
            let mut detection = detect_lit_equ(phi);
            if detection.conflict || detection.system.is_contradictory() {
                return Ok(self.builder.falsum());
            }
            let primes = detection.system.prime()?;
            if !primes.is_empty() {
                self.stats.kernelizations += 1;
                let base = phi.with_units(&detection.forced);
                let kernel = construct_core(&base, &primes)?;
                let core = self.solve(kernel.core, PathStats::default())?;
                return self.builder.kernelized(core, &kernel.equivalences);
            }
            if !detection.forced.is_empty() {
                return self.solve(phi.with_units(&detection.forced), path);
            }
        }

        let components = decompose(phi);
        if components.len() > 1 {
            let mut parts = Vec::with_capacity(components.len());
            for component in components {
                parts.push(self.solve_residual(component, path)?);
            }
            return self.builder.decomposed(parts);
        }

        let x = self.pick_var(phi);
        self.stats.decisions += 1;
        let path = PathStats {
            decisions: path.decisions + 1,
            ..path
        };
        let lo = self.solve(condition(phi, &[x.neg()])?, path)?;
        let hi = self.solve(condition(phi, &[x.pos()])?, path)?;
        self.builder.decision(x, lo, hi)
    }

    fn pick_var(&self, phi: &CnfFormula) -> Var {
        let vars = phi.vars();
        if !self.use_dlcp {
            let mut present = vec![false; phi.num_vars() as usize + 1];
            for v in &vars {
                present[v.index() as usize] = true;
            }
            if let Some(v) = self.order.iter().find(|v| present[v.index() as usize]) {
                return *v;
            }
        }
        dlcp_pick(phi).expect("non-constant formula has variables")
    }
}

/// Builds hash-consed diagram nodes.
pub(crate) struct DiagramBuilder {
    pub(crate) diagram: Diagram,
    budget: usize,
}

impl DiagramBuilder {
    fn make(&mut self, node: Node) -> Result<NodeId, CompileError> {
        let id = self.diagram.make_node(node)?;
        if self.diagram.table_edges() > self.budget {
            return Err(CompileError::Resource { budget: self.budget });
        }
        Ok(id)
    }
}

impl TraceBuilder for DiagramBuilder {
    type Out = NodeId;

    fn falsum(&mut self) -> NodeId {
        self.diagram.false_node()
    }

    fn verum(&mut self) -> NodeId {
        self.diagram.true_node()
    }

    fn implied(&mut self, lits: &[Lit], rest: NodeId) -> Result<NodeId, CompileError> {
        let bottom = self.falsum();
        let mut out = rest;
        for lit in lits.iter().rev() {
            let (lo, hi) = if lit.is_positive() { (bottom, out) } else { (out, bottom) };
            out = self.make(Node::Decision { var: lit.var(), lo, hi })?;
        }
        Ok(out)
    }

    fn decision(&mut self, var: Var, lo: NodeId, hi: NodeId) -> Result<NodeId, CompileError> {
        self.make(Node::Decision { var, lo, hi })
    }

    fn decomposed(&mut self, parts: Vec<NodeId>) -> Result<NodeId, CompileError> {
        let bottom = self.falsum();
        let top = self.verum();
        if parts.contains(&bottom) {
            return Ok(bottom);
        }
        let mut parts: Vec<NodeId> = parts.into_iter().filter(|&p| p != top).collect();
        match parts.len() {
            0 => Ok(top),
            1 => Ok(parts.pop().expect("one part")),
            _ => self.make(Node::DecomposedAnd(parts)),
        }
    }

    fn kernelized(&mut self, core: NodeId, equivs: &[(Var, Lit)]) -> Result<NodeId, CompileError> {
        if core == self.falsum() {
            return Ok(core);
        }
        let mut ids = Vec::with_capacity(equivs.len());
        for &(var, lit) in equivs {
            ids.push(self.make(Node::Equiv { var, lit })?);
        }
        if core == self.verum() && ids.len() == 1 {
            return Ok(ids[0]);
        }
        self.make(Node::KernelizedAnd { core, equivs: ids })
    }
}

/// Compilation result with search counters.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub diagram: Diagram,
    pub stats: SearchStats,
}

/// Compiles `phi` into an equivalent diagram over its declared variables.
pub fn compile(phi: &CnfFormula, cfg: &CompilerConfig) -> Result<Diagram, CompileError> {
    compile_with_stats(phi, cfg).map(|c| c.diagram)
}

pub fn compile_with_stats(phi: &CnfFormula, cfg: &CompilerConfig) -> Result<Compiled, CompileError> {
    let builder = DiagramBuilder {
        diagram: Diagram::new(phi.num_vars()),
        budget: cfg.node_budget,
    };
    let mut search = Search::new(cfg, phi, builder);
    let root = search.run(phi.clone())?;
    let stats = search.stats;
    let mut diagram = search.builder.diagram;
    diagram.set_root(root);
    let diagram = diagram.compact();
    debug!("compiled: {} ({stats:?})", diagram.stats());
    Ok(Compiled { diagram, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{evaluate, Assignment};

    fn f(n: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
    }

    fn all_assignments(n: u32) -> impl Iterator<Item = Assignment> {
        (0u64..1 << n).map(move |bits| {
            let lits: Vec<Lit> = (0..n).map(|i| Lit::new(Var::new(i + 1), bits >> i & 1 == 1)).collect();
            Assignment::from_lits(n, &lits)
        })
    }

    fn assert_equivalent(phi: &CnfFormula, cfg: &CompilerConfig) -> Diagram {
        let d = compile(phi, cfg).unwrap();
        assert!(d.validate().is_ok(), "{:?}", d.validate());
        for omega in all_assignments(phi.num_vars()) {
            assert_eq!(d.evaluate(d.root(), &omega).unwrap(), evaluate(phi, &omega).unwrap());
        }
        d
    }

    #[test]
    fn constants() {
        let d = compile(&CnfFormula::constant_false(3), &CompilerConfig::default()).unwrap();
        assert_eq!(d.node(d.root()), &Node::False);
        let d = compile(&f(3, &[]), &CompilerConfig::default()).unwrap();
        assert_eq!(d.node(d.root()), &Node::True);
        let d = compile(&f(1, &[&[1], &[-1]]), &CompilerConfig::default()).unwrap();
        assert_eq!(d.node(d.root()), &Node::False);
    }

    #[test]
    fn single_equivalence_compiles_to_equiv_node() {
        let phi = f(2, &[&[1, -2], &[-1, 2]]);
        let d = assert_equivalent(&phi, &CompilerConfig::default());
        assert_eq!(
            d.node(d.root()),
            &Node::Equiv { var: Var::new(1), lit: Var::new(2).pos() }
        );
    }

    #[test]
    fn parity_chain_is_kernelized() {
        // x1 <-> -x4, x2 <-> -x5, x1 xor x2 xor x3
        let phi = f(
            5,
            &[
                &[1, 4], &[-1, -4], &[2, 5], &[-2, -5],
                &[1, 2, 3], &[1, -2, -3], &[-1, 2, -3], &[-1, -2, 3],
            ],
        );
        let cfg = CompilerConfig {
            always_kernelize: true,
            ..CompilerConfig::default()
        };
        let d = assert_equivalent(&phi, &cfg);
        assert!(d.stats().kernelized_nodes >= 1);
        let d = assert_equivalent(&phi, &CompilerConfig::default());
        assert!(d.stats().kernelized_nodes >= 1);
        let d = assert_equivalent(&phi, &CompilerConfig::without_kernelization());
        assert_eq!(d.stats().kernelized_nodes, 0);
    }

    #[test]
    fn disjoint_parts_decompose() {
        let phi = f(4, &[&[1, 2], &[3, 4]]);
        let d = assert_equivalent(&phi, &CompilerConfig::without_kernelization());
        assert!(matches!(d.node(d.root()), Node::DecomposedAnd(parts) if parts.len() == 2));
    }

    #[test]
    fn units_become_decisions() {
        let phi = f(3, &[&[1], &[-1, 2, 3]]);
        let d = assert_equivalent(&phi, &CompilerConfig::without_kernelization());
        match d.node(d.root()) {
            Node::Decision { var, lo, .. } => {
                assert_eq!(*var, Var::new(1));
                assert_eq!(d.node(*lo), &Node::False);
            }
            other => panic!("unexpected root {other:?}"),
        }
    }

    #[test]
    fn every_order_mode_is_equivalent() {
        let phi = f(
            6,
            &[&[1, -2, 3], &[-1, 4], &[2, 5, -6], &[-3, -5], &[4, 6, 1], &[-4, -6, 2]],
        );
        for mode in [OrderMode::Auto, OrderMode::Minfill, OrderMode::Dlcp] {
            for kernelize in [false, true] {
                let cfg = CompilerConfig {
                    order_mode: mode,
                    kernelization_enabled: kernelize,
                    always_kernelize: kernelize,
                    ..CompilerConfig::default()
                };
                assert_equivalent(&phi, &cfg);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let phi = f(6, &[&[1, 2, 3], &[-1, 4, 5], &[2, -5, 6], &[-3, -4, -6]]);
        let cfg = CompilerConfig {
            node_budget: 2,
            ..CompilerConfig::default()
        };
        assert!(matches!(compile(&phi, &cfg), Err(CompileError::Resource { budget: 2 })));
    }
}
