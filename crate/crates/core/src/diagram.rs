//! Hash-consed CCDD node store.
//!
//! Nodes are appended in topological order: every child id is smaller
//! than its parent's id. Each node caches its sorted variable set, which
//! makes the local invariants (disjoint conjuncts, core/equivalence
//! separation, fresh decision variables) cheap to check at construction.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::formula::{Assignment, FormulaError, Lit, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    False,
    True,
    /// The literal equivalence `var ↔ lit`.
    Equiv { var: Var, lit: Lit },
    /// `(¬var ∧ lo) ∨ (var ∧ hi)`.
    Decision { var: Var, lo: NodeId, hi: NodeId },
    /// Conjunction of variable-disjoint children.
    DecomposedAnd(Vec<NodeId>),
    /// Conjunction of a core with prime equivalences whose right-hand
    /// variables do not occur in the core.
    KernelizedAnd { core: NodeId, equivs: Vec<NodeId> },
}

impl Node {
    pub fn children(&self) -> Vec<NodeId> {
        match self {
            Node::False | Node::True | Node::Equiv { .. } => Vec::new(),
            Node::Decision { lo, hi, .. } => vec![*lo, *hi],
            Node::DecomposedAnd(children) => children.clone(),
            Node::KernelizedAnd { core, equivs } => {
                let mut out = Vec::with_capacity(equivs.len() + 1);
                out.push(*core);
                out.extend_from_slice(equivs);
                out
            }
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Node::False | Node::True | Node::Equiv { .. } => 0,
            Node::Decision { .. } => 2,
            Node::DecomposedAnd(children) => children.len(),
            Node::KernelizedAnd { equivs, .. } => equivs.len() + 1,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("child {0} does not exist yet")]
    UnknownChild(NodeId),
    #[error("variable {0} is outside the diagram scope")]
    VarOutOfScope(Var),
    #[error("equivalence {0} ↔ {1} relates a variable to itself")]
    TrivialEquivalence(Var, Lit),
    #[error("decision variable {0} occurs below its decision node")]
    DecisionVarInChild(Var),
    #[error("decomposed conjunction needs at least two children")]
    TooFewChildren,
    #[error("decomposed conjunction children share variable {0}")]
    SharedVariable(Var),
    #[error("kernelized conjunction needs at least one equivalence child")]
    NoEquivalences,
    #[error("kernelized child {0} is not an equivalence node")]
    NotEquivalence(NodeId),
    #[error("equivalence {0} ↔ {1} breaks the prime-system shape")]
    NotPrime(Var, Lit),
    #[error("substituted variable {0} occurs in the core")]
    CoreMentionsSubstituted(Var),
    #[error("decision variable {0} repeats on a root-to-leaf path")]
    ReadOnce(Var),
    #[error("diagram has no root")]
    NoRoot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub node: NodeId,
    pub error: DiagramError,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DiagramStats {
    pub nodes: usize,
    pub edges: usize,
    pub kernelized_nodes: usize,
    pub decisions: usize,
    pub max_depth: usize,
}

impl fmt::Display for DiagramStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes={} edges={} knodes={} decisions={} max_depth={}",
            self.nodes, self.edges, self.kernelized_nodes, self.decisions, self.max_depth
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: reference to undefined node {id}")]
    ForwardReference { line: usize, id: usize },
    #[error("line {line}: {error}")]
    Invalid { line: usize, error: DiagramError },
    #[error("diagram fails validation: {0}")]
    Validation(DiagramError),
}

#[derive(Clone, Debug)]
pub struct Diagram {
    num_vars: u32,
    nodes: Vec<Node>,
    vars: Vec<Vec<Var>>,
    unique: HashMap<Node, NodeId>,
    root: Option<NodeId>,
    edges: usize,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Diagram) -> bool {
        self.num_vars == other.num_vars && self.nodes == other.nodes && self.root == other.root
    }
}

impl Eq for Diagram {}

fn sorted_union<'a>(sets: impl Iterator<Item = &'a [Var]>) -> Vec<Var> {
    let mut out: Vec<Var> = sets.flatten().copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn first_common(a: &[Var], b: &[Var]) -> Option<Var> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

impl Diagram {
    /// An empty diagram over variables `1..=num_vars`.
    pub fn new(num_vars: u32) -> Diagram {
        Diagram {
            num_vars,
            nodes: Vec::new(),
            vars: Vec::new(),
            unique: HashMap::new(),
            root: None,
            edges: 0,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.root.expect("diagram has no root")
    }

    pub fn set_root(&mut self, root: NodeId) {
        assert!(root.index() < self.nodes.len());
        self.root = Some(root);
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    /// Sorted variables occurring under `id`.
    pub fn vars(&self, id: NodeId) -> &[Var] {
        &self.vars[id.index()]
    }

    /// Total child references over the whole node table.
    pub fn table_edges(&self) -> usize {
        self.edges
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn false_node(&mut self) -> NodeId {
        self.make_node(Node::False).expect("leaf is always valid")
    }

    pub fn true_node(&mut self) -> NodeId {
        self.make_node(Node::True).expect("leaf is always valid")
    }

    fn check_child(&self, id: NodeId) -> Result<(), DiagramError> {
        if id.index() < self.nodes.len() {
            Ok(())
        } else {
            Err(DiagramError::UnknownChild(id))
        }
    }

    fn check_var(&self, var: Var) -> Result<(), DiagramError> {
        if var.index() <= self.num_vars {
            Ok(())
        } else {
            Err(DiagramError::VarOutOfScope(var))
        }
    }

    /// Checks the local invariants of `node` and returns its variable set.
    fn local_check(&self, node: &Node) -> Result<Vec<Var>, DiagramError> {
        for child in node.children() {
            self.check_child(child)?;
        }
        match node {
            Node::False | Node::True => Ok(Vec::new()),
            Node::Equiv { var, lit } => {
                self.check_var(*var)?;
                self.check_var(lit.var())?;
                if *var == lit.var() {
                    return Err(DiagramError::TrivialEquivalence(*var, *lit));
                }
                let mut vars = vec![*var, lit.var()];
                vars.sort_unstable();
                Ok(vars)
            }
            Node::Decision { var, lo, hi } => {
                self.check_var(*var)?;
                for child in [lo, hi] {
                    if self.vars(*child).binary_search(var).is_ok() {
                        return Err(DiagramError::DecisionVarInChild(*var));
                    }
                }
                let own = [*var];
                Ok(sorted_union(
                    [own.as_slice(), self.vars(*lo), self.vars(*hi)].into_iter(),
                ))
            }
            Node::DecomposedAnd(children) => {
                if children.len() < 2 {
                    return Err(DiagramError::TooFewChildren);
                }
                let merged = sorted_union(children.iter().map(|c| self.vars(*c)));
                let total: usize = children.iter().map(|c| self.vars(*c).len()).sum();
                if merged.len() != total {
                    for (i, a) in children.iter().enumerate() {
                        for b in &children[i + 1..] {
                            if let Some(v) = first_common(self.vars(*a), self.vars(*b)) {
                                return Err(DiagramError::SharedVariable(v));
                            }
                        }
                    }
                }
                Ok(merged)
            }
            Node::KernelizedAnd { core, equivs } => {
                if equivs.is_empty() {
                    return Err(DiagramError::NoEquivalences);
                }
                let mut pairs = Vec::with_capacity(equivs.len());
                for &e in equivs {
                    match self.node(e) {
                        Node::Equiv { var, lit } => pairs.push((*var, *lit)),
                        _ => return Err(DiagramError::NotEquivalence(e)),
                    }
                }
                let mut rights: Vec<Var> = pairs.iter().map(|(_, l)| l.var()).collect();
                rights.sort_unstable();
                for &(x, l) in &pairs {
                    if x >= l.var() || rights.binary_search(&x).is_ok() {
                        return Err(DiagramError::NotPrime(x, l));
                    }
                }
                if let Some(w) = rights.windows(2).find(|w| w[0] == w[1]) {
                    let (x, l) = *pairs.iter().find(|(_, l)| l.var() == w[0]).unwrap();
                    return Err(DiagramError::NotPrime(x, l));
                }
                if let Some(v) = first_common(&rights, self.vars(*core)) {
                    return Err(DiagramError::CoreMentionsSubstituted(v));
                }
                Ok(sorted_union(
                    std::iter::once(*core)
                        .chain(equivs.iter().copied())
                        .map(|c| self.vars[c.index()].as_slice()),
                ))
            }
        }
    }

    fn push(&mut self, node: Node, vars: Vec<Var>) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.edges += node.edge_count();
        self.unique.entry(node.clone()).or_insert(id);
        self.nodes.push(node);
        self.vars.push(vars);
        id
    }

    /// Adds a node, or returns the existing id of a structurally equal
    /// one. A decision whose branches coincide collapses to the branch.
    /// Conjunction children are put in canonical order.
    pub fn make_node(&mut self, node: Node) -> Result<NodeId, DiagramError> {
        let node = match node {
            Node::Decision { lo, hi, .. } if lo == hi => {
                self.check_child(lo)?;
                return Ok(lo);
            }
            Node::DecomposedAnd(mut children) => {
                children.sort_unstable();
                Node::DecomposedAnd(children)
            }
            Node::KernelizedAnd { core, mut equivs } => {
                for &e in &equivs {
                    self.check_child(e)?;
                }
                equivs.sort_by_key(|&e| match self.nodes[e.index()] {
                    Node::Equiv { var, lit } => (var, lit.var()),
                    _ => (Var::new(u32::MAX), Var::new(u32::MAX)),
                });
                Node::KernelizedAnd { core, equivs }
            }
            other => other,
        };
        if let Some(&id) = self.unique.get(&node) {
            return Ok(id);
        }
        let vars = self.local_check(&node)?;
        Ok(self.push(node, vars))
    }

    /// Marks nodes reachable from `from`.
    pub fn reachable(&self, from: NodeId) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![from];
        seen[from.index()] = true;
        while let Some(id) = stack.pop() {
            for child in self.node(id).children() {
                if !seen[child.index()] {
                    seen[child.index()] = true;
                    stack.push(child);
                }
            }
        }
        seen
    }

    /// Copy holding only the nodes reachable from the root, renumbered in
    /// their original order.
    pub fn compact(&self) -> Diagram {
        let root = self.root();
        let live = self.reachable(root);
        let mut remap = vec![NodeId(u32::MAX); self.nodes.len()];
        let mut out = Diagram::new(self.num_vars);
        for id in self.ids().filter(|id| live[id.index()]) {
            let node = match self.node(id) {
                Node::Decision { var, lo, hi } => Node::Decision {
                    var: *var,
                    lo: remap[lo.index()],
                    hi: remap[hi.index()],
                },
                Node::DecomposedAnd(children) => {
                    Node::DecomposedAnd(children.iter().map(|c| remap[c.index()]).collect())
                }
                Node::KernelizedAnd { core, equivs } => Node::KernelizedAnd {
                    core: remap[core.index()],
                    equivs: equivs.iter().map(|c| remap[c.index()]).collect(),
                },
                other => other.clone(),
            };
            remap[id.index()] = out.push(node, self.vars[id.index()].clone());
        }
        out.root = Some(remap[root.index()]);
        out
    }

    /// Full check of every reachable node, including the path-level
    /// read-once condition on decision variables.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let Some(root) = self.root else {
            report.violations.push(Violation {
                node: NodeId(0),
                error: DiagramError::NoRoot,
            });
            return report;
        };
        let live = self.reachable(root);
        // decision variables occurring anywhere below each node
        let mut below: Vec<Vec<Var>> = vec![Vec::new(); self.nodes.len()];
        for id in self.ids().filter(|id| live[id.index()]) {
            let node = self.node(id);
            if let Err(error) = self.local_check(node) {
                report.violations.push(Violation { node: id, error });
            }
            let mut mine = sorted_union(node.children().iter().map(|c| below[c.index()].as_slice()));
            if let Node::Decision { var, lo, hi } = node {
                let repeated = below[lo.index()].binary_search(var).is_ok()
                    || below[hi.index()].binary_search(var).is_ok();
                if repeated {
                    report.violations.push(Violation {
                        node: id,
                        error: DiagramError::ReadOnce(*var),
                    });
                }
                if let Err(pos) = mine.binary_search(var) {
                    mine.insert(pos, *var);
                }
            }
            below[id.index()] = mine;
        }
        report
    }

    /// Truth value of node `u` under `omega`, which must bind every
    /// variable under `u`.
    pub fn evaluate(&self, u: NodeId, omega: &Assignment) -> Result<bool, FormulaError> {
        let live = self.reachable(u);
        let mut value = vec![false; u.index() + 1];
        let get = |v: Var| omega.get(v).ok_or(FormulaError::Unbound(v));
        for id in 0..=u.index() {
            if !live[id] {
                continue;
            }
            value[id] = match &self.nodes[id] {
                Node::False => false,
                Node::True => true,
                Node::Equiv { var, lit } => get(*var)? == (get(lit.var())? == lit.polarity()),
                Node::Decision { var, lo, hi } => {
                    if get(*var)? {
                        value[hi.index()]
                    } else {
                        value[lo.index()]
                    }
                }
                Node::DecomposedAnd(children) => children.iter().all(|c| value[c.index()]),
                Node::KernelizedAnd { core, equivs } => {
                    value[core.index()] && equivs.iter().all(|c| value[c.index()])
                }
            };
        }
        Ok(value[u.index()])
    }

    pub fn stats(&self) -> DiagramStats {
        let root = self.root();
        let live = self.reachable(root);
        let mut stats = DiagramStats::default();
        let mut depth = vec![0usize; self.nodes.len()];
        for id in self.ids().filter(|id| live[id.index()]) {
            let node = self.node(id);
            stats.nodes += 1;
            stats.edges += node.edge_count();
            match node {
                Node::Decision { .. } => stats.decisions += 1,
                Node::KernelizedAnd { .. } => stats.kernelized_nodes += 1,
                _ => {}
            }
            depth[id.index()] = node
                .children()
                .iter()
                .map(|c| depth[c.index()] + 1)
                .max()
                .unwrap_or(0);
        }
        stats.max_depth = depth[root.index()];
        stats
    }

    /// Text serialization of the nodes reachable from the root. Ids are
    /// line numbers after the header and the root is the last line.
    pub fn serialize(&self) -> String {
        let d = self.compact();
        let mut out = format!("ccdd {} {}\n", d.num_vars, d.nodes.len());
        for node in &d.nodes {
            match node {
                Node::False => out.push('F'),
                Node::True => out.push('T'),
                Node::Equiv { var, lit } => {
                    write!(out, "E {} {}", var.index(), lit.to_dimacs()).unwrap()
                }
                Node::Decision { var, lo, hi } => {
                    write!(out, "D {} {} {}", var.index(), lo.0, hi.0).unwrap()
                }
                Node::DecomposedAnd(children) => {
                    write!(out, "A {}", children.len()).unwrap();
                    for c in children {
                        write!(out, " {}", c.0).unwrap();
                    }
                }
                Node::KernelizedAnd { core, equivs } => {
                    write!(out, "K {} {}", equivs.len() + 1, core.0).unwrap();
                    for c in equivs {
                        write!(out, " {}", c.0).unwrap();
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn deserialize(input: &[u8]) -> Result<Diagram, FormatError> {
        let malformed = |line: usize, message: &str| FormatError::Malformed {
            line,
            message: message.to_string(),
        };
        let text = std::str::from_utf8(input).map_err(|_| malformed(0, "input is not UTF-8"))?;
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| malformed(1, "missing header"))?;
        let fields: Vec<&str> = header.split(' ').collect();
        let (num_vars, num_nodes) = match fields.as_slice() {
            ["ccdd", nv, nn] => nv
                .parse::<u32>()
                .ok()
                .zip(nn.parse::<usize>().ok())
                .ok_or_else(|| malformed(1, "malformed header"))?,
            _ => return Err(malformed(1, "malformed header")),
        };
        if num_nodes == 0 {
            return Err(malformed(1, "a diagram needs at least one node"));
        }
        let mut d = Diagram::new(num_vars);
        for (line, raw) in lines {
            if d.nodes.len() == num_nodes {
                if raw.is_empty() {
                    continue;
                }
                return Err(malformed(line, "more nodes than declared"));
            }
            let mut tokens = raw.split(' ');
            let kind = tokens.next().unwrap_or("");
            let args: Vec<i64> = tokens
                .map(|t| t.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| malformed(line, "invalid integer"))?;
            let id = |v: i64| -> Result<NodeId, FormatError> {
                if v < 0 {
                    return Err(malformed(line, "negative node id"));
                }
                if v as usize >= d.nodes.len() {
                    return Err(FormatError::ForwardReference {
                        line,
                        id: v as usize,
                    });
                }
                Ok(NodeId(v as u32))
            };
            let var = |v: i64| -> Result<Var, FormatError> {
                if v <= 0 || v > u32::MAX as i64 {
                    return Err(malformed(line, "invalid variable"));
                }
                Ok(Var::new(v as u32))
            };
            let node = match (kind, args.as_slice()) {
                ("F", []) => Node::False,
                ("T", []) => Node::True,
                ("E", &[x, l]) => {
                    if l == 0 || l.unsigned_abs() > i32::MAX as u64 {
                        return Err(malformed(line, "invalid literal"));
                    }
                    Node::Equiv {
                        var: var(x)?,
                        lit: Lit::from_dimacs(l as i32),
                    }
                }
                ("D", &[x, lo, hi]) => Node::Decision {
                    var: var(x)?,
                    lo: id(lo)?,
                    hi: id(hi)?,
                },
                ("A", [k, rest @ ..]) if *k >= 0 && rest.len() == *k as usize => {
                    Node::DecomposedAnd(rest.iter().map(|&c| id(c)).collect::<Result<_, _>>()?)
                }
                ("K", [k, core, rest @ ..]) if *k >= 1 && rest.len() + 1 == *k as usize => {
                    Node::KernelizedAnd {
                        core: id(*core)?,
                        equivs: rest.iter().map(|&c| id(c)).collect::<Result<_, _>>()?,
                    }
                }
                _ => return Err(malformed(line, "unrecognized node line")),
            };
            let vars = d
                .local_check(&node)
                .map_err(|error| FormatError::Invalid { line, error })?;
            d.push(node, vars);
        }
        if d.nodes.len() != num_nodes {
            return Err(malformed(text.lines().count(), "fewer nodes than declared"));
        }
        d.root = Some(NodeId(num_nodes as u32 - 1));
        if let Some(v) = d.validate().violations.into_iter().next() {
            return Err(FormatError::Validation(v.error));
        }
        Ok(d)
    }

    /// Graphviz rendering; decision lo-edges are dashed.
    pub fn to_dot(&self) -> String {
        let root = self.root();
        let live = self.reachable(root);
        let mut out = String::from("digraph ccdd {\n  node [fontname=\"Helvetica\"];\n");
        for id in self.ids().filter(|id| live[id.index()]) {
            let (label, shape) = match self.node(id) {
                Node::False => ("⊥".to_string(), "box"),
                Node::True => ("⊤".to_string(), "box"),
                Node::Equiv { var, lit } => (format!("{var}↔{lit}"), "ellipse"),
                Node::Decision { var, .. } => (var.to_string(), "circle"),
                Node::DecomposedAnd(_) => ("∧d".to_string(), "diamond"),
                Node::KernelizedAnd { .. } => ("∧k".to_string(), "diamond"),
            };
            writeln!(out, "  n{} [label=\"{}\", shape={}];", id.0, label, shape).unwrap();
        }
        for id in self.ids().filter(|id| live[id.index()]) {
            match self.node(id) {
                Node::Decision { lo, hi, .. } => {
                    writeln!(out, "  n{} -> n{} [style=dashed];", id.0, lo.0).unwrap();
                    writeln!(out, "  n{} -> n{};", id.0, hi.0).unwrap();
                }
                Node::KernelizedAnd { core, equivs } => {
                    writeln!(out, "  n{} -> n{} [penwidth=2];", id.0, core.0).unwrap();
                    for e in equivs {
                        writeln!(out, "  n{} -> n{};", id.0, e.0).unwrap();
                    }
                }
                node => {
                    for c in node.children() {
                        writeln!(out, "  n{} -> n{};", id.0, c.0).unwrap();
                    }
                }
            }
        }
        out.push_str("}\n");
        out
    }

    #[cfg(test)]
    pub(crate) fn push_unchecked(&mut self, node: Node) -> NodeId {
        let vars = sorted_union(node.children().iter().map(|c| self.vars[c.index()].as_slice()));
        let mut vars = vars;
        if let Node::Decision { var, .. } | Node::Equiv { var, .. } = &node {
            vars.push(*var);
            vars.sort_unstable();
            vars.dedup();
        }
        self.push(node, vars)
    }
}

/// The diagram drawn for the formula
/// `(x5 ↔ x6) ∧ [(¬x1 ∧ x5 ∧ ((¬x2 ∧ x4) ∨ (x2 ∧ (x3 ↔ ¬x4)))) ∨ (x1 ∧ (x3 ↔ ¬x4) ∧ (x3 ↔ x5))]`,
/// with the kernelized root's core on the left.
pub fn figure_one() -> Diagram {
    let v = Var::new;
    let mut d = Diagram::new(6);
    let bot = d.false_node();
    let top = d.true_node();
    let x5 = d.make_node(Node::Decision { var: v(5), lo: bot, hi: top }).unwrap();
    let x4 = d.make_node(Node::Decision { var: v(4), lo: bot, hi: top }).unwrap();
    let e34 = d.make_node(Node::Equiv { var: v(3), lit: Lit::from_dimacs(-4) }).unwrap();
    let e35 = d.make_node(Node::Equiv { var: v(3), lit: Lit::from_dimacs(5) }).unwrap();
    let e56 = d.make_node(Node::Equiv { var: v(5), lit: Lit::from_dimacs(6) }).unwrap();
    let x2 = d.make_node(Node::Decision { var: v(2), lo: x4, hi: e34 }).unwrap();
    let low = d.make_node(Node::DecomposedAnd(vec![x5, x2])).unwrap();
    let high = d
        .make_node(Node::KernelizedAnd { core: top, equivs: vec![e34, e35] })
        .unwrap();
    let x1 = d.make_node(Node::Decision { var: v(1), lo: low, hi: high }).unwrap();
    let root = d
        .make_node(Node::KernelizedAnd { core: x1, equivs: vec![e56] })
        .unwrap();
    d.set_root(root);
    d
}
