//! CNF data model: literals, clauses, DIMACS parsing, conditioning, unit
//! propagation and primal-graph component decomposition.

use std::fmt;

use thiserror::Error;

use crate::union_find::UnionFind;

/// A propositional variable, 1-based and dense.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Var {
        assert!(index > 0, "variables are 1-based");
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal, packed as `2 * var + negated`. The derived order sorts by
/// variable index first, positive before negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | (!positive) as u32)
    }

    /// Builds a literal from a signed DIMACS integer. Panics on zero.
    pub fn from_dimacs(value: i32) -> Lit {
        assert!(value != 0, "0 is not a literal");
        Lit::new(Var::new(value.unsigned_abs()), value > 0)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense index usable for per-literal tables.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Lit {
        Lit(code as u32)
    }

    /// The value `var(self)` must take for this literal to be true.
    pub fn polarity(self) -> bool {
        self.is_positive()
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "{}", self.var())
        } else {
            write!(f, "¬{}", self.var())
        }
    }
}

/// A disjunction of literals. Normalized clauses hold no duplicate
/// literals and no complementary pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Clause {
        Clause(lits)
    }

    /// Removes repeated literals, keeping first occurrences. Returns `None`
    /// for tautologies.
    pub fn normalized(lits: impl IntoIterator<Item = Lit>) -> Option<Clause> {
        let mut out: Vec<Lit> = Vec::new();
        for lit in lits {
            if out.contains(&!lit) {
                return None;
            }
            if !out.contains(&lit) {
                out.push(lit);
            }
        }
        Some(Clause(out))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn sort(&mut self) {
        self.0.sort_unstable();
    }
}

impl std::ops::Deref for Clause {
    type Target = [Lit];

    fn deref(&self) -> &[Lit] {
        &self.0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable {0} is unbound in the assignment")]
    Unbound(Var),
    #[error("contradictory literals: {0} and its negation")]
    Contradictory(Lit),
    #[error("variable {0} outside the formula scope")]
    OutOfScope(Var),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing or malformed `p cnf` header")]
    MalformedHeader,
    #[error("duplicate `p` header")]
    DuplicateHeader,
    #[error("invalid token `{0}`")]
    InvalidToken(String),
    #[error("literal {value} exceeds declared variable count {num_vars}")]
    LiteralOutOfRange { value: i64, num_vars: u32 },
    #[error("last clause is missing its terminating 0")]
    MissingTerminator,
    #[error("input is not valid UTF-8")]
    Encoding,
}

/// A CNF formula over variables `1..=num_vars`.
///
/// The declared variable range is the counting scope: model counts and
/// samples are always taken over all `num_vars` variables, whether or not
/// they occur in a clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
    is_false: bool,
}

impl CnfFormula {
    /// Builds a formula from clauses, normalizing each one. An empty clause
    /// makes the formula constant-false.
    pub fn new(num_vars: u32, clauses: impl IntoIterator<Item = Clause>) -> Result<CnfFormula, FormulaError> {
        let mut out = Vec::new();
        let mut is_false = false;
        for clause in clauses {
            for &lit in clause.lits() {
                if lit.var().0 > num_vars {
                    return Err(FormulaError::OutOfScope(lit.var()));
                }
            }
            match Clause::normalized(clause.0) {
                None => {}
                Some(c) if c.is_empty() => is_false = true,
                Some(c) => out.push(c),
            }
        }
        if is_false {
            out.clear();
        }
        Ok(CnfFormula {
            num_vars,
            clauses: out,
            is_false,
        })
    }

    /// Convenience constructor from signed DIMACS integers.
    pub fn from_dimacs_clauses(num_vars: u32, clauses: &[&[i32]]) -> Result<CnfFormula, FormulaError> {
        CnfFormula::new(
            num_vars,
            clauses
                .iter()
                .map(|c| Clause::new(c.iter().map(|&v| Lit::from_dimacs(v)).collect())),
        )
    }

    pub fn constant_false(num_vars: u32) -> CnfFormula {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
            is_false: true,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_false(&self) -> bool {
        self.is_false
    }

    pub fn is_true(&self) -> bool {
        !self.is_false && self.clauses.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.is_false || self.clauses.is_empty()
    }

    /// Sorted list of variables occurring in some clause.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = vec![false; self.num_vars as usize + 1];
        for clause in &self.clauses {
            for lit in clause.lits() {
                seen[lit.var().0 as usize] = true;
            }
        }
        (1..=self.num_vars)
            .filter(|&v| seen[v as usize])
            .map(Var)
            .collect()
    }

    /// Sorts literals inside clauses, sorts clauses and drops duplicate
    /// clauses. The result is the canonical key used by component caches.
    pub fn canonicalize(&mut self) {
        for clause in &mut self.clauses {
            clause.sort();
        }
        self.clauses.sort_unstable();
        self.clauses.dedup();
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.clauses
    }

    /// Appends unit clauses for `lits`, keeping everything else as is.
    pub fn with_units(&self, lits: &[Lit]) -> CnfFormula {
        if self.is_false {
            return self.clone();
        }
        let mut clauses = self.clauses.clone();
        clauses.extend(lits.iter().map(|&l| Clause(vec![l])));
        CnfFormula {
            num_vars: self.num_vars,
            clauses,
            is_false: false,
        }
    }

    /// Writes the formula in DIMACS CNF.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        if self.is_false {
            out.push_str(&format!("p cnf {} 1\n0\n", self.num_vars));
            return out;
        }
        out.push_str(&format!("p cnf {} {}\n", self.num_vars, self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause.lits() {
                out.push_str(&lit.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Parses DIMACS CNF. Comment lines (`c`) are skipped, a `%` line ends the
/// clause section (SATLIB convention). A clause count that disagrees with
/// the header is logged and the actual count is kept.
pub fn parse_dimacs(input: &[u8]) -> Result<CnfFormula, ParseError> {
    let text = std::str::from_utf8(input).map_err(|_| ParseError {
        line: 0,
        kind: ParseErrorKind::Encoding,
    })?;
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::DuplicateHeader,
                });
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", nv, nc] => nv.parse::<u32>().ok().zip(nc.parse::<usize>().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or(ParseError {
                line: line_no,
                kind: ParseErrorKind::MalformedHeader,
            })?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(ParseError {
                line: line_no,
                kind: ParseErrorKind::MalformedHeader,
            });
        };
        for token in line.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| ParseError {
                line: line_no,
                kind: ParseErrorKind::InvalidToken(token.to_string()),
            })?;
            if value == 0 {
                clauses.push(Clause(std::mem::take(&mut current)));
                continue;
            }
            if value.unsigned_abs() > num_vars as u64 {
                return Err(ParseError {
                    line: line_no,
                    kind: ParseErrorKind::LiteralOutOfRange { value, num_vars },
                });
            }
            current.push(Lit::from_dimacs(value as i32));
        }
    }
    let Some((num_vars, declared)) = header else {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::MalformedHeader,
        });
    };
    if !current.is_empty() {
        return Err(ParseError {
            line: last_line,
            kind: ParseErrorKind::MissingTerminator,
        });
    }
    if clauses.len() != declared {
        log::warn!(
            "header declares {} clauses but {} were read",
            declared,
            clauses.len()
        );
    }
    // range was checked above
    Ok(CnfFormula::new(num_vars, clauses).expect("literals checked against header"))
}

/// A partial or total mapping from variables to truth values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    /// Empty assignment able to hold variables `1..=num_vars`.
    pub fn new(num_vars: u32) -> Assignment {
        Assignment {
            values: vec![None; num_vars as usize + 1],
        }
    }

    pub fn from_lits(num_vars: u32, lits: &[Lit]) -> Assignment {
        let mut a = Assignment::new(num_vars);
        for &l in lits {
            a.set(l.var(), l.polarity());
        }
        a
    }

    pub fn num_vars(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    pub fn get(&self, var: Var) -> Option<bool> {
        self.values.get(var.0 as usize).copied().flatten()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        let i = var.0 as usize;
        if i >= self.values.len() {
            self.values.resize(i + 1, None);
        }
        self.values[i] = Some(value);
    }

    pub fn unset(&mut self, var: Var) {
        if let Some(slot) = self.values.get_mut(var.0 as usize) {
            *slot = None;
        }
    }

    /// Value of a literal, if its variable is bound.
    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|v| v == lit.polarity())
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().skip(1).all(Option::is_some)
    }

    /// Bound literals in ascending variable order.
    pub fn lits(&self) -> Vec<Lit> {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .filter_map(|(v, val)| val.map(|b| Lit::new(Var(v as u32), b)))
            .collect()
    }

    /// Space-separated signed DIMACS literals in ascending variable order.
    pub fn to_dimacs_line(&self) -> String {
        self.lits()
            .iter()
            .map(|l| l.to_dimacs().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Conditions `phi` on a consistent set of literals: satisfied clauses are
/// dropped and falsified literals removed.
pub fn condition(phi: &CnfFormula, lits: &[Lit]) -> Result<CnfFormula, FormulaError> {
    let mut value: Vec<Option<bool>> = vec![None; phi.num_vars as usize + 1];
    for &l in lits {
        let slot = value
            .get_mut(l.var().0 as usize)
            .ok_or(FormulaError::OutOfScope(l.var()))?;
        match *slot {
            Some(v) if v != l.polarity() => return Err(FormulaError::Contradictory(l)),
            _ => *slot = Some(l.polarity()),
        }
    }
    Ok(condition_with(phi, &value))
}

pub(crate) fn condition_with(phi: &CnfFormula, value: &[Option<bool>]) -> CnfFormula {
    if phi.is_false {
        return phi.clone();
    }
    let mut clauses = Vec::with_capacity(phi.clauses.len());
    'clauses: for clause in &phi.clauses {
        let mut kept = Vec::with_capacity(clause.len());
        for &lit in clause.lits() {
            match value[lit.var().0 as usize] {
                Some(v) if v == lit.polarity() => continue 'clauses,
                Some(_) => {}
                None => kept.push(lit),
            }
        }
        if kept.is_empty() {
            return CnfFormula::constant_false(phi.num_vars);
        }
        clauses.push(Clause(kept));
    }
    CnfFormula {
        num_vars: phi.num_vars,
        clauses,
        is_false: false,
    }
}

/// True iff every clause has a satisfied literal under `omega`.
pub fn evaluate(phi: &CnfFormula, omega: &Assignment) -> Result<bool, FormulaError> {
    if phi.is_false {
        return Ok(false);
    }
    let mut result = true;
    for clause in &phi.clauses {
        let mut sat = false;
        for &lit in clause.lits() {
            match omega.lit_value(lit) {
                None => return Err(FormulaError::Unbound(lit.var())),
                Some(true) => sat = true,
                Some(false) => {}
            }
        }
        result &= sat;
    }
    Ok(result)
}

/// Number of distinct variables occurring in clauses of length at least two.
pub fn non_unit_var_count(phi: &CnfFormula) -> usize {
    let mut seen = vec![false; phi.num_vars as usize + 1];
    for clause in phi.clauses.iter().filter(|c| c.len() >= 2) {
        for lit in clause.lits() {
            seen[lit.var().0 as usize] = true;
        }
    }
    seen.iter().filter(|&&s| s).count()
}

/// Splits a formula into the connected components of its primal graph.
/// Components come out ordered by their smallest variable; clauses keep
/// their relative order. Constant formulas yield no components.
pub fn decompose(phi: &CnfFormula) -> Vec<CnfFormula> {
    if phi.is_constant() {
        return Vec::new();
    }
    let n = phi.num_vars as usize + 1;
    let mut uf = UnionFind::new(n);
    for clause in &phi.clauses {
        let first = clause[0].var().0 as usize;
        for lit in &clause[1..] {
            uf.union(first, lit.var().0 as usize);
        }
    }
    // component slot per root, numbered by smallest variable
    let mut slot = vec![usize::MAX; n];
    let mut occurs = vec![false; n];
    for clause in &phi.clauses {
        for lit in clause.lits() {
            occurs[lit.var().0 as usize] = true;
        }
    }
    let mut count = 0;
    for v in 1..n {
        if occurs[v] {
            let root = uf.find(v);
            if slot[root] == usize::MAX {
                slot[root] = count;
                count += 1;
            }
        }
    }
    let mut parts: Vec<Vec<Clause>> = vec![Vec::new(); count];
    for clause in &phi.clauses {
        let root = uf.find(clause[0].var().0 as usize);
        parts[slot[root]].push(clause.clone());
    }
    parts
        .into_iter()
        .map(|clauses| CnfFormula {
            num_vars: phi.num_vars,
            clauses,
            is_false: false,
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagationStatus {
    Consistent,
    Conflict,
}

/// Outcome of unit propagation. On conflict, `implied` is the prefix
/// derived before the conflict was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationResult {
    pub status: PropagationStatus,
    pub implied: Vec<Lit>,
}

impl PropagationResult {
    pub fn is_conflict(&self) -> bool {
        self.status == PropagationStatus::Conflict
    }
}

/// Reusable unit-propagation scratch state over one formula.
///
/// Derivation order is fixed: assumptions first, then unit clauses in
/// stored order, then a FIFO over the trail visiting the clauses of each
/// falsified literal in clause-index order.
pub struct Propagator<'a> {
    phi: &'a CnfFormula,
    occurs: Vec<Vec<u32>>,
    value: Vec<Option<bool>>,
    trail: Vec<Lit>,
}

impl<'a> Propagator<'a> {
    pub fn new(phi: &'a CnfFormula) -> Propagator<'a> {
        let n = phi.num_vars as usize + 1;
        let mut occurs = vec![Vec::new(); 2 * n];
        for (i, clause) in phi.clauses.iter().enumerate() {
            for lit in clause.lits() {
                occurs[lit.code()].push(i as u32);
            }
        }
        Propagator {
            phi,
            occurs,
            value: vec![None; n],
            trail: Vec::new(),
        }
    }

    fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.value[lit.var().0 as usize].map(|v| v == lit.polarity())
    }

    fn assign(&mut self, lit: Lit) {
        self.value[lit.var().0 as usize] = Some(lit.polarity());
        self.trail.push(lit);
    }

    /// Checks clause `ci`: returns `Err(())` on conflict, otherwise the
    /// unit literal to assign if the clause became unit.
    fn inspect(&self, ci: usize) -> Result<Option<Lit>, ()> {
        let mut unassigned = None;
        let mut free = 0;
        for &lit in self.phi.clauses[ci].lits() {
            match self.lit_value(lit) {
                Some(true) => return Ok(None),
                Some(false) => {}
                None => {
                    free += 1;
                    unassigned = Some(lit);
                    if free > 1 {
                        return Ok(None);
                    }
                }
            }
        }
        match unassigned {
            None => Err(()),
            Some(l) => Ok(Some(l)),
        }
    }

    pub fn propagate(&mut self, assumptions: &[Lit]) -> PropagationResult {
        let status = self.run(assumptions);
        let implied = std::mem::take(&mut self.trail);
        for lit in &implied {
            self.value[lit.var().0 as usize] = None;
        }
        PropagationResult { status, implied }
    }

    fn run(&mut self, assumptions: &[Lit]) -> PropagationStatus {
        if self.phi.is_false {
            return PropagationStatus::Conflict;
        }
        for &a in assumptions {
            match self.lit_value(a) {
                Some(true) => {}
                Some(false) => return PropagationStatus::Conflict,
                None => self.assign(a),
            }
        }
        for ci in 0..self.phi.clauses.len() {
            if self.phi.clauses[ci].len() <= 1 {
                match self.inspect(ci) {
                    Err(()) => return PropagationStatus::Conflict,
                    Ok(Some(l)) => self.assign(l),
                    Ok(None) => {}
                }
            }
        }
        let mut head = 0;
        while head < self.trail.len() {
            let falsified = !self.trail[head];
            head += 1;
            for k in 0..self.occurs[falsified.code()].len() {
                let ci = self.occurs[falsified.code()][k] as usize;
                match self.inspect(ci) {
                    Err(()) => return PropagationStatus::Conflict,
                    Ok(Some(l)) => self.assign(l),
                    Ok(None) => {}
                }
            }
        }
        PropagationStatus::Consistent
    }
}

/// Unit propagation to fixpoint from `assumptions`.
pub fn bcp(phi: &CnfFormula, assumptions: &[Lit]) -> PropagationResult {
    Propagator::new(phi).propagate(assumptions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(v: &[i32]) -> Vec<Lit> {
        v.iter().map(|&x| Lit::from_dimacs(x)).collect()
    }

    fn f(n: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::from_dimacs_clauses(n, clauses).unwrap()
    }

    #[test]
    fn literal_packing() {
        let l = Lit::from_dimacs(-7);
        assert_eq!(l.var().index(), 7);
        assert!(!l.is_positive());
        assert_eq!(!!l, l);
        assert_eq!((!l).to_dimacs(), 7);
        assert!(Var::new(1).neg() < Var::new(2).pos());
    }

    #[test]
    fn parse_basic() {
        let phi = parse_dimacs(b"c hello\np cnf 2 2\n1 2 0\n-1 0\n").unwrap();
        assert_eq!(phi.num_vars(), 2);
        assert_eq!(phi.clauses(), &[Clause(lits(&[1, 2])), Clause(lits(&[-1]))]);
    }

    #[test]
    fn parse_drops_tautology() {
        let phi = parse_dimacs(b"p cnf 1 1\n1 -1 0\n").unwrap();
        assert!(phi.is_true());
    }

    #[test]
    fn parse_rejects_out_of_range() {
        let err = parse_dimacs(b"p cnf 3 1\n1 4 0\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::LiteralOutOfRange { value: 4, .. }));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_dimacs(b"p cnf x 1\n1 0\n").unwrap_err().kind,
            ParseErrorKind::MalformedHeader
        );
        assert_eq!(parse_dimacs(b"1 2 0\n").unwrap_err().kind, ParseErrorKind::MalformedHeader);
        assert_eq!(
            parse_dimacs(b"p cnf 2 1\n1 2\n").unwrap_err().kind,
            ParseErrorKind::MissingTerminator
        );
        assert!(matches!(
            parse_dimacs(b"p cnf 2 1\n1 a 0\n").unwrap_err().kind,
            ParseErrorKind::InvalidToken(_)
        ));
    }

    #[test]
    fn parse_tolerates_count_mismatch_and_satlib_trailer() {
        let phi = parse_dimacs(b"p cnf 3 5\n 1  -2 0 3\n 0\n%\n0\n\n").unwrap();
        assert_eq!(phi.clauses().len(), 2);
    }

    #[test]
    fn parse_keeps_duplicate_clauses_and_dedups_literals() {
        let phi = parse_dimacs(b"p cnf 2 2\n1 1 2 0\n1 2 0\n").unwrap();
        assert_eq!(phi.clauses(), &[Clause(lits(&[1, 2])), Clause(lits(&[1, 2]))]);
    }

    #[test]
    fn empty_clause_is_false() {
        let phi = parse_dimacs(b"p cnf 2 2\n1 0\n0\n").unwrap();
        assert!(phi.is_false());
        assert_eq!(parse_dimacs(phi.to_dimacs().as_bytes()).unwrap(), phi);
    }

    #[test]
    fn conditioning() {
        let phi = f(3, &[&[1, 2], &[-1, 3]]);
        assert_eq!(condition(&phi, &lits(&[1])).unwrap().clauses(), &[Clause(lits(&[3]))]);
        assert!(condition(&f(1, &[&[1]]), &lits(&[-1])).unwrap().is_false());
        let unchanged = f(3, &[&[1, 2]]);
        assert_eq!(condition(&unchanged, &lits(&[3])).unwrap(), unchanged);
        assert_eq!(
            condition(&phi, &lits(&[1, -1])).unwrap_err(),
            FormulaError::Contradictory(Lit::from_dimacs(-1))
        );
    }

    #[test]
    fn propagation() {
        let r = bcp(&f(2, &[&[1], &[-1, 2]]), &[]);
        assert_eq!(r.status, PropagationStatus::Consistent);
        assert_eq!(r.implied, lits(&[1, 2]));
        assert!(bcp(&f(1, &[&[1], &[-1]]), &[]).is_conflict());
        let r = bcp(&f(2, &[&[1, 2]]), &lits(&[-1]));
        assert_eq!(r.status, PropagationStatus::Consistent);
        assert_eq!(r.implied, lits(&[-1, 2]));
    }

    #[test]
    fn propagator_is_reusable() {
        let phi = f(3, &[&[-1, 2], &[-2, 3]]);
        let mut p = Propagator::new(&phi);
        assert_eq!(p.propagate(&lits(&[1])).implied, lits(&[1, 2, 3]));
        assert_eq!(p.propagate(&lits(&[-3])).implied, lits(&[-3, -2, -1]));
        assert!(p.propagate(&lits(&[1, -3])).is_conflict());
        assert_eq!(p.propagate(&[]).implied, vec![]);
    }

    #[test]
    fn decomposition() {
        assert_eq!(decompose(&f(4, &[&[1, 2], &[3, -4]])).len(), 2);
        assert_eq!(decompose(&f(3, &[&[1, 2], &[-2, 3]])).len(), 1);
        assert!(decompose(&f(3, &[])).is_empty());
        let parts = decompose(&f(5, &[&[4, 5], &[1, 3], &[3]]));
        assert_eq!(parts[0].vars(), vec![Var(1), Var(3)]);
        assert_eq!(parts[1].vars(), vec![Var(4), Var(5)]);
    }

    #[test]
    fn evaluation() {
        let mut w = Assignment::new(2);
        w.set(Var(1), false);
        w.set(Var(2), true);
        assert!(evaluate(&f(2, &[&[1, 2]]), &w).unwrap());
        assert!(!evaluate(&f(2, &[&[1], &[-1]]), &w).unwrap());
        assert!(evaluate(&f(0, &[]), &Assignment::new(0)).unwrap());
        assert_eq!(
            evaluate(&f(3, &[&[3]]), &w).unwrap_err(),
            FormulaError::Unbound(Var(3))
        );
    }

    #[test]
    fn non_unit_vars() {
        assert_eq!(non_unit_var_count(&f(3, &[&[1], &[2, 3]])), 2);
        assert_eq!(non_unit_var_count(&f(3, &[&[1], &[-2]])), 0);
        assert_eq!(non_unit_var_count(&f(3, &[&[1, 2], &[2, 3]])), 3);
    }
}
