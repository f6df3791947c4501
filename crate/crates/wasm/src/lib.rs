//! Browser bindings: compile a DIMACS formula, count its models and draw
//! samples. Results are returned as JSON strings.

use std::collections::BTreeMap;

use ccdd::compiler::{compile_with_stats, CompilerConfig};
use ccdd::counter::{ct, exact_mc};
use ccdd::diagram::{Diagram, Node};
use ccdd::formula::{parse_dimacs, CnfFormula};
use ccdd::sampler::{RngCoin, Sampler};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Samples drawn per call are capped to keep the page responsive.
pub const MAX_SAMPLES: usize = 100_000;

#[derive(Serialize)]
struct NodeView {
    id: usize,
    kind: &'static str,
    label: String,
    count: String,
    edges: Vec<EdgeView>,
}

#[derive(Serialize)]
struct EdgeView {
    to: usize,
    /// `lo`, `hi`, `part`, `core` or `equiv`.
    role: &'static str,
}

#[derive(Serialize)]
struct CompileView {
    num_vars: u32,
    root: usize,
    count: String,
    nodes: Vec<NodeView>,
    edges: usize,
    kernelized_nodes: usize,
    decisions: usize,
    dot: String,
    serialized: String,
}

#[derive(Serialize)]
struct SampleView {
    count: String,
    samples: usize,
    histogram: Vec<(String, u64)>,
    first: Vec<String>,
}

fn parse(cnf: &str) -> Result<CnfFormula, String> {
    parse_dimacs(cnf.as_bytes()).map_err(|e| e.to_string())
}

fn config(kernelize: bool) -> CompilerConfig {
    if kernelize {
        CompilerConfig::default()
    } else {
        CompilerConfig::without_kernelization()
    }
}

fn build(cnf: &str, kernelize: bool) -> Result<Diagram, String> {
    let phi = parse(cnf)?;
    Ok(compile_with_stats(&phi, &config(kernelize)).map_err(|e| e.to_string())?.diagram)
}

/// Exact model count of a DIMACS formula as a decimal string.
pub fn count_models(cnf: &str, kernelize: bool) -> Result<String, String> {
    let phi = parse(cnf)?;
    let cfg = CompilerConfig {
        kernelization_enabled: kernelize,
        pre_kernelize: kernelize,
        ..CompilerConfig::counting()
    };
    let c = exact_mc(&phi, &cfg).map_err(|e| e.to_string())?;
    c.materialize().map_err(|e| e.to_string())
}

/// Compiled diagram with per-node counts, as JSON.
pub fn compile_view(cnf: &str, kernelize: bool) -> Result<String, String> {
    let d = build(cnf, kernelize)?;
    let ann = ct(&d, d.num_vars()).map_err(|e| e.to_string())?;
    let nodes = d
        .ids()
        .map(|id| {
            let (kind, label, edges) = match d.node(id) {
                Node::False => ("false", "⊥".to_string(), vec![]),
                Node::True => ("true", "⊤".to_string(), vec![]),
                Node::Equiv { var, lit } => ("equiv", format!("{var} ↔ {lit}"), vec![]),
                Node::Decision { var, lo, hi } => (
                    "decision",
                    var.to_string(),
                    vec![
                        EdgeView { to: lo.index(), role: "lo" },
                        EdgeView { to: hi.index(), role: "hi" },
                    ],
                ),
                Node::DecomposedAnd(parts) => (
                    "decomposed",
                    "∧d".to_string(),
                    parts.iter().map(|p| EdgeView { to: p.index(), role: "part" }).collect(),
                ),
                Node::KernelizedAnd { core, equivs } => (
                    "kernelized",
                    "∧k".to_string(),
                    std::iter::once(EdgeView { to: core.index(), role: "core" })
                        .chain(equivs.iter().map(|e| EdgeView { to: e.index(), role: "equiv" }))
                        .collect(),
                ),
            };
            NodeView { id: id.index(), kind, label, count: ann.get(id).to_string(), edges }
        })
        .collect();
    let stats = d.stats();
    let view = CompileView {
        num_vars: d.num_vars(),
        root: d.root().index(),
        count: ann.get(d.root()).to_string(),
        nodes,
        edges: stats.edges,
        kernelized_nodes: stats.kernelized_nodes,
        decisions: stats.decisions,
        dot: d.to_dot(),
        serialized: d.serialize(),
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

/// Draws `n` uniform samples and tallies how often each model appears.
pub fn sample_view(cnf: &str, kernelize: bool, n: usize, seed: u64) -> Result<String, String> {
    let d = build(cnf, kernelize)?;
    let sampler = Sampler::new(&d).map_err(|e| e.to_string())?;
    if sampler.root_count().is_zero() {
        return Err("formula is unsatisfiable".into());
    }
    let n = n.min(MAX_SAMPLES);
    let mut coin = RngCoin::seeded(seed);
    let mut histogram: BTreeMap<String, u64> = BTreeMap::new();
    let mut first = Vec::new();
    for i in 0..n {
        let line = sampler.sample(&mut coin).map_err(|e| e.to_string())?.to_dimacs_line();
        if i < 20 {
            first.push(line.clone());
        }
        *histogram.entry(line).or_default() += 1;
    }
    let view = SampleView {
        count: sampler.root_count().to_string(),
        samples: n,
        histogram: histogram.into_iter().collect(),
        first,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn count(cnf: &str, kernelize: bool) -> Result<String, JsError> {
    count_models(cnf, kernelize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compile(cnf: &str, kernelize: bool) -> Result<String, JsError> {
    compile_view(cnf, kernelize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sample(cnf: &str, kernelize: bool, n: usize, seed: u64) -> Result<String, JsError> {
    sample_view(cnf, kernelize, n, seed).map_err(|e| JsError::new(&e))
}
