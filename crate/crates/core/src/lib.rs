//! Compilation of CNF formulas into decision diagrams with decomposed and
//! kernelized conjunctions, with exact model counting, uniform sampling
//! and tractable queries on the result.
//!
//! ```
//! use ccdd::{compile, count, parse_dimacs, CompilerConfig, RngCoin, Sampler};
//!
//! let phi = parse_dimacs(b"p cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
//! let d = compile(&phi, &CompilerConfig::default()).unwrap();
//! assert_eq!(count(&d).unwrap().to_string(), "4");
//! let sampler = Sampler::new(&d).unwrap();
//! let omega = sampler.sample(&mut RngCoin::seeded(1)).unwrap();
//! println!("{}", omega.to_dimacs_line());
//! ```

pub mod compiler;
pub mod counter;
pub mod diagram;
pub mod equivalence;
pub mod formula;
pub mod oracle;
pub mod queries;
pub mod sampler;
mod union_find;

pub use compiler::{compile, CompileError, CompilerConfig, OrderMode};
pub use counter::{count, ct, exact_mc, CountAnnotation, CountError, ModelCount};
pub use diagram::{Diagram, Node, NodeId};
pub use formula::{parse_dimacs, Assignment, CnfFormula, Lit, Var};
pub use sampler::{RngCoin, Sampler};
