use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use ccdd::compiler::{compile_with_stats, CompileError, CompilerConfig, OrderMode};
use ccdd::counter::{count, exact_mc, ModelCount};
use ccdd::diagram::Diagram;
use ccdd::formula::{evaluate, parse_dimacs, Assignment, CnfFormula, Lit};
use ccdd::oracle::{all_assignments, brute_count, brute_models, chi_square_uniform, OracleLimit};
use ccdd::queries::{consistency, enumerate_models, implicant_check, validity, Term};
use ccdd::sampler::{RngCoin, Sampler};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

#[derive(Parser)]
#[command(name = "ccdd", version, about = "Compile CNF formulas into decision diagrams and count, sample and query them")]
struct Cli {
    /// Increase log verbosity on standard error.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a CNF into a diagram file.
    Compile {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        compiler: CompilerFlags,
    },
    /// Print the exact model count.
    Count {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        compiler: CompilerFlags,
    },
    /// Draw uniform samples, one model per line.
    Sample {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short = 'n', long = "num", default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        compiler: CompilerFlags,
    },
    /// Answer a query on a diagram.
    Query {
        #[command(flatten)]
        input: InputArgs,
        #[command(subcommand)]
        query: Query,
    },
    /// Cross-check counts against brute force and check samples.
    Verify {
        input: PathBuf,
        /// Samples file to check for satisfaction and uniformity.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Diagram claimed to be compiled from the input.
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// Print size statistics of a diagram.
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Export a diagram in Graphviz DOT format.
    Dot {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Query {
    /// Whether the term (DIMACS literals) implies the diagram.
    Imply {
        #[arg(allow_hyphen_values = true)]
        lits: String,
    },
    Consistent,
    Valid,
    /// List models in lexicographic order.
    Enumerate {
        #[arg(long)]
        limit: Option<usize>,
    },
}

#[derive(Args)]
struct InputArgs {
    input: PathBuf,
    /// Input format; inferred from the file extension by default.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Cnf,
    Ccdd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Auto,
    Minfill,
    Dlcp,
}

#[derive(Args)]
struct CompilerFlags {
    #[arg(long)]
    no_kernelize: bool,
    /// Kernelize once at the root (default).
    #[arg(long, conflicts_with = "no_pre_kernelize")]
    pre_kernelize: bool,
    #[arg(long)]
    no_pre_kernelize: bool,
    /// Attempt kernelization at every node.
    #[arg(long)]
    always_kernelize: bool,
    #[arg(long, value_enum)]
    order: Option<Order>,
    #[arg(long)]
    crossover_divisor: Option<usize>,
    /// Maximum number of diagram edges.
    #[arg(long)]
    node_budget: Option<usize>,
}

impl CompilerFlags {
    fn config(&self, base: CompilerConfig) -> CompilerConfig {
        let mut cfg = base;
        cfg.kernelization_enabled = !self.no_kernelize;
        cfg.pre_kernelize = !self.no_kernelize && !self.no_pre_kernelize;
        cfg.always_kernelize = self.always_kernelize;
        if let Some(order) = self.order {
            cfg.order_mode = match order {
                Order::Auto => OrderMode::Auto,
                Order::Minfill => OrderMode::Minfill,
                Order::Dlcp => OrderMode::Dlcp,
            };
        }
        if let Some(d) = self.crossover_divisor {
            cfg.crossover_divisor = d;
        }
        if let Some(b) = self.node_budget {
            cfg.node_budget = b;
        }
        cfg
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<CompileError> for CliError {
    fn from(e: CompileError) -> CliError {
        match e {
            CompileError::Resource { .. } => CliError::Resource(e.to_string()),
            other => CliError::Invariant(other.to_string()),
        }
    }
}

fn invariant(e: impl std::fmt::Display) -> CliError {
    CliError::Invariant(e.to_string())
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

enum Loaded {
    Cnf(CnfFormula),
    Diagram(Diagram),
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| io_error(path, e))
}

fn read_cnf(path: &Path) -> Result<CnfFormula, CliError> {
    parse_dimacs(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_diagram(path: &Path) -> Result<Diagram, CliError> {
    Diagram::deserialize(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(args: &InputArgs) -> Result<Loaded, CliError> {
    let ext = args.input.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let format = match (args.format, ext.as_deref()) {
        (Some(f), _) => f,
        (None, Some("ccdd")) => Format::Ccdd,
        (None, Some("cnf")) => Format::Cnf,
        (None, _) => {
            let bytes = read(&args.input)?;
            if bytes.starts_with(b"ccdd") {
                Format::Ccdd
            } else {
                Format::Cnf
            }
        }
    };
    Ok(match format {
        Format::Cnf => Loaded::Cnf(read_cnf(&args.input)?),
        Format::Ccdd => Loaded::Diagram(read_diagram(&args.input)?),
    })
}

fn load_diagram(args: &InputArgs, cfg: &CompilerConfig) -> Result<Diagram, CliError> {
    match load(args)? {
        Loaded::Diagram(d) => Ok(d),
        Loaded::Cnf(phi) => Ok(compile_with_stats(&phi, cfg)?.diagram),
    }
}

/// Writes to `path`, or to standard output when absent.
fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("standard output: {e}"))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compile { input, out, compiler } => {
            let phi = read_cnf(&input)?;
            let start = Instant::now();
            let compiled = compile_with_stats(&phi, &compiler.config(CompilerConfig::default()))?;
            let ms = start.elapsed().as_millis();
            let s = compiled.diagram.stats();
            let line = format!("nodes={} edges={} knodes={} time_ms={ms}", s.nodes, s.edges, s.kernelized_nodes);
            info!("{:?}", compiled.stats);
            match out {
                Some(path) => {
                    emit(Some(&path), &compiled.diagram.serialize())?;
                    println!("{line}");
                }
                None => {
                    emit(None, &compiled.diagram.serialize())?;
                    eprintln!("{line}");
                }
            }
            Ok(())
        }
        Command::Count { input, compiler } => {
            let c = match load(&input)? {
                Loaded::Cnf(phi) => exact_mc(&phi, &compiler.config(CompilerConfig::counting()))?,
                Loaded::Diagram(d) => count(&d).map_err(invariant)?,
            };
            println!("{}", c.materialize().map_err(invariant)?);
            Ok(())
        }
        Command::Sample { input, n, seed, out, compiler } => {
            let d = load_diagram(&input, &compiler.config(CompilerConfig::default()))?;
            let sampler = Sampler::new(&d).map_err(invariant)?;
            let mut text = String::new();
            if sampler.root_count().is_zero() {
                eprintln!("formula is unsatisfiable; no samples");
            } else {
                let mut coin = RngCoin::seeded(seed);
                for _ in 0..n {
                    let omega = sampler.sample(&mut coin).map_err(invariant)?;
                    text.push_str(&omega.to_dimacs_line());
                    text.push('\n');
                }
            }
            emit(out.as_deref(), &text)
        }
        Command::Query { input, query } => {
            let d = load_diagram(&input, &CompilerConfig::default())?;
            let yes_no = |b: bool| println!("{}", if b { "yes" } else { "no" });
            match query {
                Query::Imply { lits } => {
                    let values = lits
                        .split_whitespace()
                        .map(|t| t.parse::<i32>())
                        .collect::<Result<Vec<i32>, _>>()
                        .map_err(|e| CliError::Usage(format!("invalid literal list: {e}")))?;
                    let values: Vec<i32> = values.into_iter().filter(|&v| v != 0).collect();
                    let term = Term::from_dimacs(&values).map_err(|e| CliError::Usage(e.to_string()))?;
                    yes_no(implicant_check(&d, &term).map_err(|e| CliError::Usage(e.to_string()))?);
                }
                Query::Consistent => yes_no(consistency(&d).map_err(invariant)?),
                Query::Valid => yes_no(validity(&d).map_err(invariant)?),
                Query::Enumerate { limit } => {
                    let stdout = io::stdout();
                    let mut out = stdout.lock();
                    for model in enumerate_models(&d, limit) {
                        writeln!(out, "{}", model.to_dimacs_line())
                            .map_err(|e| CliError::Input(format!("standard output: {e}")))?;
                    }
                }
            }
            Ok(())
        }
        Command::Verify { input, samples, diagram } => verify(&input, samples.as_deref(), diagram.as_deref()),
        Command::Stats { input } => {
            let d = load_diagram(&input, &CompilerConfig::default())?;
            println!("{}", d.stats());
            Ok(())
        }
        Command::Dot { input, out } => {
            let d = load_diagram(&input, &CompilerConfig::default())?;
            emit(out.as_deref(), &d.to_dot())
        }
    }
}

fn parse_sample_line(line: &str, num_vars: u32) -> Result<Assignment, String> {
    let mut lits = Vec::new();
    for token in line.split_whitespace() {
        let v: i32 = token.parse().map_err(|_| format!("invalid literal {token:?}"))?;
        if v == 0 || v.unsigned_abs() > num_vars {
            return Err(format!("literal {v} out of range"));
        }
        lits.push(Lit::from_dimacs(v));
    }
    let omega = Assignment::from_lits(num_vars, &lits);
    if !omega.is_total() || lits.len() != num_vars as usize {
        return Err("sample is not a total assignment".into());
    }
    Ok(omega)
}

/// Diagrams over at most this many variables are also compared with the
/// formula assignment by assignment.
const EQUIVALENCE_CHECK_VARS: u32 = 16;

fn verify(input: &Path, samples: Option<&Path>, diagram: Option<&Path>) -> Result<(), CliError> {
    let phi = read_cnf(input)?;
    let limit = OracleLimit::default();
    let mut failures = Vec::new();

    let direct = exact_mc(&phi, &CompilerConfig::counting())?;
    let compiled = compile_with_stats(&phi, &CompilerConfig::default())?.diagram;
    let report = compiled.validate();
    if !report.is_ok() {
        failures.push(format!("compiled diagram invalid: {:?}", report.violations));
    }
    let via_diagram = count(&compiled).map_err(invariant)?;
    println!("exact_mc {direct}");
    println!("compiled {via_diagram}");
    if direct != via_diagram {
        failures.push("exact_mc and compiled counts differ".into());
    }
    let mut expected = direct.clone();
    if phi.num_vars() <= limit.max_vars {
        let brute = ModelCount::from(brute_count(&phi, limit).map_err(invariant)?);
        println!("brute {brute}");
        if brute != direct {
            failures.push("brute-force count differs".into());
        }
        expected = brute;
    } else {
        eprintln!("{} variables exceed {}; brute-force count skipped", phi.num_vars(), limit.max_vars);
    }

    if let Some(path) = diagram {
        let d = read_diagram(path)?;
        let report = d.validate();
        if !report.is_ok() {
            failures.push(format!("{}: invalid diagram: {:?}", path.display(), report.violations));
        }
        if d.num_vars() == phi.num_vars() && phi.num_vars() <= EQUIVALENCE_CHECK_VARS {
            let all = all_assignments(phi.num_vars(), limit).map_err(invariant)?;
            for omega in all {
                if d.evaluate(d.root(), &omega).map_err(invariant)? != evaluate(&phi, &omega).map_err(invariant)? {
                    failures.push(format!("{}: disagrees with the formula on {}", path.display(), omega.to_dimacs_line()));
                    break;
                }
            }
        }
        match count(&d) {
            Ok(c) => {
                println!("diagram {c}");
                if c != expected {
                    failures.push(format!("{}: count {c} differs from {expected}", path.display()));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", path.display())),
        }
    }

    if let Some(path) = samples {
        let text = String::from_utf8(read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut drawn = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let omega = parse_sample_line(line, phi.num_vars())
                .map_err(|e| CliError::Input(format!("{}:{}: {e}", path.display(), i + 1)))?;
            if !evaluate(&phi, &omega).map_err(invariant)? {
                failures.push(format!("{}:{}: sample is not a model", path.display(), i + 1));
            }
            drawn.push(omega);
        }
        println!("samples {}", drawn.len());
        let models = if phi.num_vars() <= limit.max_vars && expected <= ModelCount::from(1 << 16) {
            brute_models(&phi, limit).ok()
        } else {
            None
        };
        match models {
            Some(models) if models.len() >= 2 && drawn.len() >= 10 * models.len() => {
                let index: std::collections::HashMap<&Assignment, usize> =
                    models.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut hist = vec![0u64; models.len()];
                for omega in &drawn {
                    if let Some(&i) = index.get(omega) {
                        hist[i] += 1;
                    }
                }
                let chi = chi_square_uniform(&hist).map_err(invariant)?;
                println!(
                    "chi_square statistic={:.3} critical={:.3} reject={}",
                    chi.statistic, chi.critical, chi.reject
                );
                if chi.reject {
                    failures.push("samples are not uniform at significance 0.001".into());
                }
            }
            _ => eprintln!("uniformity check skipped: needs enumerable models and at least 10 samples per model"),
        }
    }

    if failures.is_empty() {
        println!("ok");
        Ok(())
    } else {
        for f in &failures {
            eprintln!("mismatch: {f}");
        }
        Err(CliError::Invariant(format!("{} check(s) failed", failures.len())))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    // deep formulas recurse deeply during compilation
    let worker = std::thread::Builder::new().stack_size(1 << 30).spawn(move || run(cli));
    let result = match worker {
        Ok(handle) => handle.join().unwrap_or_else(|_| Err(CliError::Invariant("internal panic".into()))),
        Err(e) => Err(CliError::Resource(format!("cannot start worker thread: {e}"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
