//! The `closure-lab` command line.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use closure_lab_core::closure::{rank_and_bases, validate_closure, ClosureOperator};
use closure_lab_core::coding::{coding_validate, entropy_of, is_solution};
use closure_lab_core::constructors::{
    chain, density_tree, from_digraph, random_moore, uniform, union_combine, Digraph, UnionKind,
};
use closure_lab_core::ranks::{
    inner_rank, lower_rank, matroid_check_with, obstruction_in, outer_rank, span_operator,
    upper_rank, RankProfile, SpanVerdict,
};
use closure_lab_core::reduction::{random_set_operator, reduce_to_closure, SetOperator};
use closure_lab_core::shannon::{shannon_entropy, LpMode};
use closure_lab_core::subset::all_subsets;
use closure_lab_core::BigRational;
use serde_json::{json, Map, Value};

use crate::error::{LabError, Result};
use crate::format::{
    parse_digraph, parse_subset, parse_table, serialize_closure, serialize_coding,
    serialize_digraph, serialize_setop, sniff_header, Table,
};
use crate::parallel::solve_parallel;
use crate::report;

#[derive(Debug, Parser)]
#[command(name = "closure-lab", version, about = "Closure operators, ranks, coding functions and Shannon bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input file (digraph or closure/setop table).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Input format; guessed from the header when omitted.
    #[arg(long, global = true, value_enum)]
    pub kind: Option<InputKind>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for random constructions.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the exhaustive search (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Accept closure tables that fail the axioms.
    #[arg(long, global = true)]
    pub no_validate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputKind {
    Digraph,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Reduced,
    Full,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the closure axioms.
    Validate,
    /// Outer, inner, lower and upper ranks.
    Ranks {
        #[arg(long)]
        subset: Option<String>,
    },
    /// Flats and upper flats.
    Flats,
    /// Matroid characterizations and the span operator.
    Matroid,
    /// Outer and inner complemented sets.
    Complemented,
    /// Unsolvability obstruction and span verdict.
    Obstruction,
    /// Shannon entropy by exact LP.
    Shannon {
        #[arg(long, value_enum, default_value = "reduced")]
        mode: Mode,
    },
    /// Best coding function by exhaustive search.
    Solve {
        #[arg(long)]
        alphabet: usize,
        /// Search nodes per first-vertex branch.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
    },
    /// Build an operator, digraph or set operator.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Union of two operators.
    Combine {
        /// disjoint, unidirectional or bidirectional.
        #[arg(long)]
        op: String,
        first: PathBuf,
        second: PathBuf,
    },
    /// Reduce a set operator to an equivalent closure operator.
    Reduce,
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Uniform matroid U_{r,n}.
    Uniform { r: usize, n: usize },
    /// cl(X) = {1..max X}.
    Chain { n: usize },
    /// Tree operator of rank r with entropy H, written a/b.
    Tree { r: usize, h: String },
    /// Directed cycle C_n, or the bidirected cycle with --bidirected.
    Cycle {
        n: usize,
        #[arg(long)]
        bidirected: bool,
    },
    /// Random Moore family (uses --seed).
    Moore { n: usize },
    /// Random set operator (uses --seed).
    Setop { n: usize },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Ranks { .. } => "ranks",
            Command::Flats => "flats",
            Command::Matroid => "matroid",
            Command::Complemented => "complemented",
            Command::Obstruction => "obstruction",
            Command::Shannon { .. } => "shannon",
            Command::Solve { .. } => "solve",
            Command::Construct { .. } => "construct",
            Command::Combine { .. } => "combine",
            Command::Reduce => "reduce",
        }
    }
}

/// Exit code and the text for standard output and standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let raw: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let echo: Vec<String> = raw
        .iter()
        .skip(1)
        .map(|s| s.to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&raw) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                let body = report::error("", &echo, "usage", text.trim(), code);
                Outcome { code, stdout: format!("{body:#}\n"), stderr: text }
            };
        }
    };
    let name = cli.command.name();
    match execute(&cli, &echo) {
        Ok(Done { code, stdout }) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => {
            let code = e.exit_code();
            let body = report::error(name, &echo, e.kind(), &e.to_string(), code);
            Outcome {
                code,
                stdout: format!("{body:#}\n"),
                stderr: format!("error: {e}\n"),
            }
        }
    }
}

struct Done {
    code: i32,
    stdout: String,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| LabError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

enum Loaded {
    Digraph(ClosureOperator),
    Closure(ClosureOperator),
    SetOp(SetOperator),
}

fn load_path(path: &Path, kind: Option<InputKind>, validate: bool) -> Result<Loaded> {
    let text = read(path)?;
    let label = file_label(path);
    let kind = match kind {
        Some(k) => k,
        None if sniff_header(&text) == Some("digraph") => InputKind::Digraph,
        None => InputKind::Table,
    };
    Ok(match kind {
        InputKind::Digraph => {
            let d = parse_digraph(&text)?;
            let op = from_digraph(&d)?.with_label(label);
            Loaded::Digraph(op)
        }
        InputKind::Table => match parse_table(&text, validate)? {
            Table::Closure(op) => Loaded::Closure(op.with_label(label)),
            Table::SetOp(a) => Loaded::SetOp(SetOperator::from_table(a.n(), a.table().to_vec(), label)?),
        },
    })
}

fn input_path(cli: &Cli) -> Result<&Path> {
    cli.input
        .as_deref()
        .ok_or_else(|| LabError::Usage("this command needs --input FILE".into()))
}

fn load_operator(cli: &Cli) -> Result<ClosureOperator> {
    match load_path(input_path(cli)?, cli.kind, !cli.no_validate)? {
        Loaded::Digraph(op) | Loaded::Closure(op) => Ok(op),
        Loaded::SetOp(_) => Err(LabError::Usage(
            "expected a digraph or closure table, found a setop table (use `reduce`)".into(),
        )),
    }
}

/// A report goes to `--out` if given, else to standard output.
fn emit_report(cli: &Cli, echo: &[String], op: Option<&ClosureOperator>, results: Map<String, Value>, code: i32) -> Result<Done> {
    let body = report::envelope(cli.command.name(), echo, op.map(report::operator), results);
    let text = format!("{body:#}\n");
    if let Some(path) = &cli.out {
        write(path, &text)?;
        return Ok(Done { code, stdout: String::new() });
    }
    Ok(Done { code, stdout: text })
}

/// An artifact goes to `--out` with a JSON summary on standard output, or
/// to standard output alone.
fn emit_artifact(cli: &Cli, echo: &[String], artifact: &str, op: Option<&ClosureOperator>, results: Map<String, Value>) -> Result<Done> {
    match &cli.out {
        Some(path) => {
            write(path, artifact)?;
            let mut results = results;
            results.insert("written".into(), Value::from(path.display().to_string()));
            let body = report::envelope(cli.command.name(), echo, op.map(report::operator), results);
            Ok(Done { code: 0, stdout: format!("{body:#}\n") })
        }
        None => Ok(Done { code: 0, stdout: artifact.to_string() }),
    }
}

fn obj(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

/// `a/b` or an integer; decimals are rejected.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    if text.contains('.') || text.contains('e') {
        return Err(LabError::Usage(format!("{text:?}: write rationals as a/b, not decimals")));
    }
    text.trim()
        .parse::<BigRational>()
        .map_err(|_| LabError::Usage(format!("{text:?} is not a rational a/b")))
}

fn execute(cli: &Cli, echo: &[String]) -> Result<Done> {
    match &cli.command {
        Command::Validate => {
            let op = match load_path(input_path(cli)?, cli.kind, false)? {
                Loaded::Digraph(op) | Loaded::Closure(op) => op,
                Loaded::SetOp(a) => ClosureOperator::from_table(a.n(), a.table().to_vec(), a.label())?,
            };
            let v = validate_closure(&op)?;
            let code = if v.is_valid() { 0 } else { 2 };
            emit_report(cli, echo, Some(&op), obj(report::validation(&v)), code)
        }
        Command::Ranks { subset } => {
            let op = load_operator(cli)?;
            let results = match subset {
                Some(text) => {
                    let x = parse_subset(text, op.n()).map_err(LabError::Usage)?;
                    let (ork, o) = outer_rank(&op, x)?;
                    let (irk, i) = inner_rank(&op, x)?;
                    let (lrk, y) = lower_rank(&op, x)?;
                    let urk = upper_rank(&op, x)?;
                    json!({
                        "subset": report::subset(x),
                        "closure": report::subset(op.close(x)),
                        "ork": ork, "irk": irk, "lrk": lrk, "urk": urk,
                        "outer_basis": report::subset(o),
                        "inner_basis": report::subset(i),
                        "lower_witness": report::subset(y),
                    })
                }
                None => {
                    let (rank, bases) = rank_and_bases(&op)?;
                    let p = RankProfile::compute(&op)?;
                    let rows: Vec<Value> = p
                        .subsets()
                        .map(|x| json!({
                            "subset": report::subset(x),
                            "closure": report::subset(p.close(x)),
                            "ork": p.ork(x), "irk": p.irk(x), "lrk": p.lrk(x), "urk": p.urk(x),
                        }))
                        .collect();
                    json!({ "rank": rank, "bases": report::subsets(bases), "subsets": rows })
                }
            };
            emit_report(cli, echo, Some(&op), obj(results), 0)
        }
        Command::Flats => {
            let op = load_operator(cli)?;
            let p = RankProfile::compute(&op)?;
            let upper: Vec<_> = p.subsets().filter(|&f| p.is_upper_flat(f)).collect();
            let results = json!({
                "flats": report::subsets(p.flats()),
                "upper_flats": report::subsets(upper),
                "closed_sets": report::subsets(closure_lab_core::closed_sets(&op)?),
            });
            emit_report(cli, echo, Some(&op), obj(results), 0)
        }
        Command::Matroid => {
            let op = load_operator(cli)?;
            let p = RankProfile::compute(&op)?;
            let m = matroid_check_with(&op, &p)?;
            let span = span_operator(&op)?;
            let uniform_match = match span.rank {
                Some(r) if span.report.is_valid() && span.candidate.same_map(&uniform(r, op.n())?)? => {
                    Value::from(format!("U_{{{r},{}}}", op.n()))
                }
                _ => Value::Null,
            };
            let results = json!({
                "is_matroid": m.is_matroid(),
                "consistent": m.consistent(),
                "exchange": m.exchange,
                "exchange_witness": m.exchange_witness.map(|w| json!({
                    "set": report::subset(w.set), "u": w.u, "v": w.v,
                })),
                "closed_eq_span": m.closed_eq_span,
                "closed_are_spans": m.closed_are_spans,
                "closed_eq_upper_span": m.closed_eq_upper_span,
                "closed_are_upper_spans": m.closed_are_upper_spans,
                "span_operator": {
                    "is_closure": span.report.is_valid(),
                    "is_matroid": span.is_matroid,
                    "rank": span.rank,
                    "uniform": uniform_match,
                },
            });
            emit_report(cli, echo, Some(&op), obj(results), 0)
        }
        Command::Complemented => {
            let op = load_operator(cli)?;
            let p = RankProfile::compute(&op)?;
            let rows: Vec<Value> = p
                .subsets()
                .map(|x| json!({
                    "subset": report::subset(x),
                    "outer": p.is_outer_complemented(x),
                    "inner": p.is_inner_complemented(x),
                }))
                .collect();
            let results = json!({
                "all_outer": p.subsets().all(|x| p.is_outer_complemented(x)),
                "all_inner": p.subsets().all(|x| p.is_inner_complemented(x)),
                "subsets": rows,
            });
            emit_report(cli, echo, Some(&op), obj(results), 0)
        }
        Command::Obstruction => {
            let op = load_operator(cli)?;
            let p = RankProfile::compute(&op)?;
            let witness = obstruction_in(&p);
            let span = span_operator(&op)?;
            let verdict = match span.verdict {
                SpanVerdict::Unsolvable => "unsolvable",
                SpanVerdict::Undetermined => "undetermined",
                SpanVerdict::NotApplicable => "not-applicable",
            };
            let results = json!({
                "witness": witness.map(|x| json!({
                    "set": report::subset(x),
                    "ork": p.ork(x),
                    "span": report::subset(p.span(x)),
                    "span_ork": p.ork(p.span(x)),
                })),
                "verdict": verdict,
            });
            emit_report(cli, echo, Some(&op), obj(results), 0)
        }
        Command::Shannon { mode } => {
            let op = load_operator(cli)?;
            let mode = match mode {
                Mode::Reduced => LpMode::Reduced,
                Mode::Full => LpMode::Full,
            };
            let s = shannon_entropy(&op, mode)?;
            let witness: Vec<Value> = s
                .closed
                .iter()
                .zip(&s.witness)
                .map(|(c, v)| json!({ "set": report::subset(*c), "value": report::rational(v) }))
                .collect();
            let results = json!({
                "mode": if mode == LpMode::Reduced { "reduced" } else { "full" },
                "shannon_entropy": report::rational(&s.value),
                "rows": s.rows,
                "active_rows": s.active_rows,
                "pivots": s.pivots,
                "witness": witness,
            });
            emit_report(cli, echo, Some(&op), obj(results), 0)
        }
        Command::Solve { alphabet, budget } => {
            let op = load_operator(cli)?;
            let out = solve_parallel(&op, *alphabet, *budget, cli.threads)?;
            let f = &out.best;
            let results = json!({
                "alphabet": alphabet,
                "budget_per_branch": budget,
                "max_entropy": report::entropy(&out.max_entropy),
                "complete": out.complete,
                "nodes": out.nodes,
                "candidates": out.candidates.to_string(),
                "is_solution": is_solution(f)?,
                "valid": coding_validate(f)?.is_valid(),
                "entropy_of_ground": report::entropy(&entropy_of(f, op.ground())?),
                "coding": serialize_coding(f).lines().map(str::to_string).collect::<Vec<_>>(),
            });
            let code = if out.complete { 0 } else { 3 };
            emit_report(cli, echo, Some(&op), obj(results), code)
        }
        Command::Construct { what } => construct(cli, echo, what),
        Command::Combine { op, first, second } => {
            let kind: UnionKind = op.parse()?;
            let load = |p: &Path| -> Result<ClosureOperator> {
                match load_path(p, None, !cli.no_validate)? {
                    Loaded::Digraph(op) | Loaded::Closure(op) => Ok(op),
                    Loaded::SetOp(_) => Err(LabError::Usage(format!("{}: expected a closure operator", p.display()))),
                }
            };
            let (a, b) = (load(first)?, load(second)?);
            let op = union_combine(&a, &b, kind)?;
            let text = serialize_closure(&op)?;
            emit_artifact(cli, echo, &text, Some(&op), Map::new())
        }
        Command::Reduce => {
            let a = match load_path(input_path(cli)?, Some(InputKind::Table), false)? {
                Loaded::SetOp(a) => a,
                Loaded::Closure(op) => SetOperator::from_table(op.n(), op.table()?, op.label())?,
                Loaded::Digraph(_) => unreachable!("table kind requested"),
            };
            let (op, trace) = reduce_to_closure(&a)?;
            let components = {
                let mut c = trace.component.clone();
                c.sort_unstable();
                c.dedup();
                c.len()
            };
            let results = json!({
                "iterations": trace.iterations,
                "components": components,
                "extensivity_patch": trace.extensivity_patch.map(report::subset),
                "b": all_subsets(a.n()).map(|x| report::subset(trace.b[x.bits() as usize])).collect::<Vec<_>>(),
                "c": all_subsets(a.n()).map(|x| report::subset(trace.c[x.bits() as usize])).collect::<Vec<_>>(),
            });
            let text = serialize_closure(&op)?;
            emit_artifact(cli, echo, &text, Some(&op), obj(results))
        }
    }
}

fn construct(cli: &Cli, echo: &[String], what: &Construct) -> Result<Done> {
    let closure = |op: ClosureOperator| -> Result<Done> {
        let text = serialize_closure(&op)?;
        emit_artifact(cli, echo, &text, Some(&op), Map::new())
    };
    match what {
        Construct::Uniform { r, n } => closure(uniform(*r, *n)?),
        Construct::Chain { n } => closure(chain(*n)?),
        Construct::Moore { n } => closure(random_moore(*n, cli.seed)?),
        Construct::Tree { r, h } => {
            let h = parse_rational(h)?;
            let (op, spec) = density_tree(*r, &h)?;
            let text = serialize_closure(&op)?;
            let results = json!({
                "scale": spec.scale,
                "shares": spec.shares,
                "entropy": report::rational(&spec.entropy),
            });
            emit_artifact(cli, echo, &text, Some(&op), obj(results))
        }
        Construct::Cycle { n, bidirected } => {
            let d = if *bidirected {
                Digraph::bidirected_cycle(*n)?
            } else {
                Digraph::directed_cycle(*n)?
            };
            emit_artifact(cli, echo, &serialize_digraph(&d), None, Map::new())
        }
        Construct::Setop { n } => {
            let a = random_set_operator(*n, cli.seed)?;
            emit_artifact(cli, echo, &serialize_setop(&a)?, None, Map::new())
        }
    }
}
