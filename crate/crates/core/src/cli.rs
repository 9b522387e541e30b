//! The `tait` command line.
//!
//! Exit codes: 0 ok, 1 parse or validation error, 2 irreducible graph,
//! 3 graph not bipartite, 4 a verification property failed.

use std::fmt::Display;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::catalog::CatalogFamily;
use crate::laurent::{p3, LaurentPoly};
use crate::map::CombinatorialMap;
use crate::reduce::{
    reduce_with, ReduceError, ReductionTrace, RelationWeights, Strategy, TraceStep,
};
use crate::su3::DEFAULT_TOL;
use crate::tait::count_tait;
use crate::text::{parse_map, serialize_map};
use crate::verify::{self, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IRREDUCIBLE: i32 = 2;
pub const EXIT_NOT_BIPARTITE: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "tait",
    version,
    about = "Tait colorings, reduction invariants and SU(3) checks for planar trivalent graphs"
)]
struct Cli {
    /// Emit machine-readable JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count Tait colorings by exhaustive search.
    Count {
        /// Graph file; stdin when omitted or `-`.
        file: Option<PathBuf>,
    },
    /// Euler characteristic via the integer relations (3, 2, 1).
    Euler {
        file: Option<PathBuf>,
        /// Print the reduction tree.
        #[arg(long)]
        trace: bool,
    },
    /// sl3 polynomial of a bipartite graph.
    P3 {
        file: Option<PathBuf>,
        /// Evaluate at this rational, e.g. `1` or `2/3`.
        #[arg(long, value_name = "Q0", allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Print the reduction tree and its value.
    Reduce {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Ring::Euler)]
        ring: Ring,
        /// Choose moves at random from this seed instead of by priority.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a property campaign.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Number of random trials (lemma5: 1000, roundtrip: 100).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a catalog graph to stdout.
    Gen {
        /// circle, theta, k4, prism, cube, dodecahedron or petersen.
        family: String,
        params: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Ring {
    Euler,
    P3,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Theorem1,
    Lemma5,
    Roundtrip,
    Conservation,
}

struct Failure {
    code: i32,
    message: String,
    /// Extra text written after the message, e.g. a stuck graph.
    detail: Option<String>,
}

impl Failure {
    fn invalid(e: impl Display) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: e.to_string(),
            detail: None,
        }
    }
}

impl From<ReduceError> for Failure {
    fn from(e: ReduceError) -> Self {
        let (code, detail) = match &e {
            ReduceError::Irreducible(stuck) => (EXIT_IRREDUCIBLE, Some(serialize_map(stuck))),
            ReduceError::NotBipartite => (EXIT_NOT_BIPARTITE, None),
            _ => (EXIT_INVALID, None),
        };
        Failure {
            code,
            message: e.to_string(),
            detail,
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_graph(&mut self, file: &Option<PathBuf>) -> Result<CombinatorialMap, Failure> {
        let text = match file {
            Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
                .map_err(|e| Failure::invalid(format!("{}: {e}", p.display())))?,
            _ => {
                let mut s = String::new();
                self.stdin
                    .read_to_string(&mut s)
                    .map_err(Failure::invalid)?;
                s
            }
        };
        parse_map(&text).map_err(Failure::invalid)
    }

    fn out(&mut self, text: impl Display) -> Result<(), Failure> {
        write!(self.stdout, "{text}").map_err(Failure::invalid)
    }

    fn json(&mut self, v: &Value) -> Result<(), Failure> {
        let s = serde_json::to_string_pretty(v).map_err(Failure::invalid)?;
        writeln!(self.stdout, "{s}").map_err(Failure::invalid)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let json = cli.json;
    let mut io = Io { stdin, stdout };
    match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            if let Some(d) = &f.detail {
                let _ = write!(stderr, "{d}");
            }
            if json {
                let _ = io.json(&json!({
                    "error": f.message,
                    "exit_code": f.code,
                    "detail": f.detail,
                }));
            }
            f.code
        }
    }
}

fn dispatch(cli: Cli, io: &mut Io<'_>) -> Result<i32, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Count { file } => {
            let g = io.read_graph(&file)?;
            let n = count_tait(&g);
            if json {
                io.json(&json!({ "count": n.to_string() }))?;
            } else {
                io.out(format_args!("{n}\n"))?;
            }
        }
        Command::Euler { file, trace } => {
            let g = io.read_graph(&file)?;
            let (value, tr) = reduce_with(&g, &RelationWeights::euler(), Strategy::Priority)?;
            emit_reduction(io, json, "euler", &value, trace.then_some(&tr), None)?;
        }
        Command::P3 { file, at } => {
            let g = io.read_graph(&file)?;
            let poly = p3(&g)?;
            match at {
                None if json => io.json(&json!({ "p3": poly.to_string() }))?,
                None => io.out(format_args!("{poly}\n"))?,
                Some(q) => {
                    let q0 = BigRational::from_str(q.trim()).map_err(|_| {
                        Failure::invalid(format!("cannot parse `{q}` as a rational"))
                    })?;
                    let v = poly.evaluate(&q0).map_err(Failure::invalid)?;
                    if json {
                        io.json(&json!({ "p3": poly.to_string(), "at": q0.to_string(), "value": v.to_string() }))?;
                    } else {
                        io.out(format_args!("{v}\n"))?;
                    }
                }
            }
        }
        Command::Reduce { file, ring, seed } => {
            let g = io.read_graph(&file)?;
            let strategy = seed.map_or(Strategy::Priority, Strategy::Random);
            match ring {
                Ring::Euler => {
                    let (v, tr) = reduce_with(&g, &RelationWeights::<BigInt>::euler(), strategy)?;
                    emit_reduction(io, json, "euler", &v, Some(&tr), seed)?;
                }
                Ring::P3 => {
                    if !g.is_bipartite() {
                        return Err(ReduceError::NotBipartite.into());
                    }
                    let (v, tr) = reduce_with(&g, &RelationWeights::<LaurentPoly>::p3(), strategy)?;
                    emit_reduction(io, json, "p3", &v, Some(&tr), seed)?;
                }
            }
        }
        Command::Verify {
            suite,
            trials,
            tol,
            seed,
        } => {
            let report = match suite {
                Suite::Theorem1 => verify::euler_equals_tait(),
                Suite::Conservation => verify::conservation(),
                Suite::Lemma5 => verify::order_two_products(
                    trials.unwrap_or(verify::DEFAULT_PRODUCT_TRIALS),
                    tol,
                    seed,
                ),
                Suite::Roundtrip => verify::roundtrip(
                    trials.unwrap_or(verify::DEFAULT_ROUNDTRIP_TRIALS),
                    tol,
                    seed,
                ),
            };
            emit_report(io, json, &report)?;
            if !report.passed() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Gen { family, params } => {
            let fam = if params.is_empty() {
                CatalogFamily::from_str(&family)
            } else {
                CatalogFamily::parse(&family, &params)
            }
            .map_err(Failure::invalid)?;
            let g = fam.build().map_err(Failure::invalid)?;
            let text = serialize_map(&g);
            if json {
                io.json(&json!({ "family": fam.to_string(), "graph": text }))?;
            } else {
                io.out(text)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn emit_reduction<R: Display>(
    io: &mut Io<'_>,
    json: bool,
    name: &str,
    value: &R,
    trace: Option<&ReductionTrace<R>>,
    seed: Option<u64>,
) -> Result<(), Failure> {
    if json {
        let mut obj = json!({ name: value.to_string() });
        if let Some(s) = seed {
            obj["seed"] = json!(s);
        }
        if let Some(tr) = trace {
            obj["trace"] = trace_json(tr);
        }
        return io.json(&obj);
    }
    if let Some(tr) = trace {
        if let Some(s) = seed {
            io.out(format_args!("seed: {s}\n"))?;
        }
        io.out(tr)?;
        io.out(format_args!("{name}: {value}\n"))
    } else {
        io.out(format_args!("{value}\n"))
    }
}

fn trace_json<R: Display>(tr: &ReductionTrace<R>) -> Value {
    let nodes: Vec<Value> = tr
        .nodes()
        .iter()
        .enumerate()
        .map(|(id, node)| match &node.step {
            TraceStep::Empty => {
                json!({ "id": id, "depth": node.depth, "move": "empty", "multiplier": "1" })
            }
            TraceStep::Move {
                kind,
                face,
                multiplier,
                children,
            } => json!({
                "id": id,
                "depth": node.depth,
                "move": kind.to_string(),
                "face": face.iter().map(|h| h.0).collect::<Vec<_>>(),
                "multiplier": multiplier.to_string(),
                "children": children,
                "edges": node.graph.num_edges(),
            }),
        })
        .collect();
    Value::Array(nodes)
}

fn emit_report(io: &mut Io<'_>, json: bool, report: &VerifyReport) -> Result<(), Failure> {
    if json {
        let v = serde_json::to_value(report).map_err(Failure::invalid)?;
        io.json(&v)
    } else {
        io.out(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("tait").chain(args.iter().copied()),
            &mut input.as_bytes(),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn in_process_pipeline() {
        let (code, theta, _) = run_str(&["gen", "theta"], "");
        assert_eq!(code, EXIT_OK);
        assert_eq!(run_str(&["count"], &theta).1, "6\n");
        assert_eq!(run_str(&["euler", "-"], &theta).1, "6\n");
    }

    #[test]
    fn exit_codes() {
        let (_, dodeca, _) = run_str(&["gen", "dodecahedron"], "");
        let (code, _, err) = run_str(&["euler"], &dodeca);
        assert_eq!(code, EXIT_IRREDUCIBLE);
        assert!(err.starts_with("error: irreducible"));
        let (_, k4, _) = run_str(&["gen", "k4"], "");
        assert_eq!(run_str(&["p3"], &k4).0, EXIT_NOT_BIPARTITE);
        assert_eq!(run_str(&["count"], "loops x\n").0, EXIT_INVALID);
        assert_eq!(run_str(&["verify", "sideways"], "").0, EXIT_INVALID);
        assert_eq!(run_str(&["--help"], "").0, EXIT_OK);
    }
}
