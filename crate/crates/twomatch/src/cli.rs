//! The `twomatch` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use twomatch_core::extform::{build_extended_formulation, emit_lp, size_report, Membership};
use twomatch_core::flawed::{demo_counterexample, flawed_separate_paths};
use twomatch_core::matching::{max_weight_b_matching, nu};
use twomatch_core::model::{Allocation, Coalition, Instance, Violation};
use twomatch_core::oracle::{
    check_cut_system, constraint_check_bruteforce, core_check_bruteforce, enumerate_constraints, negative_cycle_bruteforce,
    nu_bruteforce, ConstraintVerdict, CoreVerdict, CutVerdict, OracleError,
};
use twomatch_core::rational::{parse_rational, Rational};
use twomatch_core::separation::{build_g2, separate_all, SeparationVerdict};

use crate::format::{emit_instance, parse_allocation, parse_instance, FormatError};
use crate::parallel::{check_membership_with_jobs, separate_with_jobs};
use crate::random::{random_instance, RandomError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FILE: i32 = 3;
pub const EXIT_GUARD: i32 = 4;
pub const EXIT_VIOLATED: i32 = 10;

#[derive(Debug, Parser)]
#[command(name = "twomatch", version, about = "Exact core membership and separation for 2-matching games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InstanceArg {
    /// Instance file
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
}

#[derive(Debug, Args)]
struct GameArgs {
    /// Instance file
    #[arg(short = 'i', long = "instance")]
    instance: PathBuf,
    /// Allocation file
    #[arg(short = 'a', long = "alloc")]
    alloc: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print nu(N), the maximum weight of a b-matching
    Value {
        #[command(flatten)]
        input: InstanceArg,
        /// Also list the edges of the optimal b-matching
        #[arg(short = 'm', long)]
        matching: bool,
    },
    /// Decide core membership and print the first violated constraint
    Check {
        #[command(flatten)]
        game: GameArgs,
        #[arg(short = 'j', long, default_value = "1")]
        jobs: NonZeroUsize,
    },
    /// Decide core membership with a full certificate
    Separate {
        #[command(flatten)]
        game: GameArgs,
        #[arg(short = 'j', long, default_value = "1")]
        jobs: NonZeroUsize,
        /// List every violation the separation stages find
        #[arg(long)]
        all: bool,
    },
    /// Build, emit, size or check the extended formulation
    Extform {
        #[command(flatten)]
        input: InstanceArg,
        /// Write the formulation as an LP file
        #[arg(short = 'e', long, value_name = "FILE", group = "mode")]
        emit: Option<PathBuf>,
        /// Check the allocation given by --alloc
        #[arg(short = 'c', long, group = "mode", requires = "alloc")]
        check: bool,
        /// Print variable and constraint counts
        #[arg(short = 's', long, group = "mode")]
        size: bool,
        #[arg(short = 'a', long)]
        alloc: Option<PathBuf>,
        #[arg(short = 'j', long, default_value = "1")]
        jobs: NonZeroUsize,
    },
    /// Run the layered-path counterexample demo, or the layered method on input
    Flaw {
        #[arg(short = 'i', long = "instance", requires = "alloc")]
        instance: Option<PathBuf>,
        #[arg(short = 'a', long = "alloc", requires = "instance")]
        alloc: Option<PathBuf>,
    },
    /// Generate a random instance
    Random {
        #[arg(short = 's', long)]
        seed: u64,
        #[arg(short = 'n', long)]
        n: usize,
        /// Edge probability, e.g. 1/2
        #[arg(short = 'd', long, value_parser = rational_arg)]
        density: Rational,
        #[arg(short = 'w', long)]
        wmax: u64,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Brute-force reference checks
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
}

#[derive(Debug, Subcommand)]
enum OracleOp {
    /// nu(S) by edge-subset enumeration
    Nu {
        #[command(flatten)]
        input: InstanceArg,
        /// Comma-separated coalition; the grand coalition by default
        #[arg(short = 'S', long, value_delimiter = ',')]
        coalition: Vec<usize>,
    },
    /// Core membership by coalition enumeration
    Core {
        #[command(flatten)]
        game: GameArgs,
    },
    /// List the cycle and path constraints
    Constraints {
        #[command(flatten)]
        input: InstanceArg,
    },
    /// Core membership from the cycle and path constraints
    ConstraintCheck {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Most negative cycle of G2 under the allocation's transfer costs
    Negcycle {
        #[command(flatten)]
        game: GameArgs,
    },
    /// Check x against every cut inequality of the instance graph
    Cuts {
        #[command(flatten)]
        input: InstanceArg,
        /// One rational per edge, comma-separated
        #[arg(short = 'x', long, value_delimiter = ',', value_parser = rational_arg, required = true)]
        x: Vec<Rational>,
    },
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Guard(#[from] OracleError),
    #[error("{0}")]
    Random(#[from] RandomError),
    #[error("{0}")]
    Usage(String),
    #[error("write failed: {0}")]
    Output(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Format { .. } | CliError::Output(_) => EXIT_FILE,
            CliError::Guard(_) => EXIT_GUARD,
            CliError::Random(_) | CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_instance(&read(path)?, &stem).map_err(|source| CliError::Format { path: path.to_path_buf(), source })
}

fn load_game(game: &GameArgs) -> Result<(Instance, Allocation), CliError> {
    let inst = load_instance(&game.instance)?;
    let p =
        parse_allocation(&read(&game.alloc)?, &inst).map_err(|source| CliError::Format { path: game.alloc.clone(), source })?;
    Ok((inst, p))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// The first line of a verdict report.
pub fn verdict_line(violation: Option<&Violation>) -> String {
    match violation {
        None => "IN_CORE".to_string(),
        Some(v) => format!("VIOLATED {v}"),
    }
}

fn list(items: impl IntoIterator<Item = usize>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn violation_details(inst: &Instance, v: &Violation) -> Vec<String> {
    let mut lines = vec![format!("witness_edges: {}", list(v.witness_edges.iter().copied()))];
    lines.push(format!("nu(S): {}", nu(inst, &v.coalition)));
    lines.push(format!("gap: {}", v.gap()));
    lines
}

struct Outcome {
    lines: Vec<String>,
    code: i32,
}

impl Outcome {
    fn ok(lines: Vec<String>) -> Self {
        Outcome { lines, code: EXIT_OK }
    }

    fn verdict(lines: Vec<String>, violated: bool) -> Self {
        Outcome { lines, code: if violated { EXIT_VIOLATED } else { EXIT_OK } }
    }
}

fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Value { input, matching } => {
            let inst = load_instance(&input.instance)?;
            let best = max_weight_b_matching(&inst);
            let mut lines = vec![best.weight.to_string()];
            if matching {
                lines.push(format!("edges: {}", list(best.edges.iter().copied())));
            }
            Ok(Outcome::ok(lines))
        }
        Command::Check { game, jobs } => {
            let (inst, p) = load_game(&game)?;
            let verdict = separate_with_jobs(&inst, &p, jobs);
            Ok(Outcome::verdict(vec![verdict_line(verdict.violation())], !verdict.in_core()))
        }
        Command::Separate { game, jobs, all } => {
            let (inst, p) = load_game(&game)?;
            let verdict = separate_with_jobs(&inst, &p, jobs);
            let mut lines = vec![verdict_line(verdict.violation())];
            if let SeparationVerdict::Violated(v) = &verdict {
                lines.extend(violation_details(&inst, v));
                debug_assert!(v.verify(&inst, &p).is_ok());
            }
            if all {
                let every = separate_all(&inst, &p);
                lines.push(format!("violations: {}", every.len()));
                lines.extend(every.iter().map(|v| format!("  {v}")));
            }
            Ok(Outcome::verdict(lines, !verdict.in_core()))
        }
        Command::Extform { input, emit, check, size, alloc, jobs } => {
            let inst = load_instance(&input.instance)?;
            if let Some(path) = emit {
                let sys = build_extended_formulation(&inst);
                let mut text = String::new();
                emit_lp(&sys, &mut text).expect("string sink");
                write_file(&path, &text)?;
                return Ok(Outcome::ok(vec![format!(
                    "wrote {} variables, {} constraints to {}",
                    sys.variable_count(),
                    sys.constraint_count(),
                    path.display()
                )]));
            }
            if check {
                let path = alloc.expect("clap enforces --alloc");
                let p = parse_allocation(&read(&path)?, &inst).map_err(|source| CliError::Format { path, source })?;
                return Ok(match check_membership_with_jobs(&inst, &p, jobs) {
                    Membership::InCore => Outcome::verdict(vec!["IN_CORE".into()], false),
                    Membership::NotInCore(reason) => Outcome::verdict(vec![format!("NOT_IN_CORE {reason}")], true),
                });
            }
            if size {
                let report = size_report(&inst);
                return Ok(Outcome::ok(report.to_string().lines().map(String::from).collect()));
            }
            Err(CliError::Usage("extform needs one of --emit, --check or --size".into()))
        }
        Command::Flaw { instance, alloc } => match (instance, alloc) {
            (Some(instance), Some(alloc)) => {
                let (inst, p) = load_game(&GameArgs { instance, alloc })?;
                Ok(match flawed_separate_paths(&inst, &p) {
                    None => Outcome::verdict(vec!["NO_NEGATIVE_PATH".into()], false),
                    Some(path) => Outcome::verdict(
                        vec![format!(
                            "NEGATIVE_PATH i0={} j0={} k={} vertices=({}) weight={}",
                            path.i0,
                            path.j0,
                            path.k,
                            path.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                            path.weight
                        )],
                        true,
                    ),
                })
            }
            _ => Ok(Outcome::ok(demo_counterexample().text.lines().map(String::from).collect())),
        },
        Command::Random { seed, n, density, wmax, output } => {
            let inst = random_instance(seed, n, &density, wmax)?;
            let text = emit_instance(&inst);
            match output {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(Outcome::ok(vec![format!("wrote {} ({} vertices, {} edges)", path.display(), inst.n(), inst.m())]))
                }
                None => Ok(Outcome::ok(text.lines().map(String::from).collect())),
            }
        }
        Command::Oracle { op } => oracle(op),
    }
}

fn oracle(op: OracleOp) -> Result<Outcome, CliError> {
    match op {
        OracleOp::Nu { input, coalition } => {
            let inst = load_instance(&input.instance)?;
            let s = if coalition.is_empty() {
                Coalition::grand(&inst)
            } else {
                if let Some(&v) = coalition.iter().find(|&&v| v >= inst.n()) {
                    return Err(CliError::Usage(format!("vertex {v} not in instance")));
                }
                Coalition::new(coalition).map_err(|e| CliError::Usage(e.to_string()))?
            };
            Ok(Outcome::ok(vec![nu_bruteforce(&inst, &s)?.to_string()]))
        }
        OracleOp::Core { game } => {
            let (inst, p) = load_game(&game)?;
            Ok(match core_check_bruteforce(&inst, &p)? {
                CoreVerdict::InCore => Outcome::verdict(vec!["IN_CORE".into()], false),
                CoreVerdict::Violated(v) => {
                    let kind = if v.total { "TotalValue" } else { "Coalition" };
                    Outcome::verdict(
                        vec![format!("VIOLATED kind={kind} S={} p(S)={} bound={}", v.coalition, v.allocated, v.value)],
                        true,
                    )
                }
            })
        }
        OracleOp::Constraints { input } => {
            let inst = load_instance(&input.instance)?;
            let family = enumerate_constraints(&inst)?;
            let mut lines = vec![format!("cycles: {}", family.cycles.len())];
            lines.extend(family.cycles.iter().map(|c| format!("  cycle {}", list(c.vertices.iter().copied()))));
            lines.push(format!("paths: {}", family.paths.len()));
            lines.extend(family.paths.iter().map(|c| format!("  path {}", list(c.vertices.iter().copied()))));
            Ok(Outcome::ok(lines))
        }
        OracleOp::ConstraintCheck { game } => {
            let (inst, p) = load_game(&game)?;
            Ok(match constraint_check_bruteforce(&inst, &p)? {
                ConstraintVerdict::InCore => Outcome::verdict(vec!["IN_CORE".into()], false),
                ConstraintVerdict::Violated(v) => Outcome::verdict(vec![verdict_line(Some(&v))], true),
            })
        }
        OracleOp::Negcycle { game } => {
            let (inst, p) = load_game(&game)?;
            let g2 = build_g2(&inst, &p);
            Ok(match negative_cycle_bruteforce(&g2)? {
                None => Outcome::verdict(vec!["NO_NEGATIVE_CYCLE".into()], false),
                Some(c) => Outcome::verdict(
                    vec![format!("NEGATIVE_CYCLE vertices={} cost={}", list(c.vertices.iter().copied()), c.cost)],
                    true,
                ),
            })
        }
        OracleOp::Cuts { input, x } => {
            let inst = load_instance(&input.instance)?;
            if x.len() != inst.m() {
                return Err(CliError::Usage(format!("--x needs {} values, got {}", inst.m(), x.len())));
            }
            let g = twomatch_core::negcycle::CostedGraph::on_range(
                inst.n(),
                inst.edges().iter().map(|e| (e.u, e.v)).collect(),
                vec![Rational::from_integer(0.into()); inst.m()],
            )
            .expect("instances are simple graphs");
            Ok(match check_cut_system(&g, &x)? {
                CutVerdict::Holds => Outcome::verdict(vec!["HOLDS".into()], false),
                CutVerdict::Violated { side, edge } => Outcome::verdict(
                    vec![format!("VIOLATED side={{{}}} edge={edge}", list(side.iter().copied()).replace(' ', ","))],
                    true,
                ),
                CutVerdict::NegativeEntry { edge } => Outcome::verdict(vec![format!("VIOLATED negative x at edge {edge}")], true),
            })
        }
    }
}

/// Runs the command line on `args` (program name first), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            for line in &outcome.lines {
                if let Err(e) = writeln!(out, "{line}") {
                    let _ = writeln!(err, "error: {}", CliError::Output(e));
                    return EXIT_FILE;
                }
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
