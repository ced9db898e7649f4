//! Command-line front end for the annotated defeasible reasoner.
//!
//! Five subcommands over `.adl` files: `check` parses and validates,
//! `solve` prints the full conclusion set, `query` evaluates one body
//! expression under a proof context, `compare` cross-checks the engine
//! against the direct-derivation oracle and the inclusion chains (on files
//! or on freshly generated theories), and `bench` measures ground-program
//! size and solve time across theory sizes.
//!
//! Exit codes: 0 success, 1 parse/validation failure, 2 property violation
//! (crosscheck mismatch or inclusion violation), 3 usage error (bad flags,
//! missing file, malformed query expression). No environment variables are
//! consulted; output is deterministic given arguments and seed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use adl::conclusions::{check_inclusions, extract, query, solve, QueryMode};
use adl::engine::{evaluate, Semantics};
use adl::generate::{generate, generate_sized, AnnotationMode, GenConfig};
use adl::ground::ground;
use adl::oracle::crosscheck;
use adl::syntax::{parse_body_expr, parse_theory_named};
use adl::theory::{DefeasibleTheory, ProofTag};

const EXIT_INVALID: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "adl",
    version,
    about = "Reasoner for annotated defeasible theories",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate theory files, reporting defects with source spans.
    Check {
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Print every signed conclusion of a theory.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Kunen)]
        semantics: SemanticsArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Also list (tag, literal) pairs left undecided.
        #[arg(long)]
        undecided: bool,
    },
    /// Evaluate one body expression, e.g. `"fail [de] ~guilty"`.
    Query {
        file: PathBuf,
        /// Proof context that `free` annotations resolve to.
        #[arg(long, value_enum)]
        context: TagArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Defeasibly)]
        mode: ModeArg,
        expr: String,
    },
    /// Cross-check the engine against the direct-derivation oracle and the
    /// inclusion chains, on files or on generated theories.
    Compare {
        #[arg(value_name = "FILE", conflicts_with = "random")]
        files: Vec<PathBuf>,
        /// Check this many generated theories instead of files.
        #[arg(long, value_name = "N")]
        random: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Insist on the oracle leg: annotated input files become an error
        /// instead of being checked for inclusions only.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        #[command(flatten)]
        gen: GenFlags,
    },
    /// Measure ground-program size and solve time across theory sizes.
    Bench {
        /// Target theory sizes in symbols, e.g. `--sizes 100,1000,10000`.
        #[arg(long, required = true, value_delimiter = ',', value_name = "SIZE")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

/// Generation knobs shared by `compare --random`.
#[derive(Args)]
struct GenFlags {
    #[arg(long, default_value_t = 8)]
    atoms: usize,
    #[arg(long, default_value_t = 14)]
    rules: usize,
    #[arg(long, default_value_t = 3)]
    max_body: usize,
    #[arg(long, default_value_t = 5)]
    sup_pairs: usize,
    #[arg(long, default_value_t = 0.2)]
    fact_probability: f64,
    #[arg(long, default_value_t = 0.2)]
    strict_ratio: f64,
    #[arg(long, default_value_t = 0.15)]
    defeater_ratio: f64,
}

impl GenFlags {
    fn config(&self, seed: u64, annotation_mode: AnnotationMode) -> GenConfig {
        GenConfig {
            seed,
            atoms: self.atoms,
            rules: self.rules,
            max_body: self.max_body,
            sup_pairs: self.sup_pairs,
            annotation_mode,
            fact_probability: self.fact_probability,
            strict_ratio: self.strict_ratio,
            defeater_ratio: self.defeater_ratio,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    Kunen,
    Wf,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Semantics {
        match s {
            SemanticsArg::Kunen => Semantics::Kunen,
            SemanticsArg::Wf => Semantics::WellFounded,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Defeasibly,
    Supported,
}

#[derive(Clone, Copy, ValueEnum)]
enum TagArg {
    Pa,
    #[value(name = "pa*")]
    PaStar,
    De,
    #[value(name = "de*")]
    DeStar,
}

impl From<TagArg> for ProofTag {
    fn from(t: TagArg) -> ProofTag {
        match t {
            TagArg::Pa => ProofTag::Pa,
            TagArg::PaStar => ProofTag::PaStar,
            TagArg::De => ProofTag::De,
            TagArg::DeStar => ProofTag::DeStar,
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (`adl solve ... | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match cli.command {
        Command::Check { files } => cmd_check(&files),
        Command::Solve { file, semantics, format, undecided } => {
            cmd_solve(&file, semantics.into(), format, undecided)
        }
        Command::Query { file, context, mode, expr } => {
            cmd_query(&file, context.into(), mode, &expr)
        }
        Command::Compare { files, random, seed, oracle, format, gen } => {
            cmd_compare(&files, random, seed, oracle, format, &gen)
        }
        Command::Bench { sizes, seed, format } => cmd_bench(&sizes, seed, format),
    }
}

/// Read and parse one theory file. `Err` carries the exit code, with the
/// diagnostics already printed to stderr.
fn load(path: &Path) -> Result<DefeasibleTheory, u8> {
    let src = match std::fs::read_to_string(path) {
        Ok(src) => src,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return Err(EXIT_USAGE);
        }
    };
    parse_theory_named(&src, &path.display().to_string()).map_err(|errors| {
        for e in errors {
            eprintln!("{e}");
        }
        EXIT_INVALID
    })
}

fn cmd_check(files: &[PathBuf]) -> ExitCode {
    let mut worst = 0;
    for path in files {
        match load(path) {
            Ok(t) => println!(
                "{}: ok ({} facts, {} rules, {} priorities)",
                path.display(),
                t.facts.len(),
                t.rules.len(),
                t.sup.len()
            ),
            // Usage errors outrank invalid files in the summary code.
            Err(code) => worst = worst.max(code),
        }
    }
    ExitCode::from(worst)
}

fn cmd_solve(file: &Path, semantics: Semantics, format: FormatArg, undecided: bool) -> ExitCode {
    let t = match load(file) {
        Ok(t) => t,
        Err(code) => return ExitCode::from(code),
    };
    let records = solve(&t, semantics).records(undecided);
    match format {
        FormatArg::Text => {
            for r in &records {
                println!("{}{} {}", r.verdict, r.tag, r.literal);
            }
        }
        FormatArg::Json => println!("{}", serde_json::to_string(&records).expect("serializable")),
    }
    ExitCode::SUCCESS
}

fn cmd_query(file: &Path, context: ProofTag, mode: ModeArg, expr: &str) -> ExitCode {
    let t = match load(file) {
        Ok(t) => t,
        Err(code) => return ExitCode::from(code),
    };
    let expr = match parse_body_expr(expr) {
        Ok(expr) => expr,
        Err(errors) => {
            for e in errors {
                eprintln!("{e}");
            }
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mode = match mode {
        ModeArg::Defeasibly => QueryMode::Defeasibly,
        ModeArg::Supported => QueryMode::Supported,
    };
    let outcome = query(&t, context, &expr, mode, Semantics::Kunen);
    if outcome.unknown_literal {
        eprintln!("warning: `{}` does not occur in the theory", expr.literal);
    }
    println!("{}", outcome.verdict);
    ExitCode::SUCCESS
}

/// Per-input result row of `compare`.
#[derive(Serialize)]
struct CompareRow {
    input: String,
    /// `None` when the oracle leg was skipped (annotated input).
    mismatches: Option<usize>,
    violations: usize,
}

#[derive(Serialize)]
struct CompareReport {
    schema: u32,
    rows: Vec<CompareRow>,
}

fn cmd_compare(
    files: &[PathBuf],
    random: Option<u64>,
    seed: u64,
    oracle: bool,
    format: FormatArg,
    gen: &GenFlags,
) -> ExitCode {
    let mut rows = Vec::new();
    match random {
        Some(n) => {
            for i in 0..n {
                let theory_seed = seed.wrapping_add(i);
                // Oracle leg on a plain theory; inclusion leg on a fully
                // annotated one from the same seed.
                let plain = generate(&gen.config(theory_seed, AnnotationMode::None));
                let mismatches =
                    crosscheck(&plain).expect("generated plain theory").len();
                let violations =
                    check_inclusions(&solve(&plain, Semantics::Kunen)).len();
                let annotated =
                    generate(&gen.config(theory_seed, AnnotationMode::TagsAndFail));
                let violations =
                    violations + check_inclusions(&solve(&annotated, Semantics::Kunen)).len();
                rows.push(CompareRow {
                    input: format!("seed {theory_seed}"),
                    mismatches: Some(mismatches),
                    violations,
                });
            }
        }
        None => {
            if files.is_empty() {
                eprintln!("error: compare needs input files or --random N");
                return ExitCode::from(EXIT_USAGE);
            }
            for path in files {
                let t = match load(path) {
                    Ok(t) => t,
                    Err(code) => return ExitCode::from(code),
                };
                let mismatches = if t.is_plain() {
                    Some(crosscheck(&t).expect("plain theory").len())
                } else if oracle {
                    eprintln!(
                        "error: {}: theory uses annotations or fail-expressions; the \
                         direct-derivation oracle only covers plain theories, so \
                         --oracle cannot apply (drop --oracle to check inclusions only)",
                        path.display()
                    );
                    return ExitCode::from(EXIT_USAGE);
                } else {
                    None
                };
                let violations = check_inclusions(&solve(&t, Semantics::Kunen)).len();
                rows.push(CompareRow {
                    input: path.display().to_string(),
                    mismatches,
                    violations,
                });
            }
        }
    }

    let total_mismatches: usize = rows.iter().filter_map(|r| r.mismatches).sum();
    let total_violations: usize = rows.iter().map(|r| r.violations).sum();
    match format {
        FormatArg::Text => {
            for r in &rows {
                match r.mismatches {
                    Some(m) => println!(
                        "{}: {m} mismatches, {} violations",
                        r.input, r.violations
                    ),
                    None => println!(
                        "{}: oracle leg skipped (annotated), {} violations",
                        r.input, r.violations
                    ),
                }
            }
            println!(
                "total: {} inputs, {total_mismatches} mismatches, {total_violations} violations",
                rows.len()
            );
        }
        FormatArg::Json => {
            let report = CompareReport { schema: 1, rows };
            println!("{}", serde_json::to_string(&report).expect("serializable"));
        }
    }
    if total_mismatches + total_violations > 0 {
        ExitCode::from(EXIT_VIOLATION)
    } else {
        ExitCode::SUCCESS
    }
}

#[derive(Serialize)]
struct BenchRow {
    size: usize,
    ground_symbols: usize,
    millis: u128,
}

#[derive(Serialize)]
struct BenchReport {
    schema: u32,
    rows: Vec<BenchRow>,
}

fn cmd_bench(sizes: &[usize], seed: u64, format: FormatArg) -> ExitCode {
    let mut rows = Vec::new();
    for &size in sizes {
        let t = generate_sized(size, seed);
        let start = Instant::now();
        let program = ground(&t);
        let fx = evaluate(&program, Semantics::Kunen);
        let _ = extract(&program, &fx.interpretation);
        let millis = start.elapsed().as_millis();
        rows.push(BenchRow {
            size: t.symbol_count(),
            ground_symbols: program.symbol_count(),
            millis,
        });
    }
    match format {
        FormatArg::Text => {
            let mut out = String::from("size,ground_symbols,millis\n");
            for r in &rows {
                writeln!(out, "{},{},{}", r.size, r.ground_symbols, r.millis).unwrap();
            }
            print!("{out}");
        }
        FormatArg::Json => {
            let report = BenchReport { schema: 1, rows };
            println!("{}", serde_json::to_string(&report).expect("serializable"));
        }
    }
    ExitCode::SUCCESS
}
