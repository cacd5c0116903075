//! Command-line front end for the `irrseq` library.
//!
//! Exit codes: 0 success, 1 a check or bound failed, 2 bad input,
//! 3 the search node cap was hit.

pub mod input;
pub mod report;
pub mod verify;

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use irrseq::families::{corpus, CorpusEntry, FamilySpec};
use irrseq::parallel::with_jobs;
use irrseq::search::{analyze_with, relative_davenport_with, RecordStatus, SearchError, DEFAULT_MAX_NODES};
use irrseq::{Execution, SearchConfig};

use input::{load, resolve_element};
use report::{write_rows, Format, ReportRow};
use verify::{Suite, Verifier};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_BAD_INPUT: u8 = 2;
pub const EXIT_CAPPED: u8 = 3;

/// Seed for the random multisets sampled by `verify`.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "irrseq", version, about = "Irreducible sequences and relative Davenport constants of finite commutative semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the operation table of a family member as JSON.
    Gen {
        /// e.g. `s1:n=4,r=2`, `s2:m=3`, `zn:n=6`, `zmod:12`, `zmodprod:2,4`
        spec: String,
    },
    /// Bounds and exact relative Davenport constants, one row per element.
    Analyze {
        /// Family spec, JSON file, or `-` for JSON on stdin.
        input: String,
        /// Only report this element (label or index).
        #[arg(long)]
        element: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run a verification suite and print one PASS/FAIL line per check.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Family specs to check instead of the built-in corpus. Separate
        /// several with `;` or repeat the flag.
        #[arg(long)]
        corpus: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print a longest irreducible sequence with sum in the given element's class.
    Witness {
        input: String,
        #[arg(long)]
        element: String,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SearchArgs {
    /// Worker threads; 1 runs the search sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Give up after visiting this many search nodes.
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: u64,
}

impl SearchArgs {
    fn config(self) -> SearchConfig {
        SearchConfig {
            max_nodes: self.max_nodes,
            execution: if self.jobs == Some(1) {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
            ..SearchConfig::default()
        }
    }
}

/// Runs a parsed command, writing results to `out` and diagnostics to
/// stderr. Returns the process exit code.
pub fn run(cli: Cli, out: &mut (dyn Write + Send)) -> u8 {
    let result = match cli.command {
        Command::Gen { spec } => gen(&spec, out),
        Command::Analyze {
            input,
            element,
            format,
            search,
        } => with_jobs(search.jobs, || analyze(&input, element.as_deref(), format, search.config(), out)),
        Command::Verify {
            suite,
            corpus,
            seed,
            search,
        } => with_jobs(search.jobs, || verify(suite, &corpus, seed, search.config(), out)),
        Command::Witness { input, element, search } => {
            with_jobs(search.jobs, || witness(&input, &element, search.config(), out))
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            eprintln!("irrseq: {message}");
            code
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn bad_input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_BAD_INPUT,
        message: message.into(),
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure {
        code: EXIT_FAILED,
        message: format!("writing output: {e}"),
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        let code = match e {
            SearchError::SearchCapExceeded { .. } => EXIT_CAPPED,
            SearchError::EmptySequence | SearchError::OutOfRange { .. } => EXIT_BAD_INPUT,
            _ => EXIT_FAILED,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn gen(spec: &str, out: &mut (dyn Write + Send)) -> Result<u8, Failure> {
    let spec: FamilySpec = spec.parse().map_err(|e| bad_input(format!("{e}")))?;
    let instance = spec.build().map_err(|e| bad_input(e.to_string()))?;
    let doc = instance
        .semigroup
        .to_json(Some(json!({ "family": spec.to_string(), "name": instance.name })));
    let text = serde_json::to_string_pretty(&doc).expect("tables serialize");
    writeln!(out, "{text}").map_err(io_failure)?;
    Ok(EXIT_OK)
}

fn analyze(
    input: &str,
    element: Option<&str>,
    format: Format,
    config: SearchConfig,
    out: &mut (dyn Write + Send),
) -> Result<u8, Failure> {
    let s = load(input).map_err(bad_input)?.semigroup;
    let only = match element {
        Some(name) => {
            let a = resolve_element(&s, name).map_err(bad_input)?;
            if s.identity() == Some(a) {
                return Err(bad_input(format!("{name} is the identity: D_a = 0 by convention")));
            }
            Some(a)
        }
        None => None,
    };
    let report = analyze_with(&s, &config)?;
    let rows: Vec<ReportRow> = report
        .records
        .iter()
        .filter(|r| only.is_none_or(|a| r.element() == a))
        .map(|r| ReportRow::new(&s, r))
        .collect();
    write_rows(&rows, format, &mut *out).map_err(|message| Failure {
        code: EXIT_FAILED,
        message,
    })?;
    let status = |st| report.records.iter().filter(|r| only.is_none_or(|a| r.element() == a)).any(|r| r.status == st);
    Ok(if status(RecordStatus::BoundViolation) {
        EXIT_FAILED
    } else if status(RecordStatus::CapExceeded) {
        EXIT_CAPPED
    } else {
        EXIT_OK
    })
}

fn entries(specs: &[String]) -> Result<Vec<CorpusEntry>, Failure> {
    if specs.is_empty() {
        return Ok(corpus());
    }
    specs
        .iter()
        .flat_map(|s| s.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let spec: FamilySpec = s.parse().map_err(|e| bad_input(format!("{s}: {e}")))?;
            spec.corpus_entry().map_err(|e| bad_input(format!("{s}: {e}")))
        })
        .collect()
}

fn verify(suite: Suite, specs: &[String], seed: u64, config: SearchConfig, out: &mut (dyn Write + Send)) -> Result<u8, Failure> {
    let entries = entries(specs)?;
    let checks = Verifier::new(config, seed).run(suite, &entries);
    for c in &checks {
        writeln!(out, "{c}").map_err(io_failure)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    eprintln!("{} checks, {failed} failed", checks.len());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn witness(input: &str, element: &str, config: SearchConfig, out: &mut (dyn Write + Send)) -> Result<u8, Failure> {
    let loaded = load(input).map_err(bad_input)?;
    let s = &loaded.semigroup;
    let a = resolve_element(s, element).map_err(bad_input)?;
    if s.identity() == Some(a) {
        writeln!(out, "D_a = 0 by convention").map_err(io_failure)?;
        return Ok(EXIT_BAD_INPUT);
    }
    let (found, _) = relative_davenport_with(s, a, &config)?;
    writeln!(out, "{}", s.format_sequence(&found.witness)).map_err(io_failure)?;
    let Some(ring) = loaded.ring.filter(|r| r.is_pir() && !r.is_unit(a)) else {
        return Ok(EXIT_OK);
    };
    let built = ring.extremal_sequence_pir(a).map_err(|e| Failure {
        code: EXIT_FAILED,
        message: e.to_string(),
    })?;
    let same = built.len() == found.value;
    let marker = if same {
        format!("equal length {}", built.len())
    } else {
        format!("length {} differs from {}", built.len(), found.value)
    };
    writeln!(out, "constructive {} [{marker}]", s.format_sequence(&built)).map_err(io_failure)?;
    Ok(if same { EXIT_OK } else { EXIT_FAILED })
}
