//! Batch front end: every verb writes one JSON document to stdout (the
//! bound table can also be printed as aligned text). Failures print a
//! single JSON line `{"error": KIND, "message": TEXT}` on stderr.
//!
//! Exit codes: 0 success, 1 a verification found a counterexample, 2 bad
//! input, 3 a size budget was exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use conergy::congruence::{quotient, CongruenceLattice};
use conergy::enumeration::{all_lattices_with_budget, report_for, DEFAULT_BUDGET, HARD_BUDGET};
use conergy::extremal::equ_bound_table;
use conergy::lattice::LatticeDoc;
use conergy::oracle::cross_check;
use conergy::ualgebra::{all_congruences_alg, ce_bound_check, CeBoundReport, FiniteAlgebra};
use conergy::{all_congruences, combinatorial_energy, congruence_energy, Error, Lattice, Partition};

pub mod builder;
pub mod verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub const BUDGET_ENV: &str = "CONERGY_BUDGET_N";

#[derive(Parser, Debug)]
#[command(name = "conergy", version, about = "Congruence lattices and congruence energy of finite lattices")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(clap::Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Lattice JSON file ({"n", "covers"}); `energy` and `conlat` also take
    /// algebra JSON ({"n", "ops"}).
    file: Option<PathBuf>,
    /// Inline spec: chain:K, b4, m3, n5, dual:SPEC, glue:SPEC,SPEC,...
    #[arg(long)]
    builder: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// CE, per-congruence energies and |Con|.
    Energy {
        #[command(flatten)]
        source: Source,
    },
    /// Congruence lattice: members, Hasse diagram, atoms, verdicts.
    Conlat {
        #[command(flatten)]
        source: Source,
    },
    /// Quotient by a congruence given as a representative array.
    Quotient {
        #[command(flatten)]
        source: Source,
        /// e.g. [0,0,2,3]
        #[arg(long)]
        by: String,
    },
    /// Extremal report over all lattices of one order.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Write the lattices themselves (a JSON array of {"n", "covers"}).
        #[arg(long)]
        emit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; exit 1 on any counterexample.
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Partition-lattice energy bound for n = 1..max-n.
    Table {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Cross-check fast routes against brute force.
    Oracle {
        #[arg(long)]
        n: usize,
    },
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn input_error(kind: &str, message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        kind: kind.into(),
        message: message.into(),
    }
}

enum Loaded {
    Lattice(Lattice),
    Algebra(FiniteAlgebra),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error("io", format!("{}: {e}", path.display())))
}

fn load(source: &Source) -> Result<Loaded, Failure> {
    if let Some(spec) = &source.builder {
        return Ok(Loaded::Lattice(builder::build(spec)?));
    }
    let path = source.file.as_ref().expect("clap enforces one source");
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| input_error("json", format!("{}: {e}", path.display())))?;
    if value.get("ops").is_some() {
        Ok(Loaded::Algebra(FiniteAlgebra::from_json(&text)?))
    } else {
        Ok(Loaded::Lattice(Lattice::from_json(&text)?))
    }
}

fn load_lattice(source: &Source) -> Result<Lattice, Failure> {
    match load(source)? {
        Loaded::Lattice(l) => Ok(l),
        Loaded::Algebra(_) => Err(input_error("json", "expected a lattice, got an algebra")),
    }
}

fn budget_from_env() -> Result<usize, Failure> {
    match std::env::var(BUDGET_ENV) {
        Err(_) => Ok(DEFAULT_BUDGET),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(|b| b.min(HARD_BUDGET))
            .map_err(|_| input_error("env", format!("{BUDGET_ENV}={v:?} is not a number"))),
    }
}

#[derive(Serialize)]
struct MemberEnergy {
    partition: Partition,
    blocks: String,
    energy: u64,
}

#[derive(Serialize)]
struct EnergyReport {
    n: usize,
    ce: u64,
    con_size: usize,
    congruences: Vec<MemberEnergy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<CeBoundReport>,
}

fn energy_report(con: &CongruenceLattice, bound: Option<CeBoundReport>) -> EnergyReport {
    EnergyReport {
        n: con.host_size(),
        ce: congruence_energy(con),
        con_size: con.len(),
        congruences: con
            .members()
            .iter()
            .map(|p| MemberEnergy {
                partition: p.clone(),
                blocks: p.to_string(),
                energy: combinatorial_energy(p),
            })
            .collect(),
        bound,
    }
}

#[derive(Serialize)]
struct ConlatReport {
    host_n: usize,
    size: usize,
    members: Vec<Partition>,
    /// Covering pairs as indices into `members`.
    hasse: Vec<(usize, usize)>,
    atoms: Vec<Partition>,
    distributive: bool,
    boolean: bool,
}

fn conlat_report(con: &CongruenceLattice) -> ConlatReport {
    ConlatReport {
        host_n: con.host_size(),
        size: con.len(),
        members: con.members().to_vec(),
        hasse: con.hasse(),
        atoms: con.atoms(),
        distributive: con.is_distributive(),
        boolean: con.is_boolean(),
    }
}

fn congruences_of(loaded: &Loaded) -> Result<CongruenceLattice, Failure> {
    match loaded {
        Loaded::Lattice(l) => Ok(all_congruences(l)),
        Loaded::Algebra(a) => Ok(all_congruences_alg(a)?),
    }
}

#[derive(Serialize)]
struct QuotientReport {
    quotient: LatticeDoc,
    block_of: Vec<usize>,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn text_table(max_n: usize) -> Result<String, Failure> {
    let rows = equ_bound_table(max_n)?;
    let width = rows.last().map(|r| r.bound.to_string().len()).unwrap_or(1).max(5);
    let mut s = format!("{:>3}  {:>width$}\n", "n", "bound");
    for r in rows {
        s.push_str(&format!("{:>3}  {:>width$}\n", r.n, r.bound.to_string()));
    }
    Ok(s)
}

/// Returns the text for stdout and the exit code.
fn dispatch(verb: Verb) -> Result<(String, i32), Failure> {
    match verb {
        Verb::Energy { source } => {
            let loaded = load(&source)?;
            let con = congruences_of(&loaded)?;
            let bound = match &loaded {
                Loaded::Algebra(a) => Some(ce_bound_check(a)?),
                Loaded::Lattice(_) => None,
            };
            Ok((json(&energy_report(&con, bound)), EXIT_OK))
        }
        Verb::Conlat { source } => {
            let con = congruences_of(&load(&source)?)?;
            Ok((json(&conlat_report(&con)), EXIT_OK))
        }
        Verb::Quotient { source, by } => {
            let l = load_lattice(&source)?;
            let rep: Vec<usize> =
                serde_json::from_str(&by).map_err(|e| input_error("json", format!("--by: {e}")))?;
            let theta = Partition::from_rep(rep)?;
            let q = quotient(&l, &theta)?;
            let report = QuotientReport {
                quotient: q.lattice.to_doc(),
                block_of: q.block_of,
            };
            Ok((json(&report), EXIT_OK))
        }
        Verb::Enumerate { n, emit, out } => {
            let lattices = all_lattices_with_budget(n, budget_from_env()?)?;
            let text = if emit {
                let docs: Vec<LatticeDoc> = lattices.iter().map(Lattice::to_doc).collect();
                json(&docs)
            } else {
                json(&report_for(n, &lattices)?)
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, text)
                        .map_err(|e| input_error("io", format!("{}: {e}", path.display())))?;
                    Ok((String::new(), EXIT_OK))
                }
                None => Ok((text, EXIT_OK)),
            }
        }
        Verb::Verify { suite, n } => {
            let report = verify::run(suite, n, budget_from_env()?)?;
            let code = if report.has_counterexample() {
                EXIT_COUNTEREXAMPLE
            } else {
                EXIT_OK
            };
            Ok((json(&report), code))
        }
        Verb::Table { max_n, format } => match format {
            Format::Json => Ok((json(&equ_bound_table(max_n)?), EXIT_OK)),
            Format::Text => Ok((text_table(max_n)?, EXIT_OK)),
        },
        Verb::Oracle { n } => {
            let report = cross_check(n)?;
            let code = if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_COUNTEREXAMPLE
            };
            Ok((json(&report), code))
        }
    }
}

fn report_failure(err: &mut dyn Write, f: &Failure) {
    let line = serde_json::json!({ "error": f.kind, "message": f.message });
    let _ = writeln!(err, "{line}");
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            report_failure(err, &input_error("usage", first));
            return EXIT_INPUT;
        }
    };
    match dispatch(cli.verb) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            code
        }
        Err(f) => {
            report_failure(err, &f);
            f.code
        }
    }
}
