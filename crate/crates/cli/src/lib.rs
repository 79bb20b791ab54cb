//! Command-line front end for `young-endo`.
//!
//! [`execute`] parses arguments, runs one command inside a rayon pool sized
//! from `YOUNG_ENDO_THREADS`, and returns the exit code with captured output.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use young_endo::celldatum::{build_cell_datum_with, verify_cell_datum, CellDatum};
use young_endo::classify::{
    is_quasi_hereditary, partition_algebra_report, tensor_criterion_by_name, tensor_row, tensor_table, Generic,
};
use young_endo::endoalgebra::{orbit_pair_classes, AlgebraDump, AlgebraElement, EndoAlgebra};
use young_endo::lattice::SparseVec;
use young_endo::partitions::kostka;
use young_endo::pdominance::{p_dominates, p_dominates_oracle};
use young_endo::youngset::{tensor_young_set, YoungSet, DEFAULT_MAX_POINTS};
use young_endo::{Error, Partition, Prime};

pub const THREADS_ENV: &str = "YOUNG_ENDO_THREADS";

#[derive(Debug, Parser)]
#[command(name = "young-endo", version, about = "Endomorphism algebras of Young permutation modules")]
pub struct Cli {
    /// Abort when the Young set has more points than this
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_POINTS)]
    pub max_points: u128,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasi-heredity verdict for End(kΓ) in characteristic p (JSON)
    Classify {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        p: u32,
    },
    /// Quasi-heredity of the tensor-space family I(n, r)
    ClassifyTensor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: u32,
        /// Decision procedure: generic or closed-form
        #[arg(long, default_value = "generic")]
        criterion: String,
        /// Report both procedures and whether they agree
        #[arg(long)]
        both: bool,
    },
    /// Partition algebra closed form against the tensor family at N = n + p·s
    PartitionAlgebra {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
    },
    /// Whether tau is p-dominated by mu, with a witness
    Pdom {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        tau: String,
        #[arg(long)]
        p: u32,
        /// Cross-check against the exhaustive oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Kostka number K(lambda, mu)
    Kostka {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
    },
    /// Orbits of Sym(n) on Ω×Ω (JSON)
    Orbits {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Orbit basis and structure constants of End(ZΩ) (JSON dump)
    Construct {
        #[command(flatten)]
        set: SetArgs,
        /// Write the dump here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Cell datum of End(ZΓ)
    Cell {
        #[command(flatten)]
        set: SetArgs,
        /// Write the datum as JSON
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Check the cell axioms and print the report
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Batch decision table
    Table {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        r_max: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
}

/// A Young set given either as text or as `I(n, r)`.
#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
pub struct SetArgs {
    /// Degree of the symmetric group
    #[arg(long)]
    pub n: Option<usize>,
    /// Orbit types, e.g. "2,1 x2; 3"
    #[arg(long, conflicts_with = "tensor")]
    pub support: Option<String>,
    /// The tensor-space model I(n, r)
    #[arg(long, num_args = 2, value_names = ["N", "R"])]
    pub tensor: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Tensor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Flag-level validation failure, reported before any computation.
#[derive(Debug, thiserror::Error)]
#[error("invalid value for {flag}: {reason}")]
struct FlagError {
    flag: &'static str,
    reason: String,
}

fn flag_err(flag: &'static str, reason: impl ToString) -> anyhow::Error {
    FlagError {
        flag,
        reason: reason.to_string(),
    }
    .into()
}

fn parse_partition(flag: &'static str, text: &str) -> Result<Partition> {
    text.parse().map_err(|e: Error| flag_err(flag, e))
}

fn parse_prime(p: u32) -> Result<Prime> {
    Prime::new(p).map_err(|e| flag_err("--p", e))
}

fn positive(flag: &'static str, v: usize) -> Result<usize> {
    if v == 0 {
        return Err(flag_err(flag, "must be at least 1"));
    }
    Ok(v)
}

impl SetArgs {
    fn resolve(&self) -> Result<YoungSet> {
        let set = match (&self.support, &self.tensor) {
            (Some(text), None) => match self.n {
                Some(n) => YoungSet::parse_with_n(text, n).map_err(|e| flag_err("--support", e))?,
                None => text.parse().map_err(|e: Error| flag_err("--support", e))?,
            },
            (None, Some(nr)) => {
                let (n, r) = (positive("--tensor", nr[0])?, positive("--tensor", nr[1])?);
                if self.n.is_some_and(|m| m != n) {
                    return Err(flag_err("--n", format!("disagrees with --tensor {n} {r}")));
                }
                tensor_young_set(n, r).map_err(|e| flag_err("--tensor", e))?
            }
            _ => return Err(flag_err("--support/--tensor", "give exactly one of them")),
        };
        Ok(set)
    }
}

fn to_json(value: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn sparse_json(v: &SparseVec) -> Value {
    Value::Array(v.iter().map(|(i, c)| json!([i, c.to_string()])).collect())
}

fn datum_json(datum: &CellDatum) -> Value {
    let cells: Vec<Value> = datum
        .cells
        .iter()
        .map(|cell| {
            json!({
                "lambda": cell.lambda,
                "d": cell.d.iter().map(|x| sparse_json(x.coeffs())).collect::<Vec<_>>(),
                "c": cell.c.iter()
                    .map(|row| row.iter().map(|x| sparse_json(x.coeffs())).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "gamma": datum.gamma,
        "omega": datum.algebra.omega(),
        "classes": datum.algebra.classes(),
        "lambda_plus": datum.lambda_plus(),
        "cells": cells,
    })
}

/// Reloads a dump and compares products on a deterministic sample of pairs.
fn spot_check(alg: &EndoAlgebra, text: &str) -> Result<()> {
    let dump: AlgebraDump = serde_json::from_str(text)?;
    let loaded = EndoAlgebra::from_dump(dump)?;
    let dim = alg.dim();
    let step = (dim * dim / 64).max(1);
    for k in (0..dim * dim).step_by(step) {
        let (a, b) = (AlgebraElement::basis(k / dim), AlgebraElement::basis(k % dim));
        if loaded.multiply(&a, &b) != alg.multiply(&a, &b) {
            bail!("dump round trip disagrees at classes {} x {}", k / dim, k % dim);
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String> {
    let max_points = cli.max_points;
    match cli.command {
        Command::Classify { set, p } => {
            let p = parse_prime(p)?;
            let gamma = set.resolve()?;
            to_json(&is_quasi_hereditary(&gamma, p)?)
        }
        Command::ClassifyTensor {
            n,
            r,
            p,
            criterion,
            both,
        } => {
            let (n, r, p) = (positive("--n", n)?, positive("--r", r)?, parse_prime(p)?);
            if both {
                return to_json(&tensor_row(n, r, p)?);
            }
            let crit = tensor_criterion_by_name(&criterion).map_err(|e| flag_err("--criterion", e))?;
            let verdict = crit.decide(n, r, p)?;
            to_json(&json!({ "n": n, "r": r, "p": p.get(), crit.name(): verdict }))
        }
        Command::PartitionAlgebra { r, n, p } => {
            let (r, n, p) = (positive("--r", r)?, positive("--n", n)?, parse_prime(p)?);
            to_json(&partition_algebra_report(r, n, p, &Generic)?)
        }
        Command::Pdom { mu, tau, p, oracle } => {
            let mu = parse_partition("--mu", &mu)?;
            let tau = parse_partition("--tau", &tau)?;
            let p = parse_prime(p)?;
            let witness = p_dominates(&mu, &tau, p)?;
            let mut out = json!({
                "mu": mu,
                "tau": tau,
                "p": p.get(),
                "p_dominates": witness.is_some(),
                "witness": witness,
            });
            if oracle {
                let o = p_dominates_oracle(&mu, &tau, p)?;
                out["oracle"] = json!(o);
                out["agree"] = json!(o == out["p_dominates"]);
            }
            to_json(&out)
        }
        Command::Kostka { lambda, mu } => {
            let lambda = parse_partition("--lambda", &lambda)?;
            let mu = parse_partition("--mu", &mu)?;
            Ok(format!("{}\n", kostka(&lambda, &mu)?))
        }
        Command::Orbits { set } => {
            let omega = set.resolve()?;
            omega.check_point_limit(max_points)?;
            let classes = orbit_pair_classes(&omega)?;
            to_json(&json!({
                "n": omega.n(),
                "orbit_types": omega.orbit_types(),
                "class_count": classes.len(),
                "classes": classes,
            }))
        }
        Command::Construct { set, output } => {
            let omega = set.resolve()?;
            let alg = EndoAlgebra::with_limit(&omega, max_points)?;
            let text = serde_json::to_string(&alg.dump())? + "\n";
            spot_check(&alg, &text)?;
            match output {
                Some(path) => {
                    fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
                    Ok(format!("wrote {} classes to {}\n", alg.dim(), path.display()))
                }
                None => Ok(text),
            }
        }
        Command::Cell {
            set,
            dump,
            verify,
            format,
        } => {
            let gamma = set.resolve()?;
            let datum = build_cell_datum_with(&gamma, max_points)?;
            let mut out = String::new();
            if let Some(path) = &dump {
                fs::write(path, to_json(&datum_json(&datum))?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let report = if verify { Some(verify_cell_datum(&datum)?) } else { None };
            match format {
                ReportFormat::Json => {
                    let cells: Vec<_> = datum.cells.iter().map(|c| (c.lambda.clone(), c.size())).collect();
                    out = to_json(&json!({
                        "gamma": datum.gamma,
                        "omega": datum.algebra.omega(),
                        "cells": cells,
                        "report": report,
                    }))?;
                }
                ReportFormat::Text => {
                    writeln!(out, "Γ = {}, Ω = {}", datum.gamma, datum.algebra.omega())?;
                    match &report {
                        Some(r) => write!(out, "{r}")?,
                        None => {
                            let cells: Vec<String> =
                                datum.cells.iter().map(|c| format!("{}:{}", c.lambda, c.size())).collect();
                            writeln!(out, "cells {}", cells.join(", "))?;
                        }
                    }
                }
            }
            if report.as_ref().is_some_and(|r| !r.all_pass()) {
                bail!(VerificationFailed(out));
            }
            Ok(out)
        }
        Command::Table {
            family: Family::Tensor,
            p,
            n_max,
            r_max,
            format,
        } => {
            let p = parse_prime(p)?;
            let rows = tensor_table(p, positive("--n-max", n_max)?, positive("--r-max", r_max)?)?;
            match format {
                TableFormat::Json => to_json(&rows),
                TableFormat::Csv => {
                    let mut out = String::from("n,r,p,generic,closed_form,agree\n");
                    for row in &rows {
                        writeln!(
                            out,
                            "{},{},{},{},{},{}",
                            row.n, row.r, row.p, row.generic, row.closed_form, row.agree
                        )?;
                    }
                    Ok(out)
                }
            }
        }
    }
}

/// The report is still printed when an axiom fails.
#[derive(Debug, thiserror::Error)]
#[error("cell datum failed verification")]
struct VerificationFailed(String);

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::SizeLimitExceeded { .. }) => 2,
        _ => 1,
    }
}

/// Number of worker threads requested through the environment; `0` means one.
pub fn threads_from_env() -> Option<usize> {
    let v = std::env::var(THREADS_ENV).ok()?;
    v.trim().parse::<usize>().ok().map(|k| k.max(1))
}

/// Runs one invocation; `args` includes the program name.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads_from_env() {
        pool = pool.num_threads(k);
    }
    let result = match pool.build() {
        Ok(pool) => pool.install(|| run(cli)),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(err) => match err.downcast::<VerificationFailed>() {
            Ok(VerificationFailed(report)) => Outcome {
                code: 1,
                stdout: report,
                stderr: "error: cell datum failed verification\n".into(),
            },
            Err(err) => Outcome {
                code: exit_code(&err),
                stdout: String::new(),
                stderr: format!("error: {err:#}\n"),
            },
        },
    }
}
