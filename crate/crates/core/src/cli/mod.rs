//! The `heegaard` command-line front end.
//!
//! Every subcommand reads a manifold file, resolves it to validated blocks
//! and prints one JSON document. Exit codes:
//!
//! | code | meaning                                                  |
//! |------|----------------------------------------------------------|
//! | 0    | success                                                  |
//! | 2    | invalid manifold, bad arguments, or dimension mismatch   |
//! | 3    | input is not well-formed JSON for the expected schema    |
//! | 4    | input file could not be read                             |
//! | 5    | torsion enumeration would exceed `HEEGAARD_MAX_TORSION`  |

pub mod files;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;

use crate::gluing::{GluingData, GluingError};
use crate::homology;
use crate::invariants::{self, LinkPresentation};

pub use files::{LinkFile, ManifoldFile, ResolveError};
pub use report::Theory;

/// Environment variable bounding the number of torsion terms a sum may visit.
pub const MAX_TORSION_ENV: &str = "HEEGAARD_MAX_TORSION";
pub const DEFAULT_MAX_TORSION: u64 = 1_000_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_TORSION_CAP: i32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Pretty,
}

#[derive(Parser, Debug)]
#[command(
    name = "heegaard",
    version,
    about = "Exact invariants of 3-manifolds given by Heegaard gluing matrices"
)]
pub struct Cli {
    /// Compact single-line JSON or indented JSON.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub output: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the six gluing relations block by block.
    Validate { manifold: PathBuf },
    /// Free rank and invariant factors of H_1, rank of H_2.
    Homology { manifold: PathBuf },
    /// Torsion linking form on the canonical generators of H_1.
    LinkingForm { manifold: PathBuf },
    /// Chern–Simons or BF partition function as an exact cyclotomic sum.
    Partition {
        manifold: PathBuf,
        #[arg(long, value_enum)]
        theory: Theory,
        #[arg(long, allow_negative_numbers = true)]
        level: i64,
    },
    /// Reduced Wilson-loop expectation value.
    Wilson {
        manifold: PathBuf,
        link: PathBuf,
        /// Second link, required for BF.
        link2: Option<PathBuf>,
        #[arg(long, value_enum)]
        theory: Theory,
        #[arg(long, allow_negative_numbers = true)]
        level: i64,
        /// Mutual linking number of the two BF links.
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        mutual_linking: i64,
    },
}

/// Everything a process would emit, so the CLI can run in-process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))
}

fn load_manifold(path: &Path) -> Result<ManifoldFile, Failure> {
    ManifoldFile::from_json(&read(path)?).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            format!("{}: invalid manifold file: {e}", path.display()),
        )
    })
}

fn load_link(path: &Path) -> Result<LinkPresentation, Failure> {
    LinkFile::from_json(&read(path)?)
        .map(|l| l.to_presentation())
        .map_err(|e| {
            Failure::new(
                EXIT_PARSE,
                format!("{}: invalid link file: {e}", path.display()),
            )
        })
}

fn resolve(path: &Path) -> Result<GluingData, Failure> {
    load_manifold(path)?
        .resolve()
        .map_err(|e| Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn level(k: i64) -> Result<u64, Failure> {
    u64::try_from(k).ok().filter(|&k| k >= 1).ok_or_else(|| {
        Failure::new(
            EXIT_INVALID,
            format!("--level must be a positive integer, got {k}"),
        )
    })
}

fn parse_cap(raw: Option<&str>) -> Result<BigInt, Failure> {
    match raw {
        None => Ok(BigInt::from(DEFAULT_MAX_TORSION)),
        Some(s) => s.trim().parse::<u64>().map(BigInt::from).map_err(|_| {
            Failure::new(
                EXIT_INVALID,
                format!("{MAX_TORSION_ENV} must be a nonnegative integer, got {s:?}"),
            )
        }),
    }
}

/// Number of torsion terms the sum for `theory` visits: `|T|` or `|T|²`.
fn check_cap(theory: Theory, torsion_order: &BigInt, cap: &BigInt) -> Result<(), Failure> {
    let work = match theory {
        Theory::Cs => torsion_order.clone(),
        Theory::Bf => torsion_order * torsion_order,
    };
    if &work > cap {
        return Err(Failure::new(
            EXIT_TORSION_CAP,
            format!("torsion order {torsion_order} is too large: the sum visits {work} terms, above {MAX_TORSION_ENV} = {cap}"),
        ));
    }
    Ok(())
}

fn render<T: Serialize>(value: &T, format: OutputFormat) -> String {
    let mut s = match format {
        OutputFormat::Json => serde_json::to_string(value),
        OutputFormat::Pretty => serde_json::to_string_pretty(value),
    }
    .expect("report types always serialize");
    s.push('\n');
    s
}

fn invariant_failure(e: invariants::InvariantError) -> Failure {
    Failure::new(EXIT_INVALID, e.to_string())
}

fn dispatch(cli: &Cli, cap: Option<&str>) -> Result<(String, i32, String), Failure> {
    let fmt = cli.output;
    match &cli.command {
        Command::Validate { manifold } => {
            let (report, note) = match load_manifold(manifold)?.resolve() {
                Ok(gd) => (gd.report(), String::new()),
                Err(ResolveError::Gluing(GluingError::Relations(r))) => {
                    let names: Vec<_> = r.violations().map(|c| c.relation.name()).collect();
                    let msg = format!(
                        "{}: relations violated: {}",
                        manifold.display(),
                        names.join(", ")
                    );
                    (r, msg)
                }
                Err(e) => {
                    return Err(Failure::new(
                        EXIT_INVALID,
                        format!("{}: {e}", manifold.display()),
                    ))
                }
            };
            let code = if report.is_valid() {
                EXIT_OK
            } else {
                EXIT_INVALID
            };
            Ok((
                render(&report::ValidateReport::from(&report), fmt),
                code,
                note,
            ))
        }
        Command::Homology { manifold } => {
            let gd = resolve(manifold)?;
            Ok((
                render(&report::HomologyReport::of(&gd), fmt),
                EXIT_OK,
                String::new(),
            ))
        }
        Command::LinkingForm { manifold } => {
            let gd = resolve(manifold)?;
            let h = homology::h1(&gd);
            Ok((
                render(&report::linking_form_report(&gd, &h), fmt),
                EXIT_OK,
                String::new(),
            ))
        }
        Command::Partition {
            manifold,
            theory,
            level: k,
        } => {
            let k = level(*k)?;
            let cap = parse_cap(cap)?;
            let gd = resolve(manifold)?;
            let order = homology::h1(&gd).torsion_order();
            check_cap(*theory, &order, &cap)?;
            let sum = match theory {
                Theory::Cs => invariants::z_cs(&gd, k),
                Theory::Bf => invariants::z_bf(&gd, k),
            }
            .map_err(invariant_failure)?;
            let r = report::PartitionReport::new(*theory, k, &order, &sum);
            Ok((render(&r, fmt), EXIT_OK, String::new()))
        }
        Command::Wilson {
            manifold,
            link,
            link2,
            theory,
            level: k,
            mutual_linking,
        } => {
            let k = level(*k)?;
            let cap = parse_cap(cap)?;
            if *theory == Theory::Bf && link2.is_none() {
                return Err(Failure::new(
                    EXIT_INVALID,
                    "--theory bf needs a second link file",
                ));
            }
            let gd = resolve(manifold)?;
            let l1 = load_link(link)?;
            let l2 = link2.as_deref().map(load_link).transpose()?;
            check_cap(*theory, &homology::h1(&gd).torsion_order(), &cap)?;
            let result = match (theory, l2) {
                (Theory::Bf, Some(l2)) => {
                    invariants::wilson_bf(&gd, k, &l1, &l2, &BigInt::from(*mutual_linking))
                }
                _ => invariants::wilson_cs(&gd, k, &l1),
            }
            .map_err(invariant_failure)?;
            Ok((
                render(&report::WilsonReport::new(*theory, k, &result), fmt),
                EXIT_OK,
                String::new(),
            ))
        }
    }
}

/// Runs the CLI on `args` (including the program name) with the torsion cap
/// taken from `max_torsion` instead of the environment.
pub fn run_with<I, T>(args: I, max_torsion: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match dispatch(&cli, max_torsion) {
        Ok((stdout, code, stderr)) => Outcome {
            code,
            stdout,
            stderr,
        },
        Err(f) => Outcome {
            code: f.code,
            stdout: String::new(),
            stderr: f.message,
        },
    }
}

/// Runs the CLI with the torsion cap read from `HEEGAARD_MAX_TORSION`.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cap = std::env::var(MAX_TORSION_ENV).ok();
    run_with(args, cap.as_deref())
}
