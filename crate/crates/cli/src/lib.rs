//! Command dispatch for the `formstab` binary.
//!
//! Exit codes: `0` pass, `1` verification failure, `2` usage or schema error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use formstab_core::exterior::binomial;
use formstab_core::json::{from_json, to_json, FormBasis, FormFile, JsonError};
use formstab_core::{
    invariant_forms, invariant_profile, m_group, stabilizer_algebra, verify_stabilizers,
    AlternatingForm, CartanType, LieAlgebra, Series, Subspace, DEFAULT_SEED,
};
use log::info;
use serde::Serialize;
use thiserror::Error;

/// Largest algebra dimension accepted without `--no-size-cap`.
pub const MAX_DIM: usize = 30;
/// Largest number of degree-`l` monomials accepted without `--no-size-cap`.
pub const MAX_MONOMIALS: u128 = 100_000;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "formstab", version, about = "Stabilizers of adjoint-invariant forms on simple Lie algebras")]
pub struct Cli {
    /// Lift the default size cap (dim <= 30, C(dim, degree) <= 100000).
    #[arg(long, global = true)]
    pub no_size_cap: bool,

    /// Raise the log level (overridden by FORMSTAB_LOG).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a split simple Lie algebra and write it as JSON.
    Build {
        #[arg(long)]
        series: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Basis of the adjoint-invariant forms of one degree.
    Invariants {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stabilizer algebra of a form, as a subspace of gl(g).
    Stabilizer {
        #[arg(long)]
        alg: PathBuf,
        /// Form file; `path#i` selects the i-th form of a basis file.
        #[arg(long)]
        form: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the stabilizer checks for one degree and write a report.
    Verify {
        #[command(flatten)]
        input: AlgebraInput,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe M(g) for a degree.
    Mgroup {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimensions of the invariant-form spaces in every degree.
    Profile {
        #[arg(long)]
        alg: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exactly one of a built-in type or an algebra file.
#[derive(Debug, Args)]
#[group(required = true, multiple = true)]
pub struct AlgebraInput {
    #[arg(long, requires = "rank", conflicts_with = "alg")]
    pub series: Option<String>,
    #[arg(long, requires = "series")]
    pub rank: Option<usize>,
    #[arg(long)]
    pub alg: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Schema { path: String, source: JsonError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] formstab_core::Error),
    /// The computation ran but a checked property failed.
    #[error("verification failed: {0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Serialize)]
struct StabilizerOutput<'a> {
    algebra: &'a str,
    degree: usize,
    terms: usize,
    stabilizer_dim: usize,
    ad_dim: usize,
    contains_ad: bool,
    equals_ad: bool,
    subspace: &'a Subspace,
}

#[derive(Serialize)]
struct ProfileOutput<'a> {
    algebra: &'a str,
    dim: usize,
    profile: Vec<usize>,
    palindromic: bool,
}

#[derive(Serialize)]
struct MGroupOutput<'a> {
    algebra: &'a str,
    #[serde(flatten)]
    group: formstab_core::MGroup,
}

struct Limits {
    capped: bool,
}

impl Limits {
    fn check_dim(&self, dim: usize) -> Result<(), CliError> {
        if self.capped && dim > MAX_DIM {
            return Err(CliError::Usage(format!(
                "algebra dimension {dim} exceeds the size cap of {MAX_DIM} (use --no-size-cap)"
            )));
        }
        Ok(())
    }

    fn check_monomials(&self, dim: usize, degree: usize) -> Result<(), CliError> {
        let count = binomial(dim, degree);
        if self.capped && count > MAX_MONOMIALS {
            return Err(CliError::Usage(format!(
                "C({dim}, {degree}) = {count} monomials exceeds the size cap of {MAX_MONOMIALS} (use --no-size-cap)"
            )));
        }
        Ok(())
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    from_json(&read(path)?).map_err(|source| CliError::Schema {
        path: path.display().to_string(),
        source,
    })
}

fn load_algebra(path: &Path, limits: &Limits) -> Result<LieAlgebra, CliError> {
    let g: LieAlgebra = parse_file(path)?;
    limits.check_dim(g.dim())?;
    Ok(g)
}

fn build_algebra(series: &str, rank: usize, limits: &Limits) -> Result<LieAlgebra, CliError> {
    let series: Series = series.parse()?;
    let ty = CartanType::new(series, rank)?;
    limits.check_dim(ty.dim())?;
    Ok(LieAlgebra::split(ty)?)
}

/// Reads `path` or `path#index`.
fn load_form(spec: &str) -> Result<AlternatingForm, CliError> {
    let (path, index) = match spec.rsplit_once('#') {
        Some((p, i)) => {
            let i = i
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad form index in {spec:?}")))?;
            (p, Some(i))
        }
        None => (spec, None),
    };
    let file: FormFile = parse_file(Path::new(path))?;
    match (file, index) {
        (FormFile::Single(w), None | Some(0)) => Ok(w),
        (FormFile::Basis(b), i) => {
            let i = i.unwrap_or(0);
            let count = b.forms.len();
            b.forms.into_iter().nth(i).ok_or_else(|| {
                CliError::Usage(format!("{path}: form index {i} out of range ({count} forms)"))
            })
        }
        (FormFile::Single(_), Some(i)) => Err(CliError::Usage(format!(
            "{path}: holds a single form, index {i} out of range"
        ))),
    }
}

fn schema_error(path: &str, at: &str, message: String) -> CliError {
    CliError::Schema {
        path: path.to_string(),
        source: JsonError::Schema {
            path: at.to_string(),
            message,
        },
    }
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    let limits = Limits {
        capped: !cli.no_size_cap,
    };
    match cli.command {
        Command::Build { series, rank, out } => {
            let g = build_algebra(&series, rank, &limits)?;
            write(&out, &to_json(&g))?;
            info!("wrote {} (dim {}) to {}", g.name(), g.dim(), out.display());
            Ok(EXIT_PASS)
        }
        Command::Invariants { alg, degree, out } => {
            let g = load_algebra(&alg, &limits)?;
            limits.check_monomials(g.dim(), degree)?;
            let forms = invariant_forms(&g, degree)?;
            let file = FormBasis {
                algebra: g.name().to_string(),
                dim: g.dim(),
                degree,
                forms,
            };
            write(&out, &to_json(&file))?;
            info!("{} invariant forms of degree {degree}", file.forms.len());
            Ok(EXIT_PASS)
        }
        Command::Stabilizer { alg, form, out } => {
            let g = load_algebra(&alg, &limits)?;
            let w = load_form(&form)?;
            if w.is_zero() {
                return Err(schema_error(&form, "terms", "forms must be nonzero for this command".into()));
            }
            if w.dim() != g.dim() {
                return Err(schema_error(
                    &form,
                    "dim",
                    format!("form dimension {} does not match algebra dimension {}", w.dim(), g.dim()),
                ));
            }
            limits.check_monomials(g.dim(), w.degree())?;
            let stab = stabilizer_algebra(&g, &w)?;
            let ad = g.ad_subalgebra()?;
            let output = StabilizerOutput {
                algebra: g.name(),
                degree: w.degree(),
                terms: w.len(),
                stabilizer_dim: stab.dim(),
                ad_dim: ad.dim(),
                contains_ad: stab.contains_subspace(&ad),
                equals_ad: stab == ad,
                subspace: &stab,
            };
            write(&out, &to_json(&output))?;
            Ok(EXIT_PASS)
        }
        Command::Verify {
            input,
            degree,
            seed,
            out,
        } => {
            let g = match (&input.series, input.rank, &input.alg) {
                (Some(s), Some(r), None) => build_algebra(s, r, &limits)?,
                (None, None, Some(p)) => load_algebra(p, &limits)?,
                _ => {
                    return Err(CliError::Usage(
                        "give either --series and --rank, or --alg".into(),
                    ))
                }
            };
            if degree == 0 || degree >= g.dim() {
                return Err(CliError::Usage(format!(
                    "degree must satisfy 1 <= degree < dim = {} (got {degree})",
                    g.dim()
                )));
            }
            limits.check_monomials(g.dim(), degree)?;
            let report = verify_stabilizers(&g, degree, seed)?;
            emit(out.as_deref(), &to_json(&report))?;
            if out.is_some() {
                println!(
                    "{} degree {}: {} (invariant forms: {}{})",
                    report.algebra,
                    report.degree,
                    if report.pass { "PASS" } else { "FAIL" },
                    report.dim_invariant_forms,
                    if report.vacuous { ", vacuous" } else { "" }
                );
            }
            Ok(if report.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Mgroup { alg, degree, out } => {
            let g = load_algebra(&alg, &limits)?;
            if degree == 0 {
                return Err(CliError::Usage("degree must be at least 1".into()));
            }
            let group = match m_group(&g, degree) {
                Ok(group) => group,
                Err(formstab_core::Error::CentralizerNotScalar(d)) => {
                    return Err(CliError::Failed(format!(
                        "centralizer of ad(g) has dimension {d}, expected the scalars"
                    )))
                }
                Err(e) => return Err(e.into()),
            };
            emit(
                out.as_deref(),
                &to_json(&MGroupOutput {
                    algebra: g.name(),
                    group,
                }),
            )?;
            Ok(EXIT_PASS)
        }
        Command::Profile { alg, out } => {
            let g = load_algebra(&alg, &limits)?;
            limits.check_monomials(g.dim(), g.dim() / 2)?;
            let profile = invariant_profile(&g)?;
            let palindromic = profile.iter().eq(profile.iter().rev());
            emit(
                out.as_deref(),
                &to_json(&ProfileOutput {
                    algebra: g.name(),
                    dim: g.dim(),
                    profile,
                    palindromic,
                }),
            )?;
            Ok(EXIT_PASS)
        }
    }
}

pub fn init_logging(verbose: u8) {
    let default = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let env = env_logger::Env::new().filter_or("FORMSTAB_LOG", default);
    let _ = env_logger::Builder::from_env(env).try_init();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Failed("x".into()).exit_code(), EXIT_FAIL);
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::Core(formstab_core::Error::ZeroForm).exit_code(), EXIT_USAGE);
    }

    #[test]
    fn size_limits() {
        let capped = Limits { capped: true };
        assert!(capped.check_dim(MAX_DIM).is_ok());
        assert!(capped.check_dim(MAX_DIM + 1).is_err());
        assert!(capped.check_monomials(28, 14).is_err());
        assert!(capped.check_monomials(14, 7).is_ok());
        assert!(Limits { capped: false }.check_dim(1000).is_ok());
    }

    #[test]
    fn builds_by_series_name() {
        let limits = Limits { capped: true };
        assert_eq!(build_algebra("B", 2, &limits).unwrap().dim(), 10);
        assert!(matches!(build_algebra("Q", 2, &limits), Err(CliError::Core(_))));
        assert!(matches!(build_algebra("A", 6, &limits), Err(CliError::Usage(_))));
    }

    #[test]
    fn form_index_must_be_numeric() {
        assert!(matches!(load_form("forms.json#x"), Err(CliError::Usage(_))));
        assert!(matches!(load_form("/nonexistent.json#0"), Err(CliError::Io { .. })));
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["formstab", "-vv", "verify", "--series", "G", "--rank", "2", "--degree", "3"]).unwrap();
        assert_eq!(cli.verbose, 2);
        assert!(matches!(cli.command, Command::Verify { seed: DEFAULT_SEED, degree: 3, .. }));
        assert!(Cli::try_parse_from(["formstab", "verify", "--series", "G", "--degree", "3"]).is_err());
    }
}
