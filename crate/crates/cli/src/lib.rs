//! Command-line front end: group files, analysis commands and table
//! reproduction.

pub mod groupfile;
pub mod report;
pub mod reproduce;

use std::io::Write;
use std::path::{Path, PathBuf};

use arithlevel::level::{analyze, is_member, AnalyzeOptions};
use arithlevel::{density, families, primeset, Config, Error, GroupSpec, Transvection};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use groupfile::{parse_matrix, GroupFile};
use report::{AnalyzeJson, PrimesJson};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    /// 1 for bad input, 2 for a group that is not dense, 3 when the
    /// computation does not fit the configured limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Lib(Error::NotDense) => 2,
            CliError::Lib(
                Error::OrbitBudgetExceeded { .. }
                | Error::NoTransvectionFound
                | Error::Undecided { .. }
                | Error::ModulusTooLarge { .. }
                | Error::FactorizationTooHard { .. }
                | Error::UnsupportedDegreeParity { .. },
            ) => 3,
            CliError::Lib(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "arithlevel",
    version,
    about = "Density, exceptional primes and congruence level of integer matrix groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Seed for the randomized phase of chain construction.
    #[arg(long, default_value_t = Config::default().seed)]
    pub seed: u64,
    /// Largest orbit a stabilizer chain may build.
    #[arg(long, default_value_t = Config::default().orbit_budget)]
    pub orbit_budget: u64,
}

impl Common {
    fn config(&self) -> Config {
        Config {
            seed: self.seed,
            orbit_budget: self.orbit_budget,
            ..Config::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density, prime sets, level and index.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Word length searched for a transvection when none is given.
        #[arg(long, default_value_t = 10)]
        find_transvection: usize,
        /// Report the index as that of the group itself.
        #[arg(long)]
        assume_arithmetic: bool,
        /// Include timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Zariski density.
    Isdense {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        find_transvection: usize,
    },
    /// Exceptional primes.
    Primes {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        find_transvection: usize,
    },
    /// Membership of a matrix, decided modulo the level.
    Member {
        file: PathBuf,
        /// Matrix as JSON rows, e.g. `[[1,5,0],[0,1,0],[0,0,1]]`.
        #[arg(long)]
        matrix: String,
        /// Level of the group; computed when omitted.
        #[arg(long)]
        level: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute a published table.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        table: u8,
        /// Row labels (`T`, `k` or `d,k`); rows outside the envelope are
        /// computed when named here.
        #[arg(long, value_delimiter = ';', allow_hyphen_values = true)]
        rows: Option<Vec<String>>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Write a group file for one of the built-in families.
    Family {
        #[arg(value_enum)]
        name: FamilyName,
        /// Family parameters: `T`, `k`, `d k`, `x` or a seed.
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
        /// Include the third generator `z` (beta, rho).
        #[arg(long)]
        with_z: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyName {
    Beta,
    Rho,
    Hypergeometric,
    Humphries,
    G3,
    G7,
    G8,
    G9,
    Mixed,
}

fn load(path: &Path) -> Result<GroupSpec, CliError> {
    GroupFile::read(path)?.to_spec()
}

fn with_found_transvection(
    spec: GroupSpec,
    depth: usize,
) -> Result<(GroupSpec, Option<String>), CliError> {
    if spec.transvection().is_some() {
        return Ok((spec, None));
    }
    let w = density::find_transvection(&spec, depth).ok_or(Error::NoTransvectionFound)?;
    let shown = w.to_string();
    Ok((spec.with_transvection(Transvection::Word(w))?, Some(shown)))
}

fn emit(
    out: &mut dyn Write,
    json: bool,
    value: &serde_json::Value,
    text: &str,
) -> Result<(), CliError> {
    let s = if json {
        serde_json::to_string_pretty(value).expect("serializable") + "\n"
    } else {
        text.to_string()
    };
    out.write_all(s.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze {
            file,
            common,
            find_transvection,
            assume_arithmetic,
            timings,
        } => {
            let spec = load(&file)?;
            let opts = AnalyzeOptions {
                find_depth: find_transvection,
                assume_arithmetic,
            };
            let ambient = spec.ambient().to_string();
            match analyze(&spec, &common.config(), &opts) {
                Ok(r) => {
                    let rep = AnalyzeJson::new(ambient, &r, timings);
                    let v = serde_json::to_value(&rep).expect("serializable");
                    emit(out, common.json, &v, &rep.human())
                }
                Err(Error::NotDense) => {
                    let v = json!({ "dense": false, "ambient": ambient });
                    emit(
                        out,
                        common.json,
                        &v,
                        &format!("group       {ambient}\ndense       false\n"),
                    )?;
                    Err(Error::NotDense.into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Isdense {
            file,
            common,
            find_transvection,
        } => {
            let (spec, found) = with_found_transvection(load(&file)?, find_transvection)?;
            let dense = density::is_dense(&spec)?;
            let v = json!({ "dense": dense, "found_transvection": found });
            let mut text = format!("{dense}\n");
            if let Some(w) = &found {
                text.push_str(&format!("transvection word {w}\n"));
            }
            emit(out, common.json, &v, &text)
        }
        Command::Primes {
            file,
            common,
            find_transvection,
        } => {
            let (spec, _) = with_found_transvection(load(&file)?, find_transvection)?;
            let r = primeset::pi_tilde(&spec, &common.config())?;
            let p = PrimesJson::from(&r);
            let v = serde_json::to_value(&p).expect("serializable");
            let mut text = format!(
                "gram det   {}\ncandidates {:?}\nPi         {:?}\nPi~        {:?}\n",
                p.gram_det, p.candidates, p.exceptional, p.pi_tilde
            );
            if !p.undecided.is_empty() {
                text.push_str(&format!("undecided  {:?}\n", p.undecided));
            }
            emit(out, common.json, &v, &text)
        }
        Command::Member {
            file,
            matrix,
            level,
            common,
        } => {
            let spec = load(&file)?;
            let g = parse_matrix(&matrix, spec.degree())?;
            if !spec.ambient().contains(&g) {
                return Err(CliError::Parse(format!(
                    "matrix is not in {}",
                    spec.ambient()
                )));
            }
            let config = common.config();
            let level = match level {
                Some(l) => l,
                None => analyze(&spec, &config, &AnalyzeOptions::default())?.level,
            };
            let member = is_member(&spec, level, &g, &config)?;
            let v = json!({ "member": member, "level": level });
            emit(out, common.json, &v, &format!("{member} (level {level})\n"))
        }
        Command::Reproduce {
            table,
            rows,
            jobs,
            common,
        } => {
            let sel = reproduce::Selection {
                rows: rows.as_deref(),
                force: rows.is_some(),
            };
            let config = common.config();
            let rep = match table {
                1 => reproduce::table1(&sel, &config, jobs),
                2 => reproduce::table2(&sel, &config, jobs),
                _ => reproduce::table3(&sel, &config, jobs),
            };
            let v = serde_json::to_value(&rep).expect("serializable");
            emit(out, common.json, &v, &rep.human())
        }
        Command::Family {
            name,
            params,
            with_z,
            out: path,
        } => {
            let spec = family(name, &params, with_z)?;
            let text = GroupFile::from_spec(&spec).to_json() + "\n";
            match path {
                Some(p) => std::fs::write(&p, text)
                    .map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
                None => out
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Io(e.to_string())),
            }
        }
    }
}

fn family(name: FamilyName, params: &[i64], with_z: bool) -> Result<GroupSpec, CliError> {
    let want = |k: usize| -> Result<(), CliError> {
        if params.len() == k {
            Ok(())
        } else {
            Err(CliError::Parse(format!("{name:?} takes {k} parameter(s)")))
        }
    };
    let spec = match name {
        FamilyName::Beta => {
            want(1)?;
            families::beta(params[0], with_z)
        }
        FamilyName::Rho => {
            want(1)?;
            families::rho(params[0], with_z)
        }
        FamilyName::Hypergeometric => {
            want(2)?;
            families::hypergeometric(params[0], params[1])
        }
        FamilyName::Humphries => {
            want(1)?;
            families::humphries(params[0])
        }
        FamilyName::G3 => families::g3(),
        FamilyName::G7 => families::g7(),
        FamilyName::G8 => families::g8(),
        FamilyName::G9 => families::g9(
            params
                .first()
                .map_or(families::DEFAULT_FAMILY_SEED, |&s| s as u64),
        ),
        FamilyName::Mixed => families::mixed_level_example(),
    };
    Ok(spec?)
}
