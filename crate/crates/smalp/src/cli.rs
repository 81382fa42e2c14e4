//! `smalp check | solve | tune`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use smalp_core::engine::DEFAULT_DEPTH_LIMIT;
use smalp_core::tuner::{self, Objective, TuneOptions};
use smalp_core::{
    builtin_registry, parse_goal, parse_program, DomainSpec, Engine, Program, SymbolicSubstitution,
};

use crate::error::CliError;
use crate::formats::{parse_cases, parse_domains};
use crate::report::{render_table, JsonAnswer, JsonCheck, JsonReport, JsonSymbol};
use crate::sweep;

fn default_depth() -> NonZeroUsize {
    NonZeroUsize::new(DEFAULT_DEPTH_LIMIT).expect("nonzero default")
}

#[derive(Debug, Parser)]
#[command(name = "smalp", version, about = "Run and tune symbolic fuzzy logic programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Output {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    /// Sum of rounded deviations, as shown in the text table.
    #[default]
    Reported,
    /// Sum of unrounded deviations.
    Exact,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a program, then list its symbols.
    Check {
        program: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        output: Output,
    },
    /// Print the first answer of a goal.
    Solve {
        program: PathBuf,
        goal: String,
        /// Instantiate symbols first, e.g. `s1=prod,s2=godel,v=0.8`.
        #[arg(long)]
        theta: Option<String>,
        /// Print every admissible and interpretive step.
        #[arg(long)]
        trace: bool,
        /// Maximum number of admissible steps.
        #[arg(long, default_value_t = default_depth())]
        depth: NonZeroUsize,
        #[arg(long, value_enum, default_value_t)]
        output: Output,
    },
    /// Pick the symbol assignment that best fits a set of test cases.
    Tune {
        program: PathBuf,
        /// Test cases, one `goal -> value.` per line.
        #[arg(long)]
        cases: PathBuf,
        /// File of `#name in {...}.` declarations.
        #[arg(long)]
        domains: Option<PathBuf>,
        /// Inline declaration such as `#v in {0.3, 0.5}`; repeatable.
        #[arg(long = "domain")]
        domain: Vec<String>,
        #[arg(long, value_enum, default_value_t)]
        objective: ObjectiveArg,
        /// Worker threads for the candidate sweep.
        #[arg(long, default_value_t = NonZeroUsize::MIN)]
        jobs: NonZeroUsize,
        #[arg(long, default_value_t = default_depth())]
        depth: NonZeroUsize,
        #[arg(long, value_enum, default_value_t)]
        output: Output,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_program(path: &Path) -> Result<Program, CliError> {
    parse_program(&read(path)?).map_err(|source| CliError::Syntax {
        path: path.to_path_buf(),
        source,
    })
}

fn json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let reg = builtin_registry();
    match cli.command {
        Command::Check { program, output } => {
            let p = load_program(&program)?;
            Engine::new(&p, &reg).validate(None)?;
            let symbols = p.symbols().map_err(|source| CliError::Syntax {
                path: program,
                source,
            })?;
            match output {
                Output::Text => {
                    writeln!(out, "rules: {}", p.rules.len())?;
                    let list: Vec<String> = symbols.iter().map(ToString::to_string).collect();
                    if list.is_empty() {
                        writeln!(out, "symbols:")?;
                    } else {
                        writeln!(out, "symbols: {}", list.join(", "))?;
                    }
                }
                Output::Json => json(
                    out,
                    &JsonCheck {
                        rules: p.rules.len(),
                        symbols: symbols.iter().map(JsonSymbol::from).collect(),
                    },
                )?,
            }
        }
        Command::Solve {
            program,
            goal,
            theta,
            trace,
            depth,
            output,
        } => {
            let mut p = load_program(&program)?;
            let mut goal = parse_goal(&goal).map_err(CliError::Goal)?;
            if let Some(text) = theta {
                let symbols = p.symbols().map_err(|source| CliError::Syntax {
                    path: program,
                    source,
                })?;
                let theta = SymbolicSubstitution::parse(&text, &symbols, &reg)?;
                p = theta.apply_program(&p);
                goal = theta.apply_expr(&goal);
            }
            let engine = Engine::new(&p, &reg).with_depth_limit(depth.get());
            engine.validate(Some(&goal))?;
            let (answer, steps) = engine.solve(&goal)?;
            match output {
                Output::Text => {
                    if trace {
                        write!(out, "{steps}")?;
                    }
                    writeln!(out, "{answer}")?;
                }
                Output::Json => json(out, &JsonAnswer::new(&answer, trace.then_some(&steps)))?,
            }
        }
        Command::Tune {
            program,
            cases,
            domains,
            domain,
            objective,
            jobs,
            depth,
            output,
        } => {
            let p = load_program(&program)?;
            Engine::new(&p, &reg).validate(None)?;
            let case_list =
                parse_cases(&read(&cases)?).map_err(|source| CliError::Format { path: cases, source })?;
            if domains.is_none() && domain.is_empty() {
                return Err(CliError::Usage(
                    "tune needs --domains or at least one --domain".into(),
                ));
            }
            let mut decls = Vec::new();
            if let Some(path) = domains {
                decls = parse_domains(&read(&path)?).map_err(|source| CliError::Format { path, source })?;
            }
            for d in &domain {
                decls.extend(parse_domains(d).map_err(CliError::InlineDomain)?);
            }
            let symbols = p.symbols().map_err(|source| CliError::Syntax {
                path: program,
                source,
            })?;
            let spec = DomainSpec::from_declarations(&decls, &symbols, &reg)?;
            let options = TuneOptions {
                objective: match objective {
                    ObjectiveArg::Reported => Objective::Reported,
                    ObjectiveArg::Exact => Objective::Exact,
                },
                depth_limit: depth.get(),
                ..TuneOptions::default()
            };
            let prepared = tuner::prepare(&p, &case_list, &spec, &reg, options)?;
            let report = sweep::run(prepared, jobs.get())?;
            match output {
                Output::Text => write!(out, "{}", render_table(&report))?,
                Output::Json => json(out, &JsonReport::new(&report))?,
            }
        }
    }
    Ok(())
}

/// Parses `args`, runs, and returns the process exit code. Usage errors
/// exit with 1; `--help` and `--version` with 0.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
