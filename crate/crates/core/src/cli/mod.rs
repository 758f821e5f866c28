//! The `qmb` command-line front end.

mod demo;
pub mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::constraints::ConstraintSet;
use crate::error::Error;
use crate::filter::Filter;
use crate::model::{Belief, Evidence, Proposition, TransitionModel};
use crate::{oracle, CompareResult};

#[derive(Debug, Parser)]
#[command(name = "qmb", version, about = "Qualitative Markovian belief change")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Query {
    /// Time index of the query, 0 to the evidence horizon.
    #[arg(long)]
    at: usize,
    /// Comma-separated state set, or `*` for every state.
    #[arg(long, allow_hyphen_values = true)]
    prop: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that every transition row sums to top.
    Validate { model: PathBuf },
    /// Run the forward filter and print the final vector.
    Filter {
        model: PathBuf,
        obs: PathBuf,
        /// Print one line per time step.
        #[arg(long)]
        trace: bool,
        /// Shift kappa ranks so the smallest is 0 (display only).
        #[arg(long)]
        normalize: bool,
    },
    /// Decide whether a state set is believed at a time.
    Believe {
        model: PathBuf,
        obs: PathBuf,
        #[command(flatten)]
        query: Query,
        /// Decide by enumerating prefixes.
        #[arg(long)]
        oracle: bool,
    },
    /// Conditional kappa rank of a state set at a time.
    Rank {
        model: PathBuf,
        obs: PathBuf,
        #[command(flatten)]
        query: Query,
    },
    /// Print every non-bottom prefix consistent with the observations.
    Table {
        model: PathBuf,
        obs: Option<PathBuf>,
        /// Horizon; defaults to the number of observations.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Queries on partially specified transitions.
    #[command(subcommand)]
    Cons(ConsCommand),
    /// Run a packaged scenario.
    Demo {
        scenario: Scenario,
        /// Use ordering constraints instead of the kappa model.
        #[arg(long)]
        constraints: bool,
    },
}

#[derive(Debug, Subcommand)]
enum ConsCommand {
    /// SAFE, or the state and variable witnessing unsafety.
    Safe { constraints: PathBuf },
    /// Compare two prefixes of equal length.
    Compare {
        constraints: PathBuf,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Maximal possible prefixes consistent with the observations.
    Max {
        constraints: PathBuf,
        obs: PathBuf,
        /// Horizon; defaults to the number of observations.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Belief shared by every consistent Markovian measure.
    Believe {
        constraints: PathBuf,
        obs: PathBuf,
        #[command(flatten)]
        query: Query,
    },
    /// Print a kappa model satisfying the constraints.
    Sample {
        constraints: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scenario {
    StolenCar,
    BorrowedCar,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code(), message: e.to_string() }
    }
}

type Outcome = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() }.into())
}

fn in_file<T>(path: &Path, r: crate::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure { code: e.exit_code(), message: format!("{}: {e}", path.display()) })
}

fn load_model(path: &Path) -> Result<TransitionModel, Failure> {
    in_file(path, parse::load_model(&read(path)?))
}

fn load_constraints(path: &Path) -> Result<ConstraintSet, Failure> {
    in_file(path, parse::parse_constraints(&read(path)?))
}

fn load_obs(path: &Path, space: &crate::StateSpace) -> Result<Evidence, Failure> {
    in_file(path, parse::parse_observations(&read(path)?, space))
}

fn prop(space: &crate::StateSpace, text: &str) -> Result<Proposition, Failure> {
    Ok(space.parse_set(text)?)
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let color = std::env::var("QMB_COLOR").is_ok_and(|v| v == "1");
            let label = if color { "\x1b[1;31merror\x1b[0m" } else { "error" };
            let _ = writeln!(err, "{label}: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let io = |e: std::io::Error| Failure { code: 2, message: format!("write failed: {e}") };
    match command {
        Command::Validate { model } => {
            let m = in_file(&model, parse::parse_model(&read(&model)?))?;
            let report = m.validate();
            write!(out, "{report}").map_err(io)?;
            Ok(if report.is_valid() { 0 } else { 2 })
        }
        Command::Filter { model, obs, trace, normalize } => {
            let m = load_model(&model)?;
            let e = load_obs(&obs, m.space())?;
            let states = Filter::new(&m)?.run(&e)?;
            let shown = if trace { &states[..] } else { &states[states.len() - 1..] };
            for f in shown {
                writeln!(out, "{}", f.render(m.space(), normalize)).map_err(io)?;
            }
            Ok(0)
        }
        Command::Believe { model, obs, query, oracle: use_oracle } => {
            let m = load_model(&model)?;
            let e = load_obs(&obs, m.space())?;
            let a = prop(m.space(), &query.prop)?;
            let belief = if use_oracle {
                oracle::oracle_belief(&m, &e, &a, query.at)?
            } else if query.at == e.horizon() {
                let filter = Filter::new(&m)?;
                let (support, against) = filter.split(&filter.run_final(&e)?, &a)?;
                Belief::decide(support, against)?
            } else {
                m.belief(&e, &a, query.at)?
            };
            if belief.verdict == CompareResult::Incomparable {
                writeln!(err, "note: {} and {} are incomparable", belief.support, belief.against).map_err(io)?;
            }
            writeln!(out, "{}", if belief.holds { "BELIEVED" } else { "NOT-BELIEVED" }).map_err(io)?;
            Ok(0)
        }
        Command::Rank { model, obs, query } => {
            let m = load_model(&model)?;
            let e = load_obs(&obs, m.space())?;
            let a = prop(m.space(), &query.prop)?;
            writeln!(out, "{}", oracle::conditional_kappa(&m, &e, &a, query.at)?).map_err(io)?;
            Ok(0)
        }
        Command::Table { model, obs, n } => {
            let m = load_model(&model)?;
            let e = match obs {
                Some(path) => load_obs(&path, m.space())?,
                None => Evidence::none(),
            };
            let table = oracle::enumerate(&m, n.unwrap_or(e.horizon()), Some(&e))?;
            write!(out, "{}", table.render(m.space())).map_err(io)?;
            Ok(0)
        }
        Command::Cons(cmd) => cons(cmd, out),
        Command::Demo { scenario, constraints } => {
            let text = match (scenario, constraints) {
                (Scenario::StolenCar, false) => demo::stolen_car()?,
                (Scenario::StolenCar, true) => demo::stolen_car_constraints()?,
                (Scenario::BorrowedCar, false) => demo::borrowed_car()?,
                (Scenario::BorrowedCar, true) => demo::borrowed_car_constraints()?,
            };
            write!(out, "{text}").map_err(io)?;
            Ok(0)
        }
    }
}

fn cons(cmd: ConsCommand, out: &mut dyn Write) -> Outcome {
    let io = |e: std::io::Error| Failure { code: 2, message: format!("write failed: {e}") };
    match cmd {
        ConsCommand::Safe { constraints } => {
            let c = load_constraints(&constraints)?;
            match c.ensure_safe() {
                Ok(()) => writeln!(out, "SAFE"),
                Err(e) => writeln!(out, "{e}"),
            }
            .map_err(io)?;
        }
        ConsCommand::Compare { constraints, lhs, rhs } => {
            let c = load_constraints(&constraints)?;
            let p = c.space().parse_prefix(&lhs)?;
            let q = c.space().parse_prefix(&rhs)?;
            writeln!(out, "{}", c.compare_prefixes(&p, &q)?).map_err(io)?;
        }
        ConsCommand::Max { constraints, obs, n } => {
            let c = load_constraints(&constraints)?;
            let e = load_obs(&obs, c.space())?;
            for p in c.max_prefixes(n.unwrap_or(e.horizon()), &e)? {
                writeln!(out, "{}", c.space().render_prefix(&p)).map_err(io)?;
            }
        }
        ConsCommand::Believe { constraints, obs, query } => {
            let c = load_constraints(&constraints)?;
            let e = load_obs(&obs, c.space())?;
            let a = prop(c.space(), &query.prop)?;
            writeln!(out, "{}", c.entailed_belief(&e, &a, query.at)?).map_err(io)?;
        }
        ConsCommand::Sample { constraints, seed } => {
            let c = load_constraints(&constraints)?;
            let m = c.sample_consistent_kappa(seed)?;
            write!(out, "{}", parse::render_model(&m)).map_err(io)?;
        }
    }
    Ok(0)
}
