//! Command-line front end: parse, ground, solve and rank `.paso` programs.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use paso::engine::{enumerate_answer_sets, EngineError, GroundGeneratorProgram};
use paso::grounder::ground_program_with;
use paso::parser::{parse_named, Parsed};
use paso::prefrank::{rank_with, satisfaction_degree, Front};
use paso::{format_program, AnswerSet, EvaluationContext, GroundError, GroundOptions, Mode, ParseDiagnostic, Program, SatisfactionDegree};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_ANSWER_SETS: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "paso", version, about = "Probability answer set optimization solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the answer sets of a program and rank them.
    Solve(SolveArgs),
    /// Print the ground program.
    Ground(GroundArgs),
    /// Parse and validate a program.
    Check {
        /// Program file (`.paso`).
        file: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
pub struct SolveArgs {
    /// Program file (`.paso`).
    pub file: PathBuf,
    /// Preference relation used to build fronts.
    #[arg(long, value_enum, default_value_t = ModeArg::Pareto)]
    pub mode: ModeArg,
    /// Number of fronts to report; 0 reports all of them.
    #[arg(long, default_value_t = 1)]
    pub fronts: usize,
    /// List the answer sets without ranking them.
    #[arg(long)]
    pub enumerate_only: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Maximum number of ground rule instances.
    #[arg(long, default_value_t = paso::grounder::DEFAULT_CAP)]
    pub ground_cap: usize,
    /// Report wall-clock time per phase.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, clap::Args)]
pub struct GroundArgs {
    /// Program file (`.paso`).
    pub file: PathBuf,
    /// Maximum number of ground rule instances.
    #[arg(long, default_value_t = paso::grounder::DEFAULT_CAP)]
    pub ground_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Pareto,
    Maximal,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Pareto => Mode::Pareto,
            ModeArg::Maximal => Mode::Maximal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{}", render_diagnostics(.0))]
    Parse(Vec<ParseDiagnostic>),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("no answer sets")]
    NoAnswerSets,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Ground(GroundError::CapExceeded { .. }) => EXIT_CAP,
            CliError::NoAnswerSets => EXIT_NO_ANSWER_SETS,
            _ => EXIT_USAGE,
        }
    }
}

fn render_diagnostics(diagnostics: &[ParseDiagnostic]) -> String {
    diagnostics.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramSummary {
    pub generator_rules: usize,
    pub preference_rules: usize,
    pub ground_generator_rules: usize,
    pub ground_preference_rules: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub atom: String,
    pub annotation: AnnotationRecord,
}

/// A satisfaction degree: the head position, or `"irrelevant"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DegreeRecord {
    Index(usize),
    Irrelevant(String),
}

impl From<SatisfactionDegree> for DegreeRecord {
    fn from(d: SatisfactionDegree) -> Self {
        match d {
            SatisfactionDegree::Index(i) => DegreeRecord::Index(i),
            SatisfactionDegree::Irrelevant => DegreeRecord::Irrelevant("irrelevant".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerSetRecord {
    pub index: usize,
    pub atoms: Vec<AtomRecord>,
    /// One entry per ground preference rule; empty with `--enumerate-only`.
    pub degrees: Vec<DegreeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrontRecord {
    pub rank: usize,
    /// Groups of mutually equal answer sets, by index.
    pub groups: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub ground_ms: f64,
    pub solve_ms: f64,
    pub rank_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub file: String,
    pub program: ProgramSummary,
    pub answer_set_count: usize,
    pub answer_sets: Vec<AnswerSetRecord>,
    pub mode: ModeArg,
    pub fronts: Vec<FrontRecord>,
    pub timings: Option<Timings>,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = &self.program;
        let _ = writeln!(
            out,
            "program: {} generator rules ({} ground), {} preference rules ({} ground)",
            p.generator_rules, p.ground_generator_rules, p.preference_rules, p.ground_preference_rules
        );
        let _ = writeln!(out, "answer sets: {}", self.answer_set_count);
        for h in &self.answer_sets {
            let atoms: Vec<String> = h.atoms.iter().map(atom_text).collect();
            let _ = write!(out, "answer set {}: {{{}}}", h.index, atoms.join(", "));
            if !h.degrees.is_empty() {
                let degrees: Vec<String> = h
                    .degrees
                    .iter()
                    .map(|d| match d {
                        DegreeRecord::Index(i) => i.to_string(),
                        DegreeRecord::Irrelevant(_) => "irr".into(),
                    })
                    .collect();
                let _ = write!(out, " degrees: {}", degrees.join(" "));
            }
            out.push('\n');
        }
        if !self.fronts.is_empty() {
            let mode = match self.mode {
                ModeArg::Pareto => "pareto",
                ModeArg::Maximal => "maximal",
            };
            let _ = writeln!(out, "mode: {mode}");
            for f in &self.fronts {
                let groups: Vec<String> = f
                    .groups
                    .iter()
                    .map(|g| g.iter().map(ToString::to_string).collect::<Vec<_>>().join(" = "))
                    .collect();
                let _ = writeln!(out, "front {}: {}", f.rank, groups.join(", "));
            }
        }
        if let Some(t) = &self.timings {
            let _ = writeln!(
                out,
                "timings: parse {:.3} ms, ground {:.3} ms, solve {:.3} ms, rank {:.3} ms",
                t.parse_ms, t.ground_ms, t.solve_ms, t.rank_ms
            );
        }
        out
    }
}

fn atom_text(a: &AtomRecord) -> String {
    let AnnotationRecord { lo, hi } = &a.annotation;
    if lo == "1" && hi == "1" {
        a.atom.clone()
    } else if lo == hi {
        format!("{}:{lo}", a.atom)
    } else {
        format!("{}:[{lo},{hi}]", a.atom)
    }
}

fn answer_set_record(h: &AnswerSet, degrees: Vec<DegreeRecord>) -> AnswerSetRecord {
    AnswerSetRecord {
        index: h.index,
        atoms: h
            .iter()
            .map(|(atom, ann)| AtomRecord {
                atom: atom.to_string(),
                annotation: AnnotationRecord { lo: ann.lo().to_string(), hi: ann.hi().to_string() },
            })
            .collect(),
        degrees,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

/// Reads and parses a file; warnings are returned alongside the program.
pub fn load(path: &Path) -> Result<Parsed, CliError> {
    let source = read(path)?;
    parse_named(&path.display().to_string(), &source).map_err(CliError::Parse)
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

/// Runs the whole pipeline on a parsed program.
pub fn solve_program(file: &str, program: &Program, args: &SolveArgs, parse_ms: f64) -> Result<SolveReport, CliError> {
    let start = Instant::now();
    let ground = ground_program_with(program, &GroundOptions { cap: args.ground_cap })?;
    let ground_ms = ms(start);

    let start = Instant::now();
    let generator = GroundGeneratorProgram::new(&ground)?;
    let pool = enumerate_answer_sets(&generator);
    let solve_ms = ms(start);
    if pool.is_empty() {
        return Err(CliError::NoAnswerSets);
    }

    let start = Instant::now();
    let rules = &ground.preferences;
    let (answer_sets, fronts) = if args.enumerate_only {
        (pool.iter().map(|h| answer_set_record(h, Vec::new())).collect(), Vec::new())
    } else {
        let ctx = EvaluationContext::new(&pool, rules);
        let records = pool
            .iter()
            .map(|h| answer_set_record(h, rules.iter().map(|r| satisfaction_degree(h, r, &ctx).into()).collect()))
            .collect();
        let all: Vec<Front> = rank_with(rules, args.mode.into(), &ctx);
        let keep = if args.fronts == 0 { all.len() } else { args.fronts };
        let fronts = all
            .into_iter()
            .take(keep)
            .enumerate()
            .map(|(rank, f)| FrontRecord { rank, groups: f.groups })
            .collect();
        (records, fronts)
    };
    let rank_ms = ms(start);

    Ok(SolveReport {
        file: file.to_string(),
        program: ProgramSummary {
            generator_rules: program.generator.len(),
            preference_rules: program.preferences.len(),
            ground_generator_rules: ground.generator.len(),
            ground_preference_rules: rules.len(),
        },
        answer_set_count: pool.len(),
        answer_sets,
        mode: args.mode,
        fronts,
        timings: args.timings.then_some(Timings { parse_ms, ground_ms, solve_ms, rank_ms }),
    })
}

/// Parses the file named in `args` and solves it.
pub fn solve_file(args: &SolveArgs) -> Result<(SolveReport, Vec<ParseDiagnostic>), CliError> {
    let start = Instant::now();
    let parsed = load(&args.file)?;
    let parse_ms = ms(start);
    let report = solve_program(&args.file.display().to_string(), &parsed.program, args, parse_ms)?;
    Ok((report, parsed.warnings))
}

fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let warn = |err: &mut dyn Write, warnings: &[ParseDiagnostic]| {
        for w in warnings {
            let _ = writeln!(err, "{w}");
        }
    };
    match command {
        Command::Solve(args) => {
            let (report, warnings) = solve_file(args)?;
            warn(err, &warnings);
            let text = match args.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
        }
        Command::Ground(args) => {
            let parsed = load(&args.file)?;
            warn(err, &parsed.warnings);
            let ground = ground_program_with(&parsed.program, &GroundOptions { cap: args.ground_cap })?;
            let _ = out.write_all(format_program(&ground).as_bytes());
        }
        Command::Check { file } => {
            let parsed = load(file)?;
            warn(err, &parsed.warnings);
            let _ = writeln!(
                out,
                "{}: ok ({} generator rules, {} preference rules)",
                file.display(),
                parsed.program.generator.len(),
                parsed.program.preferences.len()
            );
        }
    }
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}
