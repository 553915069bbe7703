//! `fsmreq` command-line front end.
//!
//! Exit codes: 0 success or pass, 1 test failure or violated guarantee,
//! 2 usage error, 3 unreadable or malformed input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use fsmreq::complete::{complete_req_suite, render_expected_sets};
use fsmreq::suite::{parse_suite, render_expected};
use fsmreq::{
    build_m1, build_m2, coverage_experiment, exhaustive_req_suite, h_suite, mutate, parse_fsm,
    parse_requirement, requirement_from_abstraction, run_suite_equiv, run_suite_reduction,
    serialize_fsm, validate_requirement, CompositeRequirement, Dfsm, MachineUniverse,
    MutantSample, NondetAbstraction, Strategy, SuiteError, TestSuite,
};

#[derive(Parser)]
#[command(name = "fsmreq", version, about = "Requirements-based test generation for deterministic FSMs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test suite and its expected results.
    Generate(GenerateArgs),
    /// Run a suite against an implementation model.
    Check(CheckArgs),
    /// Check a suite's guarantee over a machine universe or mutant sample.
    Experiment(ExperimentArgs),
    /// Write the abstractions M1, M2 and M1′ for a requirement.
    Abstract(AbstractArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Complete suite for language equivalence.
    Equiv,
    /// Exhaustive requirements suite, exact output comparison.
    ReqExh,
    /// Complete requirements suite, output-set membership.
    ReqCmp,
}

#[derive(Args)]
#[command(disable_help_flag = true)]
struct GenerateArgs {
    /// Equivalence-style generation (with -s: exhaustive requirements suite).
    #[arg(short = 'h')]
    h: bool,
    /// Requirements-based generation; needs a requirement or abstraction file.
    #[arg(short = 's')]
    s: bool,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Additional states the implementation may have.
    #[arg(short = 'a', long = "additional-states")]
    additional: usize,
    /// Directory for suite.txt and expected files.
    #[arg(short = 'o', long, default_value = ".")]
    out: PathBuf,
    /// Reference model.
    model: PathBuf,
    /// Requirement (`.req`) or pre-built abstraction M1.
    requirement: Option<PathBuf>,
    #[arg(long, action = ArgAction::Help)]
    help: Option<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Criterion {
    /// Observed outputs equal the reference outputs.
    Exact,
    /// Observed outputs lie in the sets M1′ allows.
    Membership,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value = "exact")]
    criterion: Criterion,
    /// Reference model.
    model: PathBuf,
    /// Implementation model.
    sut: PathBuf,
    /// Suite file.
    suite: PathBuf,
    /// Requirement or abstraction file; needed for membership.
    requirement: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Complete,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum, default_value = "exhaustive")]
    strategy: StrategyArg,
    /// Additional states; enumeration covers machines with n + a states,
    /// sampling uses at least 1 since mutants may add a state.
    #[arg(short = 'a', long = "additional-states", default_value_t = 0)]
    additional: usize,
    /// Sample this many mutants instead of enumerating.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest universe to enumerate.
    #[arg(long, default_value_t = 5_000_000)]
    cap: u64,
    /// Report file.
    #[arg(short = 'o', long, default_value = "report.txt")]
    out: PathBuf,
    model: PathBuf,
    requirement: PathBuf,
}

#[derive(Args)]
struct AbstractArgs {
    #[arg(short = 'o', long, default_value = ".")]
    out: PathBuf,
    model: PathBuf,
    requirement: PathBuf,
}

struct Failure {
    code: u8,
    message: String,
}

type Outcome = Result<ExitCode, Failure>;

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn input(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    }
}

fn suite_failure(e: SuiteError) -> Failure {
    let code = match e {
        SuiteError::UnknownInput { .. }
        | SuiteError::NotPrime { .. }
        | SuiteError::Alphabet(_)
        | SuiteError::Requirement(_) => 3,
        _ => 2,
    };
    Failure { code, message: e.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<Dfsm, Failure> {
    parse_fsm(&read(path)?).map_err(|e| input(path, e))
}

/// A `.req` file is a requirement; anything else is an abstraction M1.
fn load_requirement(m: &Dfsm, path: &Path) -> Result<CompositeRequirement, Failure> {
    let text = read(path)?;
    let r = if path.extension().is_some_and(|e| e == "req") {
        parse_requirement(&text, m).map_err(|e| input(path, e))?
    } else {
        let abs = parse_fsm(&text).map_err(|e| input(path, e))?;
        requirement_from_abstraction(m, &abs).map_err(|e| input(path, e))?
    };
    validate_requirement(m, &r).map_err(|e| input(path, e))?;
    Ok(r)
}

fn require(path: Option<&PathBuf>, what: &str) -> Result<PathBuf, Failure> {
    path.cloned()
        .ok_or_else(|| usage(format!("{what} needs a requirement or abstraction file")))
}

fn generate(args: GenerateArgs) -> Outcome {
    let method = match (args.method, args.s, args.h) {
        (Some(m), _, _) => m,
        (None, true, _) => MethodArg::ReqExh,
        (None, false, true) => MethodArg::Equiv,
        (None, false, false) => return Err(usage("choose a method: -h, -s or --method")),
    };
    let m = load_model(&args.model)?;
    fs::create_dir_all(&args.out).map_err(|e| usage(format!("{}: {e}", args.out.display())))?;
    let out = |name: &str| args.out.join(name);
    let ts: TestSuite = match method {
        MethodArg::Equiv => h_suite(&m, args.additional).map_err(suite_failure)?,
        MethodArg::ReqExh => {
            let r = load_requirement(&m, &require(args.requirement.as_ref(), "req-exh")?)?;
            exhaustive_req_suite(&m, &r, args.additional).map_err(suite_failure)?
        }
        MethodArg::ReqCmp => {
            let r = load_requirement(&m, &require(args.requirement.as_ref(), "req-cmp")?)?;
            let (_, ts) = complete_req_suite(&m, &r, m.num_states() + args.additional)
                .map_err(suite_failure)?;
            let m1 = build_m1(&m, &r).map_err(|e| usage(e.to_string()))?;
            let m1p = NondetAbstraction::from_m1(&m1);
            write(&out("expected_sets.txt"), &render_expected_sets(&m1p, &ts))?;
            ts
        }
    };
    write(&out("suite.txt"), &ts.render(m.inputs()))?;
    write(&out("expected.txt"), &render_expected(&m, &ts))?;
    println!("cases={} max_len={}", ts.len(), ts.max_len());
    Ok(ExitCode::SUCCESS)
}

fn check(args: CheckArgs) -> Outcome {
    let m = load_model(&args.model)?;
    let s = load_model(&args.sut)?;
    let cases = parse_suite(&read(&args.suite)?, m.inputs()).map_err(|e| input(&args.suite, e))?;
    let ts = TestSuite::external(&m, cases);
    let run = match args.criterion {
        Criterion::Exact => run_suite_equiv(&s, &m, &ts),
        Criterion::Membership => {
            let r = load_requirement(&m, &require(args.requirement.as_ref(), "membership")?)?;
            let m1 = build_m1(&m, &r).map_err(|e| usage(e.to_string()))?;
            run_suite_reduction(&s, &NondetAbstraction::from_m1(&m1), &ts)
        }
    }
    .map_err(|e| input(&args.sut, e))?;
    print!("{}", run.render_failures());
    let failed = run.failures().count();
    println!("cases={} passed={} failed={}", run.results.len(), run.results.len() - failed, failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn experiment(args: ExperimentArgs) -> Outcome {
    let m = load_model(&args.model)?;
    let r = load_requirement(&m, &args.requirement)?;
    let strategy = match args.strategy {
        StrategyArg::Exhaustive => Strategy::Exhaustive,
        StrategyArg::Complete => Strategy::Complete,
    };
    let report = match args.count {
        Some(count) => {
            let sample = MutantSample {
                machines: mutate(&m, args.seed, count),
                seed: args.seed,
            };
            coverage_experiment(&m, &r, args.additional.max(1), strategy, &sample)
        }
        None => {
            let universe = MachineUniverse::new(
                m.num_states() + args.additional,
                m.inputs_arc().clone(),
                m.outputs_arc().clone(),
                args.cap,
            )
            .map_err(suite_failure)?;
            coverage_experiment(&m, &r, args.additional, strategy, &universe)
        }
    }
    .map_err(|e| usage(e.to_string()))?;
    write(&args.out, &report.to_string())?;
    println!("{}", report.machine_line());
    Ok(if report.guarantee_holds() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn abstraction(args: AbstractArgs) -> Outcome {
    let m = load_model(&args.model)?;
    let r = load_requirement(&m, &args.requirement)?;
    let m1 = build_m1(&m, &r).map_err(|e| input(&args.requirement, e))?;
    let m2 = build_m2(&m1);
    let m1p = NondetAbstraction::from_m1(&m1);
    fs::create_dir_all(&args.out).map_err(|e| usage(format!("{}: {e}", args.out.display())))?;
    write(&args.out.join("M1.csv"), &serialize_fsm(m1.machine()))?;
    write(&args.out.join("M2.csv"), &serialize_fsm(m2.prime()))?;
    write(&args.out.join("M1prime.txt"), &m1p.render_transitions())?;
    println!(
        "m1_states={} m2_states={} m1prime_transitions={}",
        m1.machine().num_states(),
        m2.num_classes(),
        m1p.fsm().transitions().len()
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Check(a) => check(a),
        Command::Experiment(a) => experiment(a),
        Command::Abstract(a) => abstraction(a),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("fsmreq: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

