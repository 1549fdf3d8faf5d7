use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use fdcstar::algebra::Tolerance;
use fdcstar::harness::{generate_examples, run_check, run_suite, Family, SystemDescriptor, Theorem};
use fdcstar::Error;

const EXIT_FLAGGED: u8 = 2;
const EXIT_INVALID_INPUT: u8 = 3;
const EXIT_HYPOTHESIS: u8 = 4;

#[derive(Parser)]
#[command(
    name = "fdcstar",
    version,
    about = "Check equivalence theorems on finite group actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one checker on a system descriptor.
    Check {
        #[arg(long)]
        input: PathBuf,
        /// One of 9, 11, 14, p13, p7, facts.
        #[arg(long)]
        theorem: Theorem,
        /// Group element for p7, as a tuple such as `1` or `(1,0)`.
        #[arg(long)]
        t0: Option<String>,
        #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
        tol: f64,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
    },
    /// Write generated system descriptors to a directory.
    Generate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every applicable checker on generated systems of all families.
    Suite {
        #[arg(long)]
        seed: u64,
        /// Systems per family.
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
        tol: f64,
    },
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Hypothesis { .. } | Error::AbelianRequired => EXIT_HYPOTHESIS,
        _ => EXIT_INVALID_INPUT,
    }
}

fn parse_tuple(text: &str) -> Result<Vec<usize>, String> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|e| format!("invalid t0 {text:?}: {e}"))
        })
        .collect()
}

fn check(input: PathBuf, theorem: Theorem, t0: Option<String>, tol: f64, text: bool) -> ExitCode {
    let tol = match Tolerance::new(tol) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_INVALID_INPUT, e),
    };
    let source = match fs::read_to_string(&input) {
        Ok(s) => s,
        Err(e) => return fail(EXIT_INVALID_INPUT, format!("{}: {e}", input.display())),
    };
    let descriptor = match SystemDescriptor::from_json(&source) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_INVALID_INPUT, e),
    };
    let action = match descriptor.to_action(tol) {
        Ok(a) => a,
        Err(e) => return fail(EXIT_INVALID_INPUT, e),
    };
    let t0 = match t0 {
        None => None,
        Some(t) => {
            let index = parse_tuple(&t).and_then(|tuple| match action.group().abelian_structure() {
                Some(s) => s.index(&tuple).map_err(|e| e.to_string()),
                None if tuple.len() == 1 && tuple[0] < action.group().order() => Ok(tuple[0]),
                None => Err(format!("invalid t0 {t:?}")),
            });
            match index {
                Ok(i) => Some(i),
                Err(e) => return fail(EXIT_INVALID_INPUT, e),
            }
        }
    };
    let mut report = match run_check(theorem, &action, t0, tol) {
        Ok(r) => r,
        Err(e) => return fail(error_code(&e), e),
    };
    report.label = descriptor.label.clone();
    if text {
        print!("{}", report.to_text());
    } else {
        println!("{}", report.to_json());
    }
    if report.is_flagged() {
        ExitCode::from(EXIT_FLAGGED)
    } else {
        ExitCode::SUCCESS
    }
}

fn generate(family: Family, seed: u64, count: usize, out: PathBuf) -> ExitCode {
    let descriptors = match generate_examples(family, seed, count) {
        Ok(d) => d,
        Err(e) => return fail(1, e),
    };
    if let Err(e) = fs::create_dir_all(&out) {
        return fail(1, format!("{}: {e}", out.display()));
    }
    for d in descriptors {
        let name = format!("{}.json", d.label.as_deref().unwrap_or("system"));
        let path = out.join(name);
        if let Err(e) = fs::write(&path, d.to_json() + "\n") {
            return fail(1, format!("{}: {e}", path.display()));
        }
        println!("{}", path.display());
    }
    ExitCode::SUCCESS
}

fn suite(seed: u64, count: usize, tol: f64) -> ExitCode {
    let tol = match Tolerance::new(tol) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_INVALID_INPUT, e),
    };
    let report = match run_suite(seed, count, tol) {
        Ok(r) => r,
        Err(e) => return fail(1, e),
    };
    println!("{}", report.to_json());
    if report.is_flagged() {
        ExitCode::from(EXIT_FLAGGED)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // malformed arguments are invalid input, not clap's usual 2
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID_INPUT),
            };
        }
    };
    match cli.command {
        Command::Check {
            input,
            theorem,
            t0,
            tol,
            json: _,
            text,
        } => check(input, theorem, t0, tol, text),
        Command::Generate {
            family,
            seed,
            count,
            out,
        } => generate(family, seed, count, out),
        Command::Suite { seed, count, tol } => suite(seed, count, tol),
    }
}
