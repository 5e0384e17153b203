//! `ltsrefine`: refinement checks, property checks, composition and bounded
//! exploration of processes given as files and expressions.
//!
//! Exit status: 0 when the refinement or property holds, 1 when it is
//! refuted, 2 on usage, parse or semantic errors.

mod files;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use files::{CliError, Files};
use lts_refine::formats::{eval_expr, parse_expr, write_lts};
use lts_refine::{refines, satisfies, Alphabet, Error, Lts, PreorderKind, PropertyClass, Verdict};

#[derive(Parser, Debug)]
#[command(name = "ltsrefine", version, about = "Refinement checking for labelled transition systems")]
struct Cli {
    /// Directory searched for `NAME.aut`, `NAME.iface`, `NAME.ren` and
    /// property files before the working directory. Repeatable.
    #[arg(short = 'I', long = "include", global = true, value_name = "DIR")]
    include: Vec<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the first process refines to the second.
    Check {
        left: String,
        right: String,
        #[arg(long, value_parser = parse_preorder)]
        preorder: PreorderKind,
        /// Print the refuting observation.
        #[arg(long)]
        witness: bool,
        /// Check both directions and report equivalence.
        #[arg(long)]
        both: bool,
    },
    /// Decide whether a process satisfies the property in a file.
    Prop { process: String, property: String },
    /// Evaluate an expression and write the resulting LTS.
    Compose {
        expr: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the traces, deadlocks and divergences up to a length.
    Explore {
        expr: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

fn parse_preorder(s: &str) -> Result<PreorderKind, String> {
    s.parse().map_err(|_| "expected one of safety, liveness, cond-liveness, lt".to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(output) => {
            print!("{}", output.text);
            ExitCode::from(if output.holds { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

struct Output {
    text: String,
    holds: bool,
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let files = Files::new(&cli.include);
    match &cli.command {
        Command::Check {
            left,
            right,
            preorder,
            witness,
            both,
        } => {
            let (p, q) = lift_pair(&evaluate(&files, left)?, &evaluate(&files, right)?)?;
            let forward = refines(&p, &q, *preorder)?;
            if !both {
                return Ok(Output {
                    text: verdict_lines(&forward, "", *witness),
                    holds: forward.holds,
                });
            }
            let backward = refines(&q, &p, *preorder)?;
            let equivalent = forward.holds && backward.holds;
            let text = format!(
                "preorder: {preorder}\nequivalent: {equivalent}\n{}{}",
                verdict_lines(&forward, "forward-", *witness),
                verdict_lines(&backward, "backward-", *witness)
            );
            Ok(Output { text, holds: equivalent })
        }
        Command::Prop { process, property } => {
            let spec = files.property(property)?;
            let p = evaluate(&files, process)?;
            let ambient = p.alphabet().union(&Alphabet::new(spec.labels()));
            let p = p.with_alphabet(&ambient)?;
            let s = satisfies(&p, &spec)?;
            let class = match spec.class() {
                PropertyClass::Safety => "safety",
                PropertyClass::Liveness => "liveness",
                PropertyClass::CondLiveness => "cond-liveness",
            };
            Ok(Output {
                text: format!("property: {class}\n{}", s.report()),
                holds: s.holds,
            })
        }
        Command::Compose { expr, out } => {
            let p = evaluate(&files, expr)?;
            let text = write_lts(&p);
            match out {
                Some(path) => {
                    fs::write(path, &text).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    Ok(Output {
                        text: summary(&p),
                        holds: true,
                    })
                }
                None => Ok(Output { text, holds: true }),
            }
        }
        Command::Explore { expr, depth } => {
            let p = evaluate(&files, expr)?;
            Ok(Output {
                text: explore(&p, *depth),
                holds: true,
            })
        }
    }
}

fn evaluate(files: &Files, text: &str) -> Result<Lts, CliError> {
    let as_expr = |source: Error| match source {
        Error::Parse { .. } => CliError::Expr { source },
        other => CliError::Engine(other),
    };
    let e = parse_expr(text).map_err(as_expr)?;
    let env = files.environment(&e)?;
    eval_expr(&e, &env).map_err(as_expr)
}

/// Both processes over the union of their alphabets.
fn lift_pair(p: &Lts, q: &Lts) -> Result<(Lts, Lts), CliError> {
    let ambient = p.alphabet().union(q.alphabet());
    Ok((p.with_alphabet(&ambient)?, q.with_alphabet(&ambient)?))
}

fn verdict_lines(v: &Verdict, prefix: &str, witness: bool) -> String {
    v.report()
        .lines()
        .filter(|l| witness || !l.starts_with("witness:"))
        .filter(|l| prefix.is_empty() || !l.starts_with("preorder:"))
        .map(|l| format!("{prefix}{l}\n"))
        .collect()
}

fn alphabet_line(p: &Lts) -> String {
    p.alphabet().iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
}

fn summary(p: &Lts) -> String {
    format!(
        "states: {}\ntransitions: {}\nalphabet: {}\n",
        p.num_states(),
        p.num_transitions(),
        alphabet_line(p)
    )
}

fn explore(p: &Lts, depth: usize) -> String {
    let sem = p.enumerate_bounded(depth);
    let mut out = summary(p);
    out.push_str(&format!("depth: {depth}\n"));
    out.push_str(&format!("partial-traces: {}\n", sem.ptr.len()));
    out.push_str(&format!("deadlocks: {}\n", sem.deadlocks.len()));
    out.push_str(&format!("divergences: {}\n", sem.divergences.len()));
    let mut by_length = |key: &str, words: &std::collections::BTreeSet<lts_refine::Word>| {
        let mut sorted: Vec<_> = words.iter().collect();
        sorted.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        for w in sorted {
            out.push_str(&format!("{key}: {w}\n"));
        }
    };
    by_length("trace", &sem.ptr);
    by_length("deadlock", &sem.deadlocks);
    by_length("divergence", &sem.divergences);
    out
}
