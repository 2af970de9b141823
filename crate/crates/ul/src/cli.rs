//! The `ul` command line: parse, translate, membership, satisfiability,
//! emptiness, bounded equivalence and DOT rendering over artifact files.
//!
//! Exit codes: 0 accept/sat/equivalent/empty-as-asked, 1 the negative
//! verdict, 2 usage or parse errors, 3 exhausted budgets or limits.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::alphabet::parse_word;
use crate::difftest::{equiv_bounded, EquivVerdict, LanguagePredicate};
use crate::duds::TranslateError;
use crate::files::{parse_file, print_file, Artifact, LogicId};
use crate::po2dfa::{Emptiness, Verdict, DEFAULT_ENUM_BUDGET};
use crate::tlfp::{Limits, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "ul",
    about = "Deterministic temporal logics and two-way automata for unambiguous star-free languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and print it back normalized.
    Parse { file: PathBuf },
    /// Translate a file along the implemented arrows, composing hops as
    /// needed.
    Translate {
        from: LogicArg,
        to: LogicArg,
        file: PathBuf,
    },
    /// Decide membership of a word.
    Member {
        logic: LogicArg,
        word: String,
        file: PathBuf,
        /// Print the automaton run (po2dfa and ete routes).
        #[arg(long)]
        trace: bool,
    },
    /// Satisfiability / non-emptiness with a witness.
    Sat {
        logic: LogicArg,
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Search strategy for the future/past logic.
        #[arg(long, value_parser = parse_strategy, default_value = "enumerate")]
        strategy: Strategy,
        /// Cap on guessed modal subformulas for the future/past logic.
        #[arg(long, default_value_t = 3)]
        max_modals: usize,
        /// Word-length bound for the bounded-model strategy.
        #[arg(long)]
        word_bound: Option<usize>,
    },
    /// Bounded emptiness check.
    Empty {
        logic: LogicArg,
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Bounded language equivalence of two files over one alphabet.
    Equiv {
        #[arg(long, default_value_t = 6)]
        bound: usize,
        file_a: PathBuf,
        file_b: PathBuf,
    },
    /// GraphViz rendering of an automaton.
    Dot { logic: LogicArg, file: PathBuf },
}

#[derive(Args)]
struct SearchArgs {
    /// Word-length bound; defaults to the automaton's state count.
    #[arg(long)]
    bound: Option<usize>,
}

#[derive(Clone)]
struct LogicArg(LogicId);

impl std::str::FromStr for LogicArg {
    type Err = String;

    fn from_str(s: &str) -> Result<LogicArg, String> {
        s.parse().map(LogicArg)
    }
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    match s {
        "enumerate" => Ok(Strategy::Enumerate),
        "bounded-model" => Ok(Strategy::BoundedModel),
        other => Err(format!("unknown strategy {other} (enumerate|bounded-model)")),
    }
}

fn enum_budget() -> u64 {
    std::env::var("UL_ENUM_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUM_BUDGET)
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version print with success.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("error: {msg}");
            EXIT_BUDGET
        }
    }
}

enum CliError {
    Usage(String),
    Budget(String),
}

fn load(file: &PathBuf) -> Result<Artifact, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))?;
    parse_file(&text).map_err(|e| CliError::Usage(format!("{}: {e}", file.display())))
}

fn load_as(file: &PathBuf, logic: LogicId) -> Result<Artifact, CliError> {
    let art = load(file)?;
    if art.logic() != logic {
        return Err(CliError::Usage(format!(
            "{} contains a {} artifact, not {}",
            file.display(),
            art.logic(),
            logic
        )));
    }
    Ok(art)
}

/// The implemented translation arrows, in routing tie-break order.
pub const ARROWS: [(LogicId, LogicId); 8] = [
    (LogicId::Tlxy, LogicId::Po2dfa),
    (LogicId::Po2dfa, LogicId::Duds),
    (LogicId::Duds, LogicId::Uitlpm),
    (LogicId::Uitlpm, LogicId::Tlxy),
    (LogicId::Tlfp, LogicId::Tlxy),
    (LogicId::Tlfp, LogicId::Tlrec),
    (LogicId::Tlrec, LogicId::Tlfp),
    (LogicId::Ete, LogicId::Po2dfa),
];

/// Hop-count-minimal route between logics; ties follow the arrow order.
pub fn route(from: LogicId, to: LogicId) -> Option<Vec<LogicId>> {
    if from == to {
        return Some(vec![from]);
    }
    let mut frontier = vec![vec![from]];
    let mut seen = vec![from];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for path in &frontier {
            let last = *path.last().unwrap();
            for (a, b) in ARROWS {
                if a == last && !seen.contains(&b) {
                    let mut p = path.clone();
                    p.push(b);
                    if b == to {
                        return Some(p);
                    }
                    seen.push(b);
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    None
}

fn hop(art: &Artifact, to: LogicId) -> Result<Artifact, CliError> {
    let sg = art.alphabet().clone();
    match (art, to) {
        (Artifact::Tlxy(_, f), LogicId::Po2dfa) => {
            Ok(Artifact::Po2dfa(crate::tlxy::to_po2dfa(f, &sg)))
        }
        (Artifact::Ete(_, e), LogicId::Po2dfa) => {
            Ok(Artifact::Po2dfa(crate::ete::compile_ete(e, &sg)))
        }
        (Artifact::Po2dfa(m), LogicId::Duds) => match crate::duds::from_po2dfa(m) {
            Ok(d) => Ok(Artifact::Duds(sg, d)),
            Err(e @ TranslateError::BounceNotLocal { .. }) => {
                Err(CliError::Budget(e.to_string()))
            }
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        (Artifact::Duds(_, d), LogicId::Uitlpm) => {
            Ok(Artifact::Uitlpm(sg.clone(), crate::duds::to_uitlpm(d, &sg)))
        }
        (Artifact::Uitlpm(_, d), LogicId::Tlxy) => {
            Ok(Artifact::Tlxy(sg.clone(), crate::uitlpm::to_tlxy(d, &sg)))
        }
        (Artifact::Tlfp(_, f), LogicId::Tlxy) => {
            let limits = Limits::default();
            match crate::tlfp::trans_full(f, &sg, &limits) {
                Ok(t) => Ok(Artifact::Tlxy(sg, t)),
                Err(e) => Err(CliError::Budget(e.to_string())),
            }
        }
        (Artifact::Tlfp(_, f), LogicId::Tlrec) => {
            Ok(Artifact::Tlrec(sg, crate::tlrec::from_tlfp(f)))
        }
        (Artifact::Tlrec(_, f), LogicId::Tlfp) => {
            Ok(Artifact::Tlfp(sg.clone(), crate::tlrec::to_tlfp(f, &sg)))
        }
        _ => Err(CliError::Usage(format!(
            "no direct arrow {} -> {}",
            art.logic(),
            to
        ))),
    }
}

/// Runs the hop-minimal route and returns the final artifact with one
/// size-report line per hop.
pub fn translate(art: Artifact, to: LogicId) -> Result<(Artifact, Vec<String>), String> {
    let path = route(art.logic(), to)
        .ok_or_else(|| format!("no translation route {} -> {}", art.logic(), to))?;
    let mut report = Vec::new();
    let mut cur = art;
    for pair in path.windows(2) {
        let before = cur.size();
        cur = match hop(&cur, pair[1]) {
            Ok(a) => a,
            Err(CliError::Usage(m)) | Err(CliError::Budget(m)) => return Err(m),
        };
        report.push(format!(
            "{} ({before} nodes) -> {} ({} nodes)",
            pair[0],
            pair[1],
            cur.size()
        ));
    }
    Ok((cur, report))
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Parse { file } => {
            let art = load(&file)?;
            print!("{}", print_file(&art));
            Ok(EXIT_OK)
        }
        Command::Translate { from, to, file } => {
            let art = load_as(&file, from.0)?;
            let path = route(from.0, to.0).ok_or_else(|| {
                CliError::Usage(format!("no translation route {} -> {}", from.0, to.0))
            })?;
            let mut cur = art;
            let mut report = Vec::new();
            for pair in path.windows(2) {
                let before = cur.size();
                cur = hop(&cur, pair[1])?;
                report.push(format!(
                    "; {} ({before} nodes) -> {} ({} nodes)",
                    pair[0],
                    pair[1],
                    cur.size()
                ));
            }
            print!("{}", print_file(&cur));
            for line in report {
                println!("{line}");
            }
            Ok(EXIT_OK)
        }
        Command::Member {
            logic,
            word,
            file,
            trace,
        } => {
            let art = load_as(&file, logic.0)?;
            let w = parse_word(&word, art.alphabet())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            if trace {
                let m = match &art {
                    Artifact::Po2dfa(m) => Some(m.clone()),
                    Artifact::Ete(sg, e) => Some(crate::ete::compile_ete(e, sg)),
                    _ => None,
                };
                if let Some(m) = m {
                    let t = m
                        .run(&w, 1)
                        .map_err(|e| CliError::Usage(e.to_string()))?;
                    for (q, p) in &t.steps {
                        println!("; {} @ {p}", m.name(*q));
                    }
                    let accepted = t.verdict == Verdict::Accept;
                    println!("{}", if accepted { "ACCEPT" } else { "REJECT" });
                    return Ok(if accepted { EXIT_OK } else { EXIT_NEGATIVE });
                }
            }
            let accepted = crate::files::member(&art, &w);
            println!("{}", if accepted { "ACCEPT" } else { "REJECT" });
            Ok(if accepted { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Sat {
            logic,
            file,
            search,
            strategy,
            max_modals,
            word_bound,
        } => {
            let art = load_as(&file, logic.0)?;
            let budget = enum_budget();
            let outcome = match &art {
                Artifact::Tlfp(sg, f) => {
                    let limits = Limits {
                        max_modals,
                        ..Limits::default()
                    };
                    let out = crate::tlfp::sat(f, sg, strategy, &limits, word_bound, budget)
                        .map_err(|e| CliError::Budget(e.to_string()))?;
                    println!("; strategy={}", match out.strategy {
                        Strategy::Enumerate => "enumerate",
                        Strategy::BoundedModel => "bounded-model",
                    });
                    out.result
                }
                other => {
                    // Route everything else through the automaton.
                    let (m, _) = translate(other.clone(), LogicId::Po2dfa)
                        .map_err(CliError::Budget)?;
                    let Artifact::Po2dfa(m) = m else { unreachable!() };
                    m.emptiness(search.bound, budget)
                        .map_err(|e| CliError::Budget(e.to_string()))?
                }
            };
            match outcome {
                Emptiness::NonEmpty(w) => {
                    println!("SAT witness={w}");
                    Ok(EXIT_OK)
                }
                Emptiness::EmptyUpTo(b) => {
                    println!("UNSAT<={b}");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Empty { logic, file, search } => {
            let art = load_as(&file, logic.0)?;
            let (m, _) = translate(art, LogicId::Po2dfa).map_err(CliError::Budget)?;
            let Artifact::Po2dfa(m) = m else { unreachable!() };
            match m
                .emptiness(search.bound, enum_budget())
                .map_err(|e| CliError::Budget(e.to_string()))?
            {
                Emptiness::EmptyUpTo(b) => {
                    println!("EMPTY up to bound {b}");
                    Ok(EXIT_OK)
                }
                Emptiness::NonEmpty(w) => {
                    println!("NONEMPTY witness={w}");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Equiv {
            bound,
            file_a,
            file_b,
        } => {
            let a = load(&file_a)?;
            let b = load(&file_b)?;
            if a.alphabet() != b.alphabet() {
                return Err(CliError::Usage("alphabets differ".into()));
            }
            let sg = a.alphabet().clone();
            let pa = LanguagePredicate::new(file_a.display().to_string(), |w| {
                crate::files::member(&a, w)
            });
            let pb = LanguagePredicate::new(file_b.display().to_string(), |w| {
                crate::files::member(&b, w)
            });
            let report = equiv_bounded(&pa, &pb, &sg, bound);
            match report.verdict {
                EquivVerdict::Equivalent => {
                    println!("EQUIVALENT ({} words)", report.checked);
                    Ok(EXIT_OK)
                }
                EquivVerdict::Counterexample { word, lhs, rhs } => {
                    println!("COUNTEREXAMPLE word={word} lhs={lhs} rhs={rhs}");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Dot { logic, file } => {
            let art = load_as(&file, logic.0)?;
            let m = match art {
                Artifact::Po2dfa(m) => m,
                Artifact::Ete(sg, e) => crate::ete::compile_ete(&e, &sg),
                other => {
                    return Err(CliError::Usage(format!(
                        "dot renders automata; translate {} first",
                        other.logic()
                    )))
                }
            };
            print!("{}", m.to_dot());
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_compose() {
        assert_eq!(
            route(LogicId::Duds, LogicId::Po2dfa),
            Some(vec![
                LogicId::Duds,
                LogicId::Uitlpm,
                LogicId::Tlxy,
                LogicId::Po2dfa
            ])
        );
        assert_eq!(
            route(LogicId::Po2dfa, LogicId::Tlxy),
            Some(vec![
                LogicId::Po2dfa,
                LogicId::Duds,
                LogicId::Uitlpm,
                LogicId::Tlxy
            ])
        );
        assert_eq!(route(LogicId::Tlxy, LogicId::Tlxy), Some(vec![LogicId::Tlxy]));
        assert_eq!(route(LogicId::Po2dfa, LogicId::Ete), None);
    }
}
