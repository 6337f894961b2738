//! Command-line workbench for the λμ-calculus with recursive type
//! equations: congruence queries, goodness and order analysis, type
//! checking, normalization and strong-normalization probing, the
//! double-negation translation, and a corpus runner.

mod corpus;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use murec::congruence::CongruenceIndex;
use murec::positivity::{analyze, check_goodness};
use murec::reduce::{Eta, ReduceError, Reducer, SnVerdict, Strategy};
use murec::syntax::{
    parse_context_file, parse_equations, parse_term, parse_type, EquationSystem, Term, Type,
};
use murec::translate::{translate, verify_translation, TargetSystem};
use murec::typing::{infer, Context};

/// Exit with 0 for positive verdicts, 1 for negative verdicts, 2 for errors.
const EXIT_TRUE: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "murec",
    version,
    about = "workbench for λ and λμ terms with recursive type equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Equation file (`atom` declarations and `X = <type>` lines).
    #[arg(long)]
    eqs: Option<PathBuf>,
    /// Context file (`x : T` and `a : ~T` lines).
    #[arg(long)]
    ctx: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Fuel bound: contraction steps for the leftmost strategy, distinct
    /// visited terms for exhaustive exploration. Defaults to $MUREC_FUEL or
    /// 10000.
    #[arg(long)]
    fuel: Option<usize>,
}

impl Common {
    fn fuel(&self) -> usize {
        self.fuel.unwrap_or_else(default_fuel)
    }
}

fn default_fuel() -> usize {
    std::env::var("MUREC_FUEL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000)
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    /// Contract the leftmost-outermost redex until a normal form.
    Leftmost,
    /// Explore the whole reduction graph, memoized on alpha-canonical forms.
    Exhaustive,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Leftmost => Strategy::LeftmostOutermost,
            StrategyArg::Exhaustive => Strategy::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a term, optionally against an expected type.
    Check {
        #[command(flatten)]
        common: Common,
        /// Expected type; the verdict compares modulo the congruence.
        #[arg(long)]
        expect: Option<String>,
        /// Term source text, or a path to a term file.
        term: String,
    },
    /// Decide whether two types are congruent.
    Equiv {
        #[command(flatten)]
        common: Common,
        left: String,
        right: String,
    },
    /// Check the goodness condition of an equation file.
    Goodness {
        #[command(flatten)]
        common: Common,
        file: PathBuf,
    },
    /// Full analysis: goodness, dependency order, classes and sign splits.
    Analyze {
        #[command(flatten)]
        common: Common,
        file: PathBuf,
    },
    /// Reduce a term to normal form.
    Normalize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = StrategyArg::Leftmost)]
        strategy: StrategyArg,
        term: String,
    },
    /// Print the reduction trace of the leftmost-outermost strategy.
    Trace {
        #[command(flatten)]
        common: Common,
        term: String,
    },
    /// Longest-reduction length and structural complexity.
    Eta {
        #[command(flatten)]
        common: Common,
        term: String,
    },
    /// Strong-normalization probe by exhaustive exploration.
    Sn {
        #[command(flatten)]
        common: Common,
        term: String,
    },
    /// Translate a plain λμ-term into a λ-term typed under `X = ~~X`
    /// equations.
    Translate {
        #[command(flatten)]
        common: Common,
        /// Also check type preservation and step simulation.
        #[arg(long)]
        verify: bool,
        term: String,
    },
    /// Corpus operations.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Run every corpus entry and report pass/fail per entry.
    Run {
        /// Corpus root directory.
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
        /// Only run entries whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        fuel: Option<usize>,
    },
}

fn main() -> ExitCode {
    // die quietly when the output pipe closes (e.g. `murec ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

type Failure = Box<dyn std::error::Error>;

struct Workspace {
    system: EquationSystem,
    index: CongruenceIndex,
    context: Context,
}

impl Workspace {
    fn load(common: &Common) -> Result<Workspace, Failure> {
        let system = match &common.eqs {
            Some(path) => load_system(path)?,
            None => EquationSystem::new(),
        };
        let context = match &common.ctx {
            Some(path) => {
                let src = std::fs::read_to_string(path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let entries = parse_context_file(&src, system.atoms())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                Context::from_entries(&entries)?
            }
            None => Context::new(),
        };
        let index = CongruenceIndex::build(system.clone());
        Ok(Workspace {
            system,
            index,
            context,
        })
    }

    fn term(&self, arg: &str) -> Result<Term, Failure> {
        let src = read_source(arg)?;
        Ok(parse_term(src.trim(), self.system.atoms())?)
    }

    fn ty(&self, arg: &str) -> Result<Type, Failure> {
        Ok(parse_type(arg.trim(), self.system.atoms())?)
    }
}

fn load_system(path: &Path) -> Result<EquationSystem, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse_equations(&src).map_err(|e| format!("{}: {e}", path.display()))?)
}

/// A term argument is a file path when one exists, inline source otherwise.
fn read_source(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        Ok(std::fs::read_to_string(path)?)
    } else {
        Ok(arg.to_string())
    }
}

fn rule_name(rule: murec::reduce::Rule) -> &'static str {
    match rule {
        murec::reduce::Rule::Beta => "beta",
        murec::reduce::Rule::Mu => "mu",
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Check {
            common,
            expect,
            term,
        } => {
            let ws = Workspace::load(&common)?;
            let term = ws.term(&term)?;
            let expected = expect.map(|e| ws.ty(&e)).transpose()?;
            match infer(&ws.context, &term, &ws.index) {
                Ok(ty) => {
                    let ok = match &expected {
                        Some(want) => ws.index.decide(&ty, want),
                        None => true,
                    };
                    if common.json {
                        println!(
                            "{}",
                            json!({
                                "term": term.to_string(),
                                "type": ty.to_string(),
                                "expected": expected.as_ref().map(|t| t.to_string()),
                                "ok": ok,
                            })
                        );
                    } else if let Some(want) = &expected {
                        if ok {
                            println!("{term} : {want}");
                        } else {
                            println!("{term} : {ty} (not congruent to {want})");
                        }
                    } else {
                        println!("{term} : {ty}");
                    }
                    Ok(if ok { EXIT_TRUE } else { EXIT_FALSE })
                }
                Err(err) => {
                    if common.json {
                        println!("{}", json!({ "error": err.to_string() }));
                    } else {
                        println!("ill-typed: {err}");
                    }
                    Ok(EXIT_FALSE)
                }
            }
        }
        Command::Equiv {
            common,
            left,
            right,
        } => {
            let ws = Workspace::load(&common)?;
            let (l, r) = (ws.ty(&left)?, ws.ty(&right)?);
            let eq = ws.index.decide(&l, &r);
            if common.json {
                println!(
                    "{}",
                    json!({ "left": l.to_string(), "right": r.to_string(), "equivalent": eq })
                );
            } else {
                println!("{l} {} {r}", if eq { "=" } else { "/=" });
            }
            Ok(if eq { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Goodness { common, file } => {
            let system = load_system(&file)?;
            let index = CongruenceIndex::build(system.clone());
            let verdict = check_goodness(&system, &index);
            if common.json {
                println!("{}", serde_json::to_string(&verdict)?);
            } else if verdict.good {
                println!("good");
            } else {
                println!("not good");
                for v in &verdict.violations {
                    println!(
                        "  {} = {}  (negative occurrence of {} at {:?})",
                        v.variable, v.witness, v.variable, v.path
                    );
                }
            }
            Ok(if verdict.good { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Analyze { common, file } => {
            let system = load_system(&file)?;
            let index = CongruenceIndex::build(system.clone());
            let report = analyze(&system, &index);
            if common.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&report);
            }
            Ok(if report.good { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Normalize {
            common,
            strategy,
            term,
        } => {
            let ws = Workspace::load(&common)?;
            let term = ws.term(&term)?;
            let reducer = Reducer::with_index(&ws.index);
            match reducer.normalize(&term, Strategy::from(strategy), common.fuel()) {
                Ok(trace) => {
                    let nf = trace.final_term(&term);
                    if common.json {
                        println!(
                            "{}",
                            json!({
                                "normal_form": nf.to_string(),
                                "steps": trace.steps.len(),
                                "fuel_spent": trace.fuel_spent,
                                "terminated": trace.terminated,
                            })
                        );
                    } else {
                        println!("{nf}");
                    }
                    Ok(EXIT_TRUE)
                }
                Err(ReduceError::FuelExhausted {
                    fuel,
                    fuel_spent,
                    cycle,
                    ..
                }) => {
                    if common.json {
                        println!(
                            "{}",
                            json!({
                                "error": "fuel exhausted",
                                "fuel": fuel,
                                "fuel_spent": fuel_spent,
                                "cycle": cycle,
                            })
                        );
                    } else {
                        println!(
                            "fuel exhausted after {fuel_spent}{}",
                            if cycle {
                                " (reduction cycle found)"
                            } else {
                                ""
                            }
                        );
                    }
                    Ok(EXIT_FALSE)
                }
                Err(other) => Err(other.into()),
            }
        }
        Command::Trace { common, term } => {
            let ws = Workspace::load(&common)?;
            let term = ws.term(&term)?;
            let reducer = Reducer::with_index(&ws.index);
            let trace = match reducer.normalize(&term, Strategy::LeftmostOutermost, common.fuel()) {
                Ok(trace) => trace,
                Err(ReduceError::FuelExhausted { partial, .. }) => *partial,
                Err(other) => return Err(other.into()),
            };
            if common.json {
                let steps: Vec<_> = trace
                    .steps
                    .iter()
                    .map(|s| {
                        json!({
                            "rule": rule_name(s.rule),
                            "position": s.position,
                            "term": s.after.to_string(),
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string(&steps)?);
            } else {
                println!("{term}");
                for s in &trace.steps {
                    println!(
                        "  -[{} @ {:?}]-> {}",
                        rule_name(s.rule),
                        s.position,
                        s.after
                    );
                }
                if !trace.terminated {
                    println!("  ... fuel exhausted");
                }
            }
            Ok(if trace.terminated {
                EXIT_TRUE
            } else {
                EXIT_FALSE
            })
        }
        Command::Eta { common, term } => {
            let ws = Workspace::load(&common)?;
            let term = ws.term(&term)?;
            let reducer = Reducer::with_index(&ws.index);
            let metrics = reducer.eta_metric(&term, common.fuel());
            let known = matches!(metrics.eta, Eta::Known(_));
            if common.json {
                let eta = match metrics.eta {
                    Eta::Known(n) => json!(n),
                    Eta::Unknown => json!(null),
                };
                println!("{}", json!({ "eta": eta, "cxty": metrics.cxty }));
            } else {
                match metrics.eta {
                    Eta::Known(n) => println!("eta = {n}, cxty = {}", metrics.cxty),
                    Eta::Unknown => println!(
                        "eta unknown (fuel exhausted or cycle), cxty = {}",
                        metrics.cxty
                    ),
                }
            }
            Ok(if known { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Sn { common, term } => {
            let ws = Workspace::load(&common)?;
            let term = ws.term(&term)?;
            let reducer = Reducer::with_index(&ws.index);
            match reducer.sn_probe(&term, common.fuel()) {
                SnVerdict::Sn { eta } => {
                    if common.json {
                        println!("{}", json!({ "sn": true, "eta": eta }));
                    } else {
                        println!("strongly normalizing, eta = {eta}");
                    }
                    Ok(EXIT_TRUE)
                }
                SnVerdict::NotClosed { visited, cycle } => {
                    if common.json {
                        println!(
                            "{}",
                            json!({ "sn": false, "visited": visited, "cycle": cycle })
                        );
                    } else {
                        println!(
                            "not closed within fuel ({visited} terms visited{})",
                            if cycle { ", reduction cycle found" } else { "" }
                        );
                    }
                    Ok(EXIT_FALSE)
                }
            }
        }
        Command::Translate {
            common,
            verify,
            term,
        } => {
            if common.eqs.is_some() {
                return Err(
                    "translate works on the plain λμ-calculus; no equation file applies".into(),
                );
            }
            let ws = Workspace::load(&common)?;
            let term = ws.term(&term)?;
            let target = TargetSystem::for_source(&term, &ws.context);
            let image = translate(&term, &ws.context)?;
            let report = if verify {
                Some(verify_translation(&term, &ws.context, common.fuel())?)
            } else {
                None
            };
            if common.json {
                println!(
                    "{}",
                    json!({
                        "term": image.to_string(),
                        "equations": target
                            .system
                            .equations()
                            .map(|(v, t)| format!("{v} = {t}"))
                            .collect::<Vec<_>>(),
                        "verify": report.map(|r| json!({
                            "source_type": r.source_type.to_string(),
                            "target_type": r.target_type.to_string(),
                            "simulated_steps": r.simulated.len(),
                        })),
                    })
                );
            } else {
                println!("{image}");
                for (v, t) in target.system.equations() {
                    println!("  with {v} = {t}");
                }
                if let Some(r) = report {
                    println!(
                        "  verified: type {} preserved, {} source step(s) simulated",
                        r.source_type,
                        r.simulated.len()
                    );
                }
            }
            Ok(EXIT_TRUE)
        }
        Command::Corpus { action } => match action {
            CorpusAction::Run {
                dir,
                filter,
                json,
                fuel,
            } => {
                let fuel = fuel.unwrap_or_else(default_fuel);
                corpus::run(&dir, filter.as_deref(), json, fuel)
            }
        },
    }
}

fn print_report(report: &murec::positivity::AnalysisReport) {
    println!("good: {}", report.good);
    for v in &report.violations {
        println!(
            "  violation: {} = {} (negative at {:?})",
            v.variable, v.witness, v.path
        );
    }
    if report.good && !report.classes.is_empty() {
        println!("classes:");
        for class in &report.classes {
            println!("  {{{}}}", class.join(", "));
        }
        if !report.order.is_empty() {
            println!("order:");
            for (a, b) in &report.order {
                println!("  class({a}) < class({b})");
            }
        }
        println!("splits:");
        for (rep, split) in &report.split {
            println!(
                "  {rep}: positive {{{}}}, negative {{{}}}",
                split.pos.join(", "),
                split.neg.join(", ")
            );
        }
    }
}
