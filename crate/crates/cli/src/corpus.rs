//! Corpus runner: each `.toml` file under the corpus root is one entry
//! stating expectations about an equation file and/or a term. Entries run in
//! parallel; every entry owns its own workspace.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use murec::congruence::CongruenceIndex;
use murec::positivity::check_goodness;
use murec::reduce::{Reducer, Strategy};
use murec::syntax::{
    alpha_eq, parse_context_file, parse_equations, parse_term, EquationSystem, Term,
};
use murec::translate::verify_translation;
use murec::typing::{infer, Context};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    name: String,
    /// What the entry demonstrates, in plain language.
    #[serde(default)]
    #[allow(dead_code)]
    note: String,
    /// Equation file, relative to the corpus root.
    eqs: Option<String>,
    /// Context file, relative to the corpus root.
    ctx: Option<String>,
    /// Term file, relative to the corpus root.
    term: Option<String>,
    /// Term files applied to `term`, left-associatively.
    #[serde(default)]
    args: Vec<String>,
    /// Expected goodness verdict for `eqs`.
    good: Option<bool>,
    /// Expected dependency classes of `eqs`, ascending by representative.
    classes: Option<Vec<Vec<String>>>,
    /// Expected type of the term (modulo the congruence).
    expect_type: Option<String>,
    /// Term file holding the expected normal form (modulo alpha).
    normal_form: Option<String>,
    /// Expected strong-normalization verdict.
    sn: Option<bool>,
    /// Run the double-negation translation verifier on the term.
    #[serde(default)]
    translate_verify: bool,
}

struct Outcome {
    name: String,
    file: PathBuf,
    failures: Vec<String>,
}

pub fn run(
    dir: &Path,
    filter: Option<&str>,
    json_out: bool,
    fuel: usize,
) -> Result<u8, Box<dyn std::error::Error>> {
    let mut entry_files = Vec::new();
    collect_toml(dir, &mut entry_files)?;
    entry_files.sort();
    if entry_files.is_empty() {
        if json_out {
            println!("{}", json!({ "entries": [], "passed": 0, "failed": 0 }));
        } else {
            println!("corpus: no entries under {}", dir.display());
        }
        return Ok(0);
    }

    let mut entries = Vec::new();
    for file in entry_files {
        let src = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
        let entry: Entry = toml::from_str(&src).map_err(|e| format!("{}: {e}", file.display()))?;
        if let Some(f) = filter {
            if !entry.name.contains(f) {
                continue;
            }
        }
        entries.push((file, entry));
    }

    let outcomes: Vec<Outcome> = entries
        .par_iter()
        .map(|(file, entry)| Outcome {
            name: entry.name.clone(),
            file: file.clone(),
            failures: run_entry(dir, entry, fuel).unwrap_or_else(|e| vec![e.to_string()]),
        })
        .collect();

    let failed = outcomes.iter().filter(|o| !o.failures.is_empty()).count();
    let passed = outcomes.len() - failed;
    if json_out {
        let list: Vec<_> = outcomes
            .iter()
            .map(|o| {
                json!({
                    "name": o.name,
                    "file": o.file.display().to_string(),
                    "ok": o.failures.is_empty(),
                    "failures": o.failures,
                })
            })
            .collect();
        println!(
            "{}",
            json!({ "entries": list, "passed": passed, "failed": failed })
        );
    } else {
        for o in &outcomes {
            if o.failures.is_empty() {
                println!("PASS {}", o.name);
            } else {
                println!("FAIL {} ({})", o.name, o.file.display());
                for f in &o.failures {
                    println!("     {f}");
                }
            }
        }
        println!("{passed} passed, {failed} failed");
    }
    Ok(if failed == 0 { 0 } else { 1 })
}

fn collect_toml(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        if path.is_dir() {
            collect_toml(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "toml") {
            out.push(path);
        }
    }
    Ok(())
}

type EntryFailures = Result<Vec<String>, Box<dyn std::error::Error + Send + Sync>>;

fn run_entry(root: &Path, entry: &Entry, fuel: usize) -> EntryFailures {
    let mut failures = Vec::new();

    let system = match &entry.eqs {
        Some(rel) => {
            let src = std::fs::read_to_string(root.join(rel))?;
            parse_equations(&src).map_err(|e| format!("{rel}: {e}"))?
        }
        None => EquationSystem::new(),
    };
    let index = CongruenceIndex::build(system.clone());

    if let Some(expected) = entry.good {
        let verdict = check_goodness(&system, &index);
        if verdict.good != expected {
            failures.push(format!(
                "goodness: expected {expected}, got {} ({} violation(s))",
                verdict.good,
                verdict.violations.len()
            ));
        }
    }

    if let Some(expected) = &entry.classes {
        match murec::positivity::order_analysis(&system, &index) {
            Ok(report) => {
                if report.classes != *expected {
                    failures.push(format!(
                        "classes: expected {expected:?}, got {:?}",
                        report.classes
                    ));
                }
            }
            Err(e) => failures.push(format!("classes: {e}")),
        }
    }

    let context = match &entry.ctx {
        Some(rel) => {
            let src = std::fs::read_to_string(root.join(rel))?;
            let entries =
                parse_context_file(&src, system.atoms()).map_err(|e| format!("{rel}: {e}"))?;
            Context::from_entries(&entries).map_err(|e| format!("{rel}: {e}"))?
        }
        None => Context::new(),
    };

    let term: Option<Term> = match &entry.term {
        Some(rel) => {
            let mut t = load_term(root, rel, &system)?;
            for arg_rel in &entry.args {
                let arg = load_term(root, arg_rel, &system)?;
                t = Term::app(t, arg);
            }
            Some(t)
        }
        None => None,
    };

    if let Some(expected) = &entry.expect_type {
        let expected_ty = murec::syntax::parse_type(expected, system.atoms())
            .map_err(|e| format!("expect_type: {e}"))?;
        match &term {
            Some(t) => match infer(&context, t, &index) {
                Ok(ty) => {
                    if !index.decide(&ty, &expected_ty) {
                        failures.push(format!("type: expected {expected_ty}, inferred {ty}"));
                    }
                }
                Err(e) => failures.push(format!("type: {e}")),
            },
            None => failures.push("expect_type set but no term".into()),
        }
    }

    if let Some(nf_rel) = &entry.normal_form {
        let expected_nf = load_term(root, nf_rel, &system)?;
        match &term {
            Some(t) => {
                let reducer = Reducer::with_index(&index);
                match reducer.normalize(t, Strategy::LeftmostOutermost, fuel) {
                    Ok(trace) => {
                        let nf = trace.final_term(t);
                        if !alpha_eq(&nf, &expected_nf) {
                            failures.push(format!("normal form: expected {expected_nf}, got {nf}"));
                        }
                    }
                    Err(e) => failures.push(format!("normalization: {e}")),
                }
            }
            None => failures.push("normal_form set but no term".into()),
        }
    }

    if let Some(expected_sn) = entry.sn {
        match &term {
            Some(t) => {
                let reducer = Reducer::with_index(&index);
                let got = reducer.sn_probe(t, fuel).is_sn();
                if got != expected_sn {
                    failures.push(format!("sn: expected {expected_sn}, probe says {got}"));
                }
            }
            None => failures.push("sn set but no term".into()),
        }
    }

    if entry.translate_verify {
        match &term {
            Some(t) => {
                if !system.is_empty() {
                    failures.push("translate_verify requires an equation-free entry".into());
                } else if let Err(e) = verify_translation(t, &context, fuel) {
                    failures.push(format!("translation: {e}"));
                }
            }
            None => failures.push("translate_verify set but no term".into()),
        }
    }

    Ok(failures)
}

fn load_term(
    root: &Path,
    rel: &str,
    system: &EquationSystem,
) -> Result<Term, Box<dyn std::error::Error + Send + Sync>> {
    let src = std::fs::read_to_string(root.join(rel)).map_err(|e| format!("{rel}: {e}"))?;
    Ok(parse_term(src.trim(), system.atoms()).map_err(|e| format!("{rel}: {e}"))?)
}
