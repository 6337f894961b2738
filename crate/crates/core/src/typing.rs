//! Syntax-directed type checking for annotated λμ-terms modulo a congruence.
//!
//! The congruence rule is folded into the elimination rules: variables
//! return their declared type, applications unfold the function type to a
//! head arrow and compare the argument type with `decide`, and the two ⊥
//! rules compare against `bot` the same way.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::congruence::{CongruenceError, CongruenceIndex};
use crate::reduce::Reducer;
use crate::syntax::{CtxEntry, Term, Type};

#[derive(Debug, Error)]
pub enum TypeError {
    #[error("unbound λ-variable `{0}`")]
    UnboundVariable(String),
    #[error("unbound μ-variable `{0}`")]
    UnboundMuVariable(String),
    #[error("`{fun}` of type `{ty}` is applied to an argument, but {source}")]
    NotAFunctionType {
        fun: Box<Term>,
        ty: Type,
        source: CongruenceError,
    },
    #[error(
        "argument type mismatch: expected `{expected}`{}, found `{found}`{}",
        eq_note(expected_eq),
        eq_note(found_eq)
    )]
    ArgumentTypeMismatch {
        expected: Type,
        found: Type,
        expected_eq: Option<Box<Type>>,
        found_eq: Option<Box<Type>>,
    },
    #[error("the body of a μ-abstraction must have type `bot`, found `{found}`")]
    MuBodyNotBottom { found: Type },
    #[error("named term mismatch: `[{mu_var}]` expects type `{expected}`, found `{found}`")]
    NamedTermTypeMismatch {
        mu_var: String,
        expected: Type,
        found: Type,
    },
    #[error("variable `{0}` is bound twice in the context")]
    DuplicateBinding(String),
    #[error("`{0}` is declared both as a λ-variable and as a μ-variable")]
    NamespaceClash(String),
    #[error(
        "subject reduction violated: `{before}` : `{expected}` reduced to `{after}`, which {problem}"
    )]
    SubjectReductionViolation {
        before: Box<Term>,
        after: Box<Term>,
        expected: Type,
        problem: String,
    },
}

fn eq_note(t: &Option<Box<Type>>) -> String {
    match t {
        Some(t) => format!(" (= {t})"),
        None => String::new(),
    }
}

/// Typing context: λ-variables at their types, μ-variables `a : ~U` stored
/// as `U`. Extension is persistent; it returns a new context.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Context {
    lambdas: HashMap<String, Type>,
    mus: HashMap<String, Type>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    /// Builds a context from parsed file entries, rejecting duplicates and
    /// cross-namespace reuse.
    pub fn from_entries(entries: &[CtxEntry]) -> Result<Context, TypeError> {
        let mut ctx = Context::new();
        for e in entries {
            match e {
                CtxEntry::Lambda(x, t) => ctx.bind_lambda(x.clone(), t.clone())?,
                CtxEntry::Mu(a, t) => ctx.bind_mu(a.clone(), t.clone())?,
            }
        }
        Ok(ctx)
    }

    pub fn bind_lambda(&mut self, x: String, t: Type) -> Result<(), TypeError> {
        if self.mus.contains_key(&x) {
            return Err(TypeError::NamespaceClash(x));
        }
        if self.lambdas.insert(x.clone(), t).is_some() {
            return Err(TypeError::DuplicateBinding(x));
        }
        Ok(())
    }

    pub fn bind_mu(&mut self, a: String, t: Type) -> Result<(), TypeError> {
        if self.lambdas.contains_key(&a) {
            return Err(TypeError::NamespaceClash(a));
        }
        if self.mus.insert(a.clone(), t).is_some() {
            return Err(TypeError::DuplicateBinding(a));
        }
        Ok(())
    }

    /// Extension used while descending under a binder. Parsed terms never
    /// shadow, so the overwrite can only fire for hand-built terms, where it
    /// implements ordinary lexical scoping.
    fn extended_lambda(&self, x: &str, t: &Type) -> Context {
        let mut c = self.clone();
        c.lambdas.insert(x.to_string(), t.clone());
        c
    }

    fn extended_mu(&self, a: &str, t: &Type) -> Context {
        let mut c = self.clone();
        c.mus.insert(a.to_string(), t.clone());
        c
    }

    pub fn lambda(&self, x: &str) -> Option<&Type> {
        self.lambdas.get(x)
    }

    /// The `U` of a μ-variable declared `a : ~U`.
    pub fn mu(&self, a: &str) -> Option<&Type> {
        self.mus.get(a)
    }

    pub fn lambdas(&self) -> impl Iterator<Item = (&String, &Type)> {
        self.lambdas.iter()
    }

    pub fn mus(&self) -> impl Iterator<Item = (&String, &Type)> {
        self.mus.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty() && self.mus.is_empty()
    }
}

/// One node of a subject-reduction trace.
#[derive(Debug, Clone, Serialize)]
pub struct Judgment {
    pub ctx: Context,
    pub term: Term,
    pub ty: Type,
}

/// Synthesizes the type of a fully annotated term.
pub fn infer(ctx: &Context, m: &Term, index: &CongruenceIndex) -> Result<Type, TypeError> {
    match m {
        Term::Var(x) => ctx
            .lambda(x)
            .cloned()
            .ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        Term::Lam(x, ann, body) => {
            let body_ty = infer(&ctx.extended_lambda(x, ann), body, index)?;
            Ok(Type::arrow(ann.clone(), body_ty))
        }
        Term::App(fun, arg) => {
            let fun_ty = infer(ctx, fun, index)?;
            let (dom, cod) =
                index
                    .head_arrow(&fun_ty)
                    .map_err(|source| TypeError::NotAFunctionType {
                        fun: fun.clone(),
                        ty: fun_ty.clone(),
                        source,
                    })?;
            let arg_ty = infer(ctx, arg, index)?;
            if !index.decide(&arg_ty, &dom) {
                return Err(TypeError::ArgumentTypeMismatch {
                    expected_eq: unfolding_note(&dom, index),
                    found_eq: unfolding_note(&arg_ty, index),
                    expected: dom,
                    found: arg_ty,
                });
            }
            Ok(cod)
        }
        Term::Mu(a, ann, body) => {
            let body_ty = infer(&ctx.extended_mu(a, ann), body, index)?;
            if !index.decide(&body_ty, &Type::Bottom) {
                return Err(TypeError::MuBodyNotBottom { found: body_ty });
            }
            Ok(ann.clone())
        }
        Term::Name(a, arg) => {
            let expected = ctx
                .mu(a)
                .cloned()
                .ok_or_else(|| TypeError::UnboundMuVariable(a.clone()))?;
            let arg_ty = infer(ctx, arg, index)?;
            if !index.decide(&arg_ty, &expected) {
                return Err(TypeError::NamedTermTypeMismatch {
                    mu_var: a.clone(),
                    expected,
                    found: arg_ty,
                });
            }
            Ok(Type::Bottom)
        }
    }
}

/// For a defined variable, its one-step unfolding, shown in mismatch
/// diagnostics.
fn unfolding_note(t: &Type, index: &CongruenceIndex) -> Option<Box<Type>> {
    match t {
        Type::Var(x) => index.system().def_of(x).cloned().map(Box::new),
        _ => None,
    }
}

/// `true` iff the synthesized type of `m` is congruent to `expected`.
pub fn check(
    ctx: &Context,
    m: &Term,
    expected: &Type,
    index: &CongruenceIndex,
) -> Result<bool, TypeError> {
    let t = infer(ctx, m, index)?;
    Ok(index.decide(&t, expected))
}

/// Reduces `m` breadth-first over all redexes for up to `steps` one-step
/// contractions, re-inferring every distinct reduct and checking its type
/// against the original. Returns the judgments visited; an error here is a
/// bug witness, not an expected outcome.
pub fn subject_reduction_probe(
    ctx: &Context,
    m: &Term,
    index: &CongruenceIndex,
    steps: usize,
) -> Result<Vec<Judgment>, TypeError> {
    let original = infer(ctx, m, index)?;
    let reducer = Reducer::with_index(index);
    let mut out = vec![Judgment {
        ctx: ctx.clone(),
        term: m.clone(),
        ty: original.clone(),
    }];
    let mut seen = std::collections::HashSet::new();
    seen.insert(m.canon());
    let mut frontier = vec![m.clone()];
    let mut performed = 0usize;

    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for term in &frontier {
            for (_, _, reduct) in reducer.one_step_reducts(term) {
                if performed >= steps {
                    break 'outer;
                }
                performed += 1;
                if !seen.insert(reduct.canon()) {
                    continue;
                }
                let ty = infer(ctx, &reduct, index).map_err(|e| {
                    TypeError::SubjectReductionViolation {
                        before: Box::new(term.clone()),
                        after: Box::new(reduct.clone()),
                        expected: original.clone(),
                        problem: format!("does not type-check: {e}"),
                    }
                })?;
                if !index.decide(&original, &ty) {
                    return Err(TypeError::SubjectReductionViolation {
                        before: Box::new(term.clone()),
                        after: Box::new(reduct.clone()),
                        expected: original.clone(),
                        problem: format!("has type `{ty}`"),
                    });
                }
                out.push(Judgment {
                    ctx: ctx.clone(),
                    term: reduct.clone(),
                    ty,
                });
                next.push(reduct);
            }
        }
        frontier = next;
    }
    Ok(out)
}
