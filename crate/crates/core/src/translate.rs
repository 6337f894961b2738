//! Translation of the plain λμ-calculus (no recursive equations in the
//! source) into the λ-calculus typed under the system that equates every
//! type variable `X` with `~~X`.
//!
//! For each source type `T` there is a closed eliminator `M_T` of type
//! `~~T -> T`; a μ-abstraction `mu a:U. m` translates to `M_U` applied to
//! `\a:~U. m*`, and a named term `[a] m` to the ordinary application
//! `(a m*)`; μ-variables move into the λ-namespace.

use serde::Serialize;
use thiserror::Error;

use crate::congruence::CongruenceIndex;
use crate::reduce::{Path, Reducer, Rule};
use crate::syntax::{EquationSystem, Term, Type};
use crate::typing::{infer, Context, TypeError};

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error(
        "atomic constant `{0}` is not translatable; source types may use only variables and `bot`"
    )]
    UnsupportedType(String),
    #[error("the source term does not type-check in the plain λμ-calculus: {0}")]
    Untypable(Box<TypeError>),
    #[error("a free μ-variable `{0}` collides with a λ-name and cannot move namespaces")]
    FreeNameClash(String),
    #[error("type preservation failed: source type `{expected}`, translated term got {got}")]
    TypePreservationFailure { expected: Type, got: String },
    #[error("reduction of `{source_before}` to `{source_after}` is not simulated by the translation within fuel {fuel}")]
    SimulationFailure {
        source_before: Box<Term>,
        source_after: Box<Term>,
        fuel: usize,
    },
}

impl From<TypeError> for TranslateError {
    fn from(e: TypeError) -> TranslateError {
        TranslateError::Untypable(Box::new(e))
    }
}

/// The target equation system: `X = ~~X` for every variable in `vars`. The
/// only atomic constant of the target is `bot`; the system is good (the
/// variable sits under two arrows in `~~X`).
#[derive(Debug, Clone)]
pub struct TargetSystem {
    pub system: EquationSystem,
}

impl TargetSystem {
    pub fn for_vars<I, S>(vars: I) -> TargetSystem
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut system = EquationSystem::new();
        for v in vars {
            let v = v.into();
            let eq = Type::neg(Type::neg(Type::var(v.clone())));
            system
                .add_equation(v, eq)
                .expect("variable sets are deduplicated");
        }
        TargetSystem { system }
    }

    /// Target system covering every variable of the given term's
    /// annotations and context.
    pub fn for_source(m: &Term, ctx: &Context) -> TargetSystem {
        let mut vars = std::collections::BTreeSet::new();
        collect_term_ty_vars(m, &mut vars);
        for (_, t) in ctx.lambdas().chain(ctx.mus()) {
            vars.extend(t.vars());
        }
        TargetSystem::for_vars(vars)
    }

    pub fn index(&self) -> CongruenceIndex {
        CongruenceIndex::build(self.system.clone())
    }
}

fn collect_term_ty_vars(m: &Term, out: &mut std::collections::BTreeSet<String>) {
    match m {
        Term::Var(_) => {}
        Term::Lam(_, ann, b) | Term::Mu(_, ann, b) => {
            out.extend(ann.vars());
            collect_term_ty_vars(b, out);
        }
        Term::Name(_, b) => collect_term_ty_vars(b, out),
        Term::App(f, a) => {
            collect_term_ty_vars(f, out);
            collect_term_ty_vars(a, out);
        }
    }
}

fn first_atom(t: &Type) -> Option<&str> {
    match t {
        Type::Atom(a) => Some(a),
        Type::Arrow(d, c) => first_atom(d).or_else(|| first_atom(c)),
        Type::Var(_) | Type::Bottom => None,
    }
}

fn check_no_atoms(t: &Type) -> Result<(), TranslateError> {
    match first_atom(t) {
        Some(a) => Err(TranslateError::UnsupportedType(a.to_string())),
        None => Ok(()),
    }
}

/// Binder-name supply for the generated eliminators; numbered so that the
/// printed terms re-parse without shadowing.
struct Supply {
    next: usize,
}

impl Supply {
    fn fresh(&mut self, base: &str) -> String {
        let n = self.next;
        self.next += 1;
        format!("{base}{n}")
    }
}

/// The eliminator `M_t`, a closed term with
/// `check(∅, M_t, ~~t -> t) = true` under the target system:
///
/// * `M_bot = \x:~~bot. x (\z:bot. z)`
/// * `M_X   = \z:~~X. z` (the identity, typed through `X = ~~X`)
/// * `M_(U -> V) = \x:~~(U -> V). \y:U. M_V (\z:~V. x (\t:U -> V. z (t y)))`
pub fn build_mt(t: &Type) -> Result<Term, TranslateError> {
    check_no_atoms(t)?;
    let mut supply = Supply { next: 0 };
    Ok(mt(t, &mut supply))
}

fn mt(t: &Type, supply: &mut Supply) -> Term {
    match t {
        Type::Bottom => {
            let x = supply.fresh("x");
            let z = supply.fresh("z");
            Term::lam(
                x.clone(),
                Type::neg(Type::neg(Type::Bottom)),
                Term::app(
                    Term::var(x),
                    Term::lam(z.clone(), Type::Bottom, Term::var(z)),
                ),
            )
        }
        Type::Var(_) => {
            let z = supply.fresh("z");
            Term::lam(z.clone(), Type::neg(Type::neg(t.clone())), Term::var(z))
        }
        Type::Arrow(u, v) => {
            let mv = mt(v, supply);
            let x = supply.fresh("x");
            let y = supply.fresh("y");
            let z = supply.fresh("z");
            let w = supply.fresh("t");
            let inner = Term::lam(
                w.clone(),
                t.clone(),
                Term::app(
                    Term::var(z.clone()),
                    Term::app(Term::var(w), Term::var(y.clone())),
                ),
            );
            Term::lam(
                x.clone(),
                Type::neg(Type::neg(t.clone())),
                Term::lam(
                    y,
                    (**u).clone(),
                    Term::app(
                        mv,
                        Term::lam(z, Type::neg((**v).clone()), Term::app(Term::var(x), inner)),
                    ),
                ),
            )
        }
        Type::Atom(_) => unreachable!("atoms rejected before construction"),
    }
}

/// Structural translation into the λ-calculus. The source must type-check
/// in the plain λμ-calculus (no equations) under `ctx`; μ-variables are
/// moved into the λ-namespace keeping their names (free ones must not
/// collide with λ-names).
pub fn translate(m: &Term, ctx: &Context) -> Result<Term, TranslateError> {
    let empty = CongruenceIndex::build(EquationSystem::new());
    infer(ctx, m, &empty)?;
    for (_, t) in ctx.lambdas().chain(ctx.mus()) {
        check_no_atoms(t)?;
    }
    let mut lam_names = m.free_lambda_vars();
    lam_names.extend(m.binder_names());
    for a in m.free_mu_vars() {
        if lam_names.contains(&a) {
            return Err(TranslateError::FreeNameClash(a));
        }
    }
    translate_rec(m)
}

fn translate_rec(m: &Term) -> Result<Term, TranslateError> {
    match m {
        Term::Var(x) => Ok(Term::var(x.clone())),
        Term::Lam(x, ann, b) => {
            check_no_atoms(ann)?;
            Ok(Term::lam(x.clone(), ann.clone(), translate_rec(b)?))
        }
        Term::App(f, a) => Ok(Term::app(translate_rec(f)?, translate_rec(a)?)),
        Term::Mu(a, u, b) => {
            check_no_atoms(u)?;
            let eliminator = build_mt(u)?;
            let body = translate_rec(b)?;
            Ok(Term::app(
                eliminator,
                Term::lam(a.clone(), Type::neg(u.clone()), body),
            ))
        }
        Term::Name(a, b) => Ok(Term::app(Term::var(a.clone()), translate_rec(b)?)),
    }
}

/// Context image under the translation: λ-bindings unchanged, a μ-binding
/// `a : ~U` becomes the λ-binding `a : ~U`.
pub fn translate_context(ctx: &Context) -> Result<Context, TranslateError> {
    let mut out = Context::new();
    for (x, t) in ctx.lambdas() {
        out.bind_lambda(x.clone(), t.clone())?;
    }
    for (a, u) in ctx.mus() {
        out.bind_lambda(a.clone(), Type::neg(u.clone()))?;
    }
    Ok(out)
}

/// One simulated source step: the source redex and the length of the
/// nonempty target reduction found for it.
#[derive(Debug, Clone, Serialize)]
pub struct SimulatedStep {
    pub position: Path,
    pub rule: Rule,
    pub target_steps: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub source_type: Type,
    pub target_term: Term,
    pub target_type: Type,
    pub equations: Vec<(String, Type)>,
    pub simulated: Vec<SimulatedStep>,
}

/// Checks the two translation properties on `m`: the translated term types
/// at the source type in the target system, and every one-step source
/// reduction is simulated by a nonempty target reduction found within
/// `fuel` explored terms.
pub fn verify_translation(
    m: &Term,
    ctx: &Context,
    fuel: usize,
) -> Result<VerifyReport, TranslateError> {
    let source_index = CongruenceIndex::build(EquationSystem::new());
    let source_type = infer(ctx, m, &source_index)?;

    let target = TargetSystem::for_source(m, ctx);
    let target_index = target.index();
    let translated = translate(m, ctx)?;
    let translated_ctx = translate_context(ctx)?;

    let target_type = infer(&translated_ctx, &translated, &target_index).map_err(|e| {
        TranslateError::TypePreservationFailure {
            expected: source_type.clone(),
            got: format!("error: {e}"),
        }
    })?;
    if !target_index.decide(&target_type, &source_type) {
        return Err(TranslateError::TypePreservationFailure {
            expected: source_type,
            got: format!("`{target_type}`"),
        });
    }

    let source_reducer = Reducer::with_index(&source_index);
    let target_reducer = Reducer::new();
    let mut simulated = Vec::new();
    for (position, rule, reduct) in source_reducer.one_step_reducts(m) {
        let reduct_image = translate(&reduct, ctx)?;
        match find_reduction(&target_reducer, &translated, &reduct_image, fuel) {
            Some(steps) => simulated.push(SimulatedStep {
                position,
                rule,
                target_steps: steps,
            }),
            None => {
                return Err(TranslateError::SimulationFailure {
                    source_before: Box::new(m.clone()),
                    source_after: Box::new(reduct),
                    fuel,
                })
            }
        }
    }

    Ok(VerifyReport {
        source_type,
        target_term: translated,
        target_type,
        equations: target
            .system
            .equations()
            .map(|(v, t)| (v.to_string(), t.clone()))
            .collect(),
        simulated,
    })
}

/// Breadth-first search for `from ▷+ to` (at least one step), bounded by
/// `fuel` distinct visited terms. Returns the depth at which `to` appears.
fn find_reduction(reducer: &Reducer, from: &Term, to: &Term, fuel: usize) -> Option<usize> {
    use std::collections::{HashMap, VecDeque};
    let goal = to.canon();
    let mut seen: HashMap<Term, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(from.canon(), 0);
    queue.push_back((from.clone(), 0usize));
    while let Some((term, depth)) = queue.pop_front() {
        if seen.len() > fuel {
            return None;
        }
        for (_, _, next) in reducer.one_step_reducts(&term) {
            let canon = next.canon();
            if canon == goal {
                return Some(depth + 1);
            }
            if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(canon) {
                slot.insert(depth + 1);
                queue.push_back((next, depth + 1));
            }
        }
    }
    None
}
