//! Shared helpers for the integration suites: corpus loading, the bounded
//! rewrite oracle, and random generation of types and typable terms.
//!
//! The rewrite oracle is deliberately independent of the congruence engine:
//! it decides `U ≈ V` by breadth-first symmetric rewriting with the
//! equations (`X -> F` and `F -> X` at every position), so closure answers
//! can be checked against it wherever the oracle is definite.

#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use murec::congruence::CongruenceIndex;
use murec::syntax::{parse_context_file, parse_equations, parse_term, EquationSystem, Term, Type};
use murec::typing::Context;
use rand::prelude::*;

pub fn corpus_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(rel)
}

pub fn load_system(rel: &str) -> EquationSystem {
    let src = std::fs::read_to_string(corpus_path(rel)).unwrap();
    parse_equations(&src).unwrap()
}

pub fn load_term(system: &EquationSystem, rel: &str) -> Term {
    let src = std::fs::read_to_string(corpus_path(rel)).unwrap();
    parse_term(src.trim(), system.atoms()).unwrap()
}

pub fn load_context(system: &EquationSystem, rel: &str) -> Context {
    let src = std::fs::read_to_string(corpus_path(rel)).unwrap();
    Context::from_entries(&parse_context_file(&src, system.atoms()).unwrap()).unwrap()
}

/// Outcome of a bounded closure enumeration.
pub struct Closure {
    pub types: HashSet<Type>,
    /// The enumeration reached a fixed point (nothing new below the depth
    /// and size limits), so the set is the entire congruence class.
    pub saturated: bool,
}

pub struct RewriteOracle<'a> {
    system: &'a EquationSystem,
    pub cap: usize,
}

impl<'a> RewriteOracle<'a> {
    pub fn new(system: &'a EquationSystem) -> RewriteOracle<'a> {
        RewriteOracle {
            system,
            cap: 50_000,
        }
    }

    /// All single-position, single-equation rewrites of `t`, both directions.
    pub fn one_step(&self, t: &Type) -> Vec<Type> {
        let mut out = Vec::new();
        for (var, rhs) in self.system.equations() {
            let v = Type::var(var);
            rewrite_everywhere(t, &v, rhs, &mut out);
            rewrite_everywhere(t, rhs, &v, &mut out);
        }
        out
    }

    /// Breadth-first closure of `t` under rewriting, to `depth` steps.
    pub fn closure(&self, t: &Type, depth: usize) -> Closure {
        let mut types = HashSet::new();
        types.insert(t.clone());
        let mut frontier = vec![t.clone()];
        let mut saturated = true;
        for _ in 0..depth {
            let mut next = Vec::new();
            for u in &frontier {
                for v in self.one_step(u) {
                    if types.len() >= self.cap {
                        return Closure {
                            types,
                            saturated: false,
                        };
                    }
                    if types.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                return Closure {
                    types,
                    saturated: true,
                };
            }
            frontier = next;
        }
        // depth exhausted with a live frontier
        for u in &frontier {
            if self.one_step(u).iter().any(|v| !types.contains(v)) {
                saturated = false;
                break;
            }
        }
        Closure { types, saturated }
    }

    /// Definite positive: a conversion of length ≤ depth exists.
    pub fn equal_at_depth(&self, u: &Type, v: &Type, depth: usize) -> bool {
        self.closure(u, depth).types.contains(v)
    }

    /// Meet-in-the-middle conversion search (length ≤ 2 · depth).
    pub fn convertible(&self, u: &Type, v: &Type, depth: usize) -> bool {
        let cu = self.closure(u, depth);
        if cu.types.contains(v) {
            return true;
        }
        let cv = self.closure(v, depth);
        cu.types.intersection(&cv.types).next().is_some()
    }
}

/// Appends every term obtained from `t` by replacing one occurrence of
/// `from` (syntactically) with `to`.
fn rewrite_everywhere(t: &Type, from: &Type, to: &Type, out: &mut Vec<Type>) {
    if t == from {
        out.push(to.clone());
    }
    if let Type::Arrow(d, c) = t {
        let mut ds = Vec::new();
        rewrite_everywhere(d, from, to, &mut ds);
        out.extend(ds.into_iter().map(|d2| Type::arrow(d2, (**c).clone())));
        let mut cs = Vec::new();
        rewrite_everywhere(c, from, to, &mut cs);
        out.extend(cs.into_iter().map(|c2| Type::arrow((**d).clone(), c2)));
    }
}

/// Leaf alphabet of a system: its defined variables, declared atoms, `bot`,
/// and one or two undefined (constant-like) variables.
pub fn leaf_alphabet(system: &EquationSystem, with_bottom: bool) -> Vec<Type> {
    let mut out: Vec<Type> = system.equations().map(|(v, _)| Type::var(v)).collect();
    out.extend(system.atoms().iter().map(Type::atom));
    out.push(Type::var("Zfree"));
    if with_bottom {
        out.push(Type::Bottom);
    }
    out
}

/// Random type of size ≤ `max_size` over the given leaves.
pub fn random_type(rng: &mut StdRng, leaves: &[Type], max_size: usize) -> Type {
    if max_size < 3 || rng.random_bool(0.35) {
        leaves[rng.random_range(0..leaves.len())].clone()
    } else {
        let left = rng.random_range(1..max_size - 1);
        let right = max_size - 1 - left;
        Type::arrow(
            random_type(rng, leaves, left),
            random_type(rng, leaves, right),
        )
    }
}

/// Generator of typable terms under a fixed congruence index.
pub struct TermGen<'a> {
    pub index: &'a CongruenceIndex,
    pub rng: StdRng,
    pub with_mu: bool,
    /// Candidate argument types for applications.
    pub pool: Vec<Type>,
    counter: usize,
}

impl<'a> TermGen<'a> {
    pub fn new(index: &'a CongruenceIndex, seed: u64, with_mu: bool) -> TermGen<'a> {
        let system = index.system();
        let mut pool = leaf_alphabet(system, with_mu);
        let base: Vec<Type> = pool.clone();
        for (i, a) in base.iter().enumerate() {
            let b = &base[(i + 1) % base.len()];
            pool.push(Type::arrow(a.clone(), b.clone()));
        }
        TermGen {
            index,
            rng: StdRng::seed_from_u64(seed),
            with_mu,
            pool,
            counter: 0,
        }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{base}{}", self.counter)
    }

    /// A seed context with a handful of λ-variables (and a μ-variable when
    /// μ-terms are enabled) at pool types.
    pub fn seed_context(&mut self) -> Context {
        let mut ctx = Context::new();
        let n = self.rng.random_range(2..5);
        for _ in 0..n {
            let name = self.fresh("g");
            let ty = self.pool[self.rng.random_range(0..self.pool.len())].clone();
            ctx.bind_lambda(name, ty).unwrap();
        }
        if self.with_mu {
            let name = self.fresh("k");
            let ty = self.pool[self.rng.random_range(0..self.pool.len())].clone();
            ctx.bind_mu(name, ty).unwrap();
        }
        ctx
    }

    pub fn random_target(&mut self) -> Type {
        self.pool[self.rng.random_range(0..self.pool.len())].clone()
    }

    /// A term of a type congruent to `target` under `ctx`, or `None` when
    /// the budget runs dry.
    pub fn gen(&mut self, ctx: &Context, target: &Type, depth: usize) -> Option<Term> {
        for _ in 0..8 {
            if let Some(t) = self.attempt(ctx, target, depth) {
                return Some(t);
            }
        }
        None
    }

    fn attempt(&mut self, ctx: &Context, target: &Type, depth: usize) -> Option<Term> {
        let candidates: Vec<String> = ctx
            .lambdas()
            .filter(|(_, t)| self.index.decide(t, target))
            .map(|(x, _)| x.clone())
            .collect();
        let can_lam = self.index.head_arrow(target).is_ok();
        let is_bottom = self.index.decide(target, &Type::Bottom);

        let choice = if depth == 0 {
            if !candidates.is_empty() {
                0
            } else {
                return None;
            }
        } else {
            self.rng.random_range(0..10)
        };

        match choice {
            // variable from the context
            0 | 6 if !candidates.is_empty() => {
                let i = self.rng.random_range(0..candidates.len());
                Some(Term::var(candidates[i].clone()))
            }
            // abstraction along the head arrow
            1 | 7 | 8 if can_lam => {
                let (dom, cod) = self.index.head_arrow(target).ok()?;
                let x = self.fresh("v");
                let mut ctx2 = ctx.clone();
                ctx2.bind_lambda(x.clone(), dom.clone()).ok()?;
                let body = self.attempt(&ctx2, &cod, depth - 1)?;
                Some(Term::lam(x, dom, body))
            }
            // application at a pool argument type
            2 | 9 if depth > 0 => {
                let arg_ty = self.random_target();
                let fun_ty = Type::arrow(arg_ty.clone(), target.clone());
                let fun = self.attempt(ctx, &fun_ty, depth - 1)?;
                let arg = self.attempt(ctx, &arg_ty, depth - 1)?;
                Some(Term::app(fun, arg))
            }
            // μ-abstraction
            3 if self.with_mu && depth > 0 => {
                let a = self.fresh("k");
                let mut ctx2 = ctx.clone();
                ctx2.bind_mu(a.clone(), target.clone()).ok()?;
                let body = self.attempt(&ctx2, &Type::Bottom, depth - 1)?;
                Some(Term::mu(a, target.clone(), body))
            }
            // named term, for ⊥ targets
            4 | 5 if self.with_mu && is_bottom && depth > 0 => {
                let mus: Vec<(String, Type)> =
                    ctx.mus().map(|(a, t)| (a.clone(), t.clone())).collect();
                if mus.is_empty() {
                    return None;
                }
                let (a, u) = mus[self.rng.random_range(0..mus.len())].clone();
                let arg = self.attempt(ctx, &u, depth - 1)?;
                Some(Term::name(a, arg))
            }
            _ => {
                // fall back to a variable or abstraction
                if !candidates.is_empty() {
                    let i = self.rng.random_range(0..candidates.len());
                    Some(Term::var(candidates[i].clone()))
                } else if can_lam && depth > 0 {
                    let (dom, cod) = self.index.head_arrow(target).ok()?;
                    let x = self.fresh("v");
                    let mut ctx2 = ctx.clone();
                    ctx2.bind_lambda(x.clone(), dom.clone()).ok()?;
                    let body = self.attempt(&ctx2, &cod, depth - 1)?;
                    Some(Term::lam(x, dom, body))
                } else {
                    None
                }
            }
        }
    }
}
