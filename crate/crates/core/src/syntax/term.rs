use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use super::ty::Type;

/// A λμ-term with Church-style annotations on both binders.
///
/// `Lam(x, T, m)` binds the λ-variable `x` at type `T`; `Mu(a, U, m)` binds
/// the μ-variable `a` at type `~U` (the annotation records `U`); `Name(a, m)`
/// is the named term `[a] m`. λ-variables and μ-variables are drawn from
/// disjoint namespaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Lam(String, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Mu(String, Type, Box<Term>),
    Name(String, Box<Term>),
}

impl Term {
    pub fn var(x: impl Into<String>) -> Term {
        Term::Var(x.into())
    }

    pub fn lam(x: impl Into<String>, ann: Type, body: Term) -> Term {
        Term::Lam(x.into(), ann, Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn mu(a: impl Into<String>, ann: Type, body: Term) -> Term {
        Term::Mu(a.into(), ann, Box::new(body))
    }

    pub fn name(a: impl Into<String>, arg: Term) -> Term {
        Term::Name(a.into(), Box::new(arg))
    }

    /// Structural complexity: the number of nodes in the syntax tree.
    pub fn cxty(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(_, _, b) | Term::Mu(_, _, b) | Term::Name(_, b) => 1 + b.cxty(),
            Term::App(f, a) => 1 + f.cxty() + a.cxty(),
        }
    }

    /// Free λ-variables.
    pub fn free_lambda_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out, &mut BTreeSet::new(), true);
        out
    }

    /// Free μ-variables.
    pub fn free_mu_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out, &mut BTreeSet::new(), false);
        out
    }

    fn free_vars_into(
        &self,
        out: &mut BTreeSet<String>,
        bound: &mut BTreeSet<String>,
        lambda: bool,
    ) {
        match self {
            Term::Var(x) => {
                if lambda && !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Lam(x, _, b) => {
                let fresh = lambda && bound.insert(x.clone());
                b.free_vars_into(out, bound, lambda);
                if fresh {
                    bound.remove(x);
                }
            }
            Term::Mu(a, _, b) => {
                let fresh = !lambda && bound.insert(a.clone());
                b.free_vars_into(out, bound, lambda);
                if fresh {
                    bound.remove(a);
                }
            }
            Term::Name(a, b) => {
                if !lambda && !bound.contains(a) {
                    out.insert(a.clone());
                }
                b.free_vars_into(out, bound, lambda);
            }
            Term::App(f, a) => {
                f.free_vars_into(out, bound, lambda);
                a.free_vars_into(out, bound, lambda);
            }
        }
    }

    /// All binder names in the term, both namespaces.
    pub fn binder_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(_) => {}
                Term::Lam(x, _, b) | Term::Mu(x, _, b) => {
                    out.insert(x.clone());
                    stack.push(b);
                }
                Term::Name(_, b) => stack.push(b),
                Term::App(f, a) => {
                    stack.push(f);
                    stack.push(a);
                }
            }
        }
        out
    }

    /// Alpha-canonical form: binders are renamed, in traversal order, to
    /// `%0, %1, …` (λ) and `@0, @1, …` (μ). Neither spelling is accepted by
    /// the parser, so canonical names never collide with source names. Two
    /// terms are alpha-equivalent iff their canonical forms are `==`; the
    /// canonical form is the key used by reduction-graph memo tables.
    pub fn canon(&self) -> Term {
        fn go(
            t: &Term,
            next: &mut usize,
            lam: &mut Vec<(String, String)>,
            mu: &mut Vec<(String, String)>,
        ) -> Term {
            match t {
                Term::Var(x) => {
                    let name = lam
                        .iter()
                        .rev()
                        .find(|(orig, _)| orig == x)
                        .map(|(_, c)| c.clone());
                    Term::Var(name.unwrap_or_else(|| x.clone()))
                }
                Term::Lam(x, ann, b) => {
                    let c = format!("%{next}");
                    *next += 1;
                    lam.push((x.clone(), c.clone()));
                    let b = go(b, next, lam, mu);
                    lam.pop();
                    Term::Lam(c, ann.clone(), Box::new(b))
                }
                Term::Mu(a, ann, b) => {
                    let c = format!("@{next}");
                    *next += 1;
                    mu.push((a.clone(), c.clone()));
                    let b = go(b, next, lam, mu);
                    mu.pop();
                    Term::Mu(c, ann.clone(), Box::new(b))
                }
                Term::Name(a, b) => {
                    let name = mu
                        .iter()
                        .rev()
                        .find(|(orig, _)| orig == a)
                        .map(|(_, c)| c.clone());
                    Term::Name(
                        name.unwrap_or_else(|| a.clone()),
                        Box::new(go(b, next, lam, mu)),
                    )
                }
                Term::App(f, a) => Term::App(
                    Box::new(go(f, next, lam, mu)),
                    Box::new(go(a, next, lam, mu)),
                ),
            }
        }
        go(self, &mut 0, &mut Vec::new(), &mut Vec::new())
    }
}

/// Alpha-equivalence. Annotations are compared syntactically: `\x:X. x` and
/// `\x:Y. x` are not alpha-equivalent.
pub fn alpha_eq(m: &Term, n: &Term) -> bool {
    fn go(
        m: &Term,
        n: &Term,
        lam: &mut Vec<(String, String)>,
        mu: &mut Vec<(String, String)>,
    ) -> bool {
        match (m, n) {
            (Term::Var(x), Term::Var(y)) => bound_eq(x, y, lam),
            (Term::Lam(x, tx, bx), Term::Lam(y, ty, by)) => {
                tx == ty && {
                    lam.push((x.clone(), y.clone()));
                    let r = go(bx, by, lam, mu);
                    lam.pop();
                    r
                }
            }
            (Term::Mu(x, tx, bx), Term::Mu(y, ty, by)) => {
                tx == ty && {
                    mu.push((x.clone(), y.clone()));
                    let r = go(bx, by, lam, mu);
                    mu.pop();
                    r
                }
            }
            (Term::Name(x, bx), Term::Name(y, by)) => bound_eq(x, y, mu) && go(bx, by, lam, mu),
            (Term::App(f1, a1), Term::App(f2, a2)) => go(f1, f2, lam, mu) && go(a1, a2, lam, mu),
            _ => false,
        }
    }
    fn bound_eq(x: &str, y: &str, table: &[(String, String)]) -> bool {
        for (l, r) in table.iter().rev() {
            match (l == x, r == y) {
                (true, true) => return true,
                (false, false) => continue,
                _ => return false,
            }
        }
        x == y // both free
    }
    go(m, n, &mut Vec::new(), &mut Vec::new())
}

impl Term {
    /// An alpha-equivalent term whose binders neither shadow an enclosing
    /// binder nor collide with the other namespace, so that the printed form
    /// re-parses. Substitution can produce shadowing (`\y. \y. …`), which
    /// the parser rejects on input.
    pub fn renamed_apart(&self) -> Term {
        let mut lam_used = self.free_lambda_vars();
        let mut mu_used = self.free_mu_vars();
        collect_names(self, &mut lam_used, &mut mu_used);

        fn go(
            t: &Term,
            lam: &mut Vec<(String, String)>,
            mu: &mut Vec<(String, String)>,
            lam_used: &mut BTreeSet<String>,
            mu_used: &mut BTreeSet<String>,
        ) -> Term {
            let rename = |name: &str, table: &[(String, String)]| {
                table
                    .iter()
                    .rev()
                    .find(|(o, _)| o == name)
                    .map(|(_, n)| n.clone())
                    .unwrap_or_else(|| name.to_string())
            };
            match t {
                Term::Var(x) => Term::Var(rename(x, lam)),
                Term::Name(a, b) => {
                    let a2 = rename(a, mu);
                    Term::name(a2, go(b, lam, mu, lam_used, mu_used))
                }
                Term::App(f, a) => Term::app(
                    go(f, lam, mu, lam_used, mu_used),
                    go(a, lam, mu, lam_used, mu_used),
                ),
                Term::Lam(x, ann, b) => {
                    let shadowed = lam.iter().any(|(o, _)| o == x) || mu_used.contains(x);
                    let x2 = if shadowed {
                        let mut avoid = lam_used.clone();
                        avoid.extend(mu_used.iter().cloned());
                        let fresh = super::subst::fresh_name(x, &avoid);
                        lam_used.insert(fresh.clone());
                        fresh
                    } else {
                        x.clone()
                    };
                    lam.push((x.clone(), x2.clone()));
                    let b2 = go(b, lam, mu, lam_used, mu_used);
                    lam.pop();
                    Term::lam(x2, ann.clone(), b2)
                }
                Term::Mu(a, ann, b) => {
                    let shadowed = mu.iter().any(|(o, _)| o == a) || lam_used.contains(a);
                    let a2 = if shadowed {
                        let mut avoid = mu_used.clone();
                        avoid.extend(lam_used.iter().cloned());
                        let fresh = super::subst::fresh_name(a, &avoid);
                        mu_used.insert(fresh.clone());
                        fresh
                    } else {
                        a.clone()
                    };
                    mu.push((a.clone(), a2.clone()));
                    let b2 = go(b, lam, mu, lam_used, mu_used);
                    mu.pop();
                    Term::mu(a2, ann.clone(), b2)
                }
            }
        }
        go(
            self,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut lam_used,
            &mut mu_used,
        )
    }

    fn is_renamed_apart(&self) -> bool {
        fn scan(
            t: &Term,
            lam_scope: &mut Vec<String>,
            mu_scope: &mut Vec<String>,
            lam_all: &BTreeSet<String>,
            mu_all: &BTreeSet<String>,
        ) -> bool {
            match t {
                Term::Var(_) => true,
                Term::Name(_, b) => scan(b, lam_scope, mu_scope, lam_all, mu_all),
                Term::App(f, a) => {
                    scan(f, lam_scope, mu_scope, lam_all, mu_all)
                        && scan(a, lam_scope, mu_scope, lam_all, mu_all)
                }
                Term::Lam(x, _, b) => {
                    if lam_scope.iter().any(|v| v == x) || mu_all.contains(x) {
                        return false;
                    }
                    lam_scope.push(x.clone());
                    let ok = scan(b, lam_scope, mu_scope, lam_all, mu_all);
                    lam_scope.pop();
                    ok
                }
                Term::Mu(a, _, b) => {
                    if mu_scope.iter().any(|v| v == a) || lam_all.contains(a) {
                        return false;
                    }
                    mu_scope.push(a.clone());
                    let ok = scan(b, lam_scope, mu_scope, lam_all, mu_all);
                    mu_scope.pop();
                    ok
                }
            }
        }
        let mut lam_all = self.free_lambda_vars();
        let mut mu_all = self.free_mu_vars();
        collect_names(self, &mut lam_all, &mut mu_all);
        scan(self, &mut Vec::new(), &mut Vec::new(), &lam_all, &mu_all)
    }
}

/// Every name used in λ positions resp. μ positions, bound or free.
fn collect_names(t: &Term, lam: &mut BTreeSet<String>, mu: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            lam.insert(x.clone());
        }
        Term::Lam(x, _, b) => {
            lam.insert(x.clone());
            collect_names(b, lam, mu);
        }
        Term::Mu(a, _, b) => {
            mu.insert(a.clone());
            collect_names(b, lam, mu);
        }
        Term::Name(a, b) => {
            mu.insert(a.clone());
            collect_names(b, lam, mu);
        }
        Term::App(f, a) => {
            collect_names(f, lam, mu);
            collect_names(a, lam, mu);
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_renamed_apart() {
            fmt_term(self, f, 0)
        } else {
            fmt_term(&self.renamed_apart(), f, 0)
        }
    }
}

// prec 0: top level, 1: function position of an application, 2: argument position
fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match t {
        Term::Var(x) => write!(f, "{x}"),
        Term::App(fun, arg) => {
            if prec >= 2 {
                write!(f, "(")?;
            }
            fmt_term(fun, f, 1)?;
            write!(f, " ")?;
            fmt_term(arg, f, 2)?;
            if prec >= 2 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Term::Lam(x, ann, b) => fmt_binder(f, prec, &format!("\\{x}:{ann}"), b),
        Term::Mu(a, ann, b) => fmt_binder(f, prec, &format!("mu {a}:{ann}"), b),
        Term::Name(a, b) => fmt_binder(f, prec, &format!("[{a}]"), b),
    }
}

fn fmt_binder(f: &mut fmt::Formatter<'_>, prec: u8, head: &str, body: &Term) -> fmt::Result {
    if prec >= 1 {
        write!(f, "(")?;
    }
    write!(f, "{head}")?;
    if head.starts_with('[') {
        write!(f, " ")?;
    } else {
        write!(f, ". ")?;
    }
    fmt_term(body, f, 0)?;
    if prec >= 1 {
        write!(f, ")")?;
    }
    Ok(())
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
