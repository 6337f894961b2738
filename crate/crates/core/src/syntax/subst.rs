use std::collections::BTreeSet;

use super::term::Term;

/// Picks a name based on `base` that is not in `avoid`, by priming.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Capture-avoiding λ-substitution `m[x := n]`: replaces the free
/// occurrences of the λ-variable `x` in `m` by `n`. Binders of `m` that
/// would capture free variables of `n` (in either namespace) are renamed.
/// The result is determined up to alpha-equivalence.
pub fn subst(m: &Term, x: &str, n: &Term) -> Term {
    match m {
        Term::Var(y) => {
            if y == x {
                n.clone()
            } else {
                m.clone()
            }
        }
        Term::App(f, a) => Term::app(subst(f, x, n), subst(a, x, n)),
        Term::Lam(y, ann, b) => {
            if y == x {
                m.clone() // x rebound, nothing free below
            } else if n.free_lambda_vars().contains(y) {
                let mut avoid = n.free_lambda_vars();
                avoid.extend(b.free_lambda_vars());
                avoid.extend(b.binder_names());
                avoid.insert(x.to_string());
                let y2 = fresh_name(y, &avoid);
                let b2 = subst(b, y, &Term::var(y2.clone()));
                Term::lam(y2, ann.clone(), subst(&b2, x, n))
            } else {
                Term::lam(y.clone(), ann.clone(), subst(b, x, n))
            }
        }
        Term::Mu(a, ann, b) => {
            if n.free_mu_vars().contains(a) {
                let mut avoid = n.free_mu_vars();
                avoid.extend(b.free_mu_vars());
                avoid.extend(b.binder_names());
                let a2 = fresh_name(a, &avoid);
                let b2 = rename_mu(b, a, &a2);
                Term::mu(a2, ann.clone(), subst(&b2, x, n))
            } else {
                Term::mu(a.clone(), ann.clone(), subst(b, x, n))
            }
        }
        Term::Name(a, b) => Term::name(a.clone(), subst(b, x, n)),
    }
}

/// μ-substitution `m[a = n]`: every sub-term `[a] p` of `m` with `a` free at
/// that position becomes `[a] (p' n)`, where `p'` is the recursive image of
/// `p`. The variable `a` does not disappear; it stays free in the result
/// wherever it was free in `m`.
pub fn mu_subst(m: &Term, a: &str, n: &Term) -> Term {
    match m {
        Term::Var(_) => m.clone(),
        Term::App(f, arg) => Term::app(mu_subst(f, a, n), mu_subst(arg, a, n)),
        Term::Name(b, p) => {
            let p2 = mu_subst(p, a, n);
            if b == a {
                Term::name(a.to_string(), Term::app(p2, n.clone()))
            } else {
                Term::name(b.clone(), p2)
            }
        }
        Term::Lam(y, ann, b) => {
            if n.free_lambda_vars().contains(y) {
                let mut avoid = n.free_lambda_vars();
                avoid.extend(b.free_lambda_vars());
                avoid.extend(b.binder_names());
                let y2 = fresh_name(y, &avoid);
                let b2 = subst(b, y, &Term::var(y2.clone()));
                Term::lam(y2, ann.clone(), mu_subst(&b2, a, n))
            } else {
                Term::lam(y.clone(), ann.clone(), mu_subst(b, a, n))
            }
        }
        Term::Mu(c, ann, b) => {
            if c == a {
                m.clone() // a rebound
            } else if n.free_mu_vars().contains(c) {
                let mut avoid = n.free_mu_vars();
                avoid.extend(b.free_mu_vars());
                avoid.extend(b.binder_names());
                avoid.insert(a.to_string());
                let c2 = fresh_name(c, &avoid);
                let b2 = rename_mu(b, c, &c2);
                Term::mu(c2, ann.clone(), mu_subst(&b2, a, n))
            } else {
                Term::mu(c.clone(), ann.clone(), mu_subst(b, a, n))
            }
        }
    }
}

/// Renames free occurrences of the μ-variable `from` to `to`.
fn rename_mu(t: &Term, from: &str, to: &str) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, a) => Term::app(rename_mu(f, from, to), rename_mu(a, from, to)),
        Term::Lam(y, ann, b) => Term::lam(y.clone(), ann.clone(), rename_mu(b, from, to)),
        Term::Name(a, b) => {
            let a2 = if a == from { to.to_string() } else { a.clone() };
            Term::name(a2, rename_mu(b, from, to))
        }
        Term::Mu(c, ann, b) => {
            if c == from {
                t.clone() // rebound
            } else {
                // callers pick `to` fresh w.r.t. the binders of `t`
                debug_assert_ne!(c, to);
                Term::mu(c.clone(), ann.clone(), rename_mu(b, from, to))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::term::alpha_eq;
    use crate::syntax::{parse_term, AtomSet};

    fn t(src: &str) -> Term {
        parse_term(src, &AtomSet::new()).unwrap()
    }

    #[test]
    fn subst_variable_hit_and_miss() {
        assert!(alpha_eq(
            &subst(&t("x"), "x", &t("\\y:X. y")),
            &t("\\y:X. y")
        ));
        assert!(alpha_eq(&subst(&t("z"), "x", &t("\\y:X. y")), &t("z")));
    }

    #[test]
    fn subst_avoids_capture() {
        // (\y:T. y x)[x := y] must rename the binder
        let m = t("\\y:T. y x");
        let r = subst(&m, "x", &t("y"));
        assert!(alpha_eq(&r, &t("\\w:T. w y")));
        assert!(!alpha_eq(&r, &t("\\w:T. w w")));
    }

    #[test]
    fn subst_self_application() {
        let delta = t("\\x:X. x x");
        let r = subst(&t("x x"), "x", &delta);
        assert!(alpha_eq(&r, &t("(\\x:X. x x) (\\x:X. x x)")));
    }

    #[test]
    fn subst_identity() {
        for src in ["\\y:X. y x", "mu a:U. [a] (x x)", "\\x:X. x"] {
            let m = t(src);
            assert!(alpha_eq(&subst(&m, "x", &t("x")), &m));
        }
    }

    #[test]
    fn subst_free_variable_accounting() {
        let m = t("\\y:X. x (y z)");
        let n = t("w w");
        let r = subst(&m, "x", &n);
        let fv = r.free_lambda_vars();
        assert!(fv.contains("w") && fv.contains("z") && !fv.contains("x"));
    }

    #[test]
    fn mu_subst_single_redex() {
        let m = t("[a] x");
        let r = mu_subst(&m, "a", &t("n"));
        assert!(alpha_eq(&r, &t("[a] (x n)")));
    }

    #[test]
    fn mu_subst_absent_variable() {
        assert!(alpha_eq(&mu_subst(&t("x"), "a", &t("n")), &t("x")));
    }

    #[test]
    fn mu_subst_nested_occurrences() {
        // [a][a]x with argument n: the inner name is rewritten first, then
        // the outer one wraps the rewritten image
        let m = t("[a] [a] x");
        let r = mu_subst(&m, "a", &t("n"));
        assert!(alpha_eq(&r, &t("[a] (([a] (x n)) n)")));
    }

    #[test]
    fn mu_subst_keeps_variable_free() {
        let m = t("[a] x");
        let r = mu_subst(&m, "a", &t("n"));
        assert!(r.free_mu_vars().contains("a"));
    }

    #[test]
    fn mu_subst_stops_at_rebinding() {
        let m = t("mu a:U. [a] x");
        let r = mu_subst(&m, "a", &t("n"));
        assert!(alpha_eq(&r, &m));
    }

    #[test]
    fn mu_subst_avoids_mu_capture() {
        // substituting under mu b when b is free in the argument
        let m = t("mu b:U. [a] x");
        let r = mu_subst(&m, "a", &t("mu c:V. [b] y"));
        // the bound b must be renamed away from the free b of the argument
        let expected = t("mu d:U. [a] (x (mu c:V. [b] y))");
        assert!(alpha_eq(&r, &expected));
    }

    #[test]
    fn fresh_name_primes() {
        let avoid: std::collections::BTreeSet<String> = ["x".to_string(), "x'".to_string()].into();
        assert_eq!(fresh_name("x", &avoid), "x''");
        assert_eq!(fresh_name("y", &avoid), "y");
    }
}
