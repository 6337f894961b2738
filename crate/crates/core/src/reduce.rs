//! β/μ-reduction: one-step contraction at a position, normalization
//! strategies, reduction-graph exploration, the η/cxty metrics, sub-terms of
//! reducts, and a bounded strong-normalization probe.
//!
//! Redex positions are paths of child indices into the syntax tree (0 for a
//! body or function, 1 for an argument). The β-rule contracts
//! `(\x:T. m) n`; the μ-rule contracts `(mu a:T. m) n` to
//! `mu a:T'. m[a = n]`, rewriting the annotation from `U -> V` to `V`. When
//! the annotation is not syntactically an arrow the head arrow is resolved
//! through the congruence index if one was supplied; reduction itself never
//! needs the index.
//!
//! Exhaustive exploration memoizes on alpha-canonical forms and counts fuel
//! in distinct visited terms; leftmost-outermost counts fuel in contraction
//! steps.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::congruence::CongruenceIndex;
use crate::syntax::{mu_subst, subst, Term, Type};

#[derive(Debug, Error)]
pub enum ReduceError {
    #[error("no β- or μ-redex at position {position:?}")]
    NotARedex { position: Path },
    #[error("fuel exhausted after {fuel_spent} of {fuel}{}", if *.cycle { " (reduction cycle found)" } else { "" })]
    FuelExhausted {
        fuel: usize,
        fuel_spent: usize,
        cycle: bool,
        partial: Box<ReductionTrace>,
    },
}

/// A path into the syntax tree: child indices from the root.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Beta,
    Mu,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub rule: Rule,
    pub position: Path,
    pub before: Term,
    pub after: Term,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    pub terminated: bool,
    pub fuel_spent: usize,
}

impl ReductionTrace {
    /// The last term of the trace, or `start` if no step was taken.
    pub fn final_term(&self, start: &Term) -> Term {
        self.steps
            .last()
            .map(|s| s.after.clone())
            .unwrap_or_else(|| start.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    Exhaustive,
}

/// Longest-reduction length, when the exhaustive graph closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Eta {
    Known(usize),
    Unknown,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Metrics {
    pub eta: Eta,
    pub cxty: usize,
}

impl Metrics {
    /// The pair `(η, cxty)`, ordered lexicographically, when η is known.
    pub fn etac(&self) -> Option<(usize, usize)> {
        match self.eta {
            Eta::Known(n) => Some((n, self.cxty)),
            Eta::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum SnVerdict {
    /// The reduction graph closed without cycles; `eta` is exact.
    Sn { eta: usize },
    /// The graph did not close within fuel, or a cycle was found.
    NotClosed { visited: usize, cycle: bool },
}

impl SnVerdict {
    pub fn is_sn(&self) -> bool {
        matches!(self, SnVerdict::Sn { .. })
    }
}

#[derive(Debug, Clone)]
pub struct SubtermsReport {
    /// Alpha-canonical subterms of all explored reducts.
    pub subterms: Vec<Term>,
    /// The set is known exhaustive: the graph closed and was acyclic.
    pub complete: bool,
}

/// The explored reduction graph. Nodes are alpha-canonical terms; node 0 is
/// the start term.
#[derive(Debug)]
pub struct ReductionGraph {
    pub nodes: Vec<Term>,
    pub edges: Vec<Vec<usize>>,
    /// Every reachable node was expanded within fuel.
    pub closed: bool,
    /// No reduction cycle among the expanded nodes.
    pub acyclic: bool,
    pub fuel_spent: usize,
}

impl ReductionGraph {
    pub fn normal_forms(&self) -> Vec<&Term> {
        self.nodes
            .iter()
            .zip(&self.edges)
            .filter(|(_, succ)| succ.is_empty())
            .map(|(t, _)| t)
            .collect()
    }

    /// Length of the longest reduction from the start term; `None` unless
    /// the graph closed without cycles.
    pub fn eta(&self) -> Option<usize> {
        if !self.closed || !self.acyclic {
            return None;
        }
        // longest path over a DAG, children-first
        let mut memo = vec![None::<usize>; self.nodes.len()];
        let mut stack = vec![(0usize, 0usize)];
        while let Some(&(node, child)) = stack.last() {
            if memo[node].is_some() {
                stack.pop();
                continue;
            }
            if child < self.edges[node].len() {
                stack.last_mut().unwrap().1 += 1;
                let next = self.edges[node][child];
                if memo[next].is_none() {
                    stack.push((next, 0));
                }
            } else {
                let best = self.edges[node]
                    .iter()
                    .map(|&n| memo[n].unwrap() + 1)
                    .max()
                    .unwrap_or(0);
                memo[node] = Some(best);
                stack.pop();
            }
        }
        memo[0]
    }
}

/// Reduction driver. The optional congruence index is used only to rewrite
/// μ-annotations whose head arrow is hidden behind a defined variable.
#[derive(Debug, Clone, Copy, Default)]
pub struct Reducer<'a> {
    index: Option<&'a CongruenceIndex>,
}

impl<'a> Reducer<'a> {
    pub fn new() -> Reducer<'static> {
        Reducer { index: None }
    }

    pub fn with_index(index: &'a CongruenceIndex) -> Reducer<'a> {
        Reducer { index: Some(index) }
    }

    /// Positions of all redexes, in preorder: the first entry is the
    /// leftmost-outermost redex.
    pub fn redexes(&self, m: &Term) -> Vec<Path> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_redexes(m, &mut path, &mut out);
        out
    }

    /// Contracts exactly the redex at `position`.
    pub fn step(&self, m: &Term, position: &[usize]) -> Result<Term, ReduceError> {
        self.rewrite_at(m, position)
            .ok_or_else(|| ReduceError::NotARedex {
                position: position.to_vec(),
            })
    }

    fn rewrite_at(&self, m: &Term, position: &[usize]) -> Option<Term> {
        match position.split_first() {
            None => self.contract(m).map(|(_, t)| t),
            Some((&i, rest)) => match (m, i) {
                (Term::Lam(x, ann, b), 0) => {
                    Some(Term::lam(x.clone(), ann.clone(), self.rewrite_at(b, rest)?))
                }
                (Term::Mu(a, ann, b), 0) => {
                    Some(Term::mu(a.clone(), ann.clone(), self.rewrite_at(b, rest)?))
                }
                (Term::Name(a, b), 0) => Some(Term::name(a.clone(), self.rewrite_at(b, rest)?)),
                (Term::App(f, a), 0) => Some(Term::app(self.rewrite_at(f, rest)?, (**a).clone())),
                (Term::App(f, a), 1) => Some(Term::app((**f).clone(), self.rewrite_at(a, rest)?)),
                _ => None,
            },
        }
    }

    fn contract(&self, m: &Term) -> Option<(Rule, Term)> {
        let Term::App(fun, arg) = m else { return None };
        match &**fun {
            Term::Lam(x, _, body) => Some((Rule::Beta, subst(body, x, arg))),
            Term::Mu(a, ann, body) => {
                let ann2 = self.mu_result_annotation(ann);
                Some((Rule::Mu, Term::mu(a.clone(), ann2, mu_subst(body, a, arg))))
            }
            _ => None,
        }
    }

    // U -> V becomes V; a defined variable is unfolded through the index
    // when available, otherwise the annotation is left unchanged (the
    // reduction itself is untyped).
    fn mu_result_annotation(&self, ann: &Type) -> Type {
        if let Type::Arrow(_, cod) = ann {
            return (**cod).clone();
        }
        if let Some(index) = self.index {
            if let Ok((_, cod)) = index.head_arrow(ann) {
                return cod;
            }
        }
        ann.clone()
    }

    /// All one-step reducts with their positions and rules.
    pub fn one_step_reducts(&self, m: &Term) -> Vec<(Path, Rule, Term)> {
        self.redexes(m)
            .into_iter()
            .map(|p| {
                let sub = subterm_at(m, &p).expect("redex path");
                let (rule, _) = self.contract(sub).expect("redex");
                let t = self.rewrite_at(m, &p).expect("redex path");
                (p, rule, t)
            })
            .collect()
    }

    /// Normalizes `m`. Leftmost-outermost follows one path and spends one
    /// fuel per step; exhaustive explores the whole reduction graph
    /// (fuel = distinct terms) and, when every maximal path terminates,
    /// returns a leftmost witness trace to the normal form.
    pub fn normalize(
        &self,
        m: &Term,
        strategy: Strategy,
        fuel: usize,
    ) -> Result<ReductionTrace, ReduceError> {
        match strategy {
            Strategy::LeftmostOutermost => self.normalize_leftmost(m, fuel),
            Strategy::Exhaustive => {
                let graph = self.reduction_graph(m, fuel);
                if graph.closed && graph.acyclic {
                    // every path terminates; the graph size bounds the witness
                    let mut trace = self.normalize_leftmost(m, usize::MAX)?;
                    trace.fuel_spent = graph.fuel_spent;
                    Ok(trace)
                } else {
                    Err(ReduceError::FuelExhausted {
                        fuel,
                        fuel_spent: graph.fuel_spent,
                        cycle: !graph.acyclic,
                        partial: Box::new(ReductionTrace {
                            steps: Vec::new(),
                            terminated: false,
                            fuel_spent: graph.fuel_spent,
                        }),
                    })
                }
            }
        }
    }

    fn normalize_leftmost(&self, m: &Term, fuel: usize) -> Result<ReductionTrace, ReduceError> {
        let mut current = m.clone();
        let mut steps = Vec::new();
        let mut spent = 0usize;
        loop {
            let redexes = self.redexes(&current);
            let Some(position) = redexes.into_iter().next() else {
                return Ok(ReductionTrace {
                    steps,
                    terminated: true,
                    fuel_spent: spent,
                });
            };
            if spent >= fuel {
                return Err(ReduceError::FuelExhausted {
                    fuel,
                    fuel_spent: spent,
                    cycle: false,
                    partial: Box::new(ReductionTrace {
                        steps,
                        terminated: false,
                        fuel_spent: spent,
                    }),
                });
            }
            let sub = subterm_at(&current, &position).expect("redex path");
            let (rule, _) = self.contract(sub).expect("redex");
            let next = self.rewrite_at(&current, &position).expect("redex path");
            steps.push(TraceStep {
                rule,
                position,
                before: current.clone(),
                after: next.clone(),
            });
            current = next;
            spent += 1;
        }
    }

    /// Explores the reduction graph breadth-first, memoizing on
    /// alpha-canonical forms. Stops expanding once `fuel` distinct terms
    /// have been visited.
    pub fn reduction_graph(&self, m: &Term, fuel: usize) -> ReductionGraph {
        let mut ids: HashMap<Term, usize> = HashMap::new();
        let mut nodes: Vec<Term> = Vec::new();
        let mut edges: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();

        let root = m.canon();
        ids.insert(root.clone(), 0);
        nodes.push(root);
        edges.push(Vec::new());
        queue.push_back(0usize);

        let mut expanded = 0usize;
        let mut closed = true;
        while let Some(node) = queue.pop_front() {
            if expanded >= fuel {
                closed = false;
                break;
            }
            expanded += 1;
            let term = nodes[node].clone();
            let mut succ = Vec::new();
            for (_, _, reduct) in self.one_step_reducts(&term) {
                let canon = reduct.canon();
                let id = match ids.get(&canon) {
                    Some(&id) => id,
                    None => {
                        let id = nodes.len();
                        ids.insert(canon.clone(), id);
                        nodes.push(canon);
                        edges.push(Vec::new());
                        queue.push_back(id);
                        id
                    }
                };
                if !succ.contains(&id) {
                    succ.push(id);
                }
            }
            edges[node] = succ;
        }

        let acyclic = is_acyclic(&edges);
        ReductionGraph {
            nodes,
            edges,
            closed,
            acyclic,
            fuel_spent: expanded,
        }
    }

    /// η and cxty. η is `Unknown` when the graph did not close or contains
    /// a cycle.
    pub fn eta_metric(&self, m: &Term, fuel: usize) -> Metrics {
        let graph = self.reduction_graph(m, fuel);
        let eta = match graph.eta() {
            Some(n) => Eta::Known(n),
            None => Eta::Unknown,
        };
        Metrics {
            eta,
            cxty: m.cxty(),
        }
    }

    /// All alpha-canonical subterms of all reducts reached within fuel.
    pub fn subterms_of_reducts(&self, m: &Term, fuel: usize) -> SubtermsReport {
        let graph = self.reduction_graph(m, fuel);
        let mut set: HashMap<Term, ()> = HashMap::new();
        for node in &graph.nodes {
            collect_subterms(node, &mut set);
        }
        let mut subterms: Vec<Term> = set.into_keys().collect();
        subterms.sort_by_key(|t| (t.cxty(), t.to_string()));
        SubtermsReport {
            subterms,
            complete: graph.closed && graph.acyclic,
        }
    }

    /// Definite strong-normalization verdict when the exhaustive graph
    /// closes without cycles; `NotClosed` otherwise.
    pub fn sn_probe(&self, m: &Term, fuel: usize) -> SnVerdict {
        let graph = self.reduction_graph(m, fuel);
        match graph.eta() {
            Some(eta) => SnVerdict::Sn { eta },
            None => SnVerdict::NotClosed {
                visited: graph.nodes.len(),
                cycle: !graph.acyclic,
            },
        }
    }
}

fn collect_redexes(m: &Term, path: &mut Path, out: &mut Vec<Path>) {
    if let Term::App(fun, _) = m {
        if matches!(**fun, Term::Lam(_, _, _) | Term::Mu(_, _, _)) {
            out.push(path.clone());
        }
    }
    match m {
        Term::Var(_) => {}
        Term::Lam(_, _, b) | Term::Mu(_, _, b) | Term::Name(_, b) => {
            path.push(0);
            collect_redexes(b, path, out);
            path.pop();
        }
        Term::App(f, a) => {
            path.push(0);
            collect_redexes(f, path, out);
            path.pop();
            path.push(1);
            collect_redexes(a, path, out);
            path.pop();
        }
    }
}

fn subterm_at<'t>(m: &'t Term, path: &[usize]) -> Option<&'t Term> {
    match path.split_first() {
        None => Some(m),
        Some((&i, rest)) => match (m, i) {
            (Term::Lam(_, _, b), 0) | (Term::Mu(_, _, b), 0) | (Term::Name(_, b), 0) => {
                subterm_at(b, rest)
            }
            (Term::App(f, _), 0) => subterm_at(f, rest),
            (Term::App(_, a), 1) => subterm_at(a, rest),
            _ => None,
        },
    }
}

fn collect_subterms(m: &Term, out: &mut HashMap<Term, ()>) {
    out.insert(m.canon(), ());
    match m {
        Term::Var(_) => {}
        Term::Lam(_, _, b) | Term::Mu(_, _, b) | Term::Name(_, b) => collect_subterms(b, out),
        Term::App(f, a) => {
            collect_subterms(f, out);
            collect_subterms(a, out);
        }
    }
}

/// Kahn's algorithm; nodes without successors recorded (frontier nodes of a
/// truncated graph count as sinks, which can only under-report cycles in
/// graphs that are already not closed).
fn is_acyclic(edges: &[Vec<usize>]) -> bool {
    let n = edges.len();
    let mut indegree = vec![0usize; n];
    for succ in edges {
        for &j in succ {
            indegree[j] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut seen = 0usize;
    while let Some(i) = queue.pop_front() {
        seen += 1;
        for &j in &edges[i] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push_back(j);
            }
        }
    }
    seen == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_equations, parse_term, AtomSet};

    fn t(src: &str) -> Term {
        parse_term(src, &AtomSet::new()).unwrap()
    }

    /// Independent longest-reduction oracle: enumerates redexes directly and
    /// recurses over contractions, memoized on canonical forms. Panics on
    /// divergent terms; only used on terms known to normalize.
    fn oracle_eta(m: &Term) -> usize {
        fn reducts(m: &Term) -> Vec<Term> {
            let mut out = Vec::new();
            if let Term::App(f, a) = m {
                match &**f {
                    Term::Lam(x, _, b) => out.push(crate::syntax::subst(b, x, a)),
                    Term::Mu(v, ann, b) => {
                        let ann2 = match ann {
                            Type::Arrow(_, c) => (**c).clone(),
                            other => other.clone(),
                        };
                        out.push(Term::mu(v.clone(), ann2, crate::syntax::mu_subst(b, v, a)));
                    }
                    _ => {}
                }
            }
            match m {
                Term::Var(_) => {}
                Term::Lam(x, ann, b) => out.extend(
                    reducts(b)
                        .into_iter()
                        .map(|b2| Term::lam(x.clone(), ann.clone(), b2)),
                ),
                Term::Mu(x, ann, b) => out.extend(
                    reducts(b)
                        .into_iter()
                        .map(|b2| Term::mu(x.clone(), ann.clone(), b2)),
                ),
                Term::Name(x, b) => {
                    out.extend(reducts(b).into_iter().map(|b2| Term::name(x.clone(), b2)))
                }
                Term::App(f, a) => {
                    out.extend(
                        reducts(f)
                            .into_iter()
                            .map(|f2| Term::app(f2, (**a).clone())),
                    );
                    out.extend(
                        reducts(a)
                            .into_iter()
                            .map(|a2| Term::app((**f).clone(), a2)),
                    );
                }
            }
            out
        }
        fn go(m: &Term, memo: &mut std::collections::HashMap<Term, usize>) -> usize {
            let key = m.canon();
            if let Some(&v) = memo.get(&key) {
                return v;
            }
            let v = reducts(m)
                .iter()
                .map(|r| 1 + go(r, memo))
                .max()
                .unwrap_or(0);
            memo.insert(key, v);
            v
        }
        go(m, &mut std::collections::HashMap::new())
    }

    #[test]
    fn step_beta() {
        let r = Reducer::new();
        let m = t("(\\x:X. x) y");
        assert!(alpha_eq(&r.step(&m, &[]).unwrap(), &t("y")));
    }

    #[test]
    fn step_mu_updates_annotation() {
        let r = Reducer::new();
        let m = t("(mu a:U -> V. [a] f) n");
        let stepped = r.step(&m, &[]).unwrap();
        assert!(alpha_eq(&stepped, &t("mu a:V. [a] (f n)")));
    }

    #[test]
    fn step_mu_resolves_annotation_through_index() {
        let system = parse_equations("atom Bool\nX = (X -> Bool) -> Bool\n").unwrap();
        let index = crate::congruence::CongruenceIndex::build(system);
        let m = parse_term("(mu a:X. [a] f) n", index.system().atoms()).unwrap();
        let with = Reducer::with_index(&index).step(&m, &[]).unwrap();
        let expected = parse_term("mu a:Bool. [a] (f n)", index.system().atoms()).unwrap();
        assert!(alpha_eq(&with, &expected));
        // without the index the annotation stays put; the contraction is the same
        let without = Reducer::new().step(&m, &[]).unwrap();
        let kept = parse_term("mu a:X. [a] (f n)", index.system().atoms()).unwrap();
        assert!(alpha_eq(&without, &kept));
    }

    #[test]
    fn step_delta_delta() {
        let r = Reducer::new();
        let m = t("(\\x:X. x x) ((\\y:X. y y))");
        let next = r.step(&m, &[]).unwrap();
        assert!(alpha_eq(&next, &t("(\\y:X. y y) (\\y:X. y y)")));
    }

    #[test]
    fn step_rejects_non_redex_positions() {
        let r = Reducer::new();
        let m = t("x y");
        assert!(matches!(
            r.step(&m, &[]),
            Err(ReduceError::NotARedex { .. })
        ));
        assert!(matches!(
            r.step(&m, &[7]),
            Err(ReduceError::NotARedex { .. })
        ));
    }

    #[test]
    fn redex_positions_are_preorder() {
        let r = Reducer::new();
        // both the outer application and the argument position hold redexes
        let m = t("(\\x:X. x) ((\\y:X. y) z)");
        assert_eq!(r.redexes(&m), vec![Vec::<usize>::new(), vec![1]]);
    }

    #[test]
    fn normalize_leftmost_identity_chain() {
        let r = Reducer::new();
        let trace = r
            .normalize(
                &t("(\\x:X. x) ((\\y:X. y) z)"),
                Strategy::LeftmostOutermost,
                100,
            )
            .unwrap();
        assert!(trace.terminated);
        assert_eq!(trace.fuel_spent, 2);
        assert!(alpha_eq(&trace.final_term(&t("w")), &t("z")));
        assert_eq!(trace.steps[0].rule, Rule::Beta);
    }

    #[test]
    fn normalize_exhaustive_agrees_with_leftmost() {
        let r = Reducer::new();
        let m = t("(\\x:X -> X. x ((\\y:X. y) z)) (\\y:X. y)");
        let a = r.normalize(&m, Strategy::LeftmostOutermost, 1000).unwrap();
        let b = r.normalize(&m, Strategy::Exhaustive, 1000).unwrap();
        assert!(alpha_eq(&a.final_term(&m), &b.final_term(&m)));
        assert!(b.terminated);
    }

    #[test]
    fn normalize_divergent_exhausts_fuel() {
        let r = Reducer::new();
        let dd = t("(\\x:X. x x) (\\x:X. x x)");
        match r.normalize(&dd, Strategy::LeftmostOutermost, 1000) {
            Err(ReduceError::FuelExhausted { fuel_spent, .. }) => assert_eq!(fuel_spent, 1000),
            other => panic!("expected fuel exhaustion, got {other:?}"),
        }
        // exhaustively the graph closes on a cycle and is reported not terminated
        match r.normalize(&dd, Strategy::Exhaustive, 1000) {
            Err(ReduceError::FuelExhausted { cycle, .. }) => assert!(cycle),
            other => panic!("expected fuel exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn eta_of_normal_form_is_zero() {
        let r = Reducer::new();
        let m = t("\\f:X -> X. \\x:X. f (f x)");
        let metrics = r.eta_metric(&m, 100);
        assert_eq!(metrics.eta, Eta::Known(0));
        assert_eq!(metrics.etac(), Some((0, m.cxty())));
    }

    #[test]
    fn eta_single_redex() {
        let r = Reducer::new();
        assert_eq!(r.eta_metric(&t("(\\x:X. x) y"), 100).eta, Eta::Known(1));
    }

    #[test]
    fn eta_branching_term_matches_oracle() {
        // frozen from the oracle: the longest reduction has three steps
        let m = t("(\\x:X -> X. x ((\\y:X. y) z)) (\\y:X. y)");
        assert_eq!(oracle_eta(&m), 3);
        let r = Reducer::new();
        assert_eq!(r.eta_metric(&m, 1000).eta, Eta::Known(3));
    }

    #[test]
    fn eta_two_applied_matches_oracle() {
        // frozen from the oracle: four steps
        let m = t("(\\f:X -> X. \\x:X. f (f x)) (\\u:X. u) v");
        assert_eq!(oracle_eta(&m), 4);
        let r = Reducer::new();
        let metrics = r.eta_metric(&m, 1000);
        assert_eq!(metrics.eta, Eta::Known(4));
    }

    #[test]
    fn eta_unknown_on_divergence() {
        let r = Reducer::new();
        let dd = t("(\\x:X. x x) (\\x:X. x x)");
        assert_eq!(r.eta_metric(&dd, 1000).eta, Eta::Unknown);
    }

    #[test]
    fn subterms_of_variable() {
        let r = Reducer::new();
        let rep = r.subterms_of_reducts(&t("x"), 10);
        assert!(rep.complete);
        assert_eq!(rep.subterms, vec![t("x")]);
    }

    #[test]
    fn subterms_contain_reduct_and_original() {
        let r = Reducer::new();
        let m = t("(\\x:X. x) y");
        let rep = r.subterms_of_reducts(&m, 10);
        assert!(rep.complete);
        assert!(rep.subterms.iter().any(|s| alpha_eq(s, &t("y"))));
        assert!(rep.subterms.iter().any(|s| alpha_eq(s, &m)));
    }

    #[test]
    fn subterms_of_divergent_term_flagged_incomplete() {
        let r = Reducer::new();
        let dd = t("(\\x:X. x x) (\\x:X. x x)");
        let rep = r.subterms_of_reducts(&dd, 3);
        assert!(!rep.complete);
    }

    #[test]
    fn sn_probe_normal_form() {
        let r = Reducer::new();
        match r.sn_probe(&t("\\f:X -> X. \\x:X. f (f x)"), 100) {
            SnVerdict::Sn { eta } => assert_eq!(eta, 0),
            other => panic!("expected SN, got {other:?}"),
        }
    }

    #[test]
    fn sn_probe_applied_numeral() {
        let r = Reducer::new();
        let m = t("(\\f:X -> X. \\x:X. f (f x)) (\\u:X. u) v");
        match r.sn_probe(&m, 1000) {
            SnVerdict::Sn { eta } => assert_eq!(eta, 4),
            other => panic!("expected SN, got {other:?}"),
        }
    }

    #[test]
    fn sn_probe_divergent_is_not_closed() {
        let r = Reducer::new();
        let dd = t("(\\x:X. x x) (\\x:X. x x)");
        match r.sn_probe(&dd, 10000) {
            SnVerdict::NotClosed { cycle, .. } => assert!(cycle),
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    #[test]
    fn no_renaming_rule_between_stacked_mus() {
        // the only μ-rule is (mu a. m) n; a named μ-abstraction under a
        // binder is not a redex in this presentation
        let r = Reducer::new();
        for src in [
            "mu a:U. [a] (mu b:U. [b] x)",
            "mu a:U. [a] (mu b:U. [a] x)",
            "[a] (mu b:U. [b] x)",
        ] {
            let m = t(src);
            assert!(r.redexes(&m).is_empty(), "`{src}` must be normal");
        }
    }

    #[test]
    fn eta_decreases_along_steps() {
        let r = Reducer::new();
        let m = t("(\\f:X -> X. \\x:X. f (f x)) (\\u:X. u) v");
        let Eta::Known(em) = r.eta_metric(&m, 1000).eta else {
            panic!()
        };
        for (_, _, n) in r.one_step_reducts(&m) {
            let Eta::Known(en) = r.eta_metric(&n, 1000).eta else {
                panic!()
            };
            assert!(em > en);
        }
    }
}
