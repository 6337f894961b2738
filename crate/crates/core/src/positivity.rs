//! Polarity of variable occurrences, the goodness condition, and the
//! order/partition analysis of a good equation system.
//!
//! A congruence is *good* when every type congruent to a defined variable
//! contains that variable only positively. The implemented criterion is
//! finite: build the signed dependency graph (an edge `i -ε-> j` whenever
//! `X_j` occurs with polarity `ε` in `F_i`, signs composing along paths) and
//! require that no variable reaches itself with negative sign.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::congruence::CongruenceIndex;
use crate::syntax::{EquationSystem, Type};

#[derive(Debug, Error)]
pub enum PositivityError {
    #[error("the congruence is not good; order analysis is only defined for good systems")]
    NotGood { violations: Vec<Violation> },
    #[error("`{0}` is not a defined variable of the system")]
    UnknownClass(String),
    /// Two paths inside one equivalence class disagree on sign. This cannot
    /// happen for a good system; reaching it means the goodness criterion
    /// and the partition disagree and must be investigated, not patched.
    #[error("ambiguous sign between `{class_rep}` and `{member}`")]
    AmbiguousSign { class_rep: String, member: String },
}

/// An occurrence polarity; the domain side of an arrow flips it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Pos,
    #[serde(rename = "-")]
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn compose(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => write!(f, "+"),
            Sign::Neg => write!(f, "-"),
        }
    }
}

/// The polarities at which one variable occurs in one type.
///
/// Empty ⇔ the variable is absent ⇔ the type is in both `T+(X)` and `T-(X)`;
/// `{positive}` ⇔ in `T+(X)` only; `{negative}` ⇔ in `T-(X)` only; both ⇔ in
/// neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PolaritySet {
    pub positive: bool,
    pub negative: bool,
}

impl PolaritySet {
    pub fn is_absent(&self) -> bool {
        !self.positive && !self.negative
    }

    /// Membership in `Tε(X)`: no occurrence of the opposite sign.
    pub fn within(&self, eps: Sign) -> bool {
        match eps {
            Sign::Pos => !self.negative,
            Sign::Neg => !self.positive,
        }
    }
}

/// Polarity set of the variable `x` in `t`.
pub fn polarity(t: &Type, x: &str) -> PolaritySet {
    fn go(t: &Type, x: &str, sign: Sign, out: &mut PolaritySet) {
        match t {
            Type::Var(v) if v == x => match sign {
                Sign::Pos => out.positive = true,
                Sign::Neg => out.negative = true,
            },
            Type::Arrow(d, c) => {
                go(d, x, sign.flip(), out);
                go(c, x, sign, out);
            }
            _ => {}
        }
    }
    let mut out = PolaritySet::default();
    go(t, x, Sign::Pos, &mut out);
    out
}

/// A goodness violation: a type congruent to `variable` with a negative
/// occurrence of it at `path` (child indices, 0 = domain, 1 = codomain).
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub variable: String,
    pub witness: Type,
    pub path: Vec<usize>,
}

/// Goodness verdict plus concrete witnesses for every offending variable.
#[derive(Debug, Clone, Serialize)]
pub struct Goodness {
    pub good: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Split {
    pub pos: Vec<String>,
    pub neg: Vec<String>,
}

/// Output of the full analysis. `classes` partitions the defined variables
/// by mutual dependency, listed by ascending representative; `order` lists
/// every strictly-below pair of class representatives; `split` carries the
/// sign partition of each class keyed by its representative; `leq` is the
/// full dependency preorder as pairs `(a, b)` meaning `a ≤ b`; `lg` maps
/// each printed right-hand side to its size.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub good: bool,
    pub violations: Vec<Violation>,
    pub classes: Vec<Vec<String>>,
    pub order: Vec<(String, String)>,
    pub split: BTreeMap<String, Split>,
    pub leq: Vec<(String, String)>,
    pub lg: BTreeMap<String, usize>,
}

impl AnalysisReport {
    fn empty(good: bool, violations: Vec<Violation>) -> AnalysisReport {
        AnalysisReport {
            good,
            violations,
            classes: Vec::new(),
            order: Vec::new(),
            split: BTreeMap::new(),
            leq: Vec::new(),
            lg: BTreeMap::new(),
        }
    }

    /// `a ≤ b` in the dependency preorder.
    pub fn leq_holds(&self, a: &str, b: &str) -> bool {
        self.leq.iter().any(|(x, y)| x == a && y == b)
    }

    fn class_of(&self, var: &str) -> Option<&[String]> {
        self.classes
            .iter()
            .find(|c| c.iter().any(|v| v == var))
            .map(|c| c.as_slice())
    }
}

struct SignedGraph {
    vars: Vec<String>,
    /// edges[i] = (j, sign): X_j occurs with `sign` in (the relevant form
    /// of) F_i.
    edges: Vec<Vec<(usize, Sign)>>,
}

impl SignedGraph {
    fn raw(system: &EquationSystem) -> SignedGraph {
        SignedGraph::build(system, |_, rhs| vec![rhs.clone()])
    }

    /// Raw edges plus edges read off the variable-collapsed right-hand
    /// sides, so that variables only visible through backward rewriting
    /// still show up. Only proper subterms are folded: the whole right-hand
    /// side is congruent to its own variable, and folding it away would
    /// erase exactly the occurrences this graph exists to reveal.
    fn augmented(system: &EquationSystem, index: &CongruenceIndex) -> SignedGraph {
        SignedGraph::build(system, |_, rhs| {
            let collapsed = match rhs {
                Type::Arrow(d, c) => {
                    Type::arrow(collapse(d, system, index), collapse(c, system, index))
                }
                other => other.clone(),
            };
            vec![rhs.clone(), collapsed]
        })
    }

    fn build(system: &EquationSystem, forms: impl Fn(&str, &Type) -> Vec<Type>) -> SignedGraph {
        let vars: Vec<String> = system.equations().map(|(v, _)| v.to_string()).collect();
        let mut edges = vec![Vec::new(); vars.len()];
        for (i, (var, rhs)) in system.equations().enumerate() {
            let mut seen = BTreeSet::new();
            for form in forms(var, rhs) {
                for (j, target) in vars.iter().enumerate() {
                    let pol = polarity(&form, target);
                    if pol.positive {
                        seen.insert((j, Sign::Pos));
                    }
                    if pol.negative {
                        seen.insert((j, Sign::Neg));
                    }
                }
            }
            edges[i] = seen.into_iter().collect();
        }
        SignedGraph { vars, edges }
    }

    /// Sign-tracking BFS from `start`: for every variable, the set of path
    /// signs with which it can be reached (empty path not included).
    fn reachable_signs(&self, start: usize) -> Vec<BTreeSet<Sign>> {
        let mut out = vec![BTreeSet::new(); self.vars.len()];
        let mut queue = VecDeque::new();
        for &(j, s) in &self.edges[start] {
            if out[j].insert(s) {
                queue.push_back((j, s));
            }
        }
        while let Some((j, s)) = queue.pop_front() {
            for &(k, e) in &self.edges[j] {
                let s2 = s.compose(e);
                if out[k].insert(s2) {
                    queue.push_back((k, s2));
                }
            }
        }
        out
    }

    /// A path `start -> … -> goal` whose composed sign is `want`, as a list
    /// of `(var index, edge sign)` steps.
    fn find_path(&self, start: usize, goal: usize, want: Sign) -> Option<Vec<(usize, Sign)>> {
        // BFS over (node, accumulated sign) with parent pointers
        let mut parent: BTreeMap<(usize, Sign), (usize, Sign, Sign)> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for &(j, s) in &self.edges[start] {
            parent.entry((j, s)).or_insert_with(|| {
                queue.push_back((j, s));
                (usize::MAX, Sign::Pos, s)
            });
        }
        while let Some((j, s)) = queue.pop_front() {
            if j == goal && s == want {
                let mut steps = Vec::new();
                let mut cur = (j, s);
                loop {
                    let &(pj, ps, edge) = parent.get(&cur).unwrap();
                    steps.push((cur.0, edge));
                    if pj == usize::MAX {
                        break;
                    }
                    cur = (pj, ps);
                }
                steps.reverse();
                return Some(steps);
            }
            for &(k, e) in &self.edges[j] {
                let s2 = s.compose(e);
                parent.entry((k, s2)).or_insert_with(|| {
                    queue.push_back((k, s2));
                    (j, s, e)
                });
            }
        }
        None
    }
}

/// Replaces, bottom-up, every subterm congruent to a defined variable by
/// that variable (the first-declared one when several apply).
pub fn collapse(t: &Type, system: &EquationSystem, index: &CongruenceIndex) -> Type {
    let rebuilt = match t {
        Type::Arrow(d, c) => Type::arrow(collapse(d, system, index), collapse(c, system, index)),
        _ => t.clone(),
    };
    for (var, _) in system.equations() {
        let v = Type::var(var);
        if rebuilt == v {
            return rebuilt;
        }
        if index.decide(&rebuilt, &v) {
            return v;
        }
    }
    rebuilt
}

/// Checks goodness: no defined variable may reach itself through an odd
/// number of polarity flips. Each violation carries a witness type built by
/// unfolding the equations along the offending cycle.
pub fn check_goodness(system: &EquationSystem, index: &CongruenceIndex) -> Goodness {
    let graph = SignedGraph::raw(system);
    let mut violations = Vec::new();
    for i in 0..graph.vars.len() {
        let signs = graph.reachable_signs(i);
        if signs[i].contains(&Sign::Neg) {
            let path = graph
                .find_path(i, i, Sign::Neg)
                .expect("negative cycle reachable but no path found");
            let witness = unfold_witness(system, &graph.vars, i, &path);
            let var = graph.vars[i].clone();
            debug_assert!(index.decide(&Type::var(&var), &witness));
            let occ = find_occurrence(&witness, &var, Sign::Neg)
                .expect("witness must contain a negative occurrence");
            violations.push(Violation {
                variable: var,
                witness,
                path: occ,
            });
        }
    }
    Goodness {
        good: violations.is_empty(),
        violations,
    }
}

/// Unfolds `F_i` along the cycle so that the final type carries an
/// occurrence of `X_i` at the composed (negative) sign.
fn unfold_witness(
    system: &EquationSystem,
    vars: &[String],
    i: usize,
    path: &[(usize, Sign)],
) -> Type {
    let mut witness = system.def_of(&vars[i]).unwrap().clone();
    let mut cum = path[0].1;
    for k in 1..path.len() {
        let (prev, _) = path[k - 1];
        let def = system.def_of(&vars[prev]).unwrap();
        witness = replace_one(&witness, &vars[prev], cum, def)
            .expect("path step must match an occurrence");
        cum = cum.compose(path[k].1);
    }
    witness
}

/// Replaces one occurrence of `Var(x)` sitting at polarity `want` by `repl`.
fn replace_one(t: &Type, x: &str, want: Sign, repl: &Type) -> Option<Type> {
    fn go(t: &Type, x: &str, want: Sign, sign: Sign, repl: &Type) -> Option<Type> {
        match t {
            Type::Var(v) if v == x && sign == want => Some(repl.clone()),
            Type::Arrow(d, c) => {
                if let Some(d2) = go(d, x, want, sign.flip(), repl) {
                    return Some(Type::arrow(d2, (**c).clone()));
                }
                go(c, x, want, sign, repl).map(|c2| Type::arrow((**d).clone(), c2))
            }
            _ => None,
        }
    }
    go(t, x, want, Sign::Pos, repl)
}

/// Tree path (0 = domain, 1 = codomain) of an occurrence of `x` at sign
/// `want`.
fn find_occurrence(t: &Type, x: &str, want: Sign) -> Option<Vec<usize>> {
    fn go(t: &Type, x: &str, want: Sign, sign: Sign, path: &mut Vec<usize>) -> bool {
        match t {
            Type::Var(v) if v == x && sign == want => true,
            Type::Arrow(d, c) => {
                path.push(0);
                if go(d, x, want, sign.flip(), path) {
                    return true;
                }
                path.pop();
                path.push(1);
                if go(c, x, want, sign, path) {
                    return true;
                }
                path.pop();
                false
            }
            _ => false,
        }
    }
    let mut path = Vec::new();
    if go(t, x, want, Sign::Pos, &mut path) {
        Some(path)
    } else {
        None
    }
}

/// Full analysis of a good system: the dependency preorder `≤`, its classes,
/// the strict order between classes, and the sign split of each class.
pub fn order_analysis(
    system: &EquationSystem,
    index: &CongruenceIndex,
) -> Result<AnalysisReport, PositivityError> {
    let goodness = check_goodness(system, index);
    if !goodness.good {
        return Err(PositivityError::NotGood {
            violations: goodness.violations,
        });
    }

    let graph = SignedGraph::augmented(system, index);
    let n = graph.vars.len();
    if n == 0 {
        return Ok(AnalysisReport::empty(true, Vec::new()));
    }

    // reach[i] = variables reachable from i; an edge i -> j reads
    // "X_j occurs in the definition of X_i", so j ≤ i iff j ∈ reach[i].
    let mut reach: Vec<BTreeSet<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let signs = graph.reachable_signs(i);
        let mut set: BTreeSet<usize> = signs
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(j, _)| j)
            .collect();
        set.insert(i); // ≤ is reflexive
        reach.push(set);
    }
    let leq = |a: usize, b: usize| reach[b].contains(&a);

    // classes of ~, represented by the smallest declaration index
    let mut class_rep: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if leq(i, j) && leq(j, i) {
                class_rep[i] = class_rep[j];
                break;
            }
        }
    }
    let reps: Vec<usize> = {
        let mut r: Vec<usize> = class_rep.clone();
        r.sort_unstable();
        r.dedup();
        r
    };
    let members = |rep: usize| -> Vec<usize> { (0..n).filter(|&i| class_rep[i] == rep).collect() };

    let mut classes = Vec::new();
    let mut order = Vec::new();
    let mut split = BTreeMap::new();
    for &rep in &reps {
        let ms = members(rep);
        classes.push(
            ms.iter()
                .map(|&i| graph.vars[i].clone())
                .collect::<Vec<_>>(),
        );
        for &other in &reps {
            if other != rep && leq(rep, other) && !leq(other, rep) {
                order.push((graph.vars[rep].clone(), graph.vars[other].clone()));
            }
        }
        // sign split: the representative goes to the positive block, every
        // other member by the sign of any path from the representative
        let signs = graph.reachable_signs(rep);
        let mut pos = vec![graph.vars[rep].clone()];
        let mut neg = Vec::new();
        for &m in &ms {
            if m == rep {
                continue;
            }
            let s = &signs[m];
            if s.len() == 2 {
                return Err(PositivityError::AmbiguousSign {
                    class_rep: graph.vars[rep].clone(),
                    member: graph.vars[m].clone(),
                });
            }
            match s.iter().next() {
                Some(Sign::Pos) => pos.push(graph.vars[m].clone()),
                Some(Sign::Neg) => neg.push(graph.vars[m].clone()),
                None => {
                    // m ~ rep guarantees a path
                    return Err(PositivityError::AmbiguousSign {
                        class_rep: graph.vars[rep].clone(),
                        member: graph.vars[m].clone(),
                    });
                }
            }
        }
        split.insert(graph.vars[rep].clone(), Split { pos, neg });
    }

    let mut leq_pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if leq(a, b) {
                leq_pairs.push((graph.vars[a].clone(), graph.vars[b].clone()));
            }
        }
    }

    let lg = system
        .equations()
        .map(|(_, rhs)| (rhs.to_string(), rhs.lg()))
        .collect();

    Ok(AnalysisReport {
        good: true,
        violations: Vec::new(),
        classes,
        order,
        split,
        leq: leq_pairs,
        lg,
    })
}

/// Convenience for reporting: the full report for good systems, or a
/// goodness-only report for bad ones.
pub fn analyze(system: &EquationSystem, index: &CongruenceIndex) -> AnalysisReport {
    match order_analysis(system, index) {
        Ok(report) => report,
        Err(PositivityError::NotGood { violations }) => AnalysisReport::empty(false, violations),
        Err(other) => panic!("order analysis failed on a good system: {other}"),
    }
}

/// Membership of `t` in the class set `T_iᵉ`: all variables of `t` must lie
/// at or below the class of `i`, variables on `i`'s side of the split must
/// occur within sign `eps`, and variables on the other side within the
/// opposite sign.
pub fn class_membership(
    t: &Type,
    var: &str,
    eps: Sign,
    report: &AnalysisReport,
) -> Result<bool, PositivityError> {
    let class = report
        .class_of(var)
        .ok_or_else(|| PositivityError::UnknownClass(var.to_string()))?;
    let rep = &class[0];
    let defined: BTreeSet<&String> = report.classes.iter().flatten().collect();

    // var(t) ⊆ X_i: every defined variable of t is ≤ var
    for v in t.vars() {
        if defined.contains(&v) && !report.leq_holds(&v, var) {
            return Ok(false);
        }
    }

    let split = &report.split[rep];
    let own_side = split.pos.iter().any(|v| v == var);
    for member in class {
        let on_own_side = split.pos.contains(member) == own_side;
        let want = if on_own_side { eps } else { eps.flip() };
        if !polarity(t, member).within(want) {
            return Ok(false);
        }
    }
    Ok(true)
}
