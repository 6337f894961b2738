//! Deciding `U ≈ V` for the least congruence generated by an equation
//! system, by congruence closure over the ground equations `X = F`.
//!
//! Type variables, atoms and `bot` are treated as nullary constants and the
//! arrow as a binary constructor. The closure is computed over the subterms
//! of the equations; queries intern their own subterms on demand, which can
//! only create new classes or let new nodes join existing ones; equalities
//! already reported are never retracted.
//!
//! An index is single-writer while queries may intern (interning mutates the
//! node tables). After [`CongruenceIndex::freeze`], `decide` switches to a
//! read-only resolution path that classifies un-interned types against the
//! existing closure without mutating it, so a frozen index can serve
//! concurrent queries.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::RwLock;

use thiserror::Error;

use crate::syntax::{EquationSystem, Type};

#[derive(Debug, Error)]
pub enum CongruenceError {
    /// The class of the type contains no arrow and no further head
    /// unfolding is possible. `visited` lists the defining variables
    /// unfolded before giving up, in order.
    #[error("`{ty}` is not a function type{}", visited_note(visited))]
    NotAFunctionType { ty: Type, visited: Vec<String> },
    /// `decompose` was applied to a type that is not syntactically an arrow.
    #[error("`{ty}` is not syntactically an arrow type")]
    ArityMismatch { ty: Type },
}

fn visited_note(visited: &[String]) -> String {
    if visited.is_empty() {
        String::new()
    } else {
        format!(" (unfolded {})", visited.join(" -> "))
    }
}

type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Key {
    Atom(String),
    Var(String),
    Bottom,
    Arrow(NodeId, NodeId),
}

#[derive(Debug, Default)]
struct Inner {
    kinds: Vec<Key>,
    lookup: HashMap<Key, NodeId>,
    parent: Vec<NodeId>,
    /// Arrow nodes to re-signature when the keyed class is merged away.
    uses: Vec<Vec<NodeId>>,
    /// (rep(dom), rep(cod)) -> an arrow node carrying that signature.
    sigs: HashMap<(NodeId, NodeId), NodeId>,
}

impl Inner {
    fn find(&self, mut id: NodeId) -> NodeId {
        while self.parent[id as usize] != id {
            id = self.parent[id as usize];
        }
        id
    }

    fn new_node(&mut self, key: Key) -> NodeId {
        let id = self.kinds.len() as NodeId;
        self.kinds.push(key.clone());
        self.lookup.insert(key, id);
        self.parent.push(id);
        self.uses.push(Vec::new());
        id
    }

    fn intern(&mut self, t: &Type) -> NodeId {
        let key = match t {
            Type::Atom(a) => Key::Atom(a.clone()),
            Type::Var(v) => Key::Var(v.clone()),
            Type::Bottom => Key::Bottom,
            Type::Arrow(d, c) => {
                let di = self.intern(d);
                let ci = self.intern(c);
                Key::Arrow(di, ci)
            }
        };
        if let Some(&id) = self.lookup.get(&key) {
            return id;
        }
        let id = self.new_node(key.clone());
        if let Key::Arrow(di, ci) = key {
            let sig = (self.find(di), self.find(ci));
            if let Some(&q) = self.sigs.get(&sig) {
                // congruent to an existing arrow: join its class
                self.merge(id, q);
            } else {
                self.sigs.insert(sig, id);
                self.uses[sig.0 as usize].push(id);
                if sig.1 != sig.0 {
                    self.uses[sig.1 as usize].push(id);
                }
            }
        }
        id
    }

    /// Union the classes of `a` and `b` and restore congruence closure.
    /// The class representative is always the smallest interned node id.
    fn merge(&mut self, a: NodeId, b: NodeId) {
        let mut pending = vec![(a, b)];
        while let Some((x, y)) = pending.pop() {
            let rx = self.find(x);
            let ry = self.find(y);
            if rx == ry {
                continue;
            }
            let (winner, loser) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.parent[loser as usize] = winner;
            let moved = std::mem::take(&mut self.uses[loser as usize]);
            for p in moved {
                let Key::Arrow(d, c) = self.kinds[p as usize] else {
                    unreachable!("uses lists hold arrow nodes only");
                };
                let sig = (self.find(d), self.find(c));
                match self.sigs.get(&sig) {
                    Some(&q) if self.find(q) != self.find(p) => pending.push((p, q)),
                    Some(_) => {}
                    None => {
                        self.sigs.insert(sig, p);
                    }
                }
                self.uses[winner as usize].push(p);
            }
        }
    }

    fn type_of(&self, id: NodeId) -> Type {
        match &self.kinds[id as usize] {
            Key::Atom(a) => Type::atom(a.clone()),
            Key::Var(v) => Type::var(v.clone()),
            Key::Bottom => Type::Bottom,
            Key::Arrow(d, c) => Type::arrow(self.type_of(*d), self.type_of(*c)),
        }
    }

    /// Classifies a type against the closure without interning it: the class
    /// it would join, or its un-interned structure where no class exists.
    fn resolve(&self, t: &Type) -> Resolved {
        let leaf = |key: Key, fresh: Resolved| match self.lookup.get(&key) {
            Some(&id) => Resolved::Known(self.find(id)),
            None => fresh,
        };
        match t {
            Type::Atom(a) => leaf(Key::Atom(a.clone()), Resolved::FreshAtom(a.clone())),
            Type::Var(v) => leaf(Key::Var(v.clone()), Resolved::FreshVar(v.clone())),
            Type::Bottom => leaf(Key::Bottom, Resolved::FreshBottom),
            Type::Arrow(d, c) => {
                let rd = self.resolve(d);
                let rc = self.resolve(c);
                if let (Resolved::Known(a), Resolved::Known(b)) = (&rd, &rc) {
                    if let Some(&q) = self.sigs.get(&(*a, *b)) {
                        return Resolved::Known(self.find(q));
                    }
                }
                Resolved::FreshArrow(Box::new(rd), Box::new(rc))
            }
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Resolved {
    Known(NodeId),
    FreshAtom(String),
    FreshVar(String),
    FreshBottom,
    FreshArrow(Box<Resolved>, Box<Resolved>),
}

/// Precomputed congruence-closure structure answering `U ≈ V` queries for
/// the congruence generated by an [`EquationSystem`].
#[derive(Debug)]
pub struct CongruenceIndex {
    system: EquationSystem,
    inner: RwLock<Inner>,
    frozen: AtomicBool,
}

impl CongruenceIndex {
    /// Builds the index: interns every equation's sides and closes the
    /// partition under congruence.
    pub fn build(system: EquationSystem) -> CongruenceIndex {
        let mut inner = Inner::default();
        for (var, rhs) in system.equations() {
            let xi = inner.intern(&Type::var(var));
            let fi = inner.intern(rhs);
            inner.merge(xi, fi);
        }
        let index = CongruenceIndex {
            system,
            inner: RwLock::new(inner),
            frozen: AtomicBool::new(false),
        };
        debug_assert!(index.component_merge_failure().is_none());
        index
    }

    pub fn system(&self) -> &EquationSystem {
        &self.system
    }

    /// Forbids further interning; afterwards `decide` answers read-only and
    /// the index may be queried concurrently.
    pub fn freeze(&self) {
        self.frozen.store(true, Ordering::Release);
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen.load(Ordering::Acquire)
    }

    /// `true` iff `u ≈ v` in the generated congruence.
    pub fn decide(&self, u: &Type, v: &Type) -> bool {
        if self.is_frozen() {
            let inner = self.inner.read().unwrap();
            inner.resolve(u) == inner.resolve(v)
        } else {
            let mut inner = self.inner.write().unwrap();
            let a = inner.intern(u);
            let b = inner.intern(v);
            inner.find(a) == inner.find(b)
        }
    }

    /// Head-arrow form of `u`: a pair `(dom, cod)` with `u ≈ dom -> cod`,
    /// found by unfolding defining equations at the head. Fails when the
    /// class of `u` contains no arrow: atomic constants, `bot`, undefined
    /// variables, and pure variable cycles.
    pub fn head_arrow(&self, u: &Type) -> Result<(Type, Type), CongruenceError> {
        let mut t = u.clone();
        let mut visited: Vec<String> = Vec::new();
        loop {
            match t {
                Type::Arrow(d, c) => return Ok((*d, *c)),
                Type::Var(x) => {
                    if visited.iter().any(|v| v == &x) {
                        return Err(CongruenceError::NotAFunctionType {
                            ty: u.clone(),
                            visited,
                        });
                    }
                    match self.system.def_of(&x) {
                        Some(f) => {
                            t = f.clone();
                            visited.push(x);
                        }
                        None => {
                            return Err(CongruenceError::NotAFunctionType {
                                ty: u.clone(),
                                visited,
                            })
                        }
                    }
                }
                Type::Atom(_) | Type::Bottom => {
                    return Err(CongruenceError::NotAFunctionType {
                        ty: u.clone(),
                        visited,
                    })
                }
            }
        }
    }

    /// For syntactic arrows `u = U1 -> V1` and `v = U2 -> V2`: the component
    /// pairs `((U1, U2), (V1, V2))` when `u ≈ v`, `None` otherwise.
    #[allow(clippy::type_complexity)]
    pub fn decompose(
        &self,
        u: &Type,
        v: &Type,
    ) -> Result<Option<((Type, Type), (Type, Type))>, CongruenceError> {
        let (Type::Arrow(u1, v1), Type::Arrow(u2, v2)) = (u, v) else {
            let offender = if matches!(u, Type::Arrow(_, _)) { v } else { u };
            return Err(CongruenceError::ArityMismatch {
                ty: offender.clone(),
            });
        };
        if self.decide(u, v) {
            let pair = (
                ((**u1).clone(), (**u2).clone()),
                ((**v1).clone(), (**v2).clone()),
            );
            debug_assert!(
                self.decide(&pair.0 .0, &pair.0 .1) && self.decide(&pair.1 .0, &pair.1 .1)
            );
            Ok(Some(pair))
        } else {
            Ok(None)
        }
    }

    /// Post-closure check that merged arrows have merged components; returns
    /// a counterexample pair if one exists. Always `None` for congruences
    /// generated by variable-headed equations.
    pub fn component_merge_failure(&self) -> Option<(Type, Type)> {
        let inner = self.inner.read().unwrap();
        let arrows: Vec<(NodeId, NodeId, NodeId)> = inner
            .kinds
            .iter()
            .enumerate()
            .filter_map(|(id, k)| match k {
                Key::Arrow(d, c) => Some((id as NodeId, *d, *c)),
                _ => None,
            })
            .collect();
        for (i, &(a, d1, c1)) in arrows.iter().enumerate() {
            for &(b, d2, c2) in &arrows[i + 1..] {
                if inner.find(a) == inner.find(b)
                    && (inner.find(d1) != inner.find(d2) || inner.find(c1) != inner.find(c2))
                {
                    return Some((inner.type_of(a), inner.type_of(b)));
                }
            }
        }
        None
    }

    /// Number of interned nodes; grows monotonically with queries.
    pub fn node_count(&self) -> usize {
        self.inner.read().unwrap().kinds.len()
    }
}
