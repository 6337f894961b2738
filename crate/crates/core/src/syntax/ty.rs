use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

/// A type expression: atomic constants, type variables, arrows and the
/// distinguished constant `bot`.
///
/// `~U` is notation for `U -> bot`, never a separate constructor. Structural
/// equality (`==`) is purely syntactic; semantic equality modulo a system of
/// equations lives in [`crate::congruence`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Type {
    Atom(String),
    Var(String),
    Arrow(Box<Type>, Box<Type>),
    Bottom,
}

impl Type {
    pub fn atom(name: impl Into<String>) -> Type {
        Type::Atom(name.into())
    }

    pub fn var(name: impl Into<String>) -> Type {
        Type::Var(name.into())
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Box::new(dom), Box::new(cod))
    }

    /// `~t`, i.e. `t -> bot`.
    #[allow(clippy::should_implement_trait)]
    pub fn neg(t: Type) -> Type {
        Type::arrow(t, Type::Bottom)
    }

    /// Size of the syntax tree: leaves count 1, an arrow counts 1 plus both
    /// sides. The only property relied upon is that both components of an
    /// arrow are strictly smaller than the arrow itself.
    pub fn lg(&self) -> usize {
        match self {
            Type::Atom(_) | Type::Var(_) | Type::Bottom => 1,
            Type::Arrow(d, c) => 1 + d.lg() + c.lg(),
        }
    }

    /// Names of the type variables occurring in `self`.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Type::Var(x) => {
                out.insert(x.clone());
            }
            Type::Arrow(d, c) => {
                d.collect_vars(out);
                c.collect_vars(out);
            }
            Type::Atom(_) | Type::Bottom => {}
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Type::Var(x) => x == name,
            Type::Arrow(d, c) => d.contains_var(name) || c.contains_var(name),
            Type::Atom(_) | Type::Bottom => false,
        }
    }

    /// All subterms of `self`, including `self`.
    pub fn subterms(&self) -> Vec<&Type> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            if let Type::Arrow(d, c) = t {
                stack.push(d);
                stack.push(c);
            }
        }
        out
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Atom(a) => write!(f, "{a}"),
            Type::Var(v) => write!(f, "{v}"),
            Type::Bottom => write!(f, "bot"),
            Type::Arrow(d, c) => {
                if matches!(**d, Type::Arrow(_, _)) {
                    write!(f, "({d}) -> {c}")
                } else {
                    write!(f, "{d} -> {c}")
                }
            }
        }
    }
}

impl Serialize for Type {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
