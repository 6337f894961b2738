//! Abstract syntax, parsing, printing, alpha-equivalence and substitution.
//!
//! λ-variables and μ-variables live in disjoint namespaces; the parser
//! rejects terms that use one identifier in both. All values here are
//! immutable after construction and freely shareable across threads.

mod parse;
mod subst;
mod system;
mod term;
mod ty;

pub use parse::{
    parse_context_file, parse_equations, parse_term, parse_type, CtxEntry, ParseError,
};
pub use subst::{fresh_name, mu_subst, subst};
pub use system::{EquationSystem, SystemError};
pub use term::{alpha_eq, Term};
pub use ty::Type;

use std::collections::BTreeSet;

/// Names of declared atomic constants, used to classify identifiers while
/// parsing types.
pub type AtomSet = BTreeSet<String>;
