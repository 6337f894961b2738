//! Simply typed λ- and λμ-calculus with recursive type equations.
//!
//! The library is organized around a small kernel and a handful of analyses:
//!
//! * [`syntax`] - types, terms, parsing, printing, alpha-equivalence and the
//!   two substitution operators (λ- and μ-substitution).
//! * [`congruence`] - decides `U ≈ V` for the least congruence generated by a
//!   system of equations `X = F`, via congruence closure.
//! * [`positivity`] - polarity of variable occurrences, the goodness check
//!   (every type congruent to a variable contains it only positively), and
//!   the order/partition analysis of a good system.
//! * [`typing`] - syntax-directed type checking for annotated terms modulo
//!   the congruence, plus a subject-reduction probe.
//! * [`reduce`] - β/μ-reduction, normalization strategies, reduction graphs,
//!   and a bounded strong-normalization probe.
//! * [`translate`] - the double-negation translation of plain λμ-terms into
//!   λ-terms typed under `X ≈ ~~X` equations.

pub mod congruence;
pub mod positivity;
pub mod reduce;
pub mod syntax;
pub mod translate;
pub mod typing;

pub use congruence::CongruenceIndex;
pub use syntax::{EquationSystem, Term, Type};
pub use typing::Context;
