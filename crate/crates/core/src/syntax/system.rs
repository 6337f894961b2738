use std::collections::HashMap;

use thiserror::Error;

use super::ty::Type;
use super::AtomSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("variable `{0}` has more than one defining equation")]
    DuplicateEquation(String),
    #[error("`{0}` is declared as an atom and cannot head an equation")]
    AtomAsLhs(String),
    #[error("free type variable `{var}` in the equation for `{in_equation}`; define it or declare it as an atom")]
    UndefinedRhsVariable { var: String, in_equation: String },
}

/// A finite family of recursive type equations `X = F` together with the
/// declared atomic constants. Each variable has at most one defining
/// equation; every variable occurring in a right-hand side must itself be
/// defined (constant-like names are declared as atoms instead). Declaration
/// order is significant: it fixes the index used for tie-breaking in the
/// analyses.
#[derive(Debug, Clone, Default)]
pub struct EquationSystem {
    atoms: AtomSet,
    defs: Vec<(String, Type)>,
    by_name: HashMap<String, usize>,
}

impl EquationSystem {
    pub fn new() -> EquationSystem {
        EquationSystem::default()
    }

    pub fn declare_atom(&mut self, name: impl Into<String>) {
        self.atoms.insert(name.into());
    }

    pub fn add_equation(&mut self, var: impl Into<String>, rhs: Type) -> Result<(), SystemError> {
        let var = var.into();
        if self.atoms.contains(&var) {
            return Err(SystemError::AtomAsLhs(var));
        }
        if self.by_name.contains_key(&var) {
            return Err(SystemError::DuplicateEquation(var));
        }
        self.by_name.insert(var.clone(), self.defs.len());
        self.defs.push((var, rhs));
        Ok(())
    }

    /// Checks that every variable in every right-hand side is defined.
    pub fn validate(&self) -> Result<(), SystemError> {
        for (lhs, rhs) in &self.defs {
            for v in rhs.vars() {
                if !self.by_name.contains_key(&v) {
                    return Err(SystemError::UndefinedRhsVariable {
                        var: v,
                        in_equation: lhs.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn atoms(&self) -> &AtomSet {
        &self.atoms
    }

    /// Equations in declaration order.
    pub fn equations(&self) -> impl Iterator<Item = (&str, &Type)> {
        self.defs.iter().map(|(v, t)| (v.as_str(), t))
    }

    pub fn def_of(&self, var: &str) -> Option<&Type> {
        self.by_name.get(var).map(|&i| &self.defs[i].1)
    }

    /// Declaration index of a defined variable.
    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.by_name.get(var).copied()
    }

    pub fn is_defined(&self, var: &str) -> bool {
        self.by_name.contains_key(var)
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }
}
