//! Object languages: ASTs, concrete grammar, rendering and syntactic checks.

pub mod ast;
mod lexer;
pub mod parser;
pub mod rename;
pub mod render;

pub use ast::*;
pub use parser::parse;
pub use render::render;

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Language {
    Modal,
    Fol,
    Mso,
    TwoSorted,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::Modal => "modal",
            Language::Fol => "fol",
            Language::Mso => "mso",
            Language::TwoSorted => "two_sorted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: found {found}, expected {}", expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        found: String,
        expected: Vec<String>,
    },
    #[error("{line}:{col}: {message}")]
    Invalid { line: usize, col: usize, message: String },
    #[error("positivity violation: `{var}` occurs under an odd number of negations in its fixpoint body")]
    Positivity { var: String },
    #[error("{line}:{col}: unknown sort for variable `{name}`")]
    UnknownSort { name: String, line: usize, col: usize },
}

/// Parse a modal μ-formula, rename fixpoint binders apart and check
/// positivity of every `mu`/`nu` binder.
pub fn parse_modal(text: &str) -> Result<ModalFormula, SyntaxError> {
    let f = rename::rename_modal(&parser::parse_as::<ModalFormula>(text)?);
    check_positivity(&f)?;
    Ok(f)
}

pub fn parse_fol(text: &str) -> Result<FoFormula, SyntaxError> {
    parser::parse_as(text)
}

pub fn parse_mso(text: &str) -> Result<MsoFormula, SyntaxError> {
    Ok(rename::rename_mso(&parser::parse_as::<MsoFormula>(text)?))
}

pub fn parse_two_sorted(text: &str) -> Result<TwoSortedFormula, SyntaxError> {
    Ok(rename::rename_two_sorted(&parser::parse_as::<TwoSortedFormula>(text)?))
}

pub fn check_positivity(f: &ModalFormula) -> Result<(), SyntaxError> {
    use ModalFormula::*;
    match f {
        True | False | Letter(_) | FixVar(_) => Ok(()),
        Not(a) | Diamond(a) | Box(a) => check_positivity(a),
        And(a, b) | Or(a, b) | Implies(a, b) => {
            check_positivity(a)?;
            check_positivity(b)
        }
        Mu(x, a) | Nu(x, a) => {
            if !a.is_positive_in(x) {
                return Err(SyntaxError::Positivity { var: x.clone() });
            }
            check_positivity(a)
        }
    }
}

pub fn free_variables(formula: &Formula) -> FreeVars {
    formula.free_variables()
}

/// Whether every quantifier is a guarded block: `exists ys. (G(..) & m)` or
/// `forall ys. (G(..) -> m)` with `G` a guard, and both the block variables
/// and the free variables of `m` among the guard's arguments.
pub fn is_guarded(formula: &FoFormula, guards: &BTreeSet<String>) -> bool {
    use FoFormula::*;
    match formula {
        True | False | Pred(..) | Eq(..) => true,
        Not(a) => is_guarded(a, guards),
        And(a, b) | Or(a, b) | Implies(a, b) => is_guarded(a, guards) && is_guarded(b, guards),
        PolyExists(..) | Ext(_) => false,
        Exists(..) | Forall(..) => {
            let existential = matches!(formula, Exists(..));
            let mut block = Vec::new();
            let mut body = formula;
            while let (Exists(x, a), true) | (Forall(x, a), false) = (body, existential) {
                block.push(x);
                body = a;
            }
            let (guard, matrix) = match (body, existential) {
                (And(g, m), true) | (Implies(g, m), false) => (g, m),
                _ => return false,
            };
            let Pred(name, args) = guard.as_ref() else {
                return false;
            };
            guards.contains(name)
                && block.iter().all(|x| args.contains(x))
                && matrix.free_objects().iter().all(|x| args.contains(x))
                && is_guarded(matrix, guards)
        }
    }
}
