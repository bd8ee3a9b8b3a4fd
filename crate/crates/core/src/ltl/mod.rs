//! Propositional linear temporal logic restricted to the `F` (eventually) and
//! `G` (always) operators.
//!
//! Formulas are plain immutable trees. The text syntax uses `!`, `&`, `|`,
//! `->`, `<->`, `F`, `G` and parentheses; see [`parse`] for the grammar and
//! the [`std::fmt::Display`] impl for the canonical printer.

mod nnf;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

pub use nnf::nnf;
pub use parse::{parse, ParseError};

/// A formula over atomic propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Always(Box<Formula>),
}

/// Returns true if `name` matches `[a-z][a-zA-Z0-9]*`.
pub fn is_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_alphanumeric()),
        _ => false,
    }
}

impl Formula {
    /// Builds an atom.
    ///
    /// Panics if `name` is not a valid atom name; use [`parse`] for untrusted
    /// input.
    pub fn atom(name: impl Into<String>) -> Formula {
        let name = name.into();
        assert!(is_atom_name(&name), "invalid atom name {name:?}");
        Formula::Atom(name)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn eventually(f: Formula) -> Formula {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Formula {
        Formula::Always(Box::new(f))
    }

    /// Left-nested conjunction of `parts`; `None` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// The set of atom names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            Formula::Not(f) | Formula::Eventually(f) | Formula::Always(f) => f.collect_atoms(out),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Number of connectives (every non-atom node).
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Eventually(f) | Formula::Always(f) => {
                1 + f.connective_count()
            }
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.connective_count() + r.connective_count(),
        }
    }

    /// Maximum nesting depth of `F`/`G` operators.
    pub fn temporal_depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) => f.temporal_depth(),
            Formula::Eventually(f) | Formula::Always(f) => 1 + f.temporal_depth(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => l.temporal_depth().max(r.temporal_depth()),
        }
    }

    /// Number of `F` occurrences.
    pub fn eventually_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Eventually(f) => 1 + f.eventually_count(),
            Formula::Not(f) | Formula::Always(f) => f.eventually_count(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => l.eventually_count() + r.eventually_count(),
        }
    }

    /// Atom or negated atom.
    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => matches!(**f, Formula::Atom(_)),
            _ => false,
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(f) => matches!(**f, Formula::Atom(_)),
            Formula::And(l, r) | Formula::Or(l, r) => l.is_nnf() && r.is_nnf(),
            Formula::Eventually(f) | Formula::Always(f) => f.is_nnf(),
            Formula::Implies(..) | Formula::Iff(..) => false,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_formula(f, self)
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Canonical text of a formula.
pub fn print(f: &Formula) -> String {
    f.to_string()
}
