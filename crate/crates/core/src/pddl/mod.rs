//! A reader and printer for the STRIPS + `:typing` slice of PDDL.
//!
//! Covers exactly what the benchmark needs: domains with types, predicate
//! signatures, and action schemata; problems with typed objects, a ground
//! init, and an optional goal; and standalone goal conjunctions of literals.
//! Identifiers are case-insensitive and canonicalized to lower case; the
//! original spelling of object names is kept in a side table for display.

mod context;
mod parse;
mod print;
mod sexpr;

pub use context::{check_against_context, ContextError, ContextErrorReason};
pub use parse::{parse_domain, parse_goal, parse_problem};
pub use print::{print_domain, print_goal, print_problem};
pub use sexpr::Span;

use std::collections::BTreeMap;
use thiserror::Error;

/// Errors from reading PDDL text. Every variant carries the source position
/// it was detected at.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    /// Malformed surface syntax: unbalanced parentheses, an unknown section
    /// keyword, a duplicate declaration, and similar structural problems.
    #[error("{span}: {msg}")]
    Parse { span: Span, msg: String },
    /// A ground atom used a predicate with the wrong number of arguments.
    #[error("{span}: predicate `{predicate}` expects {expected} argument(s), got {got}")]
    Arity {
        span: Span,
        predicate: String,
        expected: usize,
        got: usize,
    },
    /// A ground atom referenced a predicate the domain does not declare.
    #[error("{span}: unknown predicate `{predicate}`")]
    UnknownPredicate { span: Span, predicate: String },
    /// An init atom referenced an object the problem does not declare.
    #[error("{span}: unknown object `{object}`")]
    UnknownObject { span: Span, object: String },
}

impl PddlError {
    pub(crate) fn parse(span: Span, msg: impl Into<String>) -> Self {
        PddlError::Parse {
            span,
            msg: msg.into(),
        }
    }
}

/// A name together with an optional type, as written in `?x - block` or
/// `keychain1 - object` positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedName {
    pub name: String,
    pub ty: Option<String>,
}

impl TypedName {
    pub fn untyped(name: impl Into<String>) -> Self {
        TypedName {
            name: name.into(),
            ty: None,
        }
    }

    pub fn typed(name: impl Into<String>, ty: impl Into<String>) -> Self {
        TypedName {
            name: name.into(),
            ty: Some(ty.into()),
        }
    }
}

/// A type declaration from a `(:types ...)` section. A type may be declared
/// more than once with different parents, which yields multiple inheritance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecl {
    pub name: String,
    pub parent: Option<String>,
}

/// Declared shape of one predicate. Arity is the length of the parameter
/// type list; `None` entries are untyped parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSignature {
    pub name: String,
    pub param_types: Vec<Option<String>>,
}

impl PredicateSignature {
    pub fn arity(&self) -> usize {
        self.param_types.len()
    }
}

/// An action schema: typed parameters plus literal-conjunction precondition
/// and effect lists. Parsed for completeness; the verifiers never execute
/// actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Vec<TypedName>,
    pub precondition: Vec<Literal>,
    pub effects: Vec<Literal>,
}

/// A parsed domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub name: String,
    /// Requirement flags as written (`:strips`, `:typing`, ...), lower-cased.
    pub requirements: Vec<String>,
    pub types: Vec<TypeDecl>,
    pub predicates: Vec<PredicateSignature>,
    pub actions: Vec<ActionSchema>,
}

impl Domain {
    /// Look up a predicate signature by (canonical) name.
    pub fn predicate(&self, name: &str) -> Option<&PredicateSignature> {
        self.predicates.iter().find(|p| p.name == name)
    }

    /// Whether the domain declares `:typing` (and argument types should be
    /// checked).
    pub fn typed(&self) -> bool {
        self.requirements.iter().any(|r| r == ":typing")
    }

    /// Reflexive-transitive subtype check over the declared parent edges.
    /// Undeclared names participate only reflexively.
    pub fn is_subtype(&self, child: &str, ancestor: &str) -> bool {
        if child == ancestor {
            return true;
        }
        let mut frontier = vec![child];
        let mut seen = vec![child.to_string()];
        while let Some(t) = frontier.pop() {
            for decl in self.types.iter().filter(|d| d.name == t) {
                if let Some(p) = &decl.parent {
                    if p == ancestor {
                        return true;
                    }
                    if !seen.iter().any(|s| s == p) {
                        seen.push(p.clone());
                        frontier.push(p.as_str());
                    }
                }
            }
        }
        false
    }
}

/// A ground atom: predicate applied to object names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<String>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }
}

impl std::fmt::Display for Atom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// A possibly negated ground atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }
}

impl std::fmt::Display for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "(not {})", self.atom)
        }
    }
}

/// A goal: a flat conjunction of literals. Disjunction, quantifiers, and
/// nested connectives are outside the accepted fragment and rejected at
/// parse time.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GoalFormula {
    pub literals: Vec<Literal>,
}

impl GoalFormula {
    pub fn new(literals: Vec<Literal>) -> Self {
        GoalFormula { literals }
    }

    /// Positive literals only, as atoms.
    pub fn positive_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.literals.iter().filter(|l| l.positive).map(|l| &l.atom)
    }
}

/// A parsed problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<TypedName>,
    /// Canonical (lower-case) object name -> spelling as written, recorded
    /// only where they differ. Lets callers display `KeyChain1` while all
    /// reasoning runs on `keychain1`.
    pub display_names: BTreeMap<String, String>,
    /// Ground init atoms in declaration order, duplicates dropped.
    pub init: Vec<Atom>,
    pub goal: Option<GoalFormula>,
}

impl Problem {
    /// Whether `name` (canonical case) is a declared object.
    pub fn has_object(&self, name: &str) -> bool {
        self.objects.iter().any(|o| o.name == name)
    }

    /// Declared type of an object, if any.
    pub fn object_type(&self, name: &str) -> Option<&str> {
        self.objects
            .iter()
            .find(|o| o.name == name)
            .and_then(|o| o.ty.as_deref())
    }

    /// The display spelling for a canonical object name.
    pub fn display_name<'a>(&'a self, name: &'a str) -> &'a str {
        self.display_names.get(name).map(String::as_str).unwrap_or(name)
    }

    /// Whether a ground atom holds in the initial state.
    pub fn init_holds(&self, atom: &Atom) -> bool {
        self.init.iter().any(|a| a == atom)
    }
}
