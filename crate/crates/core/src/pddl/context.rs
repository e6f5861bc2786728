//! Checking a goal against the domain and problem it claims to target.

use super::{Domain, GoalFormula, Literal, Problem};
use thiserror::Error;

/// Why a goal literal does not fit its context. All of these grade as
/// domain/syntax failures downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContextErrorReason {
    UnknownPredicate,
    ArityMismatch { expected: usize, got: usize },
    UnknownObject { object: String },
    TypeMismatch { position: usize, expected: String },
}

/// A goal literal that cannot be interpreted in the given domain/problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("goal literal {literal} does not fit the problem context: {}", self.describe())]
pub struct ContextError {
    pub literal: Literal,
    pub reason: ContextErrorReason,
}

impl ContextError {
    fn describe(&self) -> String {
        match &self.reason {
            ContextErrorReason::UnknownPredicate => {
                format!("unknown predicate `{}`", self.literal.atom.predicate)
            }
            ContextErrorReason::ArityMismatch { expected, got } => {
                format!("expected {expected} argument(s), got {got}")
            }
            ContextErrorReason::UnknownObject { object } => {
                format!("unknown object `{object}`")
            }
            ContextErrorReason::TypeMismatch { position, expected } => {
                format!("argument {position} must be a `{expected}`")
            }
        }
    }
}

/// Check that every literal of `goal` is well-formed against `domain` and
/// `problem`: the predicate is declared, the arity matches, every argument
/// is a declared object, and (in typed domains) argument types are
/// compatible with the signature.
pub fn check_against_context(
    goal: &GoalFormula,
    domain: &Domain,
    problem: &Problem,
) -> Result<(), ContextError> {
    for lit in &goal.literals {
        let fail = |reason| {
            Err(ContextError {
                literal: lit.clone(),
                reason,
            })
        };
        let sig = match domain.predicate(&lit.atom.predicate) {
            Some(sig) => sig,
            None => return fail(ContextErrorReason::UnknownPredicate),
        };
        if sig.arity() != lit.atom.args.len() {
            return fail(ContextErrorReason::ArityMismatch {
                expected: sig.arity(),
                got: lit.atom.args.len(),
            });
        }
        for (i, (arg, want)) in lit.atom.args.iter().zip(&sig.param_types).enumerate() {
            if !problem.has_object(arg) {
                return fail(ContextErrorReason::UnknownObject {
                    object: arg.clone(),
                });
            }
            if domain.typed() {
                if let Some(want) = want {
                    let ok = problem
                        .object_type(arg)
                        .map(|got| domain.is_subtype(got, want))
                        .unwrap_or(false);
                    if !ok {
                        return fail(ContextErrorReason::TypeMismatch {
                            position: i + 1,
                            expected: want.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}
