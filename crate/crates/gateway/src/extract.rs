//! Goal extraction from free-text model output.
//!
//! Models wrap their answers in prose, code fences, or whole
//! `(define (problem ...))` shells. The extractor scans for the first
//! balanced s-expression whose head token is `:goal`, `and`, or a predicate
//! the domain declares, and returns it verbatim (a `(:goal X)` wrapper
//! unwraps to `X`). Anything else in the text is ignored.

use goalbench_core::pddl::Domain;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no PDDL goal expression found in the response")]
pub struct ExtractError;

/// Byte range of the balanced expression opening at `start`, or `None` if
/// it never closes.
fn balanced_region(text: &str, start: usize) -> Option<&str> {
    let mut depth = 0usize;
    for (i, c) in text[start..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth = depth.checked_sub(1)?;
                if depth == 0 {
                    return Some(&text[start..start + i + 1]);
                }
            }
            _ => {}
        }
    }
    None
}

/// The first token after the opening parenthesis, lower-cased.
fn head_of(region: &str) -> String {
    region[1..]
        .trim_start()
        .chars()
        .take_while(|c| !c.is_whitespace() && *c != '(' && *c != ')')
        .collect::<String>()
        .to_lowercase()
}

/// Pull the goal expression out of a model response.
pub fn extract_goal(text: &str, domain: &Domain) -> Result<String, ExtractError> {
    let mut from = 0;
    while let Some(offset) = text[from..].find('(') {
        let start = from + offset;
        // Unbalanced or unwanted heads both continue the scan just past
        // this parenthesis, so nested candidates are still visited.
        from = start + 1;
        let Some(region) = balanced_region(text, start) else {
            continue;
        };
        let head = head_of(region);
        if head == ":goal" {
            // Unwrap to the expression inside the wrapper.
            if let Some(inner_start) = region[1..].find('(') {
                if let Some(inner) = balanced_region(region, 1 + inner_start) {
                    return Ok(inner.to_string());
                }
            }
            continue;
        }
        if head == "and" || domain.predicate(&head).is_some() {
            return Ok(region.to_string());
        }
    }
    Err(ExtractError)
}

#[cfg(test)]
mod tests {
    use super::*;
    use goalbench_core::blocksworld;

    fn extract(text: &str) -> Result<String, ExtractError> {
        extract_goal(text, blocksworld::domain())
    }

    #[test]
    fn prose_around_a_conjunction_is_discarded() {
        assert_eq!(
            extract("Sure! (and (ontable a) (clear a)) Hope that helps.").unwrap(),
            "(and (ontable a) (clear a))"
        );
    }

    #[test]
    fn goal_wrappers_unwrap() {
        assert_eq!(extract("(:goal (and (on b a)))").unwrap(), "(and (on b a))");
        assert_eq!(
            extract("here: (:goal (and (on b a))) done").unwrap(),
            "(and (on b a))"
        );
    }

    #[test]
    fn bare_predicate_heads_count() {
        assert_eq!(extract("The goal is (on b a), I think.").unwrap(), "(on b a)");
    }

    #[test]
    fn problem_shells_are_skipped_to_the_goal_inside() {
        let text = "(define (problem p)\n  (:domain blocksworld)\n  (:goal (and (on a b))))";
        assert_eq!(extract(text).unwrap(), "(and (on a b))");
    }

    #[test]
    fn refusals_and_junk_are_errors() {
        assert_eq!(extract("I cannot determine the goal."), Err(ExtractError));
        assert_eq!(extract(""), Err(ExtractError));
        assert_eq!(extract("(pile (of (parens"), Err(ExtractError));
        assert_eq!(extract("lisp (cons a b) is not pddl"), Err(ExtractError));
    }

    #[test]
    fn unbalanced_candidates_are_never_returned() {
        assert_eq!(extract("(and (on a b"), Err(ExtractError));
        // A balanced inner expression inside an unbalanced outer one is
        // still found.
        assert_eq!(extract("((and (on a b))").unwrap(), "(and (on a b))");
    }

    #[test]
    fn case_is_ignored_when_matching_heads() {
        assert_eq!(
            extract("(AND (On Red_Block Blue_Block))").unwrap(),
            "(AND (On Red_Block Blue_Block))"
        );
    }

    #[test]
    fn household_predicates_match_their_domain() {
        let text = "Answer: (inReceptacle KeyChain1 Box2)";
        assert_eq!(
            extract_goal(text, goalbench_core::alfred::domain()).unwrap(),
            "(inReceptacle KeyChain1 Box2)"
        );
        // The stacking domain does not know this predicate.
        assert_eq!(extract(text), Err(ExtractError));
    }
}
