//! Canonical pretty-printing.
//!
//! Output is lower-case, two-space indented, one literal per line inside
//! `(and ...)`. Re-parsing printed text yields a structurally equal value.

use super::{ActionSchema, Atom, Domain, GoalFormula, Literal, Problem, TypedName};

/// Print a goal as an `(and ...)` block, one literal per line.
pub fn print_goal(goal: &GoalFormula) -> String {
    if goal.literals.is_empty() {
        return "(and)".to_string();
    }
    let mut out = String::from("(and");
    for lit in &goal.literals {
        out.push_str("\n  ");
        out.push_str(&lit.to_string());
    }
    out.push(')');
    out
}

/// Print a problem in canonical form. Object names are written in their
/// display spelling so that re-parsing recovers the same display table.
pub fn print_problem(problem: &Problem) -> String {
    let shown = |name: &String| problem.display_name(name).to_string();
    let mut out = String::new();
    out.push_str(&format!("(define (problem {})\n", problem.name));
    out.push_str(&format!("  (:domain {})\n", problem.domain_name));
    out.push_str("  (:objects");
    let decls: Vec<TypedName> = problem
        .objects
        .iter()
        .map(|o| TypedName {
            name: shown(&o.name),
            ty: o.ty.clone(),
        })
        .collect();
    for group in typed_groups(&decls) {
        out.push_str("\n    ");
        out.push_str(&group);
    }
    out.push(')');
    out.push_str("\n  (:init");
    for atom in &problem.init {
        let spelled = Atom::new(atom.predicate.clone(), atom.args.iter().map(shown).collect());
        out.push_str("\n    ");
        out.push_str(&spelled.to_string());
    }
    out.push(')');
    if let Some(goal) = &problem.goal {
        let spelled = GoalFormula::new(
            goal.literals
                .iter()
                .map(|l| Literal {
                    atom: Atom::new(
                        l.atom.predicate.clone(),
                        l.atom.args.iter().map(shown).collect(),
                    ),
                    positive: l.positive,
                })
                .collect(),
        );
        out.push_str("\n  (:goal ");
        out.push_str(&indent_block(&print_goal(&spelled), 2));
        out.push(')');
    }
    out.push_str(")\n");
    out
}

/// Print a domain in canonical form.
pub fn print_domain(domain: &Domain) -> String {
    let mut out = String::new();
    out.push_str(&format!("(define (domain {})\n", domain.name));
    if !domain.requirements.is_empty() {
        out.push_str(&format!("  (:requirements {})\n", domain.requirements.join(" ")));
    }
    if !domain.types.is_empty() {
        out.push_str("  (:types");
        let decls: Vec<TypedName> = domain
            .types
            .iter()
            .map(|t| TypedName {
                name: t.name.clone(),
                ty: t.parent.clone(),
            })
            .collect();
        for group in typed_groups(&decls) {
            out.push_str("\n    ");
            out.push_str(&group);
        }
        out.push_str(")\n");
    }
    out.push_str("  (:predicates");
    for sig in &domain.predicates {
        let vars: Vec<TypedName> = sig
            .param_types
            .iter()
            .enumerate()
            .map(|(i, ty)| TypedName {
                name: format!("?{}", var_name(i)),
                ty: ty.clone(),
            })
            .collect();
        out.push_str("\n    (");
        out.push_str(&sig.name);
        for group in typed_groups(&vars) {
            out.push(' ');
            out.push_str(&group);
        }
        out.push(')');
    }
    out.push(')');
    for action in &domain.actions {
        out.push('\n');
        out.push_str(&print_action(action));
    }
    out.push_str(")\n");
    out
}

fn print_action(action: &ActionSchema) -> String {
    let mut out = String::new();
    out.push_str(&format!("  (:action {}\n", action.name));
    out.push_str("    :parameters (");
    let groups = typed_groups(&action.params);
    out.push_str(&groups.join(" "));
    out.push_str(")\n");
    out.push_str(&format!(
        "    :precondition {}\n",
        conjunction(&action.precondition)
    ));
    out.push_str(&format!("    :effect {})", conjunction(&action.effects)));
    out
}

fn conjunction(literals: &[Literal]) -> String {
    let mut out = String::from("(and");
    for lit in literals {
        out.push(' ');
        out.push_str(&lit.to_string());
    }
    out.push(')');
    out
}

/// Render a typed list, batching consecutive entries that share a type:
/// `a b - t c` ... Untyped entries end up trailing within their run, which
/// matches how the reader assigns types.
fn typed_groups(names: &[TypedName]) -> Vec<String> {
    let mut groups: Vec<String> = Vec::new();
    let mut i = 0;
    while i < names.len() {
        let ty = &names[i].ty;
        let mut j = i;
        let mut text = String::new();
        while j < names.len() && &names[j].ty == ty {
            if j > i {
                text.push(' ');
            }
            text.push_str(&names[j].name);
            j += 1;
        }
        if let Some(ty) = ty {
            text.push_str(" - ");
            text.push_str(ty);
        }
        groups.push(text);
        i = j;
    }
    groups
}

fn var_name(i: usize) -> String {
    const LETTERS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    match LETTERS.get(i) {
        Some(l) => (*l).to_string(),
        None => format!("x{i}"),
    }
}

fn indent_block(block: &str, by: usize) -> String {
    let pad = " ".repeat(by);
    block.replace('\n', &format!("\n{pad}"))
}
