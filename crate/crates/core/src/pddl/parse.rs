//! Readers for domains, problems, and standalone goal conjunctions.

use std::collections::BTreeMap;

use super::sexpr::{parse_forms, Sexp, Span};
use super::{
    ActionSchema, Atom, Domain, GoalFormula, Literal, PddlError, PredicateSignature, Problem,
    TypeDecl, TypedName,
};

/// Connectives and section heads that can never be predicate names.
const RESERVED_HEADS: &[&str] = &["and", "or", "not", "forall", "exists", "imply", "when"];

/// Parse a `(define (domain ...) ...)` form.
pub fn parse_domain(text: &str) -> Result<Domain, PddlError> {
    let form = single_form(text)?;
    let items = form.expect_list("a `(define ...)` form")?;
    expect_head(items, form.span(), "define")?;
    let name = defined_name(items, form.span(), "domain")?;

    let mut domain = Domain {
        name,
        requirements: Vec::new(),
        types: Vec::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
    };

    for section in &items[2..] {
        let body = section.expect_list("a domain section")?;
        let head = body
            .first()
            .ok_or_else(|| PddlError::parse(section.span(), "empty domain section"))?
            .expect_symbol("a section keyword")?;
        match head {
            ":requirements" => {
                for flag in &body[1..] {
                    domain.requirements.push(flag.expect_symbol("a requirement flag")?.to_string());
                }
            }
            ":types" => {
                domain.types = parse_type_list(&body[1..])?;
            }
            ":predicates" => {
                for decl in &body[1..] {
                    let sig = parse_signature(decl)?;
                    if domain.predicate(&sig.name).is_some() {
                        return Err(PddlError::parse(
                            decl.span(),
                            format!("duplicate predicate `{}`", sig.name),
                        ));
                    }
                    domain.predicates.push(sig);
                }
            }
            ":action" => {
                domain.actions.push(parse_action(body, section.span())?);
            }
            other => {
                return Err(PddlError::parse(
                    section.span(),
                    format!("unknown section keyword `{other}`"),
                ));
            }
        }
    }
    Ok(domain)
}

/// Parse a `(define (problem ...) ...)` form and validate it against its
/// domain: init atoms must use declared predicates at the right arity over
/// declared objects.
pub fn parse_problem(text: &str, domain: &Domain) -> Result<Problem, PddlError> {
    let form = single_form(text)?;
    let items = form.expect_list("a `(define ...)` form")?;
    expect_head(items, form.span(), "define")?;
    let name = defined_name(items, form.span(), "problem")?;

    let mut problem = Problem {
        name,
        domain_name: String::new(),
        objects: Vec::new(),
        display_names: BTreeMap::new(),
        init: Vec::new(),
        goal: None,
    };

    for section in &items[2..] {
        let body = section.expect_list("a problem section")?;
        let head = body
            .first()
            .ok_or_else(|| PddlError::parse(section.span(), "empty problem section"))?
            .expect_symbol("a section keyword")?;
        match head {
            ":domain" => {
                let d = body
                    .get(1)
                    .ok_or_else(|| PddlError::parse(section.span(), "missing domain name"))?;
                problem.domain_name = d.expect_symbol("a domain name")?.to_string();
            }
            ":objects" => {
                let (names, raws) = parse_object_list(&body[1..])?;
                for (decl, raw) in names.into_iter().zip(raws) {
                    if problem.has_object(&decl.name) {
                        return Err(PddlError::parse(
                            section.span(),
                            format!("duplicate object `{}`", decl.name),
                        ));
                    }
                    if raw != decl.name {
                        problem.display_names.insert(decl.name.clone(), raw);
                    }
                    problem.objects.push(decl);
                }
            }
            ":init" => {
                for entry in &body[1..] {
                    let atom = parse_ground_atom(entry)?;
                    check_init_atom(&atom, entry.span(), domain, &problem)?;
                    if !problem.init_holds(&atom) {
                        problem.init.push(atom);
                    }
                }
            }
            ":goal" => {
                let inner = body.get(1).ok_or_else(|| {
                    PddlError::parse(section.span(), "missing goal body")
                })?;
                problem.goal = Some(goal_from_sexp(inner)?);
            }
            other => {
                return Err(PddlError::parse(
                    section.span(),
                    format!("unknown section keyword `{other}`"),
                ));
            }
        }
    }

    if problem.domain_name != domain.name {
        return Err(PddlError::parse(
            form.span(),
            format!(
                "problem references domain `{}` but was parsed against `{}`",
                problem.domain_name, domain.name
            ),
        ));
    }
    Ok(problem)
}

/// Parse a standalone goal: a literal, an `(and ...)` of literals, or either
/// wrapped in `(:goal ...)`. Anything beyond a flat literal conjunction is
/// rejected.
pub fn parse_goal(text: &str) -> Result<GoalFormula, PddlError> {
    let form = single_form(text)?;
    goal_from_sexp(&form)
}

fn goal_from_sexp(form: &Sexp) -> Result<GoalFormula, PddlError> {
    let items = form.expect_list("a goal expression")?;
    let head = items
        .first()
        .ok_or_else(|| PddlError::parse(form.span(), "empty goal expression"))?
        .expect_symbol("a goal connective or predicate")?;
    match head {
        ":goal" => {
            if items.len() != 2 {
                return Err(PddlError::parse(
                    form.span(),
                    "`(:goal ...)` must wrap exactly one expression",
                ));
            }
            goal_from_sexp(&items[1])
        }
        "and" => {
            let mut literals = Vec::new();
            for item in &items[1..] {
                literals.push(parse_literal(item)?);
            }
            Ok(GoalFormula::new(literals))
        }
        _ => Ok(GoalFormula::new(vec![parse_literal(form)?])),
    }
}

fn parse_literal(form: &Sexp) -> Result<Literal, PddlError> {
    let items = form.expect_list("a literal")?;
    let head = items
        .first()
        .ok_or_else(|| PddlError::parse(form.span(), "empty literal"))?
        .expect_symbol("a predicate name")?;
    match head {
        "not" => {
            if items.len() != 2 {
                return Err(PddlError::parse(
                    form.span(),
                    "`(not ...)` must wrap exactly one atom",
                ));
            }
            Ok(Literal::neg(parse_ground_atom(&items[1])?))
        }
        "and" | "or" | "forall" | "exists" | "imply" | "when" => Err(PddlError::parse(
            form.span(),
            format!("goals must be flat literal conjunctions; `{head}` is not supported here"),
        )),
        _ => Ok(Literal::pos(parse_ground_atom(form)?)),
    }
}

fn parse_ground_atom(form: &Sexp) -> Result<Atom, PddlError> {
    let items = form.expect_list("an atom")?;
    let head = items
        .first()
        .ok_or_else(|| PddlError::parse(form.span(), "empty atom"))?
        .expect_symbol("a predicate name")?;
    if RESERVED_HEADS.contains(&head) {
        return Err(PddlError::parse(
            form.span(),
            format!("`{head}` cannot be used as a predicate name"),
        ));
    }
    let mut args = Vec::with_capacity(items.len() - 1);
    for arg in &items[1..] {
        args.push(arg.expect_symbol("an object name")?.to_string());
    }
    Ok(Atom::new(head, args))
}

fn check_init_atom(
    atom: &Atom,
    span: Span,
    domain: &Domain,
    problem: &Problem,
) -> Result<(), PddlError> {
    let sig = domain.predicate(&atom.predicate).ok_or_else(|| PddlError::UnknownPredicate {
        span,
        predicate: atom.predicate.clone(),
    })?;
    if sig.arity() != atom.args.len() {
        return Err(PddlError::Arity {
            span,
            predicate: atom.predicate.clone(),
            expected: sig.arity(),
            got: atom.args.len(),
        });
    }
    for (arg, want) in atom.args.iter().zip(&sig.param_types) {
        if !problem.has_object(arg) {
            return Err(PddlError::UnknownObject {
                span,
                object: arg.clone(),
            });
        }
        if domain.typed() {
            if let Some(want) = want {
                let got = problem.object_type(arg);
                let ok = match got {
                    Some(got) => domain.is_subtype(got, want),
                    None => false,
                };
                if !ok {
                    return Err(PddlError::parse(
                        span,
                        format!(
                            "object `{arg}` has type `{}` but `{}` expects `{want}` here",
                            got.unwrap_or("<none>"),
                            atom.predicate
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

fn parse_action(body: &[Sexp], span: Span) -> Result<ActionSchema, PddlError> {
    let name = body
        .get(1)
        .ok_or_else(|| PddlError::parse(span, "missing action name"))?
        .expect_symbol("an action name")?
        .to_string();
    let mut action = ActionSchema {
        name,
        params: Vec::new(),
        precondition: Vec::new(),
        effects: Vec::new(),
    };
    let mut i = 2;
    while i < body.len() {
        let key = body[i].expect_symbol("an action keyword")?;
        let value = body
            .get(i + 1)
            .ok_or_else(|| PddlError::parse(body[i].span(), format!("`{key}` without a value")))?;
        match key {
            ":parameters" => {
                let (params, _) = parse_object_list(value.expect_list("a parameter list")?)?;
                action.params = params;
            }
            ":precondition" => action.precondition = literal_conjunction(value)?,
            ":effect" => action.effects = literal_conjunction(value)?,
            other => {
                return Err(PddlError::parse(
                    body[i].span(),
                    format!("unknown action keyword `{other}`"),
                ));
            }
        }
        i += 2;
    }
    Ok(action)
}

/// Parse a precondition/effect body: `(and lit*)`, a bare literal, or the
/// empty conjunction `(and)` / `()`.
fn literal_conjunction(form: &Sexp) -> Result<Vec<Literal>, PddlError> {
    let items = form.expect_list("a condition")?;
    if items.is_empty() {
        return Ok(Vec::new());
    }
    if items[0].as_symbol() == Some("and") {
        let mut out = Vec::new();
        for item in &items[1..] {
            out.push(parse_schema_literal(item)?);
        }
        Ok(out)
    } else {
        Ok(vec![parse_schema_literal(form)?])
    }
}

/// Literals inside action schemata may mention variables; they are stored as
/// plain argument strings (with the `?` sigil kept).
fn parse_schema_literal(form: &Sexp) -> Result<Literal, PddlError> {
    let items = form.expect_list("a literal")?;
    let head = items
        .first()
        .ok_or_else(|| PddlError::parse(form.span(), "empty literal"))?
        .expect_symbol("a predicate name")?;
    if head == "not" {
        if items.len() != 2 {
            return Err(PddlError::parse(form.span(), "`(not ...)` must wrap exactly one atom"));
        }
        let inner = parse_schema_literal(&items[1])?;
        if !inner.positive {
            return Err(PddlError::parse(form.span(), "double negation is not supported"));
        }
        return Ok(Literal::neg(inner.atom));
    }
    if RESERVED_HEADS.contains(&head) {
        return Err(PddlError::parse(
            form.span(),
            format!("conditions must be flat literal conjunctions; `{head}` is not supported"),
        ));
    }
    let mut args = Vec::new();
    for arg in &items[1..] {
        args.push(arg.expect_symbol("a term")?.to_string());
    }
    Ok(Literal::pos(Atom::new(head, args)))
}

fn parse_signature(form: &Sexp) -> Result<PredicateSignature, PddlError> {
    let items = form.expect_list("a predicate declaration")?;
    let name = items
        .first()
        .ok_or_else(|| PddlError::parse(form.span(), "empty predicate declaration"))?
        .expect_symbol("a predicate name")?
        .to_string();
    let (params, _) = parse_object_list(&items[1..])?;
    Ok(PredicateSignature {
        name,
        param_types: params.into_iter().map(|p| p.ty).collect(),
    })
}

/// Parse a PDDL typed list (`a b - t c d` style): names accumulate until a
/// `-`, which assigns the following type to the accumulated batch. Trailing
/// names stay untyped. Returns declarations plus the raw spellings.
fn parse_object_list(items: &[Sexp]) -> Result<(Vec<TypedName>, Vec<String>), PddlError> {
    let mut out: Vec<TypedName> = Vec::new();
    let mut raws: Vec<String> = Vec::new();
    let mut batch: Vec<(String, String)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let sym = items[i].expect_symbol("a name")?;
        if sym == "-" {
            let ty = items
                .get(i + 1)
                .ok_or_else(|| PddlError::parse(items[i].span(), "`-` without a type name"))?
                .expect_symbol("a type name")?;
            if batch.is_empty() {
                return Err(PddlError::parse(items[i].span(), "`-` without preceding names"));
            }
            for (name, raw) in batch.drain(..) {
                out.push(TypedName::typed(name, ty));
                raws.push(raw);
            }
            i += 2;
        } else {
            let raw = match &items[i] {
                Sexp::Symbol { raw, .. } => raw.clone(),
                Sexp::List { .. } => unreachable!("expect_symbol above"),
            };
            batch.push((sym.to_string(), raw));
            i += 1;
        }
    }
    for (name, raw) in batch {
        out.push(TypedName::untyped(name));
        raws.push(raw);
    }
    Ok((out, raws))
}

fn parse_type_list(items: &[Sexp]) -> Result<Vec<TypeDecl>, PddlError> {
    let (names, _) = parse_object_list(items)?;
    Ok(names
        .into_iter()
        .map(|n| TypeDecl {
            name: n.name,
            parent: n.ty,
        })
        .collect())
}

fn single_form(text: &str) -> Result<Sexp, PddlError> {
    let mut forms = parse_forms(text)?;
    match forms.len() {
        0 => Err(PddlError::parse(Span { line: 1, col: 1 }, "empty input")),
        1 => Ok(forms.pop().unwrap()),
        _ => Err(PddlError::parse(
            forms[1].span(),
            "expected a single expression, found trailing content",
        )),
    }
}

fn expect_head(items: &[Sexp], span: Span, want: &str) -> Result<(), PddlError> {
    match items.first().and_then(|h| h.as_symbol()) {
        Some(h) if h == want => Ok(()),
        _ => Err(PddlError::parse(span, format!("expected `({want} ...)`"))),
    }
}

/// Extract the name from `(define (domain N) ...)` / `(define (problem N) ...)`.
fn defined_name(items: &[Sexp], span: Span, kind: &str) -> Result<String, PddlError> {
    let head = items
        .get(1)
        .ok_or_else(|| PddlError::parse(span, format!("missing `({kind} <name>)`")))?;
    let pair = head.expect_list(&format!("`({kind} <name>)`"))?;
    if pair.len() != 2 || pair[0].as_symbol() != Some(kind) {
        return Err(PddlError::parse(
            head.span(),
            format!("expected `({kind} <name>)`"),
        ));
    }
    Ok(pair[1].expect_symbol("a name")?.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINI_DOMAIN: &str = "\
(define (domain mini)
  (:requirements :strips)
  (:predicates
    (on ?x ?y)
    (ontable ?x)
    (clear ?x)))";

    #[test]
    fn minimal_domain_parses() {
        let d = parse_domain(MINI_DOMAIN).unwrap();
        assert_eq!(d.name, "mini");
        assert_eq!(d.predicates.len(), 3);
        assert_eq!(d.predicate("on").unwrap().arity(), 2);
        assert_eq!(d.predicate("ontable").unwrap().arity(), 1);
        assert!(d.actions.is_empty());
        assert!(!d.typed());
    }

    #[test]
    fn typed_declarations_resolve_parents() {
        let d = parse_domain(
            "(define (domain h)
               (:requirements :strips :typing)
               (:types receptacle object agent - thing receptacle_object - receptacle)
               (:predicates (inreceptacle ?o - object ?r - receptacle)))",
        )
        .unwrap();
        let find = |n: &str| d.types.iter().find(|t| t.name == n).unwrap();
        assert_eq!(find("receptacle").parent.as_deref(), Some("thing"));
        assert_eq!(find("object").parent.as_deref(), Some("thing"));
        assert_eq!(find("agent").parent.as_deref(), Some("thing"));
        assert_eq!(find("receptacle_object").parent.as_deref(), Some("receptacle"));
        assert!(d.is_subtype("receptacle_object", "thing"));
        assert!(!d.is_subtype("thing", "receptacle"));
        let sig = d.predicate("inreceptacle").unwrap();
        assert_eq!(
            sig.param_types,
            vec![Some("object".to_string()), Some("receptacle".to_string())]
        );
    }

    #[test]
    fn multiple_parents_accumulate() {
        let d = parse_domain(
            "(define (domain h)
               (:requirements :typing)
               (:types box - container box - carriable)
               (:predicates (p ?x)))",
        )
        .unwrap();
        assert!(d.is_subtype("box", "container"));
        assert!(d.is_subtype("box", "carriable"));
    }

    #[test]
    fn missing_paren_is_parse_error_with_span() {
        let err = parse_domain("(define (domain broken)\n  (:predicates (on ?x ?y)").unwrap_err();
        match err {
            PddlError::Parse { msg, .. } => assert!(msg.contains("unbalanced")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_section_is_rejected() {
        let err = parse_domain("(define (domain d) (:functions (f)))").unwrap_err();
        match err {
            PddlError::Parse { msg, .. } => assert!(msg.contains("unknown section keyword")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_predicate_is_rejected() {
        let err =
            parse_domain("(define (domain d) (:predicates (on ?x ?y) (on ?a ?b)))").unwrap_err();
        match err {
            PddlError::Parse { msg, .. } => assert!(msg.contains("duplicate predicate `on`")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn problem_roundtrips_objects_and_init() {
        let d = parse_domain(MINI_DOMAIN).unwrap();
        let p = parse_problem(
            "(define (problem two)
               (:domain mini)
               (:objects red_block blue_block)
               (:init (ontable red_block) (on blue_block red_block) (clear blue_block)))",
            &d,
        )
        .unwrap();
        assert_eq!(p.objects.len(), 2);
        assert_eq!(p.init.len(), 3);
        assert!(p.init_holds(&Atom::new("on", vec!["blue_block".into(), "red_block".into()])));
        assert!(p.goal.is_none());
    }

    #[test]
    fn duplicate_init_atoms_collapse() {
        let d = parse_domain(MINI_DOMAIN).unwrap();
        let p = parse_problem(
            "(define (problem dup)
               (:domain mini)
               (:objects a)
               (:init (ontable a) (ontable a) (clear a)))",
            &d,
        )
        .unwrap();
        assert_eq!(p.init.len(), 2);
    }

    #[test]
    fn init_arity_mismatch_is_reported() {
        let d = parse_domain(MINI_DOMAIN).unwrap();
        let err = parse_problem(
            "(define (problem bad) (:domain mini) (:objects a) (:init (on a)))",
            &d,
        )
        .unwrap_err();
        match err {
            PddlError::Arity {
                predicate,
                expected,
                got,
                ..
            } => {
                assert_eq!(predicate, "on");
                assert_eq!((expected, got), (2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn init_unknown_predicate_and_object() {
        let d = parse_domain(MINI_DOMAIN).unwrap();
        let err = parse_problem(
            "(define (problem bad) (:domain mini) (:objects a) (:init (under a)))",
            &d,
        )
        .unwrap_err();
        assert!(matches!(err, PddlError::UnknownPredicate { .. }));
        let err = parse_problem(
            "(define (problem bad) (:domain mini) (:objects a) (:init (ontable b)))",
            &d,
        )
        .unwrap_err();
        assert!(matches!(err, PddlError::UnknownObject { .. }));
    }

    #[test]
    fn display_names_survive_case_folding() {
        let d = parse_domain(
            "(define (domain h)
               (:requirements :typing)
               (:types object)
               (:predicates (sliced ?o - object)))",
        )
        .unwrap();
        let p = parse_problem(
            "(define (problem s) (:domain h) (:objects KeyChain1 - object) (:init))",
            &d,
        )
        .unwrap();
        assert!(p.has_object("keychain1"));
        assert_eq!(p.display_name("keychain1"), "KeyChain1");
    }

    #[test]
    fn goal_accepts_bare_and_wrapped_forms() {
        let g = parse_goal("(and (on a b) (not (clear a)))").unwrap();
        assert_eq!(g.literals.len(), 2);
        assert!(g.literals[0].positive);
        assert!(!g.literals[1].positive);

        let g = parse_goal("(:goal (and (inReceptacle IceCream1 Fridge1)))").unwrap();
        assert_eq!(g.literals.len(), 1);
        assert_eq!(g.literals[0].atom.predicate, "inreceptacle");
        assert_eq!(g.literals[0].atom.args, vec!["icecream1", "fridge1"]);

        let g = parse_goal("(on a b)").unwrap();
        assert_eq!(g.literals.len(), 1);

        let g = parse_goal("(and)").unwrap();
        assert!(g.literals.is_empty());
    }

    #[test]
    fn goal_rejects_non_literal_structure() {
        assert!(parse_goal("(or (on a b) (on b a))").is_err());
        assert!(parse_goal("(and (or (on a b)))").is_err());
        assert!(parse_goal("(forall (?x) (clear ?x))").is_err());
        assert!(parse_goal("(and (on a b) ((clear a)))").is_err());
        assert!(parse_goal("()").is_err());
        assert!(parse_goal("(and (on a b)) (clear a)").is_err());
    }

    #[test]
    fn classic_four_action_domain_parses() {
        let d = parse_domain(crate::blocksworld::DOMAIN_TEXT).unwrap();
        assert_eq!(d.name, "blocksworld");
        assert_eq!(d.actions.len(), 4);
        let stack = d.actions.iter().find(|a| a.name == "stack").unwrap();
        assert_eq!(stack.params.len(), 2);
        assert!(!stack.precondition.is_empty());
        assert!(stack.effects.iter().any(|l| !l.positive));
    }

    mod properties {
        use super::*;
        use crate::pddl::{print_goal, Atom, GoalFormula, Literal};
        use proptest::prelude::*;

        fn ident() -> impl Strategy<Value = String> {
            "[a-z][a-z0-9_]{0,11}"
                .prop_filter("reserved word", |s| !RESERVED_HEADS.contains(&s.as_str()))
        }

        fn literal() -> impl Strategy<Value = Literal> {
            (ident(), proptest::collection::vec(ident(), 0..4), any::<bool>()).prop_map(
                |(predicate, args, positive)| Literal {
                    atom: Atom::new(predicate, args),
                    positive,
                },
            )
        }

        proptest! {
            #[test]
            fn printed_goals_reparse_structurally_equal(
                literals in proptest::collection::vec(literal(), 0..12)
            ) {
                let goal = GoalFormula::new(literals);
                let back = parse_goal(&print_goal(&goal)).unwrap();
                prop_assert_eq!(back, goal);
            }

            #[test]
            fn goal_reader_never_panics(text in "[ -~\\n]{0,160}") {
                let _ = parse_goal(&text);
            }
        }
    }
}
