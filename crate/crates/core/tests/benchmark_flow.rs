//! Cross-module flow: generate instances for both benchmarks, push goals of
//! every quality through the verifiers, and close the loop with the probe
//! battery grading its own oracle answers.

use goalbench_core::alfred::{AlfredGenOptions, AlfredTaskKind};
use goalbench_core::blocksworld::{BwFamily, BwGenOptions, PredicateOrder};
use goalbench_core::instance::{canonical_goal, evaluate, ErrorCategory, TaskInstance};
use goalbench_core::pddl::{parse_problem, print_goal, Atom, GoalFormula, Literal};
use goalbench_core::probe::{
    generate_probes, grade_record, oracle_answer, probe_delta_report, probe_result,
    ExpectedAnswer, ProbeRecord, ProbeResult,
};
use goalbench_core::seed::{derive_seed, rng_from_seed};

fn stacking(per_size: u32, seed: u64) -> Vec<TaskInstance> {
    let options = BwGenOptions {
        shots: 1,
        example_size: None,
        example_order: PredicateOrder::OntableFirst,
        seed,
    };
    goalbench_core::blocksworld::generate_instances(
        BwFamily::ExplicitStacks,
        None,
        &[4, 8],
        per_size,
        &options,
    )
    .expect("stacking generation succeeds")
}

fn household(count: u32, seed: u64) -> Vec<TaskInstance> {
    let options = AlfredGenOptions { shots: 1, seed };
    goalbench_core::alfred::generate_instances(AlfredTaskKind::MoveSynonym, count, &options)
        .expect("household generation succeeds")
}

#[test]
fn instances_regenerate_identically_and_survive_serialization() {
    let first: Vec<TaskInstance> = stacking(3, 17).into_iter().chain(household(3, 17)).collect();
    let second: Vec<TaskInstance> = stacking(3, 17).into_iter().chain(household(3, 17)).collect();
    assert_eq!(first, second, "generation must be a pure function of its options");

    for instance in &first {
        let json = serde_json::to_string(instance).expect("instances serialize");
        let back: TaskInstance = serde_json::from_str(&json).expect("instances deserialize");
        assert_eq!(*instance, back, "{} changed across a JSON round trip", instance.id);

        let verdict = evaluate(&print_goal(&canonical_goal(&back)), &back);
        assert!(verdict.strict_pass, "{}: {:?}", back.id, verdict.detail);
    }
}

#[test]
fn the_verifiers_walk_the_whole_error_ladder() {
    let instance = &stacking(1, 23)[1];
    let problem =
        parse_problem(&instance.problem_pddl, instance.domain()).expect("problems parse");
    let blocks: Vec<&str> = problem.objects.iter().map(|o| o.name.as_str()).collect();

    let canonical = canonical_goal(instance);
    let verdict = evaluate(&print_goal(&canonical), instance);
    assert!(verdict.loose_pass && verdict.strict_pass);
    assert_eq!(verdict.error, ErrorCategory::None);

    let undeclared = format!("(and (ontable ghost_block) (clear {}))", blocks[0]);
    assert_eq!(
        evaluate(&undeclared, instance).error,
        ErrorCategory::DomainSyntax
    );

    let cycle = format!("(and (on {a} {b}) (on {b} {a}))", a = blocks[0], b = blocks[1]);
    assert_eq!(evaluate(&cycle, instance).error, ErrorCategory::Physical);

    let stripped = GoalFormula::new(
        canonical
            .literals
            .into_iter()
            .filter(|l| l.atom.predicate != "clear")
            .collect(),
    );
    let verdict = evaluate(&print_goal(&stripped), instance);
    assert!(verdict.loose_pass && !verdict.strict_pass);
    assert_eq!(verdict.error, ErrorCategory::ConstraintViolation);
}

#[test]
fn household_goals_tolerate_omissions_but_not_additions() {
    let instance = &household(2, 29)[0];
    let problem =
        parse_problem(&instance.problem_pddl, instance.domain()).expect("problems parse");

    let canonical = canonical_goal(instance);
    assert!(evaluate(&print_goal(&canonical), instance).strict_pass);

    // Restating where something already sits is consistent with the scene,
    // so the loose check accepts it, but it is not part of the instruction.
    let resting = problem
        .init
        .iter()
        .find(|a| a.predicate == "atlocation")
        .expect("scenes place their objects")
        .clone();
    let mut padded = canonical.literals.clone();
    padded.push(Literal::pos(resting));
    let verdict = evaluate(&print_goal(&GoalFormula::new(padded)), instance);
    assert!(verdict.loose_pass, "{:?}", verdict.detail);
    assert!(!verdict.strict_pass);
    assert_eq!(verdict.error, ErrorCategory::ConstraintViolation);

    // A made-up receptacle is a vocabulary problem, not a scene problem.
    let invented = GoalFormula::new(vec![Literal::pos(Atom::new(
        "atlocation",
        vec!["unicorn1".to_string(), "table1".to_string()],
    ))]);
    assert_eq!(
        evaluate(&print_goal(&invented), instance).error,
        ErrorCategory::DomainSyntax
    );
}

#[test]
fn probes_grade_their_own_oracle_and_aggregate() {
    let mut results: Vec<ProbeResult> = Vec::new();
    for (flip, instance) in stacking(2, 31)
        .iter()
        .chain(household(2, 31).iter())
        .enumerate()
    {
        let mut rng = rng_from_seed(derive_seed(instance.seed, "probes"));
        let queries = generate_probes(instance, &mut rng);
        assert!(!queries.is_empty(), "{} got no probes", instance.id);

        let records: Vec<ProbeRecord> = queries
            .into_iter()
            .map(|query| {
                let answer = oracle_answer(&query);
                let annotation = matches!(query.expected, ExpectedAnswer::Manual).then_some(7);
                let grade = grade_record(&query, &answer, annotation);
                assert_eq!(
                    grade,
                    Some(1),
                    "oracle answer `{answer}` to {} graded {grade:?}",
                    query.id
                );
                ProbeRecord { query, answer, grade }
            })
            .collect();

        // Alternate translation outcomes so the delta table sees both sides.
        results.push(probe_result(
            &instance.id,
            instance.task.name(),
            flip % 2 == 0,
            &records,
        ));
    }

    let table = probe_delta_report(&results, 1.0);
    assert_eq!(table.rows.len(), 2, "one row per task");
    for row in &table.rows {
        assert!(row.probed_successes > 0 && row.probed_failures > 0);
        assert_eq!(row.baseline_domain, Some(100.0));
        // Oracle answers score 1 on both sides, so every delta collapses.
        assert_eq!(row.delta_domain, Some(0.0));
    }
}
