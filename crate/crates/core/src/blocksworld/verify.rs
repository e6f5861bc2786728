//! Grading pipeline for stacking goals: parse and context-check the goal,
//! build the relation graph, extract accepted stacks under a metric, and
//! validate the result against the task's constraint.

use crate::blocksworld::graph::{build_relation_graph, RelationGraph};
use crate::blocksworld::task::BwTaskKind;
use crate::blocksworld::BwTruth;
use crate::instance::{ErrorCategory, TaskInstance, TaskKind, Truth, Verdict};
use crate::pddl::{check_against_context, parse_goal, parse_problem, Problem};

/// How much of a chain a stack must prove before it is accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Bottom seated on the table OR top clear.
    Loose,
    /// Bottom seated on the table AND top clear.
    Strict,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Loose => "loose",
            Metric::Strict => "strict",
        }
    }
}

/// The stacks a goal's graph yields under one metric. Chains that fail the
/// metric are dropped, not errors: unaccepted blocks are simply ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackSet {
    pub metric: Metric,
    pub stacks: Vec<Vec<String>>,
}

/// Walk every maximal chain in the graph bottom-up and keep the ones the
/// metric accepts. Chains are enumerated from their lowest block, so the
/// result is deterministic for a given graph.
pub fn extract_stacks(graph: &RelationGraph, metric: Metric) -> StackSet {
    let mut stacks = Vec::new();
    for block in &graph.blocks {
        if graph.below.contains_key(block) {
            continue; // interior or top of a chain; handled from its bottom
        }
        let mut chain = vec![block.clone()];
        let mut cur = block;
        while let Some(next) = graph.above.get(cur) {
            chain.push(next.clone());
            cur = next;
        }
        let seated = graph.on_table.contains(&chain[0]);
        let topped = graph.clear.contains(chain.last().unwrap());
        let accepted = match metric {
            Metric::Loose => seated || topped,
            Metric::Strict => seated && topped,
        };
        if accepted {
            stacks.push(chain);
        }
    }
    StackSet { metric, stacks }
}

fn sorted(mut stacks: Vec<Vec<String>>) -> Vec<Vec<String>> {
    stacks.sort();
    stacks
}

/// Check that the accepted stacks jointly use every declared block exactly
/// once.
fn covers_all_blocks(stacks: &[Vec<String>], problem: &Problem) -> Result<(), String> {
    let used: Vec<&String> = stacks.iter().flatten().collect();
    if used.len() != problem.objects.len() {
        return Err(format!(
            "stacks use {} of {} blocks",
            used.len(),
            problem.objects.len()
        ));
    }
    for obj in &problem.objects {
        if !used.contains(&&obj.name) {
            return Err(format!("block `{}` is left out of the stacks", obj.name));
        }
    }
    Ok(())
}

/// Decide whether the accepted stacks satisfy the instruction for this task.
/// Returns a human-readable reason on violation.
pub fn validate_task_constraint(
    kind: BwTaskKind,
    truth: &BwTruth,
    stacks: &StackSet,
    problem: &Problem,
) -> Result<(), String> {
    match (kind, truth) {
        (
            BwTaskKind::ExplicitStacks | BwTaskKind::ExplicitStacksII(_),
            BwTruth::Stacks { config },
        ) => {
            if sorted(stacks.stacks.clone()) == sorted(config.stacks.clone()) {
                Ok(())
            } else {
                Err(format!(
                    "accepted stacks do not match the described configuration \
                     (got {}, described {})",
                    stacks.stacks.len(),
                    config.stacks.len()
                ))
            }
        }
        (BwTaskKind::BlockAmbiguity, BwTruth::ColorStacks { config }) => {
            let got: Vec<Vec<String>> = stacks
                .stacks
                .iter()
                .map(|s| s.iter().map(|b| config.color_of(b).to_string()).collect())
                .collect();
            if sorted(got) == sorted(config.color_stacks()) {
                Ok(())
            } else {
                Err("accepted stacks do not realize the described color layout".to_string())
            }
        }
        (BwTaskKind::NBlocks(n), BwTruth::StackHeight { .. }) => {
            if stacks.stacks.iter().any(|s| s.len() == n as usize) {
                Ok(())
            } else {
                Err(format!("no accepted stack has exactly {n} blocks"))
            }
        }
        (BwTaskKind::KStacks(k), BwTruth::StackCount { .. }) => {
            if stacks.stacks.len() != k as usize {
                return Err(format!(
                    "expected {k} stacks, accepted {}",
                    stacks.stacks.len()
                ));
            }
            let height = problem.objects.len() / k as usize;
            if let Some(odd) = stacks.stacks.iter().find(|s| s.len() != height) {
                return Err(format!(
                    "stacks must all have height {height}, one has {}",
                    odd.len()
                ));
            }
            covers_all_blocks(&stacks.stacks, problem)
        }
        (BwTaskKind::PrimeStack, BwTruth::PrimeHeights { primes }) => {
            if stacks
                .stacks
                .iter()
                .any(|s| primes.contains(&(s.len() as u32)))
            {
                Ok(())
            } else {
                Err("no accepted stack has a prime number of blocks".to_string())
            }
        }
        (BwTaskKind::KStacksColor(k), BwTruth::MonochromeStacks { colors, .. }) => {
            if stacks.stacks.len() != k as usize {
                return Err(format!(
                    "expected {k} stacks, accepted {}",
                    stacks.stacks.len()
                ));
            }
            for stack in &stacks.stacks {
                let mut cs = stack.iter().map(|b| {
                    colors
                        .get(b)
                        .map(String::as_str)
                        .unwrap_or_else(|| b.split("_block").next().unwrap_or(b))
                });
                let first = cs.next().expect("chains are never empty");
                if cs.any(|c| c != first) {
                    return Err(format!("stack starting at `{}` mixes colors", stack[0]));
                }
            }
            covers_all_blocks(&stacks.stacks, problem)
        }
        _ => Err("instance truth record does not fit its task".to_string()),
    }
}

/// Grade one predicted goal text against a stacking instance.
///
/// Stage order fixes the reported category: context errors first, then
/// physical impossibilities, then constraint violations. The loose flag is
/// computed from loosely accepted stacks, and a strict pass always implies
/// a loose pass.
pub fn evaluate_goal_text(goal_text: &str, instance: &TaskInstance) -> Verdict {
    let TaskKind::Blocksworld(kind) = instance.task else {
        panic!("stacking verifier invoked on a non-stacking instance");
    };
    let Truth::Blocksworld(truth) = &instance.truth else {
        panic!("instance {} carries a foreign truth record", instance.id);
    };

    let goal = match parse_goal(goal_text) {
        Ok(goal) => goal,
        Err(err) => {
            return Verdict::fail(
                &instance.id,
                false,
                ErrorCategory::DomainSyntax,
                err.to_string(),
            );
        }
    };
    let domain = crate::blocksworld::domain();
    let problem = match parse_problem(&instance.problem_pddl, domain) {
        Ok(problem) => problem,
        Err(err) => {
            return Verdict::fail(
                &instance.id,
                false,
                ErrorCategory::DomainSyntax,
                format!("stored problem text failed to parse: {err}"),
            );
        }
    };
    if let Err(err) = check_against_context(&goal, domain, &problem) {
        return Verdict::fail(
            &instance.id,
            false,
            ErrorCategory::DomainSyntax,
            err.to_string(),
        );
    }

    let graph = match build_relation_graph(&goal) {
        Ok(graph) => graph,
        Err(err) => {
            return Verdict::fail(&instance.id, false, ErrorCategory::Physical, err.detail);
        }
    };

    let loose = extract_stacks(&graph, Metric::Loose);
    let strict = extract_stacks(&graph, Metric::Strict);
    let loose_ok = validate_task_constraint(kind, truth, &loose, &problem).is_ok();
    match validate_task_constraint(kind, truth, &strict, &problem) {
        Ok(()) => Verdict::pass(&instance.id, true, true),
        Err(detail) => Verdict {
            id: instance.id.clone(),
            loose_pass: loose_ok,
            strict_pass: false,
            error: ErrorCategory::ConstraintViolation,
            detail: Some(detail),
        },
    }
}
