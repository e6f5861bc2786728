//! n-shot prompt assembly.
//!
//! A prompt is a deterministic concatenation of the domain text, zero or
//! more worked examples (problem, instruction, ground-truth goal), and the
//! query problem with its instruction and a trailing cue line. Stacking
//! prompts repeat the domain inside every example; household prompts state
//! it once up front, since repeating the larger typed domain per example
//! wastes the model's context window.

use goalbench_core::probe::{goal_to_stacks, render_stack_lists, ProbeKind, ProbeQuery};
use goalbench_core::{ShotExample, TaskInstance, TaskKind};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The fixed line that asks for the translation. Exposed so prompt studies
/// can swap in their own wording via config.
pub const DEFAULT_GOAL_CUE: &str = "Provide the PDDL goal:";

/// The cue used when a prompt carries a probe question instead of a
/// translation request.
pub const PROBE_ANSWER_CUE: &str = "Answer:";

/// Where the domain definition sits relative to the examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptLayout {
    /// The domain text is repeated inside every example and in the query.
    DomainPerExample,
    /// The domain text appears once, before everything else.
    DomainOnce,
}

/// The layout each benchmark family uses unless configured otherwise.
pub fn default_layout(task: TaskKind) -> PromptLayout {
    match task {
        TaskKind::Blocksworld(_) => PromptLayout::DomainPerExample,
        TaskKind::Alfred(_) => PromptLayout::DomainOnce,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PromptError {
    #[error("instance `{id}` carries {have} examples but the prompt needs {want}")]
    InsufficientExamples { id: String, have: usize, want: usize },
}

/// A fully determined prompt, one render away from text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub domain_text: String,
    pub examples: Vec<ShotExample>,
    pub query_problem_text: String,
    pub query_instruction: String,
    pub layout: PromptLayout,
}

/// Assemble the translation prompt for an instance with the given shot
/// count.
pub fn build_prompt(
    instance: &TaskInstance,
    shots: u32,
    layout: PromptLayout,
) -> Result<PromptSpec, PromptError> {
    let want = shots as usize;
    if instance.examples.len() < want {
        return Err(PromptError::InsufficientExamples {
            id: instance.id.clone(),
            have: instance.examples.len(),
            want,
        });
    }
    Ok(PromptSpec {
        domain_text: instance.domain_text().to_string(),
        examples: instance.examples[..want].to_vec(),
        query_problem_text: instance.problem_pddl.clone(),
        query_instruction: instance.instruction.clone(),
        layout,
    })
}

/// Assemble the prompt for a follow-up probe. Understanding probes go out
/// without examples (a worked translation would prime the wrong output
/// format); the list-goal probe keeps the instance's examples with each
/// ground-truth goal rewritten into the list format it asks for.
pub fn build_probe_prompt(instance: &TaskInstance, query: &ProbeQuery) -> PromptSpec {
    let examples = if query.kind == ProbeKind::ListGoal {
        instance
            .examples
            .iter()
            .map(|ex| ShotExample {
                problem_pddl: ex.problem_pddl.clone(),
                instruction: ex.instruction.clone(),
                goal_pddl: goal_to_stacks(&ex.goal_pddl)
                    .map(|stacks| render_stack_lists(&stacks))
                    .unwrap_or_else(|| ex.goal_pddl.clone()),
            })
            .collect()
    } else {
        Vec::new()
    };
    PromptSpec {
        domain_text: instance.domain_text().to_string(),
        examples,
        query_problem_text: instance.problem_pddl.clone(),
        query_instruction: query.query_text.clone(),
        layout: default_layout(instance.task),
    }
}

impl PromptSpec {
    /// Render to the final prompt text. Blocks are separated by blank
    /// lines; the output always ends with a single newline after the cue.
    pub fn render(&self, cue: &str) -> String {
        let mut blocks: Vec<String> = Vec::new();
        let domain = self.domain_text.trim_end();
        if self.layout == PromptLayout::DomainOnce {
            blocks.push(domain.to_string());
        }
        for ex in &self.examples {
            if self.layout == PromptLayout::DomainPerExample {
                blocks.push(domain.to_string());
            }
            blocks.push(ex.problem_pddl.trim_end().to_string());
            blocks.push(format!("Instruction: {}", ex.instruction));
            blocks.push(format!("Goal:\n{}", ex.goal_pddl.trim_end()));
        }
        if self.layout == PromptLayout::DomainPerExample {
            blocks.push(domain.to_string());
        }
        blocks.push(self.query_problem_text.trim_end().to_string());
        blocks.push(format!("Instruction: {}", self.query_instruction));
        blocks.push(cue.trim_end().to_string());
        let mut out = blocks.join("\n\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use goalbench_core::blocksworld::{generate_instances, BwFamily, BwGenOptions};
    use goalbench_core::alfred::{
        generate_instances as alfred_gen, AlfredGenOptions, AlfredTaskKind,
    };
    use goalbench_core::probe::generate_probes;
    use goalbench_core::seed::rng_from_seed;

    fn stacking_instance(shots: u32, seed: u64) -> TaskInstance {
        let options = BwGenOptions {
            shots,
            seed,
            ..BwGenOptions::default()
        };
        generate_instances(BwFamily::ExplicitStacks, None, &[8], 1, &options)
            .unwrap()
            .remove(0)
    }

    fn household_instance(shots: u32, seed: u64) -> TaskInstance {
        alfred_gen(
            AlfredTaskKind::IceCream,
            1,
            &AlfredGenOptions { shots, seed },
        )
        .unwrap()
        .remove(0)
    }

    #[test]
    fn per_example_layout_repeats_the_domain() {
        let instance = stacking_instance(2, 3);
        let spec = build_prompt(&instance, 2, PromptLayout::DomainPerExample).unwrap();
        let text = spec.render(DEFAULT_GOAL_CUE);
        let occurrences = text.matches("(define (domain blocksworld)").count();
        assert_eq!(occurrences, 3, "once per example plus once in the query");
        assert!(text.ends_with("Provide the PDDL goal:\n"));
        // Examples precede the query and keep their order.
        let first = text.find(&instance.examples[0].instruction).unwrap();
        let second = text.find(&instance.examples[1].instruction).unwrap();
        let query = text.find(&instance.instruction).unwrap();
        assert!(first < second && second < query);
    }

    #[test]
    fn single_domain_layout_states_it_once() {
        let instance = household_instance(1, 5);
        let spec = build_prompt(&instance, 1, default_layout(instance.task)).unwrap();
        assert_eq!(spec.layout, PromptLayout::DomainOnce);
        let text = spec.render(DEFAULT_GOAL_CUE);
        assert_eq!(text.matches("(define (domain household)").count(), 1);
        let domain = text.find("(define (domain household)").unwrap();
        let problem = text.find("(define (problem").unwrap();
        assert!(domain < problem, "the domain comes before everything else");
    }

    #[test]
    fn zero_shot_prompts_have_no_example_block() {
        let instance = stacking_instance(1, 7);
        let spec = build_prompt(&instance, 0, PromptLayout::DomainPerExample).unwrap();
        assert!(spec.examples.is_empty());
        let text = spec.render(DEFAULT_GOAL_CUE);
        assert_eq!(text.matches("Goal:").count(), 0, "no example goal labels");
        assert_eq!(text.matches("(define (domain blocksworld)").count(), 1);
    }

    #[test]
    fn missing_examples_are_an_error() {
        let instance = stacking_instance(1, 7);
        let err = build_prompt(&instance, 2, PromptLayout::DomainPerExample).unwrap_err();
        assert_eq!(
            err,
            PromptError::InsufficientExamples {
                id: instance.id.clone(),
                have: 1,
                want: 2,
            }
        );
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = build_prompt(&stacking_instance(1, 11), 1, PromptLayout::DomainPerExample)
            .unwrap()
            .render(DEFAULT_GOAL_CUE);
        let b = build_prompt(&stacking_instance(1, 11), 1, PromptLayout::DomainPerExample)
            .unwrap()
            .render(DEFAULT_GOAL_CUE);
        assert_eq!(a, b);
    }

    #[test]
    fn list_goal_probes_rewrite_example_goals() {
        let instance = stacking_instance(1, 13);
        let probes = generate_probes(&instance, &mut rng_from_seed(1));
        let list_goal = probes.last().unwrap();
        assert_eq!(list_goal.kind, ProbeKind::ListGoal);

        let spec = build_probe_prompt(&instance, list_goal);
        assert_eq!(spec.examples.len(), 1);
        let rewritten = &spec.examples[0].goal_pddl;
        assert!(rewritten.starts_with("[["), "goal became a list: {rewritten}");
        assert!(!rewritten.contains("(and"));
        assert_eq!(spec.query_instruction, list_goal.query_text);

        let text = spec.render(PROBE_ANSWER_CUE);
        assert!(text.contains("Python list"));
        assert!(text.ends_with("Answer:\n"));
    }

    #[test]
    fn understanding_probes_go_out_zero_shot() {
        let instance = household_instance(1, 17);
        let probes = generate_probes(&instance, &mut rng_from_seed(1));
        let spec = build_probe_prompt(&instance, &probes[0]);
        assert!(spec.examples.is_empty());
        assert_eq!(spec.query_instruction, probes[0].query_text);
        assert_eq!(spec.layout, PromptLayout::DomainOnce);
    }
}
