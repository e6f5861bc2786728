//! The translators a run can use: three built-in stubs (a perfect oracle, a
//! seeded goal-corruptor, and a prose-only refuser) plus the live HTTP
//! gateway. Stubs never touch the network or the cassette; they exist so
//! the whole pipeline can be exercised — and its numbers predicted —
//! without a model.

use rand::Rng;

use goalbench_core::instance::{canonical_goal, TaskInstance, TaskKind};
use goalbench_core::pddl::{parse_problem, print_goal, GoalFormula, Literal};
use goalbench_core::probe::{oracle_answer, ProbeQuery};
use goalbench_core::seed::{derive_seed, rng_from_seed};
use goalbench_gateway::{
    request_hash, Cassette, CassetteMode, CompletionResponse, Gateway, GatewayError,
};

use crate::config::{BackendKind, ExperimentConfig};

/// A configured translator, ready to answer prompts.
pub enum Backend {
    Oracle,
    Corrupt { rate: f64 },
    Prose,
    Live(Box<Gateway>),
}

fn stub_response(text: String) -> CompletionResponse {
    CompletionResponse {
        text,
        total_tokens: None,
        latency_ms: 0,
    }
}

/// The canonical goal, damaged with probability `rate` in a way that keeps
/// the relaxed check passing while guaranteeing a strict failure: stacking
/// goals lose every `clear` literal, household goals gain the agent's
/// initial location as an extra literal.
fn corrupted_goal(instance: &TaskInstance, rate: f64) -> String {
    let mut rng = rng_from_seed(derive_seed(instance.seed, "stub_damage"));
    let goal = canonical_goal(instance);
    if !rng.gen_bool(rate) {
        return print_goal(&goal);
    }
    let damaged = match instance.task {
        TaskKind::Blocksworld(_) => GoalFormula::new(
            goal.literals
                .into_iter()
                .filter(|l| l.atom.predicate != "clear")
                .collect(),
        ),
        TaskKind::Alfred(_) => {
            let problem = parse_problem(&instance.problem_pddl, instance.domain())
                .expect("generated problems parse");
            let agent_at = problem
                .init
                .iter()
                .find(|a| a.predicate == "atlocation")
                .expect("every scene places the agent")
                .clone();
            let mut literals = goal.literals;
            literals.push(Literal::pos(agent_at));
            GoalFormula::new(literals)
        }
    };
    print_goal(&damaged)
}

impl Backend {
    /// Build the backend a config names. Only the http backend opens the
    /// cassette; stubs are pure functions of the instance.
    pub fn from_config(config: &ExperimentConfig) -> Result<Backend, GatewayError> {
        match config.gateway.backend {
            BackendKind::Oracle => Ok(Backend::Oracle),
            BackendKind::Corrupt => Ok(Backend::Corrupt {
                rate: config.gateway.corrupt_rate,
            }),
            BackendKind::Prose => Ok(Backend::Prose),
            BackendKind::Http => {
                let cassette = match config.gateway.mode {
                    CassetteMode::Passthrough => Cassette::in_memory(CassetteMode::Passthrough),
                    mode => Cassette::load(&config.gateway.cassette, mode)?,
                };
                Ok(Backend::Live(Box::new(Gateway::new(
                    config.gateway.endpoint.clone(),
                    cassette,
                ))))
            }
        }
    }

    /// The model name baked into request hashes. Stubs get stable synthetic
    /// names so their prompt logs hash consistently too.
    pub fn model(&self) -> &str {
        match self {
            Backend::Oracle => "stub-oracle",
            Backend::Corrupt { .. } => "stub-corrupt",
            Backend::Prose => "stub-prose",
            Backend::Live(gateway) => &gateway.config().model,
        }
    }

    pub fn temperature(&self) -> f64 {
        match self {
            Backend::Live(gateway) => gateway.config().temperature,
            _ => 0.0,
        }
    }

    /// The hash a completion of `prompt` files under.
    pub fn hash_for(&self, prompt: &str) -> String {
        request_hash(self.model(), self.temperature(), prompt)
    }

    /// Answer a translation prompt. Stubs ignore the prompt text and work
    /// from the instance; the live backend sees only the prompt.
    pub fn translate(
        &self,
        instance: &TaskInstance,
        prompt: &str,
    ) -> Result<CompletionResponse, GatewayError> {
        match self {
            Backend::Oracle => Ok(stub_response(print_goal(&canonical_goal(instance)))),
            Backend::Corrupt { rate } => Ok(stub_response(corrupted_goal(instance, *rate))),
            Backend::Prose => Ok(stub_response("I cannot determine the goal.".to_string())),
            Backend::Live(gateway) => gateway.complete(prompt),
        }
    }

    /// Answer a follow-up probe.
    pub fn answer_probe(
        &self,
        query: &ProbeQuery,
        prompt: &str,
    ) -> Result<CompletionResponse, GatewayError> {
        match self {
            Backend::Oracle | Backend::Corrupt { .. } => Ok(stub_response(oracle_answer(query))),
            Backend::Prose => Ok(stub_response("I do not know.".to_string())),
            Backend::Live(gateway) => gateway.complete(prompt),
        }
    }
}
