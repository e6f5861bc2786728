//! End-to-end offline cycle: build a prompt, record a canned model
//! response into a cassette, replay it with no endpoint anywhere, extract
//! the goal, and grade it with the benchmark verifier.

use goalbench_core::blocksworld::{generate_instances, BwFamily, BwGenOptions};
use goalbench_core::instance::evaluate;
use goalbench_core::pddl::print_goal;
use goalbench_gateway::{
    build_prompt, extract_goal, request_hash, Cassette, CassetteEntry, CassetteMode,
    CompletionResponse, EndpointConfig, Gateway, PromptLayout, StoredRequest, DEFAULT_GOAL_CUE,
};

#[test]
fn recorded_responses_replay_into_passing_verdicts() {
    let options = BwGenOptions {
        shots: 1,
        seed: 99,
        ..BwGenOptions::default()
    };
    let instances =
        generate_instances(BwFamily::ExplicitStacks, None, &[4, 8], 3, &options).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let tape_path = dir.path().join("tape.jsonl");

    // "Record" a session by writing what a cooperative model would have
    // said, wrapped in typical chatter.
    let mut tape = Cassette::load(&tape_path, CassetteMode::Record).unwrap();
    for instance in &instances {
        let prompt = build_prompt(instance, 1, PromptLayout::DomainPerExample)
            .unwrap()
            .render(DEFAULT_GOAL_CUE);
        let goal = print_goal(&goalbench_core::instance::canonical_goal(instance));
        tape.put(CassetteEntry {
            hash: request_hash("test-model", 0.0, &prompt),
            request: StoredRequest {
                model: "test-model".to_string(),
                temperature: 0.0,
                prompt: prompt.clone(),
            },
            response: CompletionResponse {
                text: format!("Here is the goal you asked for:\n{goal}\nLet me know!"),
                total_tokens: Some(100),
                latency_ms: 250,
            },
        })
        .unwrap();
    }
    drop(tape);

    // Replay against an endpoint that does not exist; every verdict must
    // come out a strict pass.
    let config = EndpointConfig {
        url: "http://127.0.0.1:9".to_string(),
        model: "test-model".to_string(),
        ..EndpointConfig::default()
    };
    let gateway = Gateway::new(
        config,
        Cassette::load(&tape_path, CassetteMode::Replay).unwrap(),
    );
    for instance in &instances {
        let prompt = build_prompt(instance, 1, PromptLayout::DomainPerExample)
            .unwrap()
            .render(DEFAULT_GOAL_CUE);
        let first = gateway.complete(&prompt).unwrap();
        let again = gateway.complete(&prompt).unwrap();
        assert_eq!(first, again, "replay is deterministic");

        let goal = extract_goal(&first.text, instance.domain()).unwrap();
        let verdict = evaluate(&goal, instance);
        assert!(
            verdict.strict_pass,
            "{}: {:?}",
            instance.id, verdict.detail
        );
    }
}
