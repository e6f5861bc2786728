//! Model-facing plumbing for the benchmark harness.
//!
//! The pieces compose into one path: [`build_prompt`] assembles the n-shot
//! query for an instance, [`Gateway::complete`] sends it to a
//! completion-style HTTP endpoint (or answers it from a recorded
//! [`Cassette`] without touching the network), and [`extract_goal`] pulls
//! the candidate goal expression out of whatever prose the model wrapped it
//! in. Everything is deterministic given the same cassette: prompt assembly
//! is pure, request hashes depend only on (model, temperature, prompt), and
//! replay mode never performs I/O beyond the cassette file itself.

mod cassette;
mod client;
mod extract;
mod prompt;

pub use cassette::{Cassette, CassetteEntry, CassetteError, CassetteMode, StoredRequest};
pub use client::{
    request_hash, CompletionResponse, EndpointConfig, Gateway, GatewayError,
};
pub use extract::{extract_goal, ExtractError};
pub use prompt::{
    build_probe_prompt, build_prompt, default_layout, PromptError, PromptLayout, PromptSpec,
    DEFAULT_GOAL_CUE, PROBE_ANSWER_CUE,
};
