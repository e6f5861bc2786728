//! Core library for a natural-language-to-PDDL goal translation benchmark.
//!
//! The crate bundles everything needed to build benchmark instances and to
//! judge model output against them:
//!
//! * [`pddl`] — a small STRIPS + `:typing` reader/printer for domains,
//!   problems, and goal conjunctions;
//! * [`blocksworld`] — seven stacking task families with seeded instance
//!   generation and a graph-based physical/constraint verifier;
//! * [`alfred`] — thirteen household rearrangement task families over three
//!   scene kinds, with per-task loose/strict goal checking;
//! * [`probe`] — follow-up diagnostic queries (domain understanding and goal
//!   inference) with mechanical grading and failure/success delta reports;
//! * [`instance`] — the shared task-instance and verdict records plus their
//!   JSONL encodings.
//!
//! Everything downstream of a `(task, seed)` pair is deterministic: the same
//! inputs regenerate byte-identical instances, prompts, and reports.

pub mod alfred;
pub mod blocksworld;
pub mod instance;
pub mod pddl;
pub mod probe;
pub mod seed;

pub use instance::{ErrorCategory, ShotExample, TaskInstance, TaskKind, Truth, Verdict};
