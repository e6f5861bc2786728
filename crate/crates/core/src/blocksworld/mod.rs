//! The stacking benchmark: seven task families over colored blocks, plus the
//! graph-based verifier that grades predicted goals against them.

mod config;
mod gen;
mod graph;
mod task;
mod verify;

pub use config::{
    sample_ambiguous_configuration, sample_configuration, BlockConfiguration, ColorPolicy,
    COLOR_PALETTE,
};
pub use gen::{
    build_problem, canonical_goal, canonical_stacks, generate_instances, stacks_from_init,
    BwGenOptions, BwTruth,
    PredicateOrder,
};
pub use graph::{build_relation_graph, PhysicalError, RelationGraph};
pub use task::{render_instruction, BwFamily, BwTaskKind, Direction, VERBS};
pub use verify::{evaluate_goal_text, extract_stacks, validate_task_constraint, Metric, StackSet};

/// The blocks domain all stacking problems reference.
pub const DOMAIN_TEXT: &str = include_str!("domain.pddl");

use crate::pddl::Domain;
use std::sync::OnceLock;

/// The parsed form of [`DOMAIN_TEXT`], parsed once.
pub fn domain() -> &'static Domain {
    static DOMAIN: OnceLock<Domain> = OnceLock::new();
    DOMAIN.get_or_init(|| {
        crate::pddl::parse_domain(DOMAIN_TEXT).expect("bundled blocks domain must parse")
    })
}
