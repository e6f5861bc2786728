//! The household benchmark: thirteen rearrangement task families set in
//! kitchen, living-room, and bedroom scenes, with loose/strict goal grading.

mod gen;
mod inventory;
mod scene;
mod verify;

pub use gen::{
    canonical_goal, generate_instances, AlfredGenOptions, AlfredTaskKind, AlfredTruth,
    CountCondition,
};
pub use inventory::{
    can_contain, containable_types, is_food_category, scene_types, type_info, type_of_instance,
    ObjClass, SceneKind, TypeInfo, SYNONYMS,
};
pub use scene::{build_scene, display_instance, scene_problem, Location, Scene, SceneObject};
pub use verify::{evaluate_goal_text, StrictFailReason};

/// The household domain all rearrangement problems reference.
pub const DOMAIN_TEXT: &str = include_str!("domain.pddl");

use crate::pddl::Domain;
use std::sync::OnceLock;

/// The parsed form of [`DOMAIN_TEXT`], parsed once.
pub fn domain() -> &'static Domain {
    static DOMAIN: OnceLock<Domain> = OnceLock::new();
    DOMAIN.get_or_init(|| {
        crate::pddl::parse_domain(DOMAIN_TEXT).expect("bundled household domain must parse")
    })
}
