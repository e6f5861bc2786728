//! Scene assembly: instantiate a room's catalog with randomized counts,
//! place every portable object somewhere legal, and emit the result as a
//! goalless problem.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::alfred::inventory::{can_contain, scene_types, type_info, ObjClass, SceneKind};
use crate::pddl::{Atom, Problem, TypedName};

/// Where an object sits in the initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// Fixed furniture: nowhere, it simply is.
    Fixed,
    Floor,
    In(String),
}

/// One instantiated object.
#[derive(Debug, Clone)]
pub struct SceneObject {
    pub name: String,
    pub display: String,
    pub type_name: String,
    pub class: ObjClass,
    pub location: Location,
}

/// A fully placed room plus the agent's position.
#[derive(Debug, Clone)]
pub struct Scene {
    pub kind: SceneKind,
    pub objects: Vec<SceneObject>,
    /// Receptacle the agent starts at.
    pub agent_at: String,
}

impl Scene {
    pub fn object(&self, name: &str) -> &SceneObject {
        self.objects
            .iter()
            .find(|o| o.name == name)
            .unwrap_or_else(|| panic!("scene has no object `{name}`"))
    }

    /// Reposition one object.
    pub fn place(&mut self, name: &str, location: Location) {
        let obj = self
            .objects
            .iter_mut()
            .find(|o| o.name == name)
            .unwrap_or_else(|| panic!("scene has no object `{name}`"));
        assert_ne!(obj.class, ObjClass::Receptacle, "furniture cannot move");
        obj.location = location;
    }

    /// Instance names of a type, in index order.
    pub fn instances_of(&self, type_name: &str) -> Vec<String> {
        self.objects
            .iter()
            .filter(|o| o.type_name == type_name)
            .map(|o| o.name.clone())
            .collect()
    }

    /// Names of the fixed receptacles.
    pub fn fixed_receptacles(&self) -> Vec<String> {
        self.objects
            .iter()
            .filter(|o| o.class == ObjClass::Receptacle)
            .map(|o| o.name.clone())
            .collect()
    }

    /// Names of everything that can be placed (movables and portable
    /// containers).
    pub fn portables(&self) -> Vec<String> {
        self.objects
            .iter()
            .filter(|o| o.class != ObjClass::Receptacle)
            .map(|o| o.name.clone())
            .collect()
    }

    /// Objects currently inside the given receptacle.
    pub fn contents_of(&self, receptacle: &str) -> Vec<String> {
        self.objects
            .iter()
            .filter(|o| o.location == Location::In(receptacle.to_string()))
            .map(|o| o.name.clone())
            .collect()
    }

    /// Containers in this scene that may legally hold the given type,
    /// excluding the named object itself and anything already inside it
    /// (boxes may nest, so placement must not close a loop).
    pub fn legal_containers(&self, type_name: &str, exclude: &str) -> Vec<String> {
        self.objects
            .iter()
            .filter(|o| {
                o.class != ObjClass::Movable
                    && o.name != exclude
                    && can_contain(&o.type_name, type_name)
                    && !self.chain_of(&o.name).contains(&exclude.to_string())
            })
            .map(|o| o.name.clone())
            .collect()
    }

    /// The containers above an object, innermost first: for a book in a box
    /// on a sofa this is `[box, sofa]`.
    pub fn chain_of(&self, name: &str) -> Vec<String> {
        let mut chain = Vec::new();
        let mut current = name.to_string();
        while let Location::In(holder) = &self.object(&current).location {
            assert!(
                chain.len() <= self.objects.len(),
                "containment cycle through `{name}`"
            );
            chain.push(holder.clone());
            current = holder.clone();
        }
        chain
    }
}

/// Build a scene. Types listed in `count_overrides` get exactly that many
/// instances; everything else gets 1..=5. Every portable object is then
/// placed uniformly among the floor and its legal containers, and the agent
/// is stationed at a random piece of furniture.
pub fn build_scene(
    kind: SceneKind,
    count_overrides: &[(&str, u32)],
    rng: &mut ChaCha8Rng,
) -> Scene {
    let mut objects = Vec::new();
    for info in scene_types(kind) {
        let count = count_overrides
            .iter()
            .find(|(name, _)| *name == info.name)
            .map(|&(_, c)| c)
            .unwrap_or_else(|| rng.gen_range(1..=5));
        for index in 1..=count {
            objects.push(SceneObject {
                name: format!("{}{}", info.name, index),
                display: format!("{}{}", info.display, index),
                type_name: info.name.to_string(),
                class: info.class,
                location: Location::Fixed,
            });
        }
    }

    let mut scene = Scene {
        kind,
        objects,
        agent_at: String::new(),
    };

    for i in 0..scene.objects.len() {
        if scene.objects[i].class == ObjClass::Receptacle {
            continue;
        }
        let name = scene.objects[i].name.clone();
        let ty = scene.objects[i].type_name.clone();
        let containers = scene.legal_containers(&ty, &name);
        let pick = rng.gen_range(0..=containers.len());
        scene.objects[i].location = if pick == containers.len() {
            Location::Floor
        } else {
            Location::In(containers[pick].clone())
        };
    }

    let furniture = scene.fixed_receptacles();
    assert!(!furniture.is_empty(), "every room template has furniture");
    scene.agent_at = furniture[rng.gen_range(0..furniture.len())].clone();
    scene
}

/// Emit a scene as a problem: typed object declarations in creation order,
/// one location fact per placed object, and the agent's position.
pub fn scene_problem(name: &str, scene: &Scene) -> Problem {
    let mut objects = Vec::new();
    let mut display_names = BTreeMap::new();
    let mut init = Vec::new();

    for obj in &scene.objects {
        let ty = match obj.class {
            ObjClass::Movable => "object",
            ObjClass::Receptacle => "receptacle",
            ObjClass::ReceptacleObject => "receptacle_object",
        };
        objects.push(TypedName::typed(obj.name.clone(), ty));
        if obj.display != obj.name {
            display_names.insert(obj.name.clone(), obj.display.clone());
        }
        match &obj.location {
            Location::Fixed => {}
            Location::Floor => init.push(Atom::new("onfloor", vec![obj.name.clone()])),
            Location::In(receptacle) => init.push(Atom::new(
                "inreceptacle",
                vec![obj.name.clone(), receptacle.clone()],
            )),
        }
    }

    objects.push(TypedName::typed("agent1", "agent"));
    display_names.insert("agent1".to_string(), "Agent1".to_string());
    init.push(Atom::new(
        "atlocation",
        vec!["agent1".to_string(), scene.agent_at.clone()],
    ));

    Problem {
        name: name.to_string(),
        domain_name: "household".to_string(),
        objects,
        display_names,
        init,
        goal: None,
    }
}

/// Scene-independent display form for an instance name, for instruction
/// text rendered after the scene has been serialized: `keychain12` ->
/// `KeyChain12`.
pub fn display_instance(name: &str) -> String {
    let ty = crate::alfred::inventory::type_of_instance(name);
    match type_info(ty) {
        Some(info) => format!("{}{}", info.display, &name[ty.len()..]),
        None => name.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn counts_respect_overrides_and_bounds() {
        let mut rng = rng_from_seed(5);
        let scene = build_scene(SceneKind::Kitchen, &[("plate", 1), ("fork", 3)], &mut rng);
        assert_eq!(scene.instances_of("plate"), vec!["plate1"]);
        assert_eq!(scene.instances_of("fork").len(), 3);
        for info in crate::alfred::inventory::scene_types(SceneKind::Kitchen) {
            let n = scene.instances_of(info.name).len();
            assert!((1..=5).contains(&n), "{} has {n} instances", info.name);
        }
    }

    #[test]
    fn placements_follow_containment_rules() {
        let mut rng = rng_from_seed(11);
        for kind in SceneKind::ALL {
            let scene = build_scene(kind, &[], &mut rng);
            for obj in &scene.objects {
                match &obj.location {
                    Location::Fixed => assert_eq!(obj.class, ObjClass::Receptacle),
                    Location::Floor => assert_ne!(obj.class, ObjClass::Receptacle),
                    Location::In(receptacle) => {
                        let holder = scene.object(receptacle);
                        assert!(
                            can_contain(&holder.type_name, &obj.type_name),
                            "{} cannot hold {}",
                            receptacle,
                            obj.name
                        );
                        // Walking the chain also proves there is no
                        // containment loop (it would trip the cycle assert).
                        assert!(!scene.chain_of(&obj.name).contains(&obj.name));
                    }
                }
            }
            assert!(scene.fixed_receptacles().contains(&scene.agent_at));
        }
    }

    #[test]
    fn problems_parse_against_the_domain() {
        let mut rng = rng_from_seed(7);
        for kind in SceneKind::ALL {
            let scene = build_scene(kind, &[], &mut rng);
            let problem = scene_problem("sample", &scene);
            let text = crate::pddl::print_problem(&problem);
            let parsed =
                crate::pddl::parse_problem(&text, crate::alfred::domain()).unwrap();
            assert_eq!(parsed.objects.len(), scene.objects.len() + 1);
            assert_eq!(parsed.display_name("agent1"), "Agent1");
            assert!(parsed.goal.is_none());
        }
    }

    #[test]
    fn display_forms_restore_camel_case() {
        assert_eq!(display_instance("keychain12"), "KeyChain12");
        assert_eq!(display_instance("sinkbasin1"), "SinkBasin1");
        assert_eq!(display_instance("cd2"), "CD2");
    }
}
