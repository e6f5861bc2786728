//! Household task construction: scene premises, instruction text, and the
//! ground truth each verifier needs.

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alfred::inventory::{
    can_contain, containable_types, is_food_category, scene_types, type_info, type_of_instance,
    ObjClass, SceneKind, SYNONYMS,
};
use crate::alfred::scene::{build_scene, display_instance, scene_problem, Location, Scene};
use crate::instance::{GenError, ShotExample, TaskInstance, TaskKind, Truth};
use crate::pddl::{parse_goal, parse_problem, print_goal, print_problem, Atom, GoalFormula, Literal, Problem};
use crate::seed::{derive_seed, rng_from_seed};

/// The household goal-translation tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlfredTaskKind {
    ExplicitInstruct,
    MoveSynonym,
    MoveNextTo,
    MoveToCount2,
    MoveToCount3,
    MoveToMore,
    MoveNested,
    MoveNested2,
    CutFruits,
    PrepareMeal,
    IceCream,
    SetTable2,
    CleanKitchen,
}

impl AlfredTaskKind {
    pub const ALL: [AlfredTaskKind; 13] = [
        AlfredTaskKind::ExplicitInstruct,
        AlfredTaskKind::MoveSynonym,
        AlfredTaskKind::MoveNextTo,
        AlfredTaskKind::MoveToCount2,
        AlfredTaskKind::MoveToCount3,
        AlfredTaskKind::MoveToMore,
        AlfredTaskKind::MoveNested,
        AlfredTaskKind::MoveNested2,
        AlfredTaskKind::CutFruits,
        AlfredTaskKind::PrepareMeal,
        AlfredTaskKind::IceCream,
        AlfredTaskKind::SetTable2,
        AlfredTaskKind::CleanKitchen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlfredTaskKind::ExplicitInstruct => "explicit_instruct",
            AlfredTaskKind::MoveSynonym => "move_synonym",
            AlfredTaskKind::MoveNextTo => "move_next_to",
            AlfredTaskKind::MoveToCount2 => "move_to_count2",
            AlfredTaskKind::MoveToCount3 => "move_to_count3",
            AlfredTaskKind::MoveToMore => "move_to_more",
            AlfredTaskKind::MoveNested => "move_nested",
            AlfredTaskKind::MoveNested2 => "move_nested2",
            AlfredTaskKind::CutFruits => "cut_fruits",
            AlfredTaskKind::PrepareMeal => "prepare_meal",
            AlfredTaskKind::IceCream => "ice_cream",
            AlfredTaskKind::SetTable2 => "set_table2",
            AlfredTaskKind::CleanKitchen => "clean_kitchen",
        }
    }

    pub fn from_name(name: &str) -> Option<AlfredTaskKind> {
        AlfredTaskKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Open-ended chores that leave the goal implicit ("prepare a meal").
    pub fn broad(self) -> bool {
        matches!(
            self,
            AlfredTaskKind::CutFruits
                | AlfredTaskKind::PrepareMeal
                | AlfredTaskKind::IceCream
                | AlfredTaskKind::SetTable2
                | AlfredTaskKind::CleanKitchen
        )
    }

    /// Benchmark population: 100 instances per pointed task, 20 per chore.
    pub fn default_count(self) -> u32 {
        if self.broad() {
            20
        } else {
            100
        }
    }
}

/// How many target-type objects the correct receptacle holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum CountCondition {
    Exactly { n: u32 },
    MoreThanOthers,
}

/// Ground truth recorded with each household instance. Everything a grader
/// needs is here or in the problem text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlfredTruth {
    /// The instruction spells out the goal; grade against it literally.
    ExactGoal { goal_pddl: String },
    /// "Put X in a {synonym}" where the problem never uses that word.
    Placement {
        moved: String,
        target: String,
        synonym: String,
        canonical_type: String,
        /// True when the synonym names the moved object, not the receptacle.
        object_case: bool,
    },
    /// "Put A next to B" without moving B.
    NextTo {
        moved: String,
        target: String,
        /// Where B sits in the initial state.
        target_location: String,
    },
    /// "Move X to the box with two/three/more Ys."
    CorrectReceptacle {
        moved: String,
        receptacle: String,
        target_type: String,
        condition: CountCondition,
    },
    /// "Put X on the sofa with B" where B hides inside nested boxes.
    NestedSofa {
        moved: String,
        sofa: String,
        target_object: String,
        depth: u32,
    },
    CutFruits {
        fruits: Vec<String>,
        plate: String,
    },
    PrepareMeal {
        foods: Vec<String>,
        table: String,
    },
    IceCream {
        icecream: String,
        fridge: String,
    },
    SetTable2 {
        plates: Vec<String>,
        cups: Vec<String>,
        forks: Vec<String>,
        knives: Vec<String>,
        table: String,
    },
    CleanKitchen {
        floor_objects: Vec<String>,
        occupied: Vec<String>,
        bad_receptacles: Vec<String>,
    },
}

/// Knobs for household generation.
#[derive(Debug, Clone)]
pub struct AlfredGenOptions {
    /// Worked examples attached to each instance.
    pub shots: u32,
    /// Master seed; each instance derives its own stream.
    pub seed: u64,
}

impl Default for AlfredGenOptions {
    fn default() -> Self {
        AlfredGenOptions { shots: 1, seed: 0 }
    }
}

struct Draft {
    scene: Scene,
    instruction: String,
    truth: AlfredTruth,
}

fn choose<'a, T>(items: &'a [T], rng: &mut ChaCha8Rng) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

/// Send an object to the floor if it currently sits in `avoid`, so the
/// instruction asks for a real change.
fn relocate_off(scene: &mut Scene, name: &str, avoid: &str) {
    if scene.object(name).location == Location::In(avoid.to_string()) {
        scene.place(name, Location::Floor);
    }
}

fn placement_goal(moved: &str, target: &str) -> GoalFormula {
    GoalFormula::new(vec![Literal::pos(Atom::new(
        "inreceptacle",
        vec![moved.to_string(), target.to_string()],
    ))])
}

fn explicit_instruct(rng: &mut ChaCha8Rng) -> Option<Draft> {
    match rng.gen_range(0..3) {
        0 => {
            // "Put a sliced apple on the plate." — unique fruit, unique plate.
            let fruit = *choose(&["apple", "tomato"], rng);
            let mut scene = build_scene(SceneKind::Kitchen, &[(fruit, 1), ("plate", 1)], rng);
            let item = format!("{fruit}1");
            relocate_off(&mut scene, &item, "plate1");
            let word = type_info(fruit).unwrap().word;
            let goal = GoalFormula::new(vec![
                Literal::pos(Atom::new("sliced", vec![item.clone()])),
                Literal::pos(Atom::new("inreceptacle", vec![item, "plate1".to_string()])),
            ]);
            Some(Draft {
                scene,
                instruction: format!("Put a sliced {word} on the plate."),
                truth: AlfredTruth::ExactGoal {
                    goal_pddl: print_goal(&goal),
                },
            })
        }
        1 => {
            // "Put Apple2 in the fridge." — the fixture type has one instance.
            let fixtures: Vec<_> = scene_types(SceneKind::Kitchen)
                .into_iter()
                .filter(|t| t.class == ObjClass::Receptacle)
                .collect();
            let fixture = *choose(&fixtures, rng);
            let mut scene = build_scene(SceneKind::Kitchen, &[(fixture.name, 1)], rng);
            let moved_ty = *choose(&containable_types(fixture.name, SceneKind::Kitchen), rng);
            let moved = choose(&scene.instances_of(moved_ty.name), rng).clone();
            let target = format!("{}1", fixture.name);
            relocate_off(&mut scene, &moved, &target);
            let instruction = format!(
                "Put {} {} the {}.",
                display_instance(&moved),
                fixture.preposition,
                fixture.word
            );
            Some(Draft {
                scene,
                instruction,
                truth: AlfredTruth::ExactGoal {
                    goal_pddl: print_goal(&placement_goal(&moved, &target)),
                },
            })
        }
        _ => {
            // "Put Cup1 in Cabinet3." — both sides named outright.
            let mut scene = build_scene(SceneKind::Kitchen, &[], rng);
            let target = choose(&scene.fixed_receptacles(), rng).clone();
            let fixture = type_info(type_of_instance(&target)).unwrap();
            let moved_ty = *choose(&containable_types(fixture.name, SceneKind::Kitchen), rng);
            let moved = choose(&scene.instances_of(moved_ty.name), rng).clone();
            relocate_off(&mut scene, &moved, &target);
            let instruction = format!(
                "Put {} {} {}.",
                display_instance(&moved),
                fixture.preposition,
                display_instance(&target)
            );
            Some(Draft {
                scene,
                instruction,
                truth: AlfredTruth::ExactGoal {
                    goal_pddl: print_goal(&placement_goal(&moved, &target)),
                },
            })
        }
    }
}

fn move_synonym(rng: &mut ChaCha8Rng) -> Option<Draft> {
    let syn = *choose(&SYNONYMS, rng);
    let canonical = type_info(syn.canonical).unwrap();
    if canonical.class == ObjClass::Movable {
        // "Put a timepiece on Desk1." — the synonym names the thing to move.
        let mut scene = build_scene(SceneKind::Bedroom, &[(syn.canonical, 1)], rng);
        let moved = format!("{}1", syn.canonical);
        relocate_off(&mut scene, &moved, "desk1");
        Some(Draft {
            scene,
            instruction: format!("Put a {} on Desk1.", syn.word),
            truth: AlfredTruth::Placement {
                moved,
                target: "desk1".to_string(),
                synonym: syn.word.to_string(),
                canonical_type: syn.canonical.to_string(),
                object_case: true,
            },
        })
    } else {
        // "Put Pencil1 on a couch." — the problem only ever says `sofa`.
        let kind = if syn.canonical == "sofa" {
            SceneKind::LivingRoom
        } else {
            SceneKind::Kitchen
        };
        let mut scene = build_scene(kind, &[(syn.canonical, 1)], rng);
        let target = format!("{}1", syn.canonical);
        let moved_ty = *choose(&containable_types(syn.canonical, kind), rng);
        let moved = choose(&scene.instances_of(moved_ty.name), rng).clone();
        relocate_off(&mut scene, &moved, &target);
        let instruction = format!(
            "Put {} {} a {}.",
            display_instance(&moved),
            canonical.preposition,
            syn.word
        );
        Some(Draft {
            scene,
            instruction,
            truth: AlfredTruth::Placement {
                moved,
                target,
                synonym: syn.word.to_string(),
                canonical_type: syn.canonical.to_string(),
                object_case: false,
            },
        })
    }
}

fn move_next_to(rng: &mut ChaCha8Rng) -> Option<Draft> {
    let kind = *choose(&[SceneKind::LivingRoom, SceneKind::Bedroom], rng);
    let candidates: Vec<_> = scene_types(kind)
        .into_iter()
        .filter(|t| {
            t.class == ObjClass::Movable
                && scene_types(kind)
                    .iter()
                    .any(|r| r.class != ObjClass::Movable && can_contain(r.name, t.name))
        })
        .collect();
    let ty = *choose(&candidates, rng);
    let count = rng.gen_range(2..=5);
    let mut scene = build_scene(kind, &[(ty.name, count)], rng);
    let instances = scene.instances_of(ty.name);
    let picks = index::sample(rng, instances.len(), 2);
    let moved = instances[picks.index(0)].clone();
    let target = instances[picks.index(1)].clone();

    if scene.object(&target).location == Location::Floor {
        let homes = scene.legal_containers(ty.name, &target);
        if homes.is_empty() {
            return None;
        }
        let home = choose(&homes, rng).clone();
        scene.place(&target, Location::In(home));
    }
    let target_location = match &scene.object(&target).location {
        Location::In(r) => r.clone(),
        _ => return None,
    };
    relocate_off(&mut scene, &moved, &target_location);

    let instruction = format!(
        "Put {} next to {}. Do not move {}.",
        display_instance(&moved),
        display_instance(&target),
        display_instance(&target)
    );
    Some(Draft {
        scene,
        instruction,
        truth: AlfredTruth::NextTo {
            moved,
            target,
            target_location,
        },
    })
}

fn move_to_count(condition: CountCondition, rng: &mut ChaCha8Rng) -> Option<Draft> {
    let kind = *choose(&[SceneKind::LivingRoom, SceneKind::Bedroom], rng);
    let boxable: Vec<_> = scene_types(kind)
        .into_iter()
        .filter(|t| t.class == ObjClass::Movable && can_contain("box", t.name))
        .collect();
    if boxable.len() < 2 {
        return None;
    }
    let picks = index::sample(rng, boxable.len(), 2);
    let target_ty = boxable[picks.index(0)];
    let moved_ty = boxable[picks.index(1)];

    let num_boxes = rng.gen_range(2..=3usize);
    let (target_count, other_counts): (u32, Vec<u32>) = match condition {
        CountCondition::Exactly { n } => {
            let pool: Vec<u32> = (0..=n + 1).filter(|&x| x != n).collect();
            (n, (1..num_boxes).map(|_| *choose(&pool, rng)).collect())
        }
        CountCondition::MoreThanOthers => {
            let c = rng.gen_range(2..=4);
            (c, (1..num_boxes).map(|_| rng.gen_range(0..c)).collect())
        }
    };
    let total = target_count + other_counts.iter().sum::<u32>();
    let mut scene = build_scene(
        kind,
        &[
            ("box", num_boxes as u32),
            (target_ty.name, total),
            (moved_ty.name, 1),
        ],
        rng,
    );

    let boxes = scene.instances_of("box");
    let target_slot = rng.gen_range(0..boxes.len());
    let mut per_box = vec![0u32; boxes.len()];
    per_box[target_slot] = target_count;
    let mut spare = other_counts.into_iter();
    for (slot, count) in per_box.iter_mut().enumerate() {
        if slot != target_slot {
            *count = spare.next().unwrap();
        }
    }
    let mut pieces = scene.instances_of(target_ty.name).into_iter();
    for (slot, &count) in per_box.iter().enumerate() {
        for _ in 0..count {
            let piece = pieces.next().unwrap();
            scene.place(&piece, Location::In(boxes[slot].clone()));
        }
    }

    let receptacle = boxes[target_slot].clone();
    let moved = format!("{}1", moved_ty.name);
    relocate_off(&mut scene, &moved, &receptacle);

    let phrase = match condition {
        CountCondition::Exactly { n: 2 } => "two",
        CountCondition::Exactly { n: 3 } => "three",
        CountCondition::Exactly { .. } => return None,
        CountCondition::MoreThanOthers => "more",
    };
    let instruction = format!(
        "Move {} to the box with {} {}.",
        display_instance(&moved),
        phrase,
        target_ty.plural
    );
    Some(Draft {
        scene,
        instruction,
        truth: AlfredTruth::CorrectReceptacle {
            moved,
            receptacle,
            target_type: target_ty.name.to_string(),
            condition,
        },
    })
}

fn move_nested(depth: u32, rng: &mut ChaCha8Rng) -> Option<Draft> {
    let boxes_needed = if depth == 1 { 2 } else { 3 };
    let moved_ty = *choose(&["keychain", "pencil", "remotecontrol"], rng);
    let mut scene = build_scene(
        SceneKind::LivingRoom,
        &[
            ("sofa", rng.gen_range(2..=3)),
            ("box", rng.gen_range(boxes_needed..=boxes_needed + 1)),
            ("book", rng.gen_range(2..=3)),
            (moved_ty, 1),
        ],
        rng,
    );
    let sofas = scene.instances_of("sofa");
    let boxes = scene.instances_of("box");
    let books = scene.instances_of("book");
    let s = index::sample(rng, sofas.len(), 2);
    let (sofa_t, sofa_d) = (sofas[s.index(0)].clone(), sofas[s.index(1)].clone());
    let b = index::sample(rng, boxes.len(), boxes_needed as usize);
    let k = index::sample(rng, books.len(), 2);
    let (book_t, book_d) = (books[k.index(0)].clone(), books[k.index(1)].clone());
    let moved = format!("{moved_ty}1");

    // Build the chain top-down so no placement can close a loop.
    if depth == 1 {
        let box_a = boxes[b.index(0)].clone();
        let box_d = boxes[b.index(1)].clone();
        scene.place(&box_a, Location::In(sofa_t.clone()));
        scene.place(&book_t, Location::In(box_a));
        scene.place(&box_d, Location::In(sofa_d.clone()));
        scene.place(&book_d, Location::In(box_d));
    } else {
        let box_a = boxes[b.index(0)].clone();
        let box_b = boxes[b.index(1)].clone();
        let box_d = boxes[b.index(2)].clone();
        scene.place(&box_b, Location::In(sofa_t.clone()));
        scene.place(&box_a, Location::In(box_b));
        scene.place(&book_t, Location::In(box_a));
        scene.place(&box_d, Location::In(sofa_d.clone()));
        scene.place(&book_d, Location::In(box_d));
    }
    scene.place(&moved, Location::Floor);

    let instruction = format!(
        "Put {} on the sofa with {}. Do not put it in box.",
        display_instance(&moved),
        display_instance(&book_t)
    );
    Some(Draft {
        scene,
        instruction,
        truth: AlfredTruth::NestedSofa {
            moved,
            sofa: sofa_t,
            target_object: book_t,
            depth,
        },
    })
}

fn cut_fruits(rng: &mut ChaCha8Rng) -> Option<Draft> {
    let mut scene = build_scene(SceneKind::Kitchen, &[("plate", 1)], rng);
    let mut fruits = Vec::new();
    for ty in scene_types(SceneKind::Kitchen) {
        if ty.category == "fruit" {
            fruits.extend(scene.instances_of(ty.name));
        }
    }
    for fruit in &fruits {
        relocate_off(&mut scene, fruit, "plate1");
    }
    Some(Draft {
        scene,
        instruction: "Cut some fruits and put them on the plate.".to_string(),
        truth: AlfredTruth::CutFruits {
            fruits,
            plate: "plate1".to_string(),
        },
    })
}

fn prepare_meal(rng: &mut ChaCha8Rng) -> Option<Draft> {
    let mut scene = build_scene(SceneKind::Kitchen, &[("diningtable", 1)], rng);
    let mut foods = Vec::new();
    for ty in scene_types(SceneKind::Kitchen) {
        if is_food_category(ty.category) {
            foods.extend(scene.instances_of(ty.name));
        }
    }
    for food in &foods {
        relocate_off(&mut scene, food, "diningtable1");
    }
    Some(Draft {
        scene,
        instruction: "Prepare a meal.".to_string(),
        truth: AlfredTruth::PrepareMeal {
            foods,
            table: "diningtable1".to_string(),
        },
    })
}

fn ice_cream(rng: &mut ChaCha8Rng) -> Option<Draft> {
    let mut scene = build_scene(SceneKind::Kitchen, &[("icecream", 1), ("fridge", 1)], rng);
    if scene.object("icecream1").location == Location::In("fridge1".to_string()) {
        let spots: Vec<String> = scene
            .legal_containers("icecream", "icecream1")
            .into_iter()
            .filter(|r| r != "fridge1")
            .collect();
        let pick = rng.gen_range(0..=spots.len());
        let spot = if pick == spots.len() {
            Location::Floor
        } else {
            Location::In(spots[pick].clone())
        };
        scene.place("icecream1", spot);
    }
    Some(Draft {
        scene,
        instruction: "Put the ice-cream where it belongs.".to_string(),
        truth: AlfredTruth::IceCream {
            icecream: "icecream1".to_string(),
            fridge: "fridge1".to_string(),
        },
    })
}

const TABLEWARE: [&str; 4] = ["plate", "cup", "fork", "knife"];

fn set_table2(rng: &mut ChaCha8Rng) -> Option<Draft> {
    let mut scene = build_scene(
        SceneKind::Kitchen,
        &[
            ("plate", rng.gen_range(2..=3)),
            ("cup", rng.gen_range(2..=3)),
            ("fork", rng.gen_range(2..=3)),
            ("knife", rng.gen_range(2..=3)),
            ("diningtable", 1),
        ],
        rng,
    );
    // The table starts bare of tableware.
    for name in scene.contents_of("diningtable1") {
        if !TABLEWARE.contains(&type_of_instance(&name)) {
            continue;
        }
        let spots: Vec<String> = scene
            .legal_containers(type_of_instance(&name), &name)
            .into_iter()
            .filter(|r| r != "diningtable1")
            .collect();
        let pick = rng.gen_range(0..=spots.len());
        let spot = if pick == spots.len() {
            Location::Floor
        } else {
            Location::In(spots[pick].clone())
        };
        scene.place(&name, spot);
    }
    Some(Draft {
        truth: AlfredTruth::SetTable2 {
            plates: scene.instances_of("plate"),
            cups: scene.instances_of("cup"),
            forks: scene.instances_of("fork"),
            knives: scene.instances_of("knife"),
            table: "diningtable1".to_string(),
        },
        scene,
        instruction: "Set the table for two persons.".to_string(),
    })
}

fn clean_kitchen(rng: &mut ChaCha8Rng) -> Option<Draft> {
    let mut scene = build_scene(SceneKind::Kitchen, &[], rng);
    let portables = scene.portables();
    let strewn = rng.gen_range(2..=4usize).min(portables.len());
    for slot in index::sample(rng, portables.len(), strewn).iter() {
        scene.place(&portables[slot], Location::Floor);
    }
    let dirty_candidates: Vec<String> = scene
        .portables()
        .into_iter()
        .filter(|p| can_contain("sinkbasin", type_of_instance(p)))
        .collect();
    if dirty_candidates.is_empty() {
        return None;
    }
    let dirty = choose(&dirty_candidates, rng).clone();
    scene.place(&dirty, Location::In("sinkbasin1".to_string()));

    let bad_receptacles: Vec<String> = ["sinkbasin", "microwave", "oven"]
        .iter()
        .flat_map(|ty| scene.instances_of(ty))
        .collect();
    let floor_objects: Vec<String> = scene
        .objects
        .iter()
        .filter(|o| o.location == Location::Floor)
        .map(|o| o.name.clone())
        .collect();
    let occupied: Vec<String> = scene
        .objects
        .iter()
        .filter(|o| matches!(&o.location, Location::In(r) if bad_receptacles.contains(r)))
        .map(|o| o.name.clone())
        .collect();
    Some(Draft {
        scene,
        instruction: "Clean up the kitchen.".to_string(),
        truth: AlfredTruth::CleanKitchen {
            floor_objects,
            occupied,
            bad_receptacles,
        },
    })
}

fn sample_draft(kind: AlfredTaskKind, rng: &mut ChaCha8Rng) -> Option<Draft> {
    match kind {
        AlfredTaskKind::ExplicitInstruct => explicit_instruct(rng),
        AlfredTaskKind::MoveSynonym => move_synonym(rng),
        AlfredTaskKind::MoveNextTo => move_next_to(rng),
        AlfredTaskKind::MoveToCount2 => move_to_count(CountCondition::Exactly { n: 2 }, rng),
        AlfredTaskKind::MoveToCount3 => move_to_count(CountCondition::Exactly { n: 3 }, rng),
        AlfredTaskKind::MoveToMore => move_to_count(CountCondition::MoreThanOthers, rng),
        AlfredTaskKind::MoveNested => move_nested(1, rng),
        AlfredTaskKind::MoveNested2 => move_nested(2, rng),
        AlfredTaskKind::CutFruits => cut_fruits(rng),
        AlfredTaskKind::PrepareMeal => prepare_meal(rng),
        AlfredTaskKind::IceCream => ice_cream(rng),
        AlfredTaskKind::SetTable2 => set_table2(rng),
        AlfredTaskKind::CleanKitchen => clean_kitchen(rng),
    }
}

fn sample_with_retries(
    kind: AlfredTaskKind,
    seed: u64,
    what: &str,
) -> Result<Draft, GenError> {
    const ATTEMPTS: u32 = 50;
    for attempt in 0..ATTEMPTS {
        let mut rng = rng_from_seed(derive_seed(seed, &format!("attempt|{attempt}")));
        if let Some(draft) = sample_draft(kind, &mut rng) {
            return Ok(draft);
        }
    }
    Err(GenError::RetryExceeded {
        what: format!("household premise for {what}"),
        attempts: ATTEMPTS,
    })
}

/// Generate `count` instances of one household task. Fully determined by
/// `(kind, count, options)`.
pub fn generate_instances(
    kind: AlfredTaskKind,
    count: u32,
    options: &AlfredGenOptions,
) -> Result<Vec<TaskInstance>, GenError> {
    let mut out = Vec::with_capacity(count as usize);
    for index in 0..count {
        let seed = derive_seed(options.seed, &format!("{}|{}", kind.name(), index));
        let id = format!("{}-i{:04}", kind.name(), index);
        let draft = sample_with_retries(kind, seed, &id)?;
        let problem = scene_problem(&id, &draft.scene);

        let mut examples = Vec::new();
        for shot in 0..options.shots {
            let ex_seed = derive_seed(seed, &format!("example|{shot}"));
            let ex_name = format!("{id}-ex{}", shot + 1);
            let ex = sample_with_retries(kind, ex_seed, &ex_name)?;
            let ex_problem = scene_problem(&ex_name, &ex.scene);
            let goal = canonical_from(&ex.truth, &ex_problem);
            examples.push(ShotExample {
                problem_pddl: print_problem(&ex_problem),
                instruction: ex.instruction,
                goal_pddl: print_goal(&goal),
            });
        }

        out.push(TaskInstance {
            id,
            task: TaskKind::Alfred(kind),
            size: draft.scene.objects.len() as u32,
            instruction: draft.instruction,
            problem_pddl: print_problem(&problem),
            examples,
            truth: Truth::Alfred(draft.truth),
            seed,
        });
    }
    Ok(out)
}

/// The goal a perfect translator would emit, reconstructed from the truth
/// and the problem.
pub(crate) fn canonical_from(truth: &AlfredTruth, problem: &Problem) -> GoalFormula {
    match truth {
        AlfredTruth::ExactGoal { goal_pddl } => {
            parse_goal(goal_pddl).expect("generated goals parse")
        }
        AlfredTruth::Placement { moved, target, .. } => placement_goal(moved, target),
        AlfredTruth::NextTo {
            moved,
            target_location,
            ..
        } => placement_goal(moved, target_location),
        AlfredTruth::CorrectReceptacle {
            moved, receptacle, ..
        } => placement_goal(moved, receptacle),
        AlfredTruth::NestedSofa { moved, sofa, .. } => placement_goal(moved, sofa),
        AlfredTruth::CutFruits { fruits, plate } => GoalFormula::new(
            fruits
                .iter()
                .flat_map(|f| {
                    [
                        Literal::pos(Atom::new("sliced", vec![f.clone()])),
                        Literal::pos(Atom::new("inreceptacle", vec![f.clone(), plate.clone()])),
                    ]
                })
                .collect(),
        ),
        AlfredTruth::PrepareMeal { foods, table } => GoalFormula::new(
            foods
                .iter()
                .map(|f| Literal::pos(Atom::new("inreceptacle", vec![f.clone(), table.clone()])))
                .collect(),
        ),
        AlfredTruth::IceCream { icecream, fridge } => placement_goal(icecream, fridge),
        AlfredTruth::SetTable2 {
            plates,
            cups,
            forks,
            knives,
            table,
        } => GoalFormula::new(
            [plates, cups, forks, knives]
                .iter()
                .flat_map(|list| list.iter().take(2))
                .map(|x| Literal::pos(Atom::new("inreceptacle", vec![x.clone(), table.clone()])))
                .collect(),
        ),
        AlfredTruth::CleanKitchen {
            floor_objects,
            occupied,
            bad_receptacles,
        } => {
            let mut literals = Vec::new();
            for obj in floor_objects.iter().chain(occupied.iter()) {
                let dest = problem
                    .objects
                    .iter()
                    .find(|t| {
                        t.ty.as_deref() == Some("receptacle")
                            && !bad_receptacles.contains(&t.name)
                            && can_contain(type_of_instance(&t.name), type_of_instance(obj))
                    })
                    .expect("every kitchen item has a clean home");
                literals.push(Literal::pos(Atom::new(
                    "inreceptacle",
                    vec![obj.clone(), dest.name.clone()],
                )));
            }
            GoalFormula::new(literals)
        }
    }
}

/// The ground-truth goal for a household instance.
pub fn canonical_goal(instance: &TaskInstance) -> GoalFormula {
    let problem = parse_problem(&instance.problem_pddl, crate::alfred::domain())
        .expect("generated problems parse");
    let Truth::Alfred(truth) = &instance.truth else {
        panic!("instance {} does not carry household truth", instance.id)
    };
    canonical_from(truth, &problem)
}
