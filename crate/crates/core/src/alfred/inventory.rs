//! The household catalog: object types per scene, their classes and prose
//! forms, the containment rules, and the synonym lexicon.

use std::collections::BTreeMap;
use std::sync::OnceLock;

/// How an object type participates in placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjClass {
    /// Can be placed, never holds anything.
    Movable,
    /// Fixed furniture that holds objects and anchors the agent.
    Receptacle,
    /// Portable containers (boxes, plates, cups): placeable and holding.
    ReceptacleObject,
}

/// One room template.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneKind {
    Kitchen,
    LivingRoom,
    Bedroom,
}

impl SceneKind {
    pub const ALL: [SceneKind; 3] = [SceneKind::Kitchen, SceneKind::LivingRoom, SceneKind::Bedroom];

    pub fn name(self) -> &'static str {
        match self {
            SceneKind::Kitchen => "kitchen",
            SceneKind::LivingRoom => "living_room",
            SceneKind::Bedroom => "bedroom",
        }
    }
}

/// Static description of one object type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeInfo {
    /// Canonical instance-name prefix: instances are `{name}{index}`.
    pub name: &'static str,
    /// Display prefix used in problem text and instructions (`KeyChain`).
    pub display: &'static str,
    /// Prose singular ("remote control").
    pub word: &'static str,
    /// Prose plural ("remote controls").
    pub plural: &'static str,
    pub class: ObjClass,
    pub category: &'static str,
    /// Preposition used when placing something here ("in" or "on").
    pub preposition: &'static str,
}

macro_rules! ty {
    ($name:literal, $display:literal, $word:literal, $plural:literal, $class:ident, $cat:literal, $prep:literal) => {
        TypeInfo {
            name: $name,
            display: $display,
            word: $word,
            plural: $plural,
            class: ObjClass::$class,
            category: $cat,
            preposition: $prep,
        }
    };
}

static TYPES: &[TypeInfo] = &[
    // kitchen
    ty!("apple", "Apple", "apple", "apples", Movable, "fruit", "in"),
    ty!("tomato", "Tomato", "tomato", "tomatoes", Movable, "fruit", "in"),
    ty!("lettuce", "Lettuce", "lettuce", "lettuces", Movable, "vegetable", "in"),
    ty!("potato", "Potato", "potato", "potatoes", Movable, "vegetable", "in"),
    ty!("bread", "Bread", "bread", "breads", Movable, "food", "in"),
    ty!("icecream", "IceCream", "ice cream", "ice creams", Movable, "food", "in"),
    ty!("knife", "Knife", "knife", "knives", Movable, "utensil", "in"),
    ty!("fork", "Fork", "fork", "forks", Movable, "utensil", "in"),
    ty!("plate", "Plate", "plate", "plates", ReceptacleObject, "tableware", "on"),
    ty!("cup", "Cup", "cup", "cups", ReceptacleObject, "tableware", "in"),
    ty!("sinkbasin", "SinkBasin", "sink", "sinks", Receptacle, "fixture", "in"),
    ty!("fridge", "Fridge", "fridge", "fridges", Receptacle, "fixture", "in"),
    ty!("microwave", "Microwave", "microwave", "microwaves", Receptacle, "fixture", "in"),
    ty!("oven", "Oven", "oven", "ovens", Receptacle, "fixture", "in"),
    ty!("diningtable", "DiningTable", "dining table", "dining tables", Receptacle, "fixture", "on"),
    ty!("garbagecan", "GarbageCan", "garbage can", "garbage cans", Receptacle, "fixture", "in"),
    ty!("cabinet", "Cabinet", "cabinet", "cabinets", Receptacle, "fixture", "in"),
    // living room
    ty!("floorlamp", "FloorLamp", "floor lamp", "floor lamps", Movable, "furnishing", "in"),
    ty!("laptop", "Laptop", "laptop", "laptops", Movable, "electronics", "in"),
    ty!("remotecontrol", "RemoteControl", "remote control", "remote controls", Movable, "electronics", "in"),
    ty!("keychain", "KeyChain", "keychain", "keychains", Movable, "accessory", "in"),
    ty!("pencil", "Pencil", "pencil", "pencils", Movable, "stationery", "in"),
    ty!("book", "Book", "book", "books", Movable, "media", "in"),
    ty!("box", "Box", "box", "boxes", ReceptacleObject, "container", "in"),
    ty!("sofa", "Sofa", "sofa", "sofas", Receptacle, "furniture", "on"),
    ty!("drawer", "Drawer", "drawer", "drawers", Receptacle, "furniture", "in"),
    ty!("desk", "Desk", "desk", "desks", Receptacle, "furniture", "on"),
    // bedroom extras
    ty!("alarmclock", "AlarmClock", "alarm clock", "alarm clocks", Movable, "timepiece", "in"),
    ty!("watch", "Watch", "watch", "watches", Movable, "timepiece", "in"),
    ty!("cd", "CD", "CD", "CDs", Movable, "media", "in"),
    ty!("bed", "Bed", "bed", "beds", Receptacle, "furniture", "on"),
];

static KITCHEN: &[&str] = &[
    "apple", "tomato", "lettuce", "potato", "bread", "icecream", "knife", "fork", "plate", "cup",
    "sinkbasin", "fridge", "microwave", "oven", "diningtable", "garbagecan", "cabinet",
];

static LIVING_ROOM: &[&str] = &[
    "floorlamp", "laptop", "remotecontrol", "keychain", "pencil", "book", "box", "sofa",
    "drawer", "desk",
];

static BEDROOM: &[&str] = &[
    "alarmclock", "watch", "book", "cd", "box", "drawer", "desk", "bed",
];

/// The object types present in a scene, in declaration order.
pub fn scene_types(kind: SceneKind) -> Vec<&'static TypeInfo> {
    let names = match kind {
        SceneKind::Kitchen => KITCHEN,
        SceneKind::LivingRoom => LIVING_ROOM,
        SceneKind::Bedroom => BEDROOM,
    };
    names
        .iter()
        .map(|n| type_info(n).expect("scene lists only cataloged types"))
        .collect()
}

/// Look a type up by canonical name.
pub fn type_info(name: &str) -> Option<&'static TypeInfo> {
    TYPES.iter().find(|t| t.name == name)
}

/// The type prefix of an instance name: `keychain12` -> `keychain`.
pub fn type_of_instance(name: &str) -> &str {
    name.trim_end_matches(|c: char| c.is_ascii_digit())
}

/// Categories that count as food when a task asks for "a meal".
pub fn is_food_category(category: &str) -> bool {
    matches!(category, "fruit" | "vegetable" | "food")
}

/// The containment rules, shipped as a plain data file.
pub const CAN_CONTAIN_TEXT: &str = include_str!("cancontain.txt");

fn containment_table() -> &'static BTreeMap<&'static str, Vec<&'static str>> {
    static TABLE: OnceLock<BTreeMap<&'static str, Vec<&'static str>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = BTreeMap::new();
        for line in CAN_CONTAIN_TEXT.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (receptacle, contents) = line
                .split_once(':')
                .expect("containment lines are `receptacle: contents`");
            table.insert(receptacle.trim(), contents.split_whitespace().collect());
        }
        table
    })
}

/// Whether a receptacle type may hold an object type.
pub fn can_contain(receptacle_type: &str, object_type: &str) -> bool {
    containment_table()
        .get(receptacle_type)
        .is_some_and(|held| held.contains(&object_type))
}

/// Object types a given receptacle type may hold, restricted to one scene.
pub fn containable_types(receptacle_type: &str, kind: SceneKind) -> Vec<&'static TypeInfo> {
    scene_types(kind)
        .into_iter()
        .filter(|t| can_contain(receptacle_type, t.name))
        .collect()
}

/// An instruction word and the catalog type it secretly names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Synonym {
    pub word: &'static str,
    pub canonical: &'static str,
}

/// The synonym lexicon: instructions use `word`, problems declare only
/// instances of `canonical`.
pub const SYNONYMS: [Synonym; 5] = [
    Synonym { word: "couch", canonical: "sofa" },
    Synonym { word: "timepiece", canonical: "watch" },
    Synonym { word: "refrigerator", canonical: "fridge" },
    Synonym { word: "trash can", canonical: "garbagecan" },
    Synonym { word: "cupboard", canonical: "cabinet" },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scene_type_is_cataloged() {
        for kind in SceneKind::ALL {
            assert!(!scene_types(kind).is_empty());
        }
    }

    #[test]
    fn containment_references_only_cataloged_types() {
        for (receptacle, contents) in containment_table() {
            assert!(type_info(receptacle).is_some(), "{receptacle}");
            let info = type_info(receptacle).unwrap();
            assert_ne!(info.class, ObjClass::Movable, "{receptacle} cannot hold things");
            for object in contents {
                assert!(type_info(object).is_some(), "{object}");
                assert_ne!(
                    type_info(object).unwrap().class,
                    ObjClass::Receptacle,
                    "{object} is furniture and cannot be placed"
                );
            }
        }
    }

    #[test]
    fn every_movable_except_the_floor_lamp_has_a_home() {
        for info in TYPES {
            if info.class == ObjClass::Receptacle || info.name == "floorlamp" {
                continue;
            }
            let housed = containment_table()
                .iter()
                .any(|(_, held)| held.contains(&info.name));
            assert!(housed, "{} has no legal receptacle", info.name);
        }
    }

    #[test]
    fn synonyms_point_at_real_types() {
        for syn in SYNONYMS {
            let info = type_info(syn.canonical).expect(syn.canonical);
            assert_ne!(syn.word, info.word, "a synonym must differ from the word");
        }
    }

    #[test]
    fn instance_prefixes_strip_cleanly() {
        assert_eq!(type_of_instance("keychain12"), "keychain");
        assert_eq!(type_of_instance("cd3"), "cd");
        assert_eq!(type_of_instance("agent1"), "agent");
    }

    #[test]
    fn boxes_nest_one_inside_another() {
        assert!(can_contain("box", "box"));
        assert!(!can_contain("plate", "plate"));
    }
}
