//! Task kinds and instruction text for the stacking benchmark.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::BlockConfiguration;

/// Listing order for stack contents in two-style instructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    BottomToTop,
    TopToBottom,
}

impl Direction {
    pub fn phrase(self) -> &'static str {
        match self {
            Direction::BottomToTop => "from bottom to top",
            Direction::TopToBottom => "from top to bottom",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Direction::BottomToTop => "btt",
            Direction::TopToBottom => "ttb",
        }
    }

    pub fn from_name(name: &str) -> Option<Direction> {
        match name {
            "bottom_to_top" | "btt" => Some(Direction::BottomToTop),
            "top_to_bottom" | "ttb" => Some(Direction::TopToBottom),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::BottomToTop => "bottom_to_top",
            Direction::TopToBottom => "top_to_bottom",
        }
    }
}

/// The seven task families, without per-instance parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BwFamily {
    ExplicitStacks,
    ExplicitStacksII,
    BlockAmbiguity,
    NBlocks,
    KStacks,
    PrimeStack,
    KStacksColor,
}

impl BwFamily {
    pub const ALL: [BwFamily; 7] = [
        BwFamily::ExplicitStacks,
        BwFamily::ExplicitStacksII,
        BwFamily::BlockAmbiguity,
        BwFamily::NBlocks,
        BwFamily::KStacks,
        BwFamily::PrimeStack,
        BwFamily::KStacksColor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BwFamily::ExplicitStacks => "explicit_stacks",
            BwFamily::ExplicitStacksII => "explicit_stacks_ii",
            BwFamily::BlockAmbiguity => "block_ambiguity",
            BwFamily::NBlocks => "n_blocks",
            BwFamily::KStacks => "k_stacks",
            BwFamily::PrimeStack => "prime_stack",
            BwFamily::KStacksColor => "k_stacks_color",
        }
    }

    pub fn from_name(name: &str) -> Option<BwFamily> {
        BwFamily::ALL.into_iter().find(|f| f.name() == name)
    }

    /// The block counts each family ships with by default. Families that
    /// hinge on repeated colors or nontrivial arithmetic skip the 4-block
    /// size.
    pub fn default_sizes(self) -> &'static [u32] {
        match self {
            BwFamily::BlockAmbiguity | BwFamily::PrimeStack | BwFamily::KStacksColor => &[8, 12],
            _ => &[4, 8, 12],
        }
    }

    /// Instances per size in the default matrix (per direction for the
    /// two-direction family).
    pub fn default_per_size(self) -> u32 {
        100
    }
}

/// A fully parameterized task: what one instance asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BwTaskKind {
    /// Reproduce explicitly described stacks (relational phrasing).
    ExplicitStacks,
    /// Reproduce explicitly described stacks (list phrasing, directional).
    ExplicitStacksII(Direction),
    /// Reproduce stacks described only by block colors, which repeat.
    BlockAmbiguity,
    /// Build some stack of exactly N blocks.
    NBlocks(u32),
    /// Partition all blocks into exactly K equal-height stacks.
    KStacks(u32),
    /// Build some stack of prime height.
    PrimeStack,
    /// Partition all blocks into exactly K single-color stacks.
    KStacksColor(u32),
}

impl BwTaskKind {
    pub fn family(self) -> BwFamily {
        match self {
            BwTaskKind::ExplicitStacks => BwFamily::ExplicitStacks,
            BwTaskKind::ExplicitStacksII(_) => BwFamily::ExplicitStacksII,
            BwTaskKind::BlockAmbiguity => BwFamily::BlockAmbiguity,
            BwTaskKind::NBlocks(_) => BwFamily::NBlocks,
            BwTaskKind::KStacks(_) => BwFamily::KStacks,
            BwTaskKind::PrimeStack => BwFamily::PrimeStack,
            BwTaskKind::KStacksColor(_) => BwFamily::KStacksColor,
        }
    }

    pub fn direction(self) -> Option<Direction> {
        match self {
            BwTaskKind::ExplicitStacksII(d) => Some(d),
            _ => None,
        }
    }
}

/// The verb synonyms substituted into "create a stack"-style phrasings.
pub const VERBS: [&str; 4] = ["create", "make", "build", "construct"];

pub(crate) fn pick_verb(rng: &mut ChaCha8Rng) -> &'static str {
    VERBS[rng.gen_range(0..VERBS.len())]
}

const CARDINALS: [&str; 13] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve",
];
const ORDINALS: [&str; 13] = [
    "zeroth", "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth",
    "ninth", "tenth", "eleventh", "twelfth",
];

pub(crate) fn cardinal(n: usize) -> &'static str {
    CARDINALS.get(n).copied().unwrap_or("many")
}

fn ordinal(n: usize) -> &'static str {
    ORDINALS.get(n).copied().unwrap_or("nth")
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

/// "the black block" for unique colors, "a red block" where the color
/// repeats.
fn block_ref(config: &BlockConfiguration, block: &str) -> String {
    let color = config.color_of(block);
    let article = if config.color_count(color) > 1 { "a" } else { "the" };
    format!("{article} {color} block")
}

/// Join clauses as "A, and B." / "A, B, and C." (always a comma before the
/// final "and").
fn join_clauses(clauses: &[String]) -> String {
    match clauses.len() {
        0 => String::new(),
        1 => clauses[0].clone(),
        _ => {
            let head = clauses[..clauses.len() - 1].join(", ");
            format!("{head}, and {}", clauses[clauses.len() - 1])
        }
    }
}

fn lead_sentence(verb: &str, stacks: usize) -> String {
    format!(
        "{} {} {}.",
        capitalize(verb),
        cardinal(stacks),
        if stacks == 1 { "stack" } else { "stacks" }
    )
}

/// Relational phrasing: each stack spelled out with on-table / on-top-of /
/// nothing-on clauses, bottom to top.
pub(crate) fn explicit_stacks_text(config: &BlockConfiguration, verb: &str) -> String {
    let mut sentences = vec![lead_sentence(verb, config.stacks.len())];
    for (i, stack) in config.stacks.iter().enumerate() {
        let mut clauses = vec![format!("{} is on the table", block_ref(config, &stack[0]))];
        for pair in stack.windows(2) {
            clauses.push(format!(
                "{} is on top of {}",
                block_ref(config, &pair[1]),
                block_ref(config, &pair[0])
            ));
        }
        clauses.push(format!(
            "there is nothing on {}",
            block_ref(config, &stack[stack.len() - 1])
        ));
        sentences.push(format!(
            "In the {} stack, {}.",
            ordinal(i + 1),
            join_clauses(&clauses)
        ));
    }
    sentences.join(" ")
}

/// List phrasing: each stack as a directional block list.
pub(crate) fn explicit_stacks_ii_text(
    config: &BlockConfiguration,
    direction: Direction,
    verb: &str,
) -> String {
    let mut sentences = vec![lead_sentence(verb, config.stacks.len())];
    for (i, stack) in config.stacks.iter().enumerate() {
        if stack.len() == 1 {
            sentences.push(format!(
                "In the {} stack, there is {}.",
                ordinal(i + 1),
                block_ref(config, &stack[0])
            ));
            continue;
        }
        let mut refs: Vec<String> = stack.iter().map(|b| block_ref(config, b)).collect();
        if direction == Direction::TopToBottom {
            refs.reverse();
        }
        sentences.push(format!(
            "In the {} stack, there are {} {}.",
            ordinal(i + 1),
            join_clauses(&refs),
            direction.phrase()
        ));
    }
    sentences.join(" ")
}

/// Color-only phrasing: just the on-top-of relations, no table or clear
/// clauses, with indefinite articles where a color repeats.
pub(crate) fn block_ambiguity_text(config: &BlockConfiguration, verb: &str) -> String {
    let mut sentences = vec![lead_sentence(verb, config.stacks.len())];
    for (i, stack) in config.stacks.iter().enumerate() {
        let clauses: Vec<String> = if stack.len() == 1 {
            vec![format!("there is {}", block_ref(config, &stack[0]))]
        } else {
            stack
                .windows(2)
                .map(|pair| {
                    format!(
                        "{} is on top of {}",
                        block_ref(config, &pair[1]),
                        block_ref(config, &pair[0])
                    )
                })
                .collect()
        };
        sentences.push(format!(
            "In the {} stack, {}.",
            ordinal(i + 1),
            join_clauses(&clauses)
        ));
    }
    sentences.join(" ")
}

pub(crate) fn n_blocks_text(n: u32, verb: &str) -> String {
    format!(
        "{} a stack that contains {} {}.",
        capitalize(verb),
        cardinal(n as usize),
        if n == 1 { "block" } else { "blocks" }
    )
}

pub(crate) fn k_stacks_text(k: u32, verb: &str) -> String {
    format!(
        "Using all blocks specified in the problem, {verb} exactly {} stacks that are of the same height.",
        cardinal(k as usize)
    )
}

pub(crate) fn prime_stack_text(verb: &str) -> String {
    format!("{} a stack with a prime number of blocks.", capitalize(verb))
}

pub(crate) fn k_stacks_color_text(k: u32, verb: &str) -> String {
    format!(
        "Using all blocks specified in the problem, {verb} {} stacks where each stack comprises blocks with the same color.",
        cardinal(k as usize)
    )
}

/// Render the instruction for a parameterized task over its configuration.
/// The only random draw is the leading verb synonym.
pub fn render_instruction(
    task: BwTaskKind,
    config: &BlockConfiguration,
    rng: &mut ChaCha8Rng,
) -> String {
    let verb = pick_verb(rng);
    match task {
        BwTaskKind::ExplicitStacks => explicit_stacks_text(config, verb),
        BwTaskKind::ExplicitStacksII(direction) => {
            explicit_stacks_ii_text(config, direction, verb)
        }
        BwTaskKind::BlockAmbiguity => block_ambiguity_text(config, verb),
        BwTaskKind::NBlocks(n) => n_blocks_text(n, verb),
        BwTaskKind::KStacks(k) => k_stacks_text(k, verb),
        BwTaskKind::PrimeStack => prime_stack_text(verb),
        BwTaskKind::KStacksColor(k) => k_stacks_color_text(k, verb),
    }
}
