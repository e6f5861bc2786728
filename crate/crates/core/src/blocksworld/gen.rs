//! Instance generation for the stacking benchmark: sampled initial
//! configurations, rendered instructions, in-context examples, and the
//! recoverable ground truth for each task family.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blocksworld::config::{
    assemble, sample_ambiguous_configuration, sample_configuration, sample_structure,
    BlockConfiguration, ColorPolicy, COLOR_PALETTE,
};
use crate::blocksworld::task::{render_instruction, BwFamily, BwTaskKind, Direction};
use crate::instance::{GenError, ShotExample, TaskInstance, TaskKind, Truth};
use crate::pddl::{
    parse_problem, print_goal, print_problem, Atom, GoalFormula, Literal, Problem, TypedName,
};
use crate::seed::{derive_seed, rng_from_seed};

/// Which predicate leads each stack's rendering in a goal formula.
///
/// The canonical order seats the stack first (`ontable`, the `on` chain
/// upward, then `clear`); the alternative reverses every stack's literals so
/// `clear` comes first, matching prose that describes stacks top-down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredicateOrder {
    OntableFirst,
    ClearFirst,
}

impl PredicateOrder {
    pub fn name(self) -> &'static str {
        match self {
            PredicateOrder::OntableFirst => "ontable_first",
            PredicateOrder::ClearFirst => "clear_first",
        }
    }

    pub fn from_name(name: &str) -> Option<PredicateOrder> {
        match name {
            "ontable_first" => Some(PredicateOrder::OntableFirst),
            "clear_first" => Some(PredicateOrder::ClearFirst),
            _ => None,
        }
    }
}

/// Knobs shared by every stacking-benchmark generation call.
#[derive(Debug, Clone)]
pub struct BwGenOptions {
    /// In-context examples attached to each instance.
    pub shots: u32,
    /// Block count for example problems; `None` mirrors the instance size.
    pub example_size: Option<u32>,
    /// Literal order used when printing example goals.
    pub example_order: PredicateOrder,
    /// Run seed that every instance seed is derived from.
    pub seed: u64,
}

impl Default for BwGenOptions {
    fn default() -> Self {
        BwGenOptions {
            shots: 1,
            example_size: None,
            example_order: PredicateOrder::OntableFirst,
            seed: 0,
        }
    }
}

/// What a correct goal must achieve, stored alongside each instance.
///
/// Variants carry just enough to re-derive the target arrangement from the
/// problem text, so instances stay self-contained on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BwTruth {
    /// The exact stacks the instruction spelled out, block by block.
    Stacks { config: BlockConfiguration },
    /// Stacks the instruction described by color; any arrangement with the
    /// same color layout counts.
    ColorStacks { config: BlockConfiguration },
    /// A single stack of exactly `n` blocks.
    StackHeight { n: u32 },
    /// `k` equal-height stacks that together use every block.
    StackCount { k: u32 },
    /// A single stack whose height is any of these primes.
    PrimeHeights { primes: Vec<u32> },
    /// `k` single-colored stacks that together use every block.
    MonochromeStacks {
        k: u32,
        colors: BTreeMap<String, String>,
    },
}

/// Primes up to and including `n`, by trial division. The sizes in play are
/// tiny, so this is plenty.
pub(crate) fn primes_up_to(n: u32) -> Vec<u32> {
    (2..=n)
        .filter(|&c| (2..c).take_while(|d| d * d <= c).all(|d| c % d != 0))
        .collect()
}

fn nontrivial_divisors(n: u32) -> Vec<u32> {
    (2..n).filter(|d| n % d == 0).collect()
}

/// Sample a configuration whose blocks fall into `k` color groups, with a
/// uniformly sized random split and one palette draw per group. Distinct
/// groups may repeat a color, which still leaves a `k`-stack monochrome
/// arrangement achievable.
fn sample_color_grouped(n: usize, k: usize, rng: &mut ChaCha8Rng) -> BlockConfiguration {
    assert!(k >= 2 && k <= n, "need 2..=n color groups");
    let structure = sample_structure(n, rng);
    // k-1 distinct cut points inside 1..n give a random composition of n
    let mut positions: Vec<usize> = (1..n).collect();
    for i in 0..k - 1 {
        let j = rng.gen_range(i..positions.len());
        positions.swap(i, j);
    }
    let mut cuts: Vec<usize> = positions[..k - 1].to_vec();
    cuts.sort_unstable();
    cuts.push(n);

    let mut colors = Vec::with_capacity(n);
    let mut start = 0;
    for &end in &cuts {
        let color = COLOR_PALETTE[rng.gen_range(0..COLOR_PALETTE.len())];
        colors.extend(std::iter::repeat(color.to_string()).take(end - start));
        start = end;
    }
    assemble(&structure, &colors)
}

/// Draw one task's configuration and concrete parameters.
fn sample_task(
    family: BwFamily,
    direction: Option<Direction>,
    size: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(BlockConfiguration, BwTaskKind), GenError> {
    match family {
        BwFamily::ExplicitStacks => Ok((
            sample_configuration(size, ColorPolicy::Unique, rng)?,
            BwTaskKind::ExplicitStacks,
        )),
        BwFamily::ExplicitStacksII => {
            let dir = direction.expect("explicit_stacks_ii generation needs a direction");
            Ok((
                sample_configuration(size, ColorPolicy::Unique, rng)?,
                BwTaskKind::ExplicitStacksII(dir),
            ))
        }
        BwFamily::BlockAmbiguity => Ok((
            sample_ambiguous_configuration(size, rng)?,
            BwTaskKind::BlockAmbiguity,
        )),
        BwFamily::NBlocks => {
            let config = sample_configuration(size, ColorPolicy::Unique, rng)?;
            let pick = rng.gen_range(0..config.stacks.len());
            let n = config.stacks[pick].len() as u32;
            Ok((config, BwTaskKind::NBlocks(n)))
        }
        BwFamily::KStacks => {
            let config = sample_configuration(size, ColorPolicy::Unique, rng)?;
            let divisors = nontrivial_divisors(size as u32);
            if divisors.is_empty() {
                return Err(GenError::InfeasibleTask(format!(
                    "{size} blocks admit no equal split into several stacks"
                )));
            }
            let k = divisors[rng.gen_range(0..divisors.len())];
            Ok((config, BwTaskKind::KStacks(k)))
        }
        BwFamily::PrimeStack => {
            if primes_up_to(size as u32).is_empty() {
                return Err(GenError::InfeasibleTask(format!(
                    "no prime-height stack fits in {size} blocks"
                )));
            }
            let config = sample_configuration(size, ColorPolicy::Unique, rng)?;
            Ok((config, BwTaskKind::PrimeStack))
        }
        BwFamily::KStacksColor => {
            let k = rng.gen_range(2..=(size / 2).max(2)) as u32;
            Ok((
                sample_color_grouped(size, k as usize, rng),
                BwTaskKind::KStacksColor(k),
            ))
        }
    }
}

fn truth_for(kind: BwTaskKind, config: &BlockConfiguration, size: u32) -> BwTruth {
    match kind {
        BwTaskKind::ExplicitStacks | BwTaskKind::ExplicitStacksII(_) => BwTruth::Stacks {
            config: config.clone(),
        },
        BwTaskKind::BlockAmbiguity => BwTruth::ColorStacks {
            config: config.clone(),
        },
        BwTaskKind::NBlocks(n) => BwTruth::StackHeight { n },
        BwTaskKind::KStacks(k) => BwTruth::StackCount { k },
        BwTaskKind::PrimeStack => BwTruth::PrimeHeights {
            primes: primes_up_to(size),
        },
        BwTaskKind::KStacksColor(k) => BwTruth::MonochromeStacks {
            k,
            colors: config.colors.clone(),
        },
    }
}

/// Lay a configuration down as a goalless problem: blocks declared in stack
/// order, `ontable`/`on`/`clear` facts per stack, and an empty hand.
pub fn build_problem(name: &str, config: &BlockConfiguration) -> Problem {
    let mut init = Vec::new();
    for stack in &config.stacks {
        init.push(Atom::new("ontable", vec![stack[0].clone()]));
        for pair in stack.windows(2) {
            init.push(Atom::new("on", vec![pair[1].clone(), pair[0].clone()]));
        }
        init.push(Atom::new("clear", vec![stack.last().unwrap().clone()]));
    }
    init.push(Atom::new("handempty", Vec::new()));
    Problem {
        name: name.to_string(),
        domain_name: "blocksworld".to_string(),
        objects: config.blocks().into_iter().map(TypedName::untyped).collect(),
        display_names: BTreeMap::new(),
        init,
        goal: None,
    }
}

/// Recover the stack layout encoded in a problem's init facts. Bottoms are
/// the `ontable` blocks in declaration order; each stack follows `on` edges
/// upward.
pub fn stacks_from_init(problem: &Problem) -> Vec<Vec<String>> {
    let mut above: BTreeMap<&str, &str> = BTreeMap::new();
    for atom in &problem.init {
        if atom.predicate == "on" && atom.args.len() == 2 {
            above.insert(atom.args[1].as_str(), atom.args[0].as_str());
        }
    }
    let mut stacks = Vec::new();
    for atom in &problem.init {
        if atom.predicate != "ontable" || atom.args.len() != 1 {
            continue;
        }
        let mut stack = vec![atom.args[0].clone()];
        let mut cur = atom.args[0].as_str();
        while let Some(&next) = above.get(cur) {
            stack.push(next.to_string());
            cur = next;
        }
        stacks.push(stack);
    }
    stacks
}

/// Render stacks as a goal formula: per stack `ontable`, the `on` chain
/// bottom-up, then `clear`, with the whole per-stack run reversed under
/// [`PredicateOrder::ClearFirst`].
pub(crate) fn describe_stacks(stacks: &[Vec<String>], order: PredicateOrder) -> GoalFormula {
    let mut literals = Vec::new();
    for stack in stacks {
        let mut lits = Vec::with_capacity(stack.len() + 1);
        lits.push(Literal::pos(Atom::new("ontable", vec![stack[0].clone()])));
        for pair in stack.windows(2) {
            lits.push(Literal::pos(Atom::new(
                "on",
                vec![pair[1].clone(), pair[0].clone()],
            )));
        }
        lits.push(Literal::pos(Atom::new(
            "clear",
            vec![stack.last().unwrap().clone()],
        )));
        if order == PredicateOrder::ClearFirst {
            lits.reverse();
        }
        literals.extend(lits);
    }
    GoalFormula::new(literals)
}

/// Split `blocks` into `k` single-colored groups: color classes in first
/// appearance order, then singletons peeled off the first splittable class
/// until the count reaches `k`.
pub(crate) fn monochrome_partition(
    blocks: &[String],
    colors: &BTreeMap<String, String>,
    k: usize,
) -> Vec<Vec<String>> {
    let mut classes: Vec<(String, Vec<String>)> = Vec::new();
    for block in blocks {
        let color = colors
            .get(block)
            .cloned()
            .unwrap_or_else(|| block.split("_block").next().unwrap_or(block).to_string());
        match classes.iter_mut().find(|(c, _)| *c == color) {
            Some((_, members)) => members.push(block.clone()),
            None => classes.push((color, vec![block.clone()])),
        }
    }
    let mut groups: Vec<Vec<String>> = classes.into_iter().map(|(_, m)| m).collect();
    assert!(
        groups.len() <= k && k <= blocks.len(),
        "{k} monochrome stacks are unreachable from {} colors over {} blocks",
        groups.len(),
        blocks.len()
    );
    while groups.len() < k {
        let idx = groups
            .iter()
            .position(|g| g.len() >= 2)
            .expect("a splittable group exists while groups < k <= blocks");
        let moved = groups[idx].pop().unwrap();
        groups.push(vec![moved]);
    }
    groups
}

/// The target stacks for a task over a given block order. For layout tasks
/// this echoes the described configuration; for count tasks it builds one
/// concrete satisfying arrangement from the blocks in order.
fn target_stacks(kind: BwTaskKind, truth: &BwTruth, blocks: &[String]) -> Vec<Vec<String>> {
    match (kind, truth) {
        (BwTaskKind::ExplicitStacks | BwTaskKind::ExplicitStacksII(_), BwTruth::Stacks { config }) => {
            config.stacks.clone()
        }
        (BwTaskKind::BlockAmbiguity, BwTruth::ColorStacks { config }) => config.stacks.clone(),
        (BwTaskKind::NBlocks(n), _) => {
            let height = (n as usize).min(blocks.len());
            vec![blocks[..height].to_vec()]
        }
        (BwTaskKind::KStacks(k), _) => {
            let per = blocks.len() / k as usize;
            blocks.chunks(per.max(1)).map(|c| c.to_vec()).collect()
        }
        (BwTaskKind::PrimeStack, BwTruth::PrimeHeights { primes }) => {
            let p = *primes.last().expect("a feasible prime height") as usize;
            vec![blocks[..p.min(blocks.len())].to_vec()]
        }
        (BwTaskKind::KStacksColor(k), BwTruth::MonochromeStacks { colors, .. }) => {
            monochrome_partition(blocks, colors, k as usize)
        }
        (kind, _) => panic!("mismatched truth record for task {}", kind.family().name()),
    }
}

/// One satisfying stack arrangement for an instance, in canonical block
/// order. This is what the goal printer and the list-form answers share.
pub fn canonical_stacks(instance: &TaskInstance) -> Vec<Vec<String>> {
    let TaskKind::Blocksworld(kind) = instance.task else {
        panic!("canonical_stacks called on a non-stacking instance");
    };
    let Truth::Blocksworld(truth) = &instance.truth else {
        panic!("instance {} carries a foreign truth record", instance.id);
    };
    let problem = parse_problem(&instance.problem_pddl, crate::blocksworld::domain())
        .expect("stored problem text always parses");
    let blocks: Vec<String> = problem.objects.iter().map(|o| o.name.clone()).collect();
    target_stacks(kind, truth, &blocks)
}

/// The goal a perfect translator would emit for an instance.
pub fn canonical_goal(instance: &TaskInstance) -> GoalFormula {
    describe_stacks(&canonical_stacks(instance), PredicateOrder::OntableFirst)
}

/// Generate one example problem/instruction/goal triple of the same family.
/// `used_ks` keeps stack-count examples from repeating a K when the divisor
/// pool allows variety across shots.
fn gen_example(
    family: BwFamily,
    direction: Option<Direction>,
    size: usize,
    name: &str,
    order: PredicateOrder,
    used_ks: &mut Vec<u32>,
    rng: &mut ChaCha8Rng,
) -> Result<ShotExample, GenError> {
    let (config, kind) = match family {
        BwFamily::KStacks => {
            let config = sample_configuration(size, ColorPolicy::Unique, rng)?;
            let divisors = nontrivial_divisors(size as u32);
            if divisors.is_empty() {
                return Err(GenError::InfeasibleTask(format!(
                    "{size} blocks admit no equal split into several stacks"
                )));
            }
            let fresh: Vec<u32> = divisors
                .iter()
                .copied()
                .filter(|k| !used_ks.contains(k))
                .collect();
            let pool = if fresh.is_empty() { &divisors } else { &fresh };
            let k = pool[rng.gen_range(0..pool.len())];
            used_ks.push(k);
            (config, BwTaskKind::KStacks(k))
        }
        _ => sample_task(family, direction, size, rng)?,
    };
    let instruction = render_instruction(kind, &config, rng);
    let problem = build_problem(name, &config);
    let truth = truth_for(kind, &config, size as u32);
    let blocks = config.blocks();
    let goal = describe_stacks(&target_stacks(kind, &truth, &blocks), order);
    Ok(ShotExample {
        problem_pddl: print_problem(&problem),
        instruction,
        goal_pddl: print_goal(&goal),
    })
}

fn instance_id(family: BwFamily, direction: Option<Direction>, size: u32, index: u32) -> String {
    match direction {
        Some(dir) => format!("{}-{}-n{:02}-i{:04}", family.name(), dir.short(), size, index),
        None => format!("{}-n{:02}-i{:04}", family.name(), size, index),
    }
}

fn gen_instance(
    family: BwFamily,
    direction: Option<Direction>,
    size: u32,
    index: u32,
    options: &BwGenOptions,
) -> Result<TaskInstance, GenError> {
    let dir_tag = direction.map(Direction::short).unwrap_or("na");
    let label = format!("{}|{}|{}|{}", family.name(), dir_tag, size, index);
    let seed = derive_seed(options.seed, &label);
    let mut rng = rng_from_seed(seed);

    let id = instance_id(family, direction, size, index);
    let (config, kind) = sample_task(family, direction, size as usize, &mut rng)?;
    let instruction = render_instruction(kind, &config, &mut rng);
    let problem_pddl = print_problem(&build_problem(&id, &config));
    let truth = truth_for(kind, &config, size);

    let example_size = options.example_size.unwrap_or(size) as usize;
    let mut examples = Vec::with_capacity(options.shots as usize);
    let mut used_ks = Vec::new();
    for j in 0..options.shots {
        let mut ex_rng = rng_from_seed(derive_seed(seed, &format!("example|{j}")));
        examples.push(gen_example(
            family,
            direction,
            example_size,
            &format!("{id}-ex{}", j + 1),
            options.example_order,
            &mut used_ks,
            &mut ex_rng,
        )?);
    }

    Ok(TaskInstance {
        id,
        task: TaskKind::Blocksworld(kind),
        size,
        instruction,
        problem_pddl,
        examples,
        truth: Truth::Blocksworld(truth),
        seed,
    })
}

/// Generate `per_size` instances per entry of `sizes` for one task family.
///
/// For the direction-split family, `direction: None` generates both
/// directions back to back; other families ignore the argument. Instances
/// are seeded individually, so any sub-range regenerates identically.
pub fn generate_instances(
    family: BwFamily,
    direction: Option<Direction>,
    sizes: &[u32],
    per_size: u32,
    options: &BwGenOptions,
) -> Result<Vec<TaskInstance>, GenError> {
    let directions: Vec<Option<Direction>> = match (family, direction) {
        (BwFamily::ExplicitStacksII, None) => vec![
            Some(Direction::BottomToTop),
            Some(Direction::TopToBottom),
        ],
        (BwFamily::ExplicitStacksII, Some(d)) => vec![Some(d)],
        _ => vec![None],
    };
    let mut out = Vec::new();
    for dir in directions {
        for &size in sizes {
            for index in 0..per_size {
                out.push(gen_instance(family, dir, size, index, options)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocksworld::VERBS;

    fn opts(seed: u64) -> BwGenOptions {
        BwGenOptions {
            seed,
            ..BwGenOptions::default()
        }
    }

    #[test]
    fn default_matrix_counts_match_published_totals() {
        let options = BwGenOptions {
            shots: 0,
            ..opts(7)
        };
        let mut total = 0;
        for family in BwFamily::ALL {
            let n = generate_instances(
                family,
                None,
                family.default_sizes(),
                family.default_per_size(),
                &options,
            )
            .unwrap()
            .len();
            let expected = match family {
                BwFamily::ExplicitStacks => 300,
                BwFamily::ExplicitStacksII => 600,
                BwFamily::BlockAmbiguity => 200,
                BwFamily::NBlocks => 300,
                BwFamily::KStacks => 300,
                BwFamily::PrimeStack => 200,
                BwFamily::KStacksColor => 200,
            };
            assert_eq!(n, expected, "{}", family.name());
            total += n;
        }
        assert_eq!(total, 2100);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_instances(BwFamily::KStacks, None, &[8], 5, &opts(11)).unwrap();
        let b = generate_instances(BwFamily::KStacks, None, &[8], 5, &opts(11)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(
                serde_json::to_string(x).unwrap(),
                serde_json::to_string(y).unwrap()
            );
        }
    }

    #[test]
    fn seeds_differ_per_instance_and_direction() {
        let all =
            generate_instances(BwFamily::ExplicitStacksII, None, &[4], 3, &opts(3)).unwrap();
        assert_eq!(all.len(), 6);
        let mut seeds: Vec<u64> = all.iter().map(|i| i.seed).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 6, "every instance gets its own seed");
        assert!(all[0].id.contains("-btt-") && all[3].id.contains("-ttb-"));
    }

    #[test]
    fn problems_parse_and_recover_their_stacks() {
        for instance in
            generate_instances(BwFamily::ExplicitStacks, None, &[4, 8, 12], 4, &opts(5)).unwrap()
        {
            let problem =
                parse_problem(&instance.problem_pddl, crate::blocksworld::domain()).unwrap();
            let Truth::Blocksworld(BwTruth::Stacks { config }) = &instance.truth else {
                panic!("wrong truth variant");
            };
            assert_eq!(stacks_from_init(&problem), config.stacks);
            assert!(problem.goal.is_none(), "problems are emitted goalless");
        }
    }

    #[test]
    fn instructions_open_with_a_known_verb() {
        for instance in
            generate_instances(BwFamily::NBlocks, None, &[4], 20, &opts(23)).unwrap()
        {
            let first = instance.instruction.split_whitespace().next().unwrap();
            let lowered = first.to_lowercase();
            assert!(
                VERBS.iter().any(|v| lowered == *v) || first == "Using",
                "unexpected opener in {:?}",
                instance.instruction
            );
        }
    }

    #[test]
    fn stack_count_parameters_are_nontrivial_divisors() {
        for instance in
            generate_instances(BwFamily::KStacks, None, &[12], 60, &opts(2)).unwrap()
        {
            let TaskKind::Blocksworld(BwTaskKind::KStacks(k)) = instance.task else {
                panic!("wrong task kind");
            };
            assert!([2, 3, 4, 6].contains(&k), "k={k} is not a divisor of 12");
        }
    }

    #[test]
    fn stack_count_examples_prefer_fresh_parameters() {
        let options = BwGenOptions {
            shots: 2,
            ..opts(9)
        };
        for instance in
            generate_instances(BwFamily::KStacks, None, &[8], 30, &options).unwrap()
        {
            let ks: Vec<&str> = instance
                .examples
                .iter()
                .map(|e| {
                    if e.instruction.contains(" two ") {
                        "2"
                    } else {
                        "4"
                    }
                })
                .collect();
            assert_ne!(ks[0], ks[1], "two shots over 8 blocks cover both divisors");
        }
    }

    #[test]
    fn color_group_counts_stay_in_range() {
        for instance in
            generate_instances(BwFamily::KStacksColor, None, &[8, 12], 30, &opts(13)).unwrap()
        {
            let TaskKind::Blocksworld(BwTaskKind::KStacksColor(k)) = instance.task else {
                panic!("wrong task kind");
            };
            assert!(k >= 2 && k <= instance.size / 2);
            let Truth::Blocksworld(BwTruth::MonochromeStacks { colors, .. }) = &instance.truth
            else {
                panic!("wrong truth variant");
            };
            let distinct: std::collections::BTreeSet<&String> = colors.values().collect();
            assert!(distinct.len() as u32 <= k, "more colors than stacks");
        }
    }

    #[test]
    fn monochrome_partition_splits_to_exactly_k() {
        let blocks: Vec<String> = ["a", "b", "c", "d", "e"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let colors: BTreeMap<String, String> = [
            ("a", "red"),
            ("b", "red"),
            ("c", "red"),
            ("d", "blue"),
            ("e", "blue"),
        ]
        .iter()
        .map(|(b, c)| (b.to_string(), c.to_string()))
        .collect();
        let groups = monochrome_partition(&blocks, &colors, 3);
        assert_eq!(groups.len(), 3);
        for group in &groups {
            let mut cs: Vec<&String> = group.iter().map(|b| &colors[b]).collect();
            cs.dedup();
            assert_eq!(cs.len(), 1, "group {group:?} mixes colors");
        }
        let mut all: Vec<String> = groups.into_iter().flatten().collect();
        all.sort();
        assert_eq!(all, {
            let mut b = blocks.clone();
            b.sort();
            b
        });
    }

    #[test]
    fn example_sizes_follow_the_instance_by_default() {
        let inst =
            &generate_instances(BwFamily::ExplicitStacks, None, &[12], 1, &opts(1)).unwrap()[0];
        let ex = parse_problem(&inst.examples[0].problem_pddl, crate::blocksworld::domain())
            .unwrap();
        assert_eq!(ex.objects.len(), 12);

        let fixed = BwGenOptions {
            example_size: Some(4),
            ..opts(1)
        };
        let inst =
            &generate_instances(BwFamily::ExplicitStacks, None, &[12], 1, &fixed).unwrap()[0];
        let ex = parse_problem(&inst.examples[0].problem_pddl, crate::blocksworld::domain())
            .unwrap();
        assert_eq!(ex.objects.len(), 4);
    }

    #[test]
    fn clear_first_examples_reverse_each_stack() {
        let options = BwGenOptions {
            example_order: PredicateOrder::ClearFirst,
            ..opts(4)
        };
        let inst =
            &generate_instances(BwFamily::ExplicitStacks, None, &[8], 1, &options).unwrap()[0];
        let goal = crate::pddl::parse_goal(&inst.examples[0].goal_pddl).unwrap();
        assert_eq!(
            goal.literals[0].atom.predicate, "clear",
            "clear-first goals lead with clear"
        );
        assert_eq!(goal.literals.last().unwrap().atom.predicate, "ontable");
    }

    #[test]
    fn prime_table_is_correct_for_benchmark_sizes() {
        assert_eq!(primes_up_to(4), vec![2, 3]);
        assert_eq!(primes_up_to(8), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(12), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn instance_records_roundtrip_through_json() {
        for family in BwFamily::ALL {
            let sizes = &family.default_sizes()[..1];
            let inst = &generate_instances(family, None, sizes, 1, &opts(6)).unwrap()[0];
            let json = serde_json::to_string(inst).unwrap();
            let back: TaskInstance = serde_json::from_str(&json).unwrap();
            assert_eq!(
                serde_json::to_string(&back).unwrap(),
                json,
                "{} record drifted through serde",
                family.name()
            );
        }
    }
}
