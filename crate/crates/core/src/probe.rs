//! Follow-up diagnostic queries. For each benchmark instance this module can
//! emit a small battery of domain-understanding and goal-inference probes,
//! grade free-text answers mechanically, and aggregate the grades into the
//! success/failure-conditioned delta table.
//!
//! Stacking instances get five understanding queries (object extraction,
//! color-filtered extraction, and three initial-state fact checks) plus a
//! goal-inference query that asks for the stacks as Python-style lists.
//! Household instances get the task's tailored question pair. Every expected
//! answer is stored inside the probe, so grading needs no other state.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alfred::{self, type_info, AlfredTruth, CountCondition};
use crate::blocksworld::{
    self, canonical_stacks, validate_task_constraint, BwTaskKind, BwTruth, Metric, StackSet,
};
use crate::instance::{TaskInstance, TaskKind, Truth};
use crate::pddl::{parse_goal, parse_problem, Problem, TypedName};

/// What flavor of question a probe asks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeKind {
    ObjectExtraction,
    ColorObjectExtraction,
    OnPredicate,
    OntablePredicate,
    ClearPredicate,
    AlfredDomain,
    AlfredInference,
    ListGoal,
}

impl ProbeKind {
    /// Goal-inference probes; everything else measures domain understanding.
    pub fn is_inference(self) -> bool {
        matches!(self, ProbeKind::ListGoal | ProbeKind::AlfredInference)
    }
}

/// The machine-checkable answer a probe expects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExpectedAnswer {
    /// An unordered set of object names, answered space-separated.
    Objects { objects: Vec<String> },
    /// A fact check.
    YesNo { yes: bool },
    /// A single object or receptacle name.
    Name { name: String },
    /// Stack lists, graded by the task constraint in either reading
    /// direction. Carries everything the validator needs plus one known-good
    /// arrangement.
    Stacks {
        task: BwTaskKind,
        truth: BwTruth,
        blocks: Vec<String>,
        canonical: Vec<Vec<String>>,
    },
    /// No mechanical rule exists; the grade comes from an annotation file.
    Manual,
}

/// One generated probe, self-contained and ready to serialize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeQuery {
    /// Stable id, derived from the instance id (`-du1`..`-du5`, `-gi`, ...).
    pub id: String,
    pub instance_id: String,
    pub kind: ProbeKind,
    /// The text that replaces the instruction in the prompt.
    pub query_text: String,
    pub expected: ExpectedAnswer,
}

/// A probe with its answer and grade, as logged to transcripts. `grade` is
/// `None` for manual probes that have not been annotated yet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub query: ProbeQuery,
    pub answer: String,
    pub grade: Option<u32>,
}

/// Per-instance probe scores next to the translation outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub instance_id: String,
    pub task: String,
    pub translation_success: bool,
    /// Mean of graded domain-understanding probes; `None` if none graded.
    pub domain_score: Option<f64>,
    /// Mean of graded goal-inference probes; `None` if none graded.
    pub inference_score: Option<f64>,
}

/// Build the probe battery for one instance. Stacking probes draw their
/// random fact choices from `rng`; household probes are deterministic.
pub fn generate_probes(instance: &TaskInstance, rng: &mut ChaCha8Rng) -> Vec<ProbeQuery> {
    match instance.task {
        TaskKind::Blocksworld(kind) => stacking_probes(instance, kind, rng),
        TaskKind::Alfred(_) => household_probes(instance),
    }
}

fn color_of_block(name: &str) -> &str {
    name.split("_block").next().unwrap_or(name)
}

fn probe(
    instance: &TaskInstance,
    suffix: &str,
    kind: ProbeKind,
    query_text: String,
    expected: ExpectedAnswer,
) -> ProbeQuery {
    ProbeQuery {
        id: format!("{}-{suffix}", instance.id),
        instance_id: instance.id.clone(),
        kind,
        query_text,
        expected,
    }
}

fn stacking_probes(
    instance: &TaskInstance,
    kind: BwTaskKind,
    rng: &mut ChaCha8Rng,
) -> Vec<ProbeQuery> {
    let problem = parse_problem(&instance.problem_pddl, blocksworld::domain())
        .expect("stored problem text always parses");
    let blocks: Vec<String> = problem.objects.iter().map(|o| o.name.clone()).collect();
    let mut probes = Vec::new();

    probes.push(probe(
        instance,
        "du1",
        ProbeKind::ObjectExtraction,
        "List all the objects that appear in the PDDL problem definition. \
         Split the output objects with spaces."
            .to_string(),
        ExpectedAnswer::Objects {
            objects: blocks.clone(),
        },
    ));

    let palette: Vec<&str> = {
        let set: BTreeSet<&str> = blocks.iter().map(|b| color_of_block(b)).collect();
        set.into_iter().collect()
    };
    let color = palette[rng.gen_range(0..palette.len())];
    probes.push(probe(
        instance,
        "du2",
        ProbeKind::ColorObjectExtraction,
        format!(
            "List all the objects that appear in the PDDL problem definition \
             that has the color {color}. Split the output objects with spaces."
        ),
        ExpectedAnswer::Objects {
            objects: blocks
                .iter()
                .filter(|b| color_of_block(b) == color)
                .cloned()
                .collect(),
        },
    ));

    // One `on` fact, corrupted half the time by swapping in another block.
    let on_facts: Vec<(&str, &str)> = problem
        .init
        .iter()
        .filter(|a| a.predicate == "on")
        .map(|a| (a.args[0].as_str(), a.args[1].as_str()))
        .collect();
    let (above, below, yes) = if on_facts.is_empty() {
        // Nothing is stacked, so any on-fact over distinct blocks is false.
        let pair = index::sample(rng, blocks.len(), 2);
        (
            blocks[pair.index(0)].as_str(),
            blocks[pair.index(1)].as_str(),
            false,
        )
    } else {
        let (a, b) = on_facts[rng.gen_range(0..on_facts.len())];
        if rng.gen_bool(0.5) {
            // Corrupted facts must not hold in init by accident.
            let holds = |x: &str, y: &str| on_facts.iter().any(|&(p, q)| p == x && q == y);
            let candidates: Vec<(&str, &str)> = blocks
                .iter()
                .map(String::as_str)
                .filter(|c| *c != a && *c != b)
                .flat_map(|c| [(c, b), (a, c)])
                .filter(|&(x, y)| !holds(x, y))
                .collect();
            if candidates.is_empty() {
                (a, b, true)
            } else {
                let (x, y) = candidates[rng.gen_range(0..candidates.len())];
                (x, y, false)
            }
        } else {
            (a, b, true)
        }
    };
    probes.push(probe(
        instance,
        "du3",
        ProbeKind::OnPredicate,
        format!(
            "Determine whether the {above} is on the {below} in the initial \
             state. Answer with yes or no."
        ),
        ExpectedAnswer::YesNo { yes },
    ));

    // Membership checks for `ontable` and `clear`, drawn from the satisfying
    // side or (half the time) its complement.
    for (suffix, kind, predicate, template) in [
        (
            "du4",
            ProbeKind::OntablePredicate,
            "ontable",
            "Determine whether the {} is on the table in the initial state. \
             Answer with yes or no.",
        ),
        (
            "du5",
            ProbeKind::ClearPredicate,
            "clear",
            "Determine whether there is nothing on the top of the {} in the \
             initial state. Answer with yes or no.",
        ),
    ] {
        let sat: Vec<&str> = problem
            .init
            .iter()
            .filter(|a| a.predicate == predicate)
            .map(|a| a.args[0].as_str())
            .collect();
        let unsat: Vec<&str> = blocks
            .iter()
            .map(String::as_str)
            .filter(|b| !sat.contains(b))
            .collect();
        let negate = rng.gen_bool(0.5);
        let (block, yes) = if negate && !unsat.is_empty() {
            (unsat[rng.gen_range(0..unsat.len())], false)
        } else {
            (sat[rng.gen_range(0..sat.len())], true)
        };
        probes.push(probe(
            instance,
            suffix,
            kind,
            template.replacen("{}", block, 1),
            ExpectedAnswer::YesNo { yes },
        ));
    }

    let Truth::Blocksworld(truth) = &instance.truth else {
        panic!("instance {} carries a foreign truth record", instance.id);
    };
    probes.push(probe(
        instance,
        "gi",
        ProbeKind::ListGoal,
        format!(
            "{} Write the stacks as a Python list of lists of block names \
             instead of a PDDL goal.",
            instance.instruction
        ),
        ExpectedAnswer::Stacks {
            task: kind,
            truth: truth.clone(),
            blocks,
            canonical: canonical_stacks(instance),
        },
    ));
    probes
}

fn household_probes(instance: &TaskInstance) -> Vec<ProbeQuery> {
    let problem = parse_problem(&instance.problem_pddl, alfred::domain())
        .expect("stored problem text always parses");
    let show = |name: &str| problem.display_name(name).to_string();
    let Truth::Alfred(truth) = &instance.truth else {
        panic!("instance {} carries a foreign truth record", instance.id);
    };

    let manual_gi = (
        "Write the goal specification in natural language.".to_string(),
        ExpectedAnswer::Manual,
    );
    let (du_text, du_expected, (gi_text, gi_expected)) = match truth {
        AlfredTruth::ExactGoal { goal_pddl } => {
            let goal = parse_goal(goal_pddl).expect("recorded goals parse");
            let moved = goal
                .positive_atoms()
                .find(|a| a.predicate == "inreceptacle")
                .expect("explicit goals always place something")
                .args[0]
                .clone();
            let at = problem
                .init
                .iter()
                .find_map(|a| match a.predicate.as_str() {
                    "inreceptacle" if a.args[0] == moved => Some(a.args[1].clone()),
                    "onfloor" if a.args[0] == moved => Some("floor".to_string()),
                    _ => None,
                })
                .expect("every object is placed somewhere");
            (
                format!("Where is the {}?", show(&moved)),
                ExpectedAnswer::Name { name: at },
                manual_gi,
            )
        }
        AlfredTruth::Placement {
            moved,
            target,
            synonym,
            canonical_type,
            object_case,
        } => {
            let du = format!("Is there a {synonym} in the initial state?");
            let gi = if *object_case {
                (
                    format!(
                        "Put a {synonym} on {}. Which object should we put on {}?",
                        show(target),
                        show(target)
                    ),
                    ExpectedAnswer::Name {
                        name: moved.clone(),
                    },
                )
            } else {
                let prep = type_info(canonical_type)
                    .map(|t| t.preposition)
                    .unwrap_or("in");
                (
                    format!(
                        "Put the {m} {prep} a {synonym}. Where should we put {m}?",
                        m = show(moved)
                    ),
                    ExpectedAnswer::Name {
                        name: target.clone(),
                    },
                )
            };
            (du, ExpectedAnswer::YesNo { yes: true }, gi)
        }
        AlfredTruth::NextTo {
            moved,
            target,
            target_location,
        } => (
            format!("Where is {} in the initial state?", show(target)),
            ExpectedAnswer::Name {
                name: target_location.clone(),
            },
            (
                format!(
                    "{} Where should we put {}?",
                    instance.instruction,
                    show(moved)
                ),
                ExpectedAnswer::Name {
                    name: target_location.clone(),
                },
            ),
        ),
        AlfredTruth::CorrectReceptacle {
            moved,
            receptacle,
            target_type,
            condition,
        } => {
            let count = match condition {
                CountCondition::Exactly { n: 2 } => "two",
                CountCondition::Exactly { .. } => "three",
                CountCondition::MoreThanOthers => "more",
            };
            let plural = type_info(target_type)
                .map(|t| t.plural.to_string())
                .unwrap_or_else(|| format!("{target_type}s"));
            (
                format!("Which box has {count} {plural} in the initial state?"),
                ExpectedAnswer::Name {
                    name: receptacle.clone(),
                },
                (
                    format!(
                        "{} Which object should we move the {} into?",
                        instance.instruction,
                        show(moved)
                    ),
                    ExpectedAnswer::Name {
                        name: receptacle.clone(),
                    },
                ),
            )
        }
        AlfredTruth::NestedSofa {
            moved,
            sofa,
            target_object,
            ..
        } => (
            format!("Which sofa is {} in?", show(target_object)),
            ExpectedAnswer::Name { name: sofa.clone() },
            (
                format!(
                    "Put the {m} on the sofa with {t}. Do not put it in box. \
                     Which object should we put {m} on?",
                    m = show(moved),
                    t = show(target_object)
                ),
                ExpectedAnswer::Name { name: sofa.clone() },
            ),
        ),
        AlfredTruth::CutFruits { fruits, .. } => (
            "What are the fruits?".to_string(),
            ExpectedAnswer::Objects {
                objects: fruits.clone(),
            },
            manual_gi,
        ),
        AlfredTruth::PrepareMeal { foods, .. } => (
            "What does \"prepare a meal\" mean? What are the relevant objects \
             for preparing a meal?"
                .to_string(),
            ExpectedAnswer::Objects {
                objects: foods.clone(),
            },
            manual_gi,
        ),
        AlfredTruth::IceCream { fridge, .. } => (
            "Where does the ice cream belong?".to_string(),
            ExpectedAnswer::Name {
                name: fridge.clone(),
            },
            manual_gi,
        ),
        AlfredTruth::SetTable2 {
            plates,
            cups,
            forks,
            knives,
            ..
        } => (
            "What does \"set the table\" mean? What are the relevant objects \
             for setting the table?"
                .to_string(),
            ExpectedAnswer::Objects {
                objects: plates
                    .iter()
                    .chain(cups)
                    .chain(forks)
                    .chain(knives)
                    .cloned()
                    .collect(),
            },
            manual_gi,
        ),
        AlfredTruth::CleanKitchen {
            floor_objects,
            occupied,
            ..
        } => (
            "What does \"clean up the kitchen\" mean? What are the relevant \
             objects for cleaning up the kitchen? Where to put them?"
                .to_string(),
            ExpectedAnswer::Objects {
                objects: floor_objects.iter().chain(occupied).cloned().collect(),
            },
            manual_gi,
        ),
    };

    vec![
        probe(instance, "du", ProbeKind::AlfredDomain, du_text, du_expected),
        probe(instance, "gi", ProbeKind::AlfredInference, gi_text, gi_expected),
    ]
}

fn clean_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|t| {
            t.trim_matches(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                .to_ascii_lowercase()
        })
        .filter(|t| !t.is_empty())
        .collect()
}

/// Pull the first balanced `[...]` region out of free text.
fn bracket_region(text: &str) -> Option<&str> {
    let start = text.find('[')?;
    let mut depth = 0usize;
    for (i, c) in text[start..].char_indices() {
        match c {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(&text[start..start + i + 1]);
                }
            }
            _ => {}
        }
    }
    None
}

/// Parse a `[[a, b], [c]]`-style answer into lowercased name lists. Quotes
/// around names are tolerated; anything structurally off returns `None`.
fn parse_list_answer(text: &str) -> Option<Vec<Vec<String>>> {
    let region = bracket_region(text)?;
    let inner = region.strip_prefix('[')?.strip_suffix(']')?;
    let mut stacks = Vec::new();
    let mut rest = inner.trim_start();
    while !rest.is_empty() {
        if rest.starts_with(',') {
            rest = rest[1..].trim_start();
            continue;
        }
        let sub = bracket_region(rest)?;
        if !rest.starts_with('[') {
            return None; // stray tokens between the inner lists
        }
        let body = sub.strip_prefix('[')?.strip_suffix(']')?;
        let names: Vec<String> = body
            .split(',')
            .map(|t| t.trim().trim_matches(['\'', '"']).to_ascii_lowercase())
            .filter(|t| !t.is_empty())
            .collect();
        stacks.push(names);
        rest = rest[sub.len()..].trim_start();
    }
    Some(stacks)
}

fn grade_stacks(
    task: BwTaskKind,
    truth: &BwTruth,
    blocks: &[String],
    lists: &[Vec<String>],
) -> bool {
    if lists.iter().any(|s| s.is_empty()) {
        return false;
    }
    let mut seen = BTreeSet::new();
    for block in lists.iter().flatten() {
        if !blocks.contains(block) || !seen.insert(block.clone()) {
            return false;
        }
    }
    // The stacks arrive as bare lists, so a skeletal problem carrying just
    // the object roster is enough for the constraint check.
    let problem = Problem {
        name: "probe".to_string(),
        domain_name: "blocksworld".to_string(),
        objects: blocks.iter().cloned().map(TypedName::untyped).collect(),
        display_names: BTreeMap::new(),
        init: Vec::new(),
        goal: None,
    };
    let readings = [
        lists.to_vec(),
        lists
            .iter()
            .map(|s| s.iter().rev().cloned().collect())
            .collect(),
    ];
    readings.into_iter().any(|stacks| {
        let set = StackSet {
            metric: Metric::Strict,
            stacks,
        };
        validate_task_constraint(task, truth, &set, &problem).is_ok()
    })
}

/// Grade a free-text answer against the probe's expected answer: 1 for a
/// match, 0 for anything else (including unparseable text). Manual probes
/// always grade 0 here; their real grades arrive via annotations.
pub fn grade_probe(query: &ProbeQuery, answer_text: &str) -> u32 {
    let hit = match &query.expected {
        ExpectedAnswer::Objects { objects } => {
            let want: BTreeSet<String> = objects.iter().map(|o| o.to_ascii_lowercase()).collect();
            let got: BTreeSet<String> = clean_tokens(answer_text).into_iter().collect();
            want == got
        }
        ExpectedAnswer::YesNo { yes } => match clean_tokens(answer_text).first() {
            Some(word) if word == "yes" => *yes,
            Some(word) if word == "no" => !*yes,
            _ => false,
        },
        ExpectedAnswer::Name { name } => {
            let cleaned = answer_text
                .trim()
                .trim_matches(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                .to_ascii_lowercase();
            cleaned == name.to_ascii_lowercase()
        }
        ExpectedAnswer::Stacks {
            task,
            truth,
            blocks,
            ..
        } => parse_list_answer(answer_text)
            .map(|lists| grade_stacks(*task, truth, blocks, &lists))
            .unwrap_or(false),
        ExpectedAnswer::Manual => false,
    };
    hit as u32
}

/// The grade for a record: annotations override (and are required by)
/// manual probes; everything else is graded mechanically.
pub fn grade_record(query: &ProbeQuery, answer_text: &str, annotation: Option<u32>) -> Option<u32> {
    match query.expected {
        ExpectedAnswer::Manual => annotation.map(|g| g.min(1)),
        _ => Some(grade_probe(query, answer_text)),
    }
}

/// An answer a perfect responder would give, straight from the expected
/// answer. For manual probes this is a placeholder line.
pub fn oracle_answer(query: &ProbeQuery) -> String {
    match &query.expected {
        ExpectedAnswer::Objects { objects } => objects.join(" "),
        ExpectedAnswer::YesNo { yes } => if *yes { "yes" } else { "no" }.to_string(),
        ExpectedAnswer::Name { name } => name.clone(),
        ExpectedAnswer::Stacks { canonical, .. } => render_stack_lists(canonical),
        ExpectedAnswer::Manual => "The goal is exactly what the instruction asks for.".to_string(),
    }
}

/// Render stacks the way the list-goal probe asks for them.
pub fn render_stack_lists(stacks: &[Vec<String>]) -> String {
    let inner: Vec<String> = stacks.iter().map(|s| format!("[{}]", s.join(", "))).collect();
    format!("[{}]", inner.join(", "))
}

/// Recover the stack lists a fully specified stacking goal describes, for
/// rewriting example goals into the list format. Returns `None` when the
/// text is not a complete, physically coherent goal.
pub fn goal_to_stacks(goal_pddl: &str) -> Option<Vec<Vec<String>>> {
    let goal = parse_goal(goal_pddl).ok()?;
    let graph = blocksworld::build_relation_graph(&goal).ok()?;
    let set = blocksworld::extract_stacks(&graph, Metric::Strict);
    (!set.stacks.is_empty()).then_some(set.stacks)
}

/// Fold graded records into one instance's probe scores.
pub fn probe_result(
    instance_id: &str,
    task: &str,
    translation_success: bool,
    records: &[ProbeRecord],
) -> ProbeResult {
    let mean = |inference: bool| {
        let grades: Vec<u32> = records
            .iter()
            .filter(|r| r.query.kind.is_inference() == inference)
            .filter_map(|r| r.grade)
            .collect();
        (!grades.is_empty()).then(|| grades.iter().sum::<u32>() as f64 / grades.len() as f64)
    };
    ProbeResult {
        instance_id: instance_id.to_string(),
        task: task.to_string(),
        translation_success,
        domain_score: mean(false),
        inference_score: mean(true),
    }
}

/// Choose which instances get probed. Each (task, outcome) cell contributes
/// `rate` of its members (rounded), raised to `floor` when the cell is big
/// enough; smaller cells are taken whole. Selection order is deterministic
/// for a given rng.
pub fn sample_for_probing(
    outcomes: &[(String, String, bool)],
    rate: f64,
    floor: usize,
    rng: &mut ChaCha8Rng,
) -> BTreeSet<String> {
    let mut cells: BTreeMap<(&str, bool), Vec<&str>> = BTreeMap::new();
    for (id, task, success) in outcomes {
        cells
            .entry((task.as_str(), *success))
            .or_default()
            .push(id.as_str());
    }
    let mut picked = BTreeSet::new();
    for ids in cells.values() {
        let by_rate = (ids.len() as f64 * rate).round() as usize;
        let target = by_rate.max(floor.min(ids.len())).min(ids.len());
        for i in index::sample(rng, ids.len(), target) {
            picked.insert(ids[i].to_string());
        }
    }
    picked
}

/// One task's row of the delta table. Scores are percentages; `None` cells
/// render as "-".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeDeltaRow {
    pub task: String,
    pub probed_successes: usize,
    pub probed_failures: usize,
    /// Mean domain-understanding score over successes.
    pub baseline_domain: Option<f64>,
    /// Mean goal-inference score over successes.
    pub baseline_inference: Option<f64>,
    /// Failure mean minus success mean, in percentage points.
    pub delta_domain: Option<f64>,
    pub delta_inference: Option<f64>,
}

/// The aggregated subtask analysis across all probed instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeDeltaTable {
    pub sampling_rate: f64,
    pub rows: Vec<ProbeDeltaRow>,
}

fn mean_of(scores: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let present: Vec<f64> = scores.flatten().collect();
    (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64)
}

/// Aggregate per-instance probe results into the per-task success/failure
/// comparison.
pub fn probe_delta_report(results: &[ProbeResult], sampling_rate: f64) -> ProbeDeltaTable {
    let mut by_task: BTreeMap<&str, Vec<&ProbeResult>> = BTreeMap::new();
    for r in results {
        by_task.entry(r.task.as_str()).or_default().push(r);
    }
    let rows = by_task
        .into_iter()
        .map(|(task, rs)| {
            let (succ, fail): (Vec<&ProbeResult>, Vec<&ProbeResult>) =
                rs.into_iter().partition(|r| r.translation_success);
            let pct = |v: Option<f64>| v.map(|x| x * 100.0);
            let base_dom = mean_of(succ.iter().map(|r| r.domain_score));
            let base_inf = mean_of(succ.iter().map(|r| r.inference_score));
            let fail_dom = mean_of(fail.iter().map(|r| r.domain_score));
            let fail_inf = mean_of(fail.iter().map(|r| r.inference_score));
            let delta = |f: Option<f64>, s: Option<f64>| match (f, s) {
                (Some(f), Some(s)) => Some((f - s) * 100.0),
                _ => None,
            };
            ProbeDeltaRow {
                task: task.to_string(),
                probed_successes: succ.len(),
                probed_failures: fail.len(),
                baseline_domain: pct(base_dom),
                baseline_inference: pct(base_inf),
                delta_domain: delta(fail_dom, base_dom),
                delta_inference: delta(fail_inf, base_inf),
            }
        })
        .collect();
    ProbeDeltaTable {
        sampling_rate,
        rows,
    }
}
