//! Shared records: task instances, few-shot examples, verdicts, and the
//! JSONL shapes they serialize to.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alfred::{AlfredTaskKind, AlfredTruth};
use crate::blocksworld::{BwFamily, BwTaskKind, BwTruth, Direction};
use crate::pddl::GoalFormula;

/// Failures while sampling benchmark content.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    /// More distinct colors were requested than the palette holds.
    #[error("palette exhausted: {requested} distinct colors requested, palette has {palette}")]
    PaletteExhausted { requested: usize, palette: usize },
    /// The task parameters admit no valid instance (e.g. no nontrivial
    /// divisor for an equal-height split).
    #[error("task is infeasible: {0}")]
    InfeasibleTask(String),
    /// A premise could not be established within the retry budget.
    #[error("gave up after {attempts} attempts: {what}")]
    RetryExceeded { what: String, attempts: u32 },
}

/// What family of benchmark a task belongs to, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Blocksworld(BwTaskKind),
    Alfred(AlfredTaskKind),
}

impl TaskKind {
    /// The stable task name used in ids, JSONL, and reports.
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Blocksworld(k) => k.family().name(),
            TaskKind::Alfred(k) => k.name(),
        }
    }

    /// The listing direction, for the one family that has one.
    pub fn direction(self) -> Option<Direction> {
        match self {
            TaskKind::Blocksworld(k) => k.direction(),
            TaskKind::Alfred(_) => None,
        }
    }
}

/// One few-shot example: a problem, its instruction, and the goal a perfect
/// translator would produce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotExample {
    pub problem_pddl: String,
    pub instruction: String,
    pub goal_pddl: String,
}

/// Task-specific context a verifier needs to judge a goal, serialized next
/// to each instance so verdicts are recomputable from the JSONL alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Truth {
    Blocksworld(BwTruth),
    Alfred(AlfredTruth),
}

/// One benchmark instance.
///
/// Everything here regenerates byte-identically from `(task, seed)`; the
/// serialized form is one JSONL object per instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRecord", into = "InstanceRecord")]
pub struct TaskInstance {
    pub id: String,
    pub task: TaskKind,
    /// Block count for stacking tasks; object count for household scenes.
    pub size: u32,
    pub instruction: String,
    pub problem_pddl: String,
    pub examples: Vec<ShotExample>,
    pub truth: Truth,
    pub seed: u64,
}

impl TaskInstance {
    /// The domain file this instance's problem references.
    pub fn domain_text(&self) -> &'static str {
        match self.task {
            TaskKind::Blocksworld(_) => crate::blocksworld::DOMAIN_TEXT,
            TaskKind::Alfred(_) => crate::alfred::DOMAIN_TEXT,
        }
    }

    /// The parsed domain this instance's problem references.
    pub fn domain(&self) -> &'static crate::pddl::Domain {
        match self.task {
            TaskKind::Blocksworld(_) => crate::blocksworld::domain(),
            TaskKind::Alfred(_) => crate::alfred::domain(),
        }
    }
}

/// Grade a goal text against any instance, routing to the verifier for its
/// benchmark family.
pub fn evaluate(goal_text: &str, instance: &TaskInstance) -> Verdict {
    match instance.task {
        TaskKind::Blocksworld(_) => crate::blocksworld::evaluate_goal_text(goal_text, instance),
        TaskKind::Alfred(_) => crate::alfred::evaluate_goal_text(goal_text, instance),
    }
}

/// The ground-truth goal a perfect translator would emit for any instance.
pub fn canonical_goal(instance: &TaskInstance) -> GoalFormula {
    match instance.task {
        TaskKind::Blocksworld(_) => crate::blocksworld::canonical_goal(instance),
        TaskKind::Alfred(_) => crate::alfred::canonical_goal(instance),
    }
}

/// Which pipeline stage (if any) a goal failed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCategory {
    None,
    DomainSyntax,
    Physical,
    ConstraintViolation,
}

impl ErrorCategory {
    pub fn name(self) -> &'static str {
        match self {
            ErrorCategory::None => "none",
            ErrorCategory::DomainSyntax => "domain_syntax",
            ErrorCategory::Physical => "physical",
            ErrorCategory::ConstraintViolation => "constraint_violation",
        }
    }
}

/// The outcome of grading one predicted goal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: String,
    /// Passed under relaxed stack acceptance (table-seated or clear-topped).
    #[serde(rename = "loose")]
    pub loose_pass: bool,
    /// Passed under full acceptance (table-seated and clear-topped).
    #[serde(rename = "strict")]
    pub strict_pass: bool,
    /// First failing stage; `none` exactly when the strict check passed.
    pub error: ErrorCategory,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Verdict {
    pub fn pass(id: impl Into<String>, loose: bool, strict: bool) -> Verdict {
        Verdict {
            id: id.into(),
            loose_pass: loose,
            strict_pass: strict,
            error: ErrorCategory::None,
            detail: None,
        }
    }

    pub fn fail(
        id: impl Into<String>,
        loose: bool,
        error: ErrorCategory,
        detail: impl Into<String>,
    ) -> Verdict {
        Verdict {
            id: id.into(),
            loose_pass: loose,
            strict_pass: false,
            error,
            detail: Some(detail.into()),
        }
    }
}

/// The flat JSONL shape instances serialize through.
#[derive(Serialize, Deserialize, Clone)]
struct InstanceRecord {
    id: String,
    task: String,
    size: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    direction: Option<String>,
    instruction: String,
    problem_pddl: String,
    examples: Vec<ShotExample>,
    truth: Truth,
    seed: u64,
}

impl From<TaskInstance> for InstanceRecord {
    fn from(i: TaskInstance) -> InstanceRecord {
        InstanceRecord {
            id: i.id,
            task: i.task.name().to_string(),
            size: i.size,
            direction: i.task.direction().map(|d| d.name().to_string()),
            instruction: i.instruction,
            problem_pddl: i.problem_pddl,
            examples: i.examples,
            truth: i.truth,
            seed: i.seed,
        }
    }
}

impl TryFrom<InstanceRecord> for TaskInstance {
    type Error = String;

    fn try_from(r: InstanceRecord) -> Result<TaskInstance, String> {
        let task = if let Some(family) = BwFamily::from_name(&r.task) {
            let kind = match (family, &r.truth) {
                (BwFamily::ExplicitStacks, _) => BwTaskKind::ExplicitStacks,
                (BwFamily::ExplicitStacksII, _) => {
                    let name = r
                        .direction
                        .as_deref()
                        .ok_or_else(|| format!("instance {}: missing direction", r.id))?;
                    let dir = Direction::from_name(name)
                        .ok_or_else(|| format!("instance {}: bad direction `{name}`", r.id))?;
                    BwTaskKind::ExplicitStacksII(dir)
                }
                (BwFamily::BlockAmbiguity, _) => BwTaskKind::BlockAmbiguity,
                (BwFamily::NBlocks, Truth::Blocksworld(BwTruth::StackHeight { n })) => {
                    BwTaskKind::NBlocks(*n)
                }
                (BwFamily::KStacks, Truth::Blocksworld(BwTruth::StackCount { k })) => {
                    BwTaskKind::KStacks(*k)
                }
                (BwFamily::PrimeStack, _) => BwTaskKind::PrimeStack,
                (
                    BwFamily::KStacksColor,
                    Truth::Blocksworld(BwTruth::MonochromeStacks { k, .. }),
                ) => BwTaskKind::KStacksColor(*k),
                (f, _) => {
                    return Err(format!(
                        "instance {}: truth does not match task `{}`",
                        r.id,
                        f.name()
                    ))
                }
            };
            TaskKind::Blocksworld(kind)
        } else if let Some(kind) = AlfredTaskKind::from_name(&r.task) {
            TaskKind::Alfred(kind)
        } else {
            return Err(format!("instance {}: unknown task `{}`", r.id, r.task));
        };
        Ok(TaskInstance {
            id: r.id,
            task,
            size: r.size,
            instruction: r.instruction,
            problem_pddl: r.problem_pddl,
            examples: r.examples,
            truth: r.truth,
            seed: r.seed,
        })
    }
}
