//! The relation graph: physical consistency checking for stacking goals.
//!
//! Goal literals induce a directed graph from supporting to supported
//! things: `(on a b)` draws b -> a, `(ontable a)` draws TABLE -> a, and
//! `(clear a)` draws a -> AIR. A goal is physically realizable exactly when
//! no node other than TABLE has two outgoing edges, no node other than AIR
//! has two incoming ones, and the block-to-block edges are acyclic.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::pddl::GoalFormula;

/// A physically impossible stacking requirement.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{detail}")]
pub struct PhysicalError {
    pub detail: String,
}

impl PhysicalError {
    fn new(detail: impl Into<String>) -> Self {
        PhysicalError {
            detail: detail.into(),
        }
    }
}

/// The support structure a goal describes, after consistency checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationGraph {
    /// block -> the block directly on top of it
    pub above: BTreeMap<String, String>,
    /// block -> the block directly underneath it
    pub below: BTreeMap<String, String>,
    /// blocks asserted to sit on the table
    pub on_table: BTreeSet<String>,
    /// blocks asserted to have nothing on them
    pub clear: BTreeSet<String>,
    /// every block mentioned by an on/ontable/clear literal
    pub blocks: BTreeSet<String>,
}

/// Build the relation graph for a goal, rejecting physically impossible
/// combinations. `holding`/`handempty` literals and negative literals do not
/// contribute edges, but a goal that both asserts and negates the same atom
/// is rejected outright.
pub fn build_relation_graph(goal: &GoalFormula) -> Result<RelationGraph, PhysicalError> {
    for lit in &goal.literals {
        if !lit.positive && goal.literals.iter().any(|l| l.positive && l.atom == lit.atom) {
            return Err(PhysicalError::new(format!(
                "goal both asserts and negates {}",
                lit.atom
            )));
        }
    }

    let mut g = RelationGraph::default();
    let mut seen: BTreeSet<&crate::pddl::Atom> = BTreeSet::new();
    for atom in goal.positive_atoms() {
        if !seen.insert(atom) {
            continue; // duplicate literals collapse
        }
        match atom.predicate.as_str() {
            "on" => {
                let (top, bottom) = (&atom.args[0], &atom.args[1]);
                g.blocks.insert(top.clone());
                g.blocks.insert(bottom.clone());
                if let Some(prev) = g.above.get(bottom) {
                    return Err(PhysicalError::new(format!(
                        "two blocks (`{prev}`, `{top}`) sit directly on `{bottom}`"
                    )));
                }
                if g.clear.contains(bottom) {
                    return Err(PhysicalError::new(format!(
                        "`{bottom}` is clear but also carries `{top}`"
                    )));
                }
                if let Some(prev) = g.below.get(top) {
                    return Err(PhysicalError::new(format!(
                        "`{top}` sits directly on both `{prev}` and `{bottom}`"
                    )));
                }
                if g.on_table.contains(top) {
                    return Err(PhysicalError::new(format!(
                        "`{top}` is on the table but also on `{bottom}`"
                    )));
                }
                g.above.insert(bottom.clone(), top.clone());
                g.below.insert(top.clone(), bottom.clone());
            }
            "ontable" => {
                let b = &atom.args[0];
                g.blocks.insert(b.clone());
                if let Some(under) = g.below.get(b) {
                    return Err(PhysicalError::new(format!(
                        "`{b}` is on the table but also on `{under}`"
                    )));
                }
                g.on_table.insert(b.clone());
            }
            "clear" => {
                let b = &atom.args[0];
                g.blocks.insert(b.clone());
                if let Some(over) = g.above.get(b) {
                    return Err(PhysicalError::new(format!(
                        "`{b}` is clear but also carries `{over}`"
                    )));
                }
                g.clear.insert(b.clone());
            }
            // arm state says nothing about stack structure
            _ => {}
        }
    }

    if let Some(cycle) = find_cycle(&g.above) {
        return Err(PhysicalError::new(format!(
            "blocks form a cycle: {}",
            cycle.join(" -> ")
        )));
    }
    Ok(g)
}

/// Find a cycle in the block-to-block successor map, if any. Returns the
/// cycle closed back onto its first node for readable reporting.
fn find_cycle(above: &BTreeMap<String, String>) -> Option<Vec<String>> {
    // 0 = unvisited, 1 = on the current path, 2 = finished
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    for start in above.keys() {
        if state.get(start.as_str()).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut path: Vec<&str> = Vec::new();
        let mut node: &str = start;
        loop {
            match state.get(node).copied().unwrap_or(0) {
                1 => {
                    // found: slice path from first occurrence of node
                    let pos = path.iter().position(|n| *n == node).unwrap();
                    let mut cycle: Vec<String> =
                        path[pos..].iter().map(|s| s.to_string()).collect();
                    cycle.push(node.to_string());
                    return Some(cycle);
                }
                2 => break,
                _ => {
                    state.insert(node, 1);
                    path.push(node);
                    match above.get(node) {
                        Some(next) => node = next,
                        None => break,
                    }
                }
            }
        }
        for n in path {
            state.insert(n, 2);
        }
    }
    None
}
