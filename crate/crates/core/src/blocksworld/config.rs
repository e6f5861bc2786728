//! Sampling initial block configurations.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instance::GenError;

/// The full color vocabulary blocks are drawn from.
pub const COLOR_PALETTE: [&str; 12] = [
    "red", "blue", "green", "yellow", "violet", "black", "white", "orange", "magenta", "cyan",
    "gold", "brown",
];

/// Whether two blocks may share a color.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorPolicy {
    /// Colors are drawn without replacement; at most 12 blocks.
    Unique,
    /// Colors are drawn with replacement; same-color blocks get index
    /// suffixes.
    Repeatable,
}

/// An arrangement of named, colored blocks into stacks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockConfiguration {
    /// Each inner list is one stack, bottom to top.
    pub stacks: Vec<Vec<String>>,
    /// Block name -> color name.
    pub colors: BTreeMap<String, String>,
}

impl BlockConfiguration {
    /// All block names, flattened stack by stack (bottom to top). This is
    /// the canonical enumeration order used for object declarations.
    pub fn blocks(&self) -> Vec<String> {
        self.stacks.iter().flatten().cloned().collect()
    }

    pub fn num_blocks(&self) -> usize {
        self.stacks.iter().map(Vec::len).sum()
    }

    /// Color of a block; panics if the block is unknown (configurations are
    /// closed worlds).
    pub fn color_of(&self, block: &str) -> &str {
        &self.colors[block]
    }

    /// How many blocks carry `color`.
    pub fn color_count(&self, color: &str) -> usize {
        self.colors.values().filter(|c| c.as_str() == color).count()
    }

    /// The stacks as color sequences (bottom to top).
    pub fn color_stacks(&self) -> Vec<Vec<String>> {
        self.stacks
            .iter()
            .map(|s| s.iter().map(|b| self.colors[b].clone()).collect())
            .collect()
    }
}

/// Sample stack structure over `n` anonymous positions: each block in turn
/// goes either onto the table (opening a new stack) or onto a uniformly
/// chosen clear top, all options equally likely.
pub(crate) fn sample_structure(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let mut stacks: Vec<Vec<usize>> = Vec::new();
    for block in 0..n {
        let choice = rng.gen_range(0..=stacks.len());
        if choice == 0 {
            stacks.push(vec![block]);
        } else {
            stacks[choice - 1].push(block);
        }
    }
    stacks
}

/// Name blocks from their colors: a color used once names its block
/// `<color>_block`; repeated colors get 1-based suffixes in block order
/// (`red_block_1`, `red_block_2`, ...).
pub(crate) fn names_for_colors(colors: &[String]) -> Vec<String> {
    let mut totals: BTreeMap<&str, usize> = BTreeMap::new();
    for c in colors {
        *totals.entry(c.as_str()).or_default() += 1;
    }
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    colors
        .iter()
        .map(|c| {
            if totals[c.as_str()] == 1 {
                format!("{c}_block")
            } else {
                let i = seen.entry(c.as_str()).or_default();
                *i += 1;
                format!("{c}_block_{i}")
            }
        })
        .collect()
}

/// Assemble a configuration from anonymous structure plus per-block colors.
pub(crate) fn assemble(structure: &[Vec<usize>], colors: &[String]) -> BlockConfiguration {
    let names = names_for_colors(colors);
    let stacks = structure
        .iter()
        .map(|s| s.iter().map(|i| names[*i].clone()).collect())
        .collect();
    let color_map = names
        .iter()
        .cloned()
        .zip(colors.iter().cloned())
        .collect();
    BlockConfiguration {
        stacks,
        colors: color_map,
    }
}

fn sample_colors(
    n: usize,
    policy: ColorPolicy,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<String>, GenError> {
    match policy {
        ColorPolicy::Unique => {
            if n > COLOR_PALETTE.len() {
                return Err(GenError::PaletteExhausted {
                    requested: n,
                    palette: COLOR_PALETTE.len(),
                });
            }
            // partial Fisher-Yates: first n entries of a shuffled palette
            let mut pool: Vec<&str> = COLOR_PALETTE.to_vec();
            let mut picked = Vec::with_capacity(n);
            for i in 0..n {
                let j = rng.gen_range(i..pool.len());
                pool.swap(i, j);
                picked.push(pool[i].to_string());
            }
            Ok(picked)
        }
        ColorPolicy::Repeatable => Ok((0..n)
            .map(|_| COLOR_PALETTE[rng.gen_range(0..COLOR_PALETTE.len())].to_string())
            .collect()),
    }
}

/// Sample a full configuration: structure by sequential insertion, colors by
/// the given policy, names derived from the colors.
pub fn sample_configuration(
    num_blocks: usize,
    policy: ColorPolicy,
    rng: &mut ChaCha8Rng,
) -> Result<BlockConfiguration, GenError> {
    let structure = sample_structure(num_blocks, rng);
    let colors = sample_colors(num_blocks, policy, rng)?;
    Ok(assemble(&structure, &colors))
}

/// Sample a configuration guaranteed to contain a repeated color: resample
/// up to 20 times, then force a repeat by recoloring the second block to
/// match the first.
pub fn sample_ambiguous_configuration(
    num_blocks: usize,
    rng: &mut ChaCha8Rng,
) -> Result<BlockConfiguration, GenError> {
    assert!(num_blocks >= 2, "ambiguity needs at least two blocks");
    let mut structure = sample_structure(num_blocks, rng);
    let mut colors = sample_colors(num_blocks, ColorPolicy::Repeatable, rng)?;
    for _ in 0..20 {
        let mut sorted = colors.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(assemble(&structure, &colors));
        }
        structure = sample_structure(num_blocks, rng);
        colors = sample_colors(num_blocks, ColorPolicy::Repeatable, rng)?;
    }
    colors[1] = colors[0].clone();
    Ok(assemble(&structure, &colors))
}
