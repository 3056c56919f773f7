//! Knuth–Yao DDG-tree sampling: the classical baseline for randomness cost.
//!
//! A discrete distribution generating (DDG) tree turns a stream of fair coin
//! flips into samples of a target distribution truncated to `P` bits. Outcome
//! `i` receives integer mass `m_i ≈ p_i·2^P`, and gets a leaf at depth `d`
//! exactly when bit `P−d` of `m_i` is set; internal nodes fill the rest of
//! each level. The expected number of flips `E` then satisfies the classic
//! sandwich `H ≤ E < H + 2` (entropies of the truncated distribution), with
//! equality at the bottom exactly for dyadic distributions — this is the
//! yardstick against which basis-changing budgets are compared.
//!
//! Construction is fully deterministic: masses are floored, the rounding
//! leftover goes to the most likely outcome (ties to the lowest index), and
//! leaves occupy the leftmost slots of each level in ascending outcome
//! order.

use std::collections::VecDeque;

use crate::entropy::ProbDist;
use crate::error::{Error, Result};

/// Largest supported precision: `2^53` is the last power of two at which
/// `p·2^P` is still computed exactly enough for deterministic flooring.
pub const MAX_PRECISION_BITS: u32 = 53;

/// A source of (ideally fair) bits; `None` means the source is exhausted.
pub trait BitSource {
    /// The next bit, or `None` when no more bits are available.
    fn next_bit(&mut self) -> Option<bool>;
}

/// A finite, replayable bit source backed by a slice.
#[derive(Debug, Clone)]
pub struct SliceBitSource<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> SliceBitSource<'a> {
    /// Wraps a slice of bits.
    pub fn new(bits: &'a [bool]) -> Self {
        Self { bits, pos: 0 }
    }

    /// Bits handed out so far.
    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl BitSource for SliceBitSource<'_> {
    fn next_bit(&mut self) -> Option<bool> {
        let b = self.bits.get(self.pos).copied();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }
}

/// An inexhaustible bit source driven by a closure (e.g. an RNG), counting
/// the bits it hands out.
pub struct FnBitSource<F: FnMut() -> bool> {
    f: F,
    drawn: u64,
}

impl<F: FnMut() -> bool> FnBitSource<F> {
    /// Wraps a bit-producing closure.
    pub fn new(f: F) -> Self {
        Self { f, drawn: 0 }
    }

    /// Bits handed out so far.
    pub fn drawn(&self) -> u64 {
        self.drawn
    }
}

impl<F: FnMut() -> bool> BitSource for FnBitSource<F> {
    fn next_bit(&mut self) -> Option<bool> {
        self.drawn += 1;
        Some((self.f)())
    }
}

#[derive(Debug, Clone, Copy)]
enum DdgNode {
    Leaf(u32),
    Internal { zero: u32, one: u32 },
}

/// A built DDG tree.
#[derive(Debug, Clone)]
pub struct DdgTree {
    precision_bits: u32,
    num_outcomes: usize,
    units: Vec<u64>,
    nodes: Vec<DdgNode>,
}

/// Builds the DDG tree of `dist` truncated to `precision_bits` bits.
///
/// The distribution is renormalized exactly, each probability is floored to
/// an integer mass in units of `2^{−P}`, and the leftover (strictly less
/// than `num_outcomes` units) is assigned to the most likely outcome, ties
/// to the lowest index. Outcomes whose mass truncates to zero are never
/// sampled; if *every* outcome truncates to zero the precision is rejected.
pub fn build_tree(dist: &ProbDist, precision_bits: u32) -> Result<DdgTree> {
    if precision_bits == 0 || precision_bits > MAX_PRECISION_BITS {
        return Err(Error::PrecisionOutOfRange {
            got: precision_bits,
            max: MAX_PRECISION_BITS,
        });
    }
    let sum: f64 = dist.probs().iter().sum();
    let scale = (1u64 << precision_bits) as f64;
    let mut units: Vec<u64> = dist
        .probs()
        .iter()
        .map(|&p| ((p / sum) * scale).floor() as u64)
        .collect();
    let total: u64 = units.iter().sum();
    if total == 0 {
        return Err(Error::PrecisionTooSmall);
    }
    // Give the flooring leftover to the most likely outcome (lowest index on
    // ties). Rounding of the renormalized probabilities can also overshoot
    // by a few units at high precision; the correction is signed for that
    // reason.
    let argmax = dist
        .probs()
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.partial_cmp(b).unwrap().then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("distributions are non-empty");
    let capacity = 1i128 << precision_bits;
    let diff = capacity - i128::from(total);
    let adjusted = i128::from(units[argmax]) + diff;
    debug_assert!(adjusted > 0, "argmax always keeps positive mass");
    units[argmax] = adjusted as u64;

    // Leaf queues per depth, ascending outcome order within each depth.
    let p = precision_bits;
    let mut queues: Vec<VecDeque<u32>> = vec![VecDeque::new(); p as usize + 1];
    for (i, &u) in units.iter().enumerate() {
        for d in 0..=p {
            if (u >> (p - d)) & 1 == 1 {
                queues[d as usize].push_back(i as u32);
            }
        }
    }
    debug_assert_eq!(
        queues
            .iter()
            .enumerate()
            .map(|(d, q)| (q.len() as u128) << (p as usize - d))
            .sum::<u128>(),
        1u128 << p,
        "masses satisfy the Kraft equality by construction"
    );

    let mut nodes = Vec::new();
    build_node(&mut nodes, &mut queues, 0, p as usize);
    Ok(DdgTree {
        precision_bits,
        num_outcomes: dist.len(),
        units,
        nodes,
    })
}

/// Depth-first construction; leaves claim the leftmost slots of each level
/// because same-depth nodes are visited left to right.
fn build_node(
    nodes: &mut Vec<DdgNode>,
    queues: &mut [VecDeque<u32>],
    depth: usize,
    max_depth: usize,
) -> u32 {
    let id = nodes.len() as u32;
    if let Some(outcome) = queues[depth].pop_front() {
        nodes.push(DdgNode::Leaf(outcome));
        return id;
    }
    assert!(
        depth < max_depth,
        "Kraft equality leaves no unfinished branch at max depth"
    );
    nodes.push(DdgNode::Internal { zero: 0, one: 0 });
    let zero = build_node(nodes, queues, depth + 1, max_depth);
    let one = build_node(nodes, queues, depth + 1, max_depth);
    nodes[id as usize] = DdgNode::Internal { zero, one };
    id
}

impl DdgTree {
    /// The precision `P` the masses were truncated to.
    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Number of outcomes of the original distribution.
    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    /// Integer outcome masses in units of `2^{−P}`; they sum to `2^P`.
    pub fn masses(&self) -> &[u64] {
        &self.units
    }

    /// Total node count (internal nodes plus leaves).
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// `(depth, outcome)` of every leaf in left-to-right order.
    pub fn leaves(&self) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        let mut stack = vec![(0u32, 0u32)];
        while let Some((id, depth)) = stack.pop() {
            match self.nodes[id as usize] {
                DdgNode::Leaf(o) => out.push((depth, o as usize)),
                DdgNode::Internal { zero, one } => {
                    stack.push((one, depth + 1));
                    stack.push((zero, depth + 1));
                }
            }
        }
        out
    }
}

/// Expected fair flips per sample: `Σ_leaves depth·2^{−depth}`.
pub fn expected_flips(tree: &DdgTree) -> f64 {
    let p = tree.precision_bits;
    tree.units
        .iter()
        .map(|&u| {
            (0..=p)
                .filter(|&d| (u >> (p - d)) & 1 == 1)
                .map(|d| f64::from(d) * 0.5f64.powi(d as i32))
                .sum::<f64>()
        })
        .sum()
}

/// Draws one sample by walking the tree: bit 0 takes the first child, bit 1
/// the second, until a leaf is reached.
pub fn sample(tree: &DdgTree, bits: &mut dyn BitSource) -> Result<usize> {
    let mut node = 0u32;
    loop {
        match tree.nodes[node as usize] {
            DdgNode::Leaf(outcome) => return Ok(outcome as usize),
            DdgNode::Internal { zero, one } => {
                let b = bits.next_bit().ok_or(Error::BitSourceExhausted)?;
                node = if b { one } else { zero };
            }
        }
    }
}

/// Renders the tree as indented text, one node per line, zero-child first.
pub fn render_text(tree: &DdgTree) -> String {
    let mut out = String::new();
    render_node(tree, 0, 0, &mut out);
    out
}

fn render_node(tree: &DdgTree, id: u32, depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    match tree.nodes[id as usize] {
        DdgNode::Leaf(o) => {
            out.push_str(&format!("leaf depth={depth} outcome={o}\n"));
        }
        DdgNode::Internal { zero, one } => {
            out.push_str("node\n");
            render_node(tree, zero, depth + 1, out);
            render_node(tree, one, depth + 1, out);
        }
    }
}
