//! Digital search trees: construction from explicit bit strings,
//! random generation under the fair-coin model, protected-node and leaf
//! counting, and deterministic Monte Carlo estimation.
//!
//! Insertion routes each item from the root by its bits — `0` goes
//! left, `1` goes right — consuming one bit per level until an empty
//! slot receives the item. The random model replaces stored bits with
//! fair coin flips; equivalently, after the root takes one item the
//! remaining `n − 1` split `Binomial(n−1, 1/2)` between the subtrees.
//! Both readings are implemented ([`BuildMode`]) and produce the same
//! shape distribution.
//!
//! A node is `k`-protected when its minimum distance to a descendant
//! leaf is at least `k`; a leaf has distance 0 to itself, so `k = 0`
//! counts every node and `k = 1` the non-leaves.

use crate::{Error, Rational, Result};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{Float, One};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// One insertable record: optional label plus routing bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitString {
    /// Display name carried through to the tree node.
    pub label: Option<String>,
    /// Routing bits, most significant first; `false` routes left.
    pub bits: Vec<bool>,
}

impl BitString {
    /// Builds from a text of `'0'`/`'1'` characters; `None` when any
    /// other character appears.
    pub fn from_text(label: Option<&str>, bits: &str) -> Option<BitString> {
        let mut parsed = Vec::with_capacity(bits.len());
        for c in bits.chars() {
            match c {
                '0' => parsed.push(false),
                '1' => parsed.push(true),
                _ => return None,
            }
        }
        Some(BitString { label: label.map(String::from), bits: parsed })
    }
}

#[derive(Clone, Debug)]
struct TreeNode {
    label: Option<String>,
    left: Option<u32>,
    right: Option<u32>,
}

/// A digital search tree in insertion order.
///
/// Nodes live in an arena indexed by insertion rank; the root, when
/// present, is index 0, and every child index exceeds its parent's.
#[derive(Clone, Debug, Default)]
pub struct DstTree {
    nodes: Vec<TreeNode>,
}

impl DstTree {
    /// Number of nodes (equals the number of inserted items).
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the tree holds no nodes at all.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Root index, when the tree is non-empty.
    pub fn root(&self) -> Option<usize> {
        if self.nodes.is_empty() {
            None
        } else {
            Some(0)
        }
    }

    /// Label of the node at `index`, when one was supplied.
    pub fn label(&self, index: usize) -> Option<&str> {
        self.nodes[index].label.as_deref()
    }

    /// Left child of the node at `index`.
    pub fn left(&self, index: usize) -> Option<usize> {
        self.nodes[index].left.map(|i| i as usize)
    }

    /// Right child of the node at `index`.
    pub fn right(&self, index: usize) -> Option<usize> {
        self.nodes[index].right.map(|i| i as usize)
    }
}

/// How [`build_random`] realizes the fair-coin model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuildMode {
    /// Insert items one by one, drawing each routing bit lazily.
    BitStream,
    /// Generate only the shape: one item to the root, the rest split
    /// binomially between the subtrees, recursively. No bit storage and
    /// `O(n)` nodes touched once, so this is the simulation default.
    Split,
}

/// What a Monte Carlo trial measures on each random tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    /// Number of nodes at distance at least `k` from every descendant
    /// leaf.
    KProtected(u32),
    /// Number of childless nodes.
    Leaves,
}

/// Moment summary of a Monte Carlo run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SummaryStats {
    /// Number of independent trees measured.
    pub trials: u64,
    /// Sample mean of the statistic.
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// `sqrt(variance / trials)`.
    pub std_error: f64,
    /// Lower end of the 95% normal-approximation interval.
    pub ci_low: f64,
    /// Upper end of the 95% normal-approximation interval.
    pub ci_high: f64,
    /// Seed the run was keyed on.
    pub seed: u64,
}

impl SummaryStats {
    /// Builds the summary from exact integer accumulators.
    ///
    /// `sum` and `sum_sq` are the plain and squared totals of the
    /// per-trial counts. Integer accumulation is exactly associative,
    /// so any partitioning of trials across threads reproduces the
    /// serial result bit for bit; floating point enters only here, in
    /// one rounding per reported field.
    pub fn from_sums(trials: u64, seed: u64, sum: u128, sum_sq: u128) -> SummaryStats {
        assert!(trials >= 1, "a summary needs at least one trial");
        let mean = sum as f64 / trials as f64;
        let variance = if trials < 2 {
            0.0
        } else {
            // trials·sum_sq − sum² ≥ 0 by the Cauchy–Schwarz inequality.
            let num = u128::from(trials) * sum_sq - sum * sum;
            let den = u128::from(trials) * u128::from(trials - 1);
            num as f64 / den as f64
        };
        let std_error = Float::sqrt(variance / trials as f64);
        let half = 1.96 * std_error;
        SummaryStats {
            trials,
            mean,
            variance,
            std_error,
            ci_low: mean - half,
            ci_high: mean + half,
            seed,
        }
    }
}

/// Builds the deterministic tree the given records induce.
///
/// The first record takes the root without consuming bits; each later
/// record is routed from the root, one bit per level, until an empty
/// slot receives it. An empty input list gives the empty tree.
///
/// Fails with [`Error::BitsExhausted`] when a record runs out of bits
/// before reaching an empty slot — the sign of too-short strings or a
/// duplicated prefix.
pub fn build_from_strings(inputs: &[BitString]) -> Result<DstTree> {
    let mut tree = DstTree::default();
    for (item, input) in inputs.iter().enumerate() {
        if tree.nodes.is_empty() {
            tree.nodes.push(TreeNode { label: input.label.clone(), left: None, right: None });
            continue;
        }
        let mut pos = 0usize;
        let mut depth = 0usize;
        loop {
            let Some(&bit) = input.bits.get(depth) else {
                return Err(Error::BitsExhausted { item, label: input.label.clone() });
            };
            depth += 1;
            let next = if bit { tree.nodes[pos].right } else { tree.nodes[pos].left };
            match next {
                Some(child) => pos = child as usize,
                None => {
                    let id = tree.nodes.len() as u32;
                    tree.nodes.push(TreeNode {
                        label: input.label.clone(),
                        left: None,
                        right: None,
                    });
                    let parent = &mut tree.nodes[pos];
                    if bit {
                        parent.right = Some(id);
                    } else {
                        parent.left = Some(id);
                    }
                    break;
                }
            }
        }
    }
    Ok(tree)
}

/// Lazily drawn fair bits backed by a block RNG.
struct BitSource {
    rng: ChaCha8Rng,
    buffer: u64,
    remaining: u8,
}

impl BitSource {
    fn new(rng: ChaCha8Rng) -> Self {
        BitSource { rng, buffer: 0, remaining: 0 }
    }

    fn next_bit(&mut self) -> bool {
        if self.remaining == 0 {
            self.buffer = self.rng.next_u64();
            self.remaining = 64;
        }
        let bit = self.buffer & 1 == 1;
        self.buffer >>= 1;
        self.remaining -= 1;
        bit
    }
}

fn bit_stream_build(n: usize, rng: ChaCha8Rng) -> DstTree {
    let mut tree = DstTree::default();
    let mut source = BitSource::new(rng);
    for _ in 0..n {
        if tree.nodes.is_empty() {
            tree.nodes.push(TreeNode { label: None, left: None, right: None });
            continue;
        }
        let mut pos = 0usize;
        loop {
            let bit = source.next_bit();
            let next = if bit { tree.nodes[pos].right } else { tree.nodes[pos].left };
            match next {
                Some(child) => pos = child as usize,
                None => {
                    let id = tree.nodes.len() as u32;
                    tree.nodes.push(TreeNode { label: None, left: None, right: None });
                    let parent = &mut tree.nodes[pos];
                    if bit {
                        parent.right = Some(id);
                    } else {
                        parent.left = Some(id);
                    }
                    break;
                }
            }
        }
    }
    tree
}

/// Exact `Binomial(m, 1/2)` draw: population count of `m` fair bits.
fn binomial_half(rng: &mut ChaCha8Rng, m: usize) -> usize {
    let mut remaining = m;
    let mut ones = 0usize;
    while remaining > 0 {
        let take = remaining.min(64);
        let mut word = rng.next_u64();
        if take < 64 {
            word &= (1u64 << take) - 1;
        }
        ones += word.count_ones() as usize;
        remaining -= take;
    }
    ones
}

fn split_build(n: usize, rng: &mut ChaCha8Rng) -> DstTree {
    let mut tree = DstTree::default();
    if n == 0 {
        return tree;
    }
    tree.nodes.push(TreeNode { label: None, left: None, right: None });
    // (parent, goes-left, subtree size); LIFO order is part of the
    // deterministic seed-to-tree mapping.
    let mut stack: Vec<(u32, bool, usize)> = Vec::new();
    let first_left = binomial_half(rng, n - 1);
    stack.push((0, false, n - 1 - first_left));
    stack.push((0, true, first_left));
    while let Some((parent, goes_left, size)) = stack.pop() {
        if size == 0 {
            continue;
        }
        let id = tree.nodes.len() as u32;
        tree.nodes.push(TreeNode { label: None, left: None, right: None });
        let parent_node = &mut tree.nodes[parent as usize];
        if goes_left {
            parent_node.left = Some(id);
        } else {
            parent_node.right = Some(id);
        }
        let to_left = binomial_half(rng, size - 1);
        stack.push((id, false, size - 1 - to_left));
        stack.push((id, true, to_left));
    }
    tree
}

/// Generates a random tree of `n` nodes under the fair-coin model.
///
/// Both modes are deterministic functions of `(n, rng_seed, mode)` and
/// induce the same shape distribution; they differ in which reading of
/// the model they mechanize.
pub fn build_random(n: usize, rng_seed: u64, mode: BuildMode) -> DstTree {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    match mode {
        BuildMode::BitStream => bit_stream_build(n, rng),
        BuildMode::Split => split_build(n, &mut rng),
    }
}

/// Minimum distance from each node to a descendant leaf.
///
/// Children carry larger indices than parents, so one reverse pass
/// resolves every node after its children.
fn min_leaf_distances(tree: &DstTree) -> Vec<u32> {
    let mut dist = alloc::vec![0u32; tree.nodes.len()];
    for i in (0..tree.nodes.len()).rev() {
        let node = &tree.nodes[i];
        dist[i] = match (node.left, node.right) {
            (None, None) => 0,
            (Some(l), None) => dist[l as usize] + 1,
            (None, Some(r)) => dist[r as usize] + 1,
            (Some(l), Some(r)) => dist[l as usize].min(dist[r as usize]) + 1,
        };
    }
    dist
}

/// Number of nodes whose minimum distance to a descendant leaf is at
/// least `k`. `k = 0` counts every node; `k = 1` the non-leaves.
pub fn count_k_protected(tree: &DstTree, k: u32) -> usize {
    if k == 0 {
        return tree.nodes.len();
    }
    min_leaf_distances(tree).iter().filter(|&&d| d >= k).count()
}

/// Indices (in insertion order) of the nodes counted by
/// [`count_k_protected`].
pub fn k_protected_nodes(tree: &DstTree, k: u32) -> Vec<usize> {
    let dist = min_leaf_distances(tree);
    (0..tree.nodes.len()).filter(|&i| dist[i] >= k).collect()
}

/// Number of childless nodes.
pub fn count_leaves(tree: &DstTree) -> usize {
    tree.nodes.iter().filter(|n| n.left.is_none() && n.right.is_none()).count()
}

/// Measures one statistic on the `trial_index`-th random tree of the
/// run keyed by `seed`.
///
/// Per-trial randomness is the RNG stream `trial_index` under the seed,
/// so the value depends only on `(n, seed, trial_index, statistic)` —
/// trials may be evaluated in any order or in parallel and re-aggregated
/// through [`SummaryStats::from_sums`] without changing anything.
pub fn monte_carlo_trial(n: usize, seed: u64, trial_index: u64, statistic: Statistic) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    let tree = split_build(n, &mut rng);
    match statistic {
        Statistic::KProtected(k) => count_k_protected(&tree, k) as u64,
        Statistic::Leaves => count_leaves(&tree) as u64,
    }
}

/// Mean, variance and 95% interval of a statistic over independent
/// random trees; deterministic given `(n, trials, seed, statistic)`.
pub fn monte_carlo(n: usize, trials: u64, seed: u64, statistic: Statistic) -> SummaryStats {
    assert!(trials >= 1, "at least one trial is required");
    let mut sum = 0u128;
    let mut sum_sq = 0u128;
    for trial in 0..trials {
        let value = u128::from(monte_carlo_trial(n, seed, trial, statistic));
        sum += value;
        sum_sq += value * value;
    }
    SummaryStats::from_sums(trials, seed, sum, sum_sq)
}

/// Joint outcome summary of one random subtree: saturated root
/// distance, protected count, leaf count.
type Outcome = (u8, u64, u64);

/// Exhaustive outcome distribution of the split model for sizes
/// `0..=n_max`, tracking the `k`-protected count. Identical summaries
/// are merged, which keeps the state space polynomial; intended for
/// small sizes where it serves as a brute-force reference.
fn split_outcome_table(n_max: usize, k: u32) -> Vec<Vec<(Outcome, Rational)>> {
    assert!(k >= 1 && k <= 64 && n_max <= 12, "exhaustive reference covers small cases only");
    let k_sat = k as u8;
    let mut table: Vec<Vec<(Outcome, Rational)>> = Vec::with_capacity(n_max + 1);
    // The empty tree: its distance slot is never read by combinations.
    table.push(alloc::vec![((0, 0, 0), Rational::one())]);
    for s in 1..=n_max {
        let mut merged: BTreeMap<Outcome, Rational> = BTreeMap::new();
        for left_size in 0..s {
            let right_size = s - 1 - left_size;
            let split_prob = Rational::new(
                crate::exact_sequence::binomial((s - 1) as u64, left_size as i64),
                BigInt::one() << (s - 1),
            );
            for (lo, lp) in &table[left_size] {
                for (ro, rp) in &table[right_size] {
                    let child_min = match (left_size > 0, right_size > 0) {
                        (false, false) => None,
                        (true, false) => Some(lo.0),
                        (false, true) => Some(ro.0),
                        (true, true) => Some(lo.0.min(ro.0)),
                    };
                    let raw = match child_min {
                        None => 0,
                        Some(d) => d + 1,
                    };
                    let sat = raw.min(k_sat);
                    let count = lo.1 + ro.1 + u64::from(sat >= k_sat);
                    let leaves = if s == 1 { 1 } else { lo.2 + ro.2 };
                    let p = &split_prob * lp * rp;
                    merged
                        .entry((sat, count, leaves))
                        .and_modify(|acc| *acc += &p)
                        .or_insert(p);
                }
            }
        }
        table.push(merged.into_iter().collect());
    }
    table
}

/// Exact distribution of the `k`-protected count over random trees of
/// `n` nodes, as `(count, probability)` pairs in increasing count
/// order. Brute-force reference for small `n`.
pub fn enumerate_k_protected(n: usize, k: u32) -> Vec<(u64, Rational)> {
    if k == 0 {
        return alloc::vec![(n as u64, Rational::one())];
    }
    let table = split_outcome_table(n, k);
    let mut merged: BTreeMap<u64, Rational> = BTreeMap::new();
    for ((_, count, _), p) in table[n].iter().cloned() {
        merged.entry(count).and_modify(|acc| *acc += &p).or_insert(p);
    }
    merged.into_iter().collect()
}

/// Exact distribution of the leaf count over random trees of `n`
/// nodes. Brute-force reference for small `n`.
pub fn enumerate_leaves(n: usize) -> Vec<(u64, Rational)> {
    if n == 0 {
        return alloc::vec![(0, Rational::one())];
    }
    let table = split_outcome_table(n, 1);
    let mut merged: BTreeMap<u64, Rational> = BTreeMap::new();
    for ((_, _, leaves), p) in table[n].iter().cloned() {
        merged.entry(leaves).and_modify(|acc| *acc += &p).or_insert(p);
    }
    merged.into_iter().collect()
}
