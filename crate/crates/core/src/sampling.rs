//! Uniform samplers for both models and Monte Carlo estimates.
//!
//! Shapes grow by Rémy's procedure: a uniform node of the current tree is
//! replaced by a new internal node whose children are that node and a fresh
//! leaf, on a uniform side. Connectives are fair coins. Model G then draws
//! every leaf label uniformly among `2k` literals; model E draws a canonical
//! labelling: the number of variables `p` with weight `{n brace p} 2^(n-p)`,
//! a uniform partition of the leaves into `p` blocks, and fair polarities on
//! every leaf that is not the first of its block.
//!
//! Every random stream is ChaCha20 keyed by the seed, with the stream number
//! selecting an independent substream.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{stirling_row, ModelTag};
use crate::error::{domain, Result};
use crate::quotient::TreeClassKey;
use crate::tree::{AndOrTree, Connective, FlatTree, Literal, Shape};

pub type Seed = u64;

/// Recorded in every report.
pub const GENERATOR: &str = "ChaCha20 (rand_chacha 0.9), substream = shard index";

/// Samples drawn by one shard of [`estimate`].
pub const SHARD_SIZE: u64 = 1 << 16;

/// The generator of substream `stream` under `seed`.
pub fn rng(seed: Seed, stream: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

const NONE: u32 = u32::MAX;

/// A plane binary tree grown by Rémy's procedure, with connectives.
#[derive(Clone, Debug, Default)]
pub struct RemyTree {
    left: Vec<u32>,
    right: Vec<u32>,
    parent: Vec<u32>,
    connective: Vec<Connective>,
    root: u32,
}

impl RemyTree {
    pub fn sample<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Self {
        let mut t = RemyTree::default();
        t.resample(n, rng);
        t
    }

    /// Draws a new tree in place, reusing the buffers.
    pub fn resample<R: Rng + ?Sized>(&mut self, n: u32, rng: &mut R) {
        assert!(n >= 1, "trees have at least one leaf");
        let nodes = 2 * n as usize - 1;
        for v in [&mut self.left, &mut self.right, &mut self.parent] {
            v.clear();
            v.reserve(nodes);
        }
        self.left.push(NONE);
        self.right.push(NONE);
        self.parent.push(NONE);
        self.root = 0;
        for _ in 1..n {
            let count = self.left.len() as u32;
            let x = rng.random_range(0..count);
            let leaf_right = rng.random::<bool>();
            let u = count;
            let w = count + 1;
            let p = self.parent[x as usize];
            let (l, r) = if leaf_right { (x, w) } else { (w, x) };
            self.left.extend([l, NONE]);
            self.right.extend([r, NONE]);
            self.parent.extend([p, u]);
            self.parent[x as usize] = u;
            if p == NONE {
                self.root = u;
            } else if self.left[p as usize] == x {
                self.left[p as usize] = u;
            } else {
                self.right[p as usize] = u;
            }
        }
        self.connective.clear();
        self.connective.extend((0..nodes).map(|_| {
            if rng.random::<bool>() {
                Connective::Or
            } else {
                Connective::And
            }
        }));
    }

    pub fn size(&self) -> usize {
        self.left.len().div_ceil(2)
    }

    /// Writes the tree into `out` with `label(i)` on the `i`-th leaf from the
    /// left.
    pub fn flatten_into(&self, out: &mut FlatTree, mut label: impl FnMut(usize) -> Literal) {
        out.clear();
        let mut stack: Vec<(u32, bool)> = vec![(self.root, false)];
        let mut done: Vec<u32> = Vec::new();
        let mut leaves = 0;
        while let Some((v, expanded)) = stack.pop() {
            let (l, r) = (self.left[v as usize], self.right[v as usize]);
            if l == NONE {
                done.push(out.push_leaf(label(leaves)));
                leaves += 1;
            } else if expanded {
                let ri = done.pop().unwrap();
                let li = done.pop().unwrap();
                done.push(out.push_node(self.connective[v as usize], li, ri));
            } else {
                stack.push((v, true));
                stack.push((r, false));
                stack.push((l, false));
            }
        }
    }

    pub fn flatten(&self, label: impl FnMut(usize) -> Literal) -> FlatTree {
        let mut out = FlatTree::with_capacity(self.left.len());
        self.flatten_into(&mut out, label);
        out
    }

    pub fn shape(&self) -> Shape {
        self.flatten(|_| Literal::pos(1)).shape()
    }
}

pub fn sample_shape<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<Shape> {
    if n == 0 {
        return domain("shapes have at least one leaf");
    }
    Ok(RemyTree::sample(n, rng).shape())
}

fn random_literal<R: Rng + ?Sized>(k: u32, rng: &mut R) -> Literal {
    let i = rng.random_range(0..2 * k);
    Literal::from_index(i)
}

/// A uniform tree of model G as an arena.
pub fn sample_flat_g<R: Rng + ?Sized>(n: u32, k: u32, rng: &mut R) -> Result<FlatTree> {
    if n == 0 || k == 0 {
        return domain("sampling needs n >= 1 and k >= 1");
    }
    let shape = RemyTree::sample(n, rng);
    Ok(shape.flatten(|_| random_literal(k, rng)))
}

pub fn sample_tree_g<R: Rng + ?Sized>(n: u32, k: u32, rng: &mut R) -> Result<AndOrTree> {
    Ok(sample_flat_g(n, k, rng)?.to_tree())
}

/// Uniform integer in `0..bound` by rejection on whole bit strings.
fn uniform_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero());
    let bits = bound.bits();
    let words = bits.div_ceil(64) as usize;
    let top = bits - 64 * (words as u64 - 1);
    let top_mask = if top == 64 { !0u64 } else { (1u64 << top) - 1 };
    loop {
        let mut digits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
        digits[words - 1] &= top_mask;
        let x = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        if x < *bound {
            return x;
        }
    }
}

/// Precomputed weights for canonical labellings of `n` leaves with at most
/// `k` variables.
#[derive(Clone, Debug)]
pub struct LabellingSampler {
    n: u32,
    /// `cumulative[p-1]` is the number of labellings with at most `p` variables.
    cumulative: Vec<BigUint>,
    rows: Vec<Arc<Vec<BigUint>>>,
}

impl LabellingSampler {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 || k == 0 {
            return domain("sampling needs n >= 1 and k >= 1");
        }
        let top = stirling_row(n);
        let mut acc = BigUint::zero();
        let cumulative = (1..=k.min(n))
            .map(|p| {
                acc += &top[p as usize] << (n - p) as usize;
                acc.clone()
            })
            .collect();
        let rows = (0..=n).map(stirling_row).collect();
        Ok(LabellingSampler { n, cumulative, rows })
    }

    /// Draws the number of variables.
    pub fn blocks<R: RngCore + ?Sized>(&self, rng: &mut R) -> u32 {
        let x = uniform_below(self.cumulative.last().unwrap(), rng);
        self.cumulative.partition_point(|c| *c <= x) as u32 + 1
    }

    /// A uniform partition of the leaves into `p` blocks as a restricted
    /// growth string from 0.
    pub fn partition<R: RngCore + ?Sized>(&self, p: u32, rng: &mut R) -> Vec<u32> {
        // Leaf i (from the last) either opens the block whose smallest leaf it
        // is, or joins one of the q blocks of the leaves before it. Blocks are
        // numbered by the rank of their smallest leaf.
        let mut out = vec![0u32; self.n as usize];
        let mut q = p;
        for i in (1..=self.n).rev() {
            let opens = if q == i {
                true
            } else if q == 0 {
                unreachable!("block count exhausted")
            } else {
                let total = &self.rows[i as usize][q as usize];
                uniform_below(total, rng) < self.rows[i as usize - 1][q as usize - 1]
            };
            out[i as usize - 1] = if opens {
                q -= 1;
                q
            } else {
                rng.random_range(0..q)
            };
        }
        out
    }

    /// A uniform canonical labelling: variables from 1 and polarities.
    pub fn labelling<R: RngCore + ?Sized>(&self, rng: &mut R) -> (Vec<u32>, Vec<bool>) {
        let p = self.blocks(rng);
        let blocks = self.partition(p, rng);
        let mut seen = 0u32;
        let mut vars = Vec::with_capacity(blocks.len());
        let mut pols = Vec::with_capacity(blocks.len());
        for b in blocks {
            vars.push(b + 1);
            if b == seen {
                seen += 1;
                pols.push(true);
            } else {
                pols.push(rng.random::<bool>());
            }
        }
        (vars, pols)
    }
}

/// A uniform class of model E, as the arena of its representative.
pub fn sample_flat_e<R: RngCore + ?Sized>(labels: &LabellingSampler, rng: &mut R) -> FlatTree {
    let shape = RemyTree::sample(labels.n, rng);
    let (vars, pols) = labels.labelling(rng);
    shape.flatten(|i| Literal {
        var: vars[i],
        positive: pols[i],
    })
}

pub fn sample_class_e<R: RngCore + ?Sized>(n: u32, k: u32, rng: &mut R) -> Result<TreeClassKey> {
    let labels = LabellingSampler::new(n, k)?;
    let shape = RemyTree::sample(n, rng).shape();
    let (vars, pols) = labels.labelling(rng);
    TreeClassKey::new(shape, vars, pols)
}

/// Draws uniform objects of either model as arenas.
pub struct ModelSampler {
    n: u32,
    k: u32,
    labels: Option<LabellingSampler>,
    shape: RemyTree,
}

impl ModelSampler {
    pub fn new(n: u32, k: u32, model: ModelTag) -> Result<Self> {
        if n == 0 || k == 0 {
            return domain("sampling needs n >= 1 and k >= 1");
        }
        let labels = match model {
            ModelTag::G => None,
            ModelTag::E => Some(LabellingSampler::new(n, k)?),
        };
        Ok(ModelSampler {
            n,
            k,
            labels,
            shape: RemyTree::default(),
        })
    }

    pub fn sample_into<R: RngCore>(&mut self, out: &mut FlatTree, rng: &mut R) {
        self.shape.resample(self.n, rng);
        match &self.labels {
            None => {
                let k = self.k;
                self.shape.flatten_into(out, |_| random_literal(k, rng));
            }
            Some(ls) => {
                let (vars, pols) = ls.labelling(rng);
                self.shape.flatten_into(out, |i| Literal {
                    var: vars[i],
                    positive: pols[i],
                });
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub samples: u64,
    pub hits: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: Seed,
}

/// Standard normal quantile at 0.975.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95%.
pub fn wilson(hits: u64, samples: u64) -> (f64, f64) {
    assert!(samples > 0 && hits <= samples);
    let n = samples as f64;
    let p = hits as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

impl EstimateReport {
    pub fn new(hits: u64, samples: u64, seed: Seed) -> Self {
        let (ci_low, ci_high) = wilson(hits, samples);
        let point = hits as f64 / samples as f64;
        EstimateReport {
            samples,
            hits,
            point,
            ci_low: ci_low.min(point),
            ci_high: ci_high.max(point),
            seed,
        }
    }
}

/// Shard sizes for `samples` draws; fixed by `samples` alone so results do
/// not depend on the number of threads.
fn shard_plan(samples: u64) -> Vec<u64> {
    let full = samples / SHARD_SIZE;
    let mut plan = vec![SHARD_SIZE; full as usize];
    if samples % SHARD_SIZE != 0 {
        plan.push(samples % SHARD_SIZE);
    }
    plan
}

/// Estimates the probability of each event on `samples` objects of the
/// model, all events read on the same draws.
pub fn estimate_events<F>(
    n: u32,
    k: u32,
    model: ModelTag,
    samples: u64,
    seed: Seed,
    events: &[F],
) -> Result<Vec<EstimateReport>>
where
    F: Fn(&FlatTree) -> bool + Sync,
{
    if samples == 0 {
        return domain("at least one sample is needed");
    }
    let proto = ModelSampler::new(n, k, model)?;
    let labels = proto.labels.clone();
    let hits = shard_plan(samples)
        .into_par_iter()
        .enumerate()
        .map(|(shard, count)| {
            let mut sampler = ModelSampler {
                n,
                k,
                labels: labels.clone(),
                shape: RemyTree::default(),
            };
            let mut r = rng(seed, shard as u64);
            let mut tree = FlatTree::default();
            let mut hits = vec![0u64; events.len()];
            for _ in 0..count {
                sampler.sample_into(&mut tree, &mut r);
                for (h, e) in hits.iter_mut().zip(events) {
                    *h += e(&tree) as u64;
                }
            }
            hits
        })
        .reduce(
            || vec![0u64; events.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
        );
    Ok(hits
        .into_iter()
        .map(|h| EstimateReport::new(h, samples, seed))
        .collect())
}

pub fn estimate(
    event: impl Fn(&FlatTree) -> bool + Sync,
    n: u32,
    k: u32,
    model: ModelTag,
    samples: u64,
    seed: Seed,
) -> Result<EstimateReport> {
    Ok(estimate_events(n, k, model, samples, seed, &[event])?.remove(0))
}

/// Draws `samples` objects and folds them shard by shard.
#[allow(clippy::too_many_arguments)]
pub fn sample_fold<T, F, M>(
    n: u32,
    k: u32,
    model: ModelTag,
    samples: u64,
    seed: Seed,
    init: impl Fn() -> T + Sync,
    fold: F,
    merge: M,
) -> Result<T>
where
    T: Send,
    F: Fn(&mut T, &FlatTree) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    let proto = ModelSampler::new(n, k, model)?;
    let labels = proto.labels.clone();
    Ok(shard_plan(samples)
        .into_par_iter()
        .enumerate()
        .map(|(shard, count)| {
            let mut sampler = ModelSampler {
                n,
                k,
                labels: labels.clone(),
                shape: RemyTree::default(),
            };
            let mut r = rng(seed, shard as u64);
            let mut tree = FlatTree::default();
            let mut acc = init();
            for _ in 0..count {
                sampler.sample_into(&mut tree, &mut r);
                fold(&mut acc, &tree);
            }
            acc
        })
        .reduce(&init, &merge))
}
