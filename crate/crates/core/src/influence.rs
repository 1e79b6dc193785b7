//! Reversed-graph walk influence and influence overlap.
//!
//! A page `p` influences `q` when `q` links to `p`, directly or through a
//! chain of links. The influence vector of `p` is the exact distribution of a
//! walker after `n` steps that each move to a uniformly random in-neighbor of
//! the current page. There is no random jump. A walker on a page nobody links
//! to stays where it is.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{PageId, Snapshot};
use crate::graph::IndexedGraph;
use crate::math;
use crate::time::Timestamp;
use crate::{Error, Result};

/// Default number of walk steps.
pub const DEFAULT_STEPS: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceVector {
    pub origin: PageId,
    pub steps: usize,
    pub cutoff: Timestamp,
    /// Node count of the snapshot the walk ran on.
    pub universe: usize,
    /// Nonzero probabilities sorted by page id.
    probs: Vec<(PageId, f64)>,
}

impl InfluenceVector {
    /// Builds a vector from explicit probabilities; zero entries are dropped.
    pub fn from_parts(
        origin: PageId,
        steps: usize,
        cutoff: Timestamp,
        universe: usize,
        mut probs: Vec<(PageId, f64)>,
    ) -> Self {
        probs.retain(|&(_, p)| p != 0.0);
        probs.sort_by_key(|&(id, _)| id);
        InfluenceVector {
            origin,
            steps,
            cutoff,
            universe,
            probs,
        }
    }

    pub fn probs(&self) -> &[(PageId, f64)] {
        &self.probs
    }

    pub fn get(&self, id: PageId) -> f64 {
        self.probs
            .binary_search_by_key(&id, |&(i, _)| i)
            .map(|i| self.probs[i].1)
            .unwrap_or(0.0)
    }

    pub fn support_len(&self) -> usize {
        self.probs.len()
    }
}

/// Exact `n`-step reversed-walk distribution from `origin`.
pub fn influence(s: &Snapshot, origin: PageId, steps: usize) -> Result<InfluenceVector> {
    influence_in(&s.graph(), s.cutoff(), origin, steps)
}

/// As [`influence`], reusing a prebuilt graph of the snapshot taken at `cutoff`.
pub fn influence_in(g: &IndexedGraph, cutoff: Timestamp, origin: PageId, steps: usize) -> Result<InfluenceVector> {
    let start = g.index_of(origin).ok_or(Error::UnknownNode(origin))?;
    let dense = propagate(g, start, steps);
    let probs = dense
        .iter()
        .enumerate()
        .filter(|(_, &p)| p != 0.0)
        .map(|(i, &p)| (g.ids()[i], p))
        .collect();
    Ok(InfluenceVector {
        origin,
        steps,
        cutoff,
        universe: g.node_count(),
        probs,
    })
}

fn propagate(g: &IndexedGraph, start: usize, steps: usize) -> Vec<f64> {
    let n = g.node_count();
    let mut x = vec![0.0; n];
    x[start] = 1.0;
    let mut next = vec![0.0; n];
    for _ in 0..steps {
        next.iter_mut().for_each(|v| *v = 0.0);
        for v in 0..n {
            let mass = x[v];
            if mass == 0.0 {
                continue;
            }
            let sources = g.in_neighbors(v);
            if sources.is_empty() {
                next[v] += mass;
            } else {
                let share = mass / sources.len() as f64;
                for &u in sources {
                    next[u] += share;
                }
            }
        }
        core::mem::swap(&mut x, &mut next);
    }
    x
}

/// Cosine similarity of two influence vectors.
pub fn overlap(p: &InfluenceVector, q: &InfluenceVector) -> Result<f64> {
    if p.cutoff != q.cutoff || p.universe != q.universe {
        return Err(Error::Incompatible("vectors come from different snapshots"));
    }
    if p.steps != q.steps {
        return Err(Error::Incompatible("vectors use different step counts"));
    }
    let mut dot = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < p.probs.len() && j < q.probs.len() {
        match p.probs[i].0.cmp(&q.probs[j].0) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                dot += p.probs[i].1 * q.probs[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    let norm_p: f64 = p.probs.iter().map(|(_, x)| x * x).sum();
    let norm_q: f64 = q.probs.iter().map(|(_, x)| x * x).sum();
    finish_cosine(dot, norm_p, norm_q)
}

/// Cosine overlap of two dense nonnegative vectors of equal length.
pub fn overlap_dense(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Incompatible("vectors differ in length"));
    }
    let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
    let norm_p: f64 = p.iter().map(|x| x * x).sum();
    let norm_q: f64 = q.iter().map(|x| x * x).sum();
    finish_cosine(dot, norm_p, norm_q)
}

fn finish_cosine(dot: f64, norm_p: f64, norm_q: f64) -> Result<f64> {
    if norm_p == 0.0 || norm_q == 0.0 {
        return Err(Error::UndefinedInput("overlap of a zero vector"));
    }
    Ok((dot / math::sqrt(norm_p * norm_q)).clamp(0.0, 1.0))
}

/// Mean overlap over all unordered pairs of `pages` that exist in `s`.
pub fn mean_pairwise_overlap(s: &Snapshot, pages: &[PageId], steps: usize) -> Result<f64> {
    let g = s.graph();
    let mut present: Vec<PageId> = pages.iter().copied().filter(|&p| s.contains(p)).collect();
    present.sort_unstable();
    present.dedup();
    if present.len() < 2 {
        return Err(Error::InsufficientData("overlap needs at least two existing pages"));
    }
    let vectors: Vec<InfluenceVector> = present
        .iter()
        .map(|&p| influence_in(&g, s.cutoff(), p, steps))
        .collect::<Result<_>>()?;
    mean_of_pairs(&vectors)
}

/// Mean overlap across all unordered pairs of precomputed vectors.
pub fn mean_of_pairs(vectors: &[InfluenceVector]) -> Result<f64> {
    if vectors.len() < 2 {
        return Err(Error::InsufficientData("overlap needs at least two vectors"));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            sum += overlap(&vectors[i], &vectors[j])?;
            count += 1;
        }
    }
    Ok(sum / count as f64)
}
