//! Eigenvector (random-jump walk) centrality, Gini inequality and rank
//! break detection.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::corpus::{PageId, Snapshot};
use crate::stats;
use crate::time::Timestamp;
use crate::{Error, Result};

/// Power-iteration settings for [`eigenvector_centrality`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralityOptions {
    /// Random-jump probability.
    pub epsilon: f64,
    /// Stop when the L1 change between iterates drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CentralityOptions {
    fn default() -> Self {
        CentralityOptions {
            epsilon: 0.15,
            tol: 1e-12,
            max_iter: 10_000,
        }
    }
}

/// Stationary visit probabilities, aligned with the snapshot's sorted ids.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub cutoff: Timestamp,
    ids: Vec<PageId>,
    scores: Vec<f64>,
    pub iterations: usize,
}

impl CentralityVector {
    pub fn from_parts(cutoff: Timestamp, ids: Vec<PageId>, scores: Vec<f64>) -> Self {
        assert_eq!(ids.len(), scores.len());
        CentralityVector {
            cutoff,
            ids,
            scores,
            iterations: 0,
        }
    }

    pub fn ids(&self) -> &[PageId] {
        &self.ids
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, id: PageId) -> Option<f64> {
        self.ids.binary_search(&id).ok().map(|i| self.scores[i])
    }

    /// Pages by descending score; equal scores keep id order.
    pub fn ranked(&self) -> Vec<(PageId, f64)> {
        let mut out: Vec<(PageId, f64)> = self.ids.iter().copied().zip(self.scores.iter().copied()).collect();
        out.sort_by(|a, b| desc(a.1, b.1).then(a.0.cmp(&b.0)));
        out
    }
}

fn desc(a: f64, b: f64) -> Ordering {
    b.partial_cmp(&a).unwrap_or(Ordering::Equal)
}

/// Stationary distribution of a walk that follows a uniformly random
/// out-link with probability `1 - epsilon` and jumps to a uniformly random
/// node otherwise. Dangling nodes spread their mass uniformly.
pub fn eigenvector_centrality(s: &Snapshot, opts: &CentralityOptions) -> Result<CentralityVector> {
    let n = s.node_count();
    if n == 0 {
        return Err(Error::UndefinedInput("centrality of an empty snapshot"));
    }
    if !(opts.epsilon > 0.0 && opts.epsilon < 1.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "epsilon must lie in (0, 1), got {}",
            opts.epsilon
        )));
    }
    let g = s.graph();
    let nf = n as f64;
    let follow = 1.0 - opts.epsilon;
    let mut x = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        let dangling: f64 = (0..n).filter(|&u| g.out_degree(u) == 0).map(|u| x[u]).sum();
        let base = opts.epsilon / nf + follow * dangling / nf;
        for v in 0..n {
            let inflow: f64 = g
                .in_neighbors(v)
                .iter()
                .map(|&u| x[u] / g.out_degree(u) as f64)
                .sum();
            next[v] = base + follow * inflow;
        }
        let total: f64 = next.iter().sum();
        for v in next.iter_mut() {
            *v /= total;
        }
        residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        core::mem::swap(&mut x, &mut next);
        if residual < opts.tol {
            return Ok(CentralityVector {
                cutoff: s.cutoff(),
                ids: s.nodes().to_vec(),
                scores: x,
                iterations: iter,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: opts.max_iter,
        residual,
    })
}

/// Population Gini coefficient, `sum_ij |x_i - x_j| / (2 n^2 mean)`.
///
/// No `n / (n - 1)` correction is applied, so the maximum is `1 - 1/n`.
pub fn gini(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InsufficientData("gini needs at least two values"));
    }
    if let Some((i, &v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
        return Err(Error::Domain {
            what: "gini",
            index: i,
            value: v,
        });
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Err(Error::UndefinedInput("gini of an all-zero vector"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let n = sorted.len() as f64;
    // sum_ij |x_i - x_j| = 2 * sum_i (2i - n - 1) x_(i), i 1-based over ascending order
    let weighted: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum();
    Ok((weighted / (n * total)).max(0.0))
}

/// Gap `E_i - E_{i+1}` after the page at 1-based `rank` in a descending
/// ranking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakPoint {
    pub rank: usize,
    pub size: f64,
}

/// Largest rank gaps in `cv`, greedily accepting breaks more than
/// `min_separation` ranks away from every break already accepted.
pub fn detect_breaks(cv: &CentralityVector, min_separation: usize, top_m: usize) -> Result<Vec<BreakPoint>> {
    let ranked: Vec<f64> = cv.ranked().into_iter().map(|(_, s)| s).collect();
    detect_breaks_in_ranked(&ranked, min_separation, top_m)
}

/// As [`detect_breaks`], over scores already sorted in descending order.
pub fn detect_breaks_in_ranked(ranked: &[f64], min_separation: usize, top_m: usize) -> Result<Vec<BreakPoint>> {
    if top_m < 1 {
        return Err(Error::InvalidArgument("top_m must be at least 1".into()));
    }
    if ranked.len() < 2 {
        return Err(Error::InsufficientData("break detection needs at least two pages"));
    }
    let mut candidates: Vec<BreakPoint> = ranked
        .windows(2)
        .enumerate()
        .map(|(i, w)| BreakPoint {
            rank: i + 1,
            size: w[0] - w[1],
        })
        .collect();
    candidates.sort_by(|a, b| desc(a.size, b.size).then(a.rank.cmp(&b.rank)));
    let mut accepted: Vec<BreakPoint> = Vec::new();
    for c in candidates {
        if accepted.len() == top_m {
            break;
        }
        if accepted.iter().all(|a| a.rank.abs_diff(c.rank) > min_separation) {
            accepted.push(c);
        }
    }
    Ok(accepted)
}

/// Pearson correlation of two centrality vectors over their shared pages.
pub fn centrality_persistence(a: &CentralityVector, b: &CentralityVector) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (id, &x) in a.ids.iter().zip(&a.scores) {
        if let Some(y) = b.get(*id) {
            xs.push(x);
            ys.push(y);
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData("persistence needs at least three shared pages"));
    }
    stats::pearson(&xs, &ys)
}
