use alloc::vec;
use alloc::vec::Vec;

use super::divergence::jsd;
use super::lda::TopicModel;
use crate::corpus::{PageId, Snapshot};
use crate::graph::IndexedGraph;
use crate::influence::{influence_in, InfluenceVector};
use crate::stats::pearson;
use crate::time::Timestamp;
use crate::{Error, Result};

/// Correlation between a page's influence on each reached page and the
/// negative Jensen-Shannon distance between their topic mixtures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceScore {
    pub page: PageId,
    pub steps: usize,
    pub value: f64,
}

/// Coherence of `origin` in snapshot `s`. The correlation runs over the
/// support of the influence vector, excluding the origin.
pub fn semantic_coherence(s: &Snapshot, tm: &TopicModel, origin: PageId, steps: usize) -> Result<CoherenceScore> {
    semantic_coherence_in(&s.graph(), s.cutoff(), tm, origin, steps)
}

pub fn semantic_coherence_in(
    g: &IndexedGraph,
    cutoff: Timestamp,
    tm: &TopicModel,
    origin: PageId,
    steps: usize,
) -> Result<CoherenceScore> {
    let inf = influence_in(g, cutoff, origin, steps)?;
    coherence_of(&inf, tm)
}

fn coherence_of(inf: &InfluenceVector, tm: &TopicModel) -> Result<CoherenceScore> {
    let home = tm.mixture(inf.origin).ok_or(Error::UnknownNode(inf.origin))?;
    let mut ps = Vec::new();
    let mut neg_jsd = Vec::new();
    for &(id, p) in inf.probs() {
        if id == inf.origin {
            continue;
        }
        let other = tm.mixture(id).ok_or(Error::UnknownNode(id))?;
        ps.push(p);
        neg_jsd.push(-jsd(home, other)?);
    }
    if ps.len() < 3 {
        return Err(Error::InsufficientData("coherence needs at least three reached pages"));
    }
    Ok(CoherenceScore {
        page: inf.origin,
        steps: inf.steps,
        value: pearson(&ps, &neg_jsd)?,
    })
}

/// Unweighted mean topic mixture of a cluster's pages.
pub fn cluster_topic_profile(tm: &TopicModel, cluster: &[PageId]) -> Result<Vec<f64>> {
    if cluster.is_empty() {
        return Err(Error::InvalidArgument("empty cluster".into()));
    }
    let mut profile = vec![0.0; tm.k];
    for &id in cluster {
        let mix = tm.mixture(id).ok_or(Error::UnknownNode(id))?;
        for (acc, m) in profile.iter_mut().zip(mix) {
            *acc += m;
        }
    }
    let n = cluster.len() as f64;
    profile.iter_mut().for_each(|x| *x /= n);
    Ok(profile)
}
