//! Louvain communities, Newman modularity and local clustering.
//!
//! Community detection runs on the undirected, unweighted projection of a
//! snapshot: reciprocal links collapse into a single edge.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::centrality::CentralityVector;
use crate::corpus::{NormClass, PageId, Snapshot};
use crate::semantics::{cluster_topic_profile, TopicModel};
use crate::time::Timestamp;
use crate::{Error, Result};

/// A hard clustering of a snapshot's nodes.
///
/// Cluster ids run from 0 in order of decreasing size; equal sizes are
/// ordered by their smallest member id.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub cutoff: Timestamp,
    assignment: Vec<(PageId, usize)>,
    pub modularity: f64,
    pub seed: u64,
}

impl Partition {
    pub fn assignment(&self) -> &[(PageId, usize)] {
        &self.assignment
    }

    pub fn cluster_of(&self, id: PageId) -> Option<usize> {
        self.assignment
            .binary_search_by_key(&id, |&(p, _)| p)
            .ok()
            .map(|i| self.assignment[i].1)
    }

    pub fn cluster_count(&self) -> usize {
        self.assignment.iter().map(|&(_, c)| c + 1).max().unwrap_or(0)
    }

    /// Member ids of every cluster, indexed by cluster id.
    pub fn clusters(&self) -> Vec<Vec<PageId>> {
        let mut out = vec![Vec::new(); self.cluster_count()];
        for &(id, c) in &self.assignment {
            out[c].push(id);
        }
        out
    }

    pub fn assignment_map(&self) -> BTreeMap<PageId, usize> {
        self.assignment.iter().copied().collect()
    }
}

/// Relabels arbitrary cluster labels into the canonical size order.
fn canonical_labels(labels: &[usize]) -> Vec<usize> {
    let mut groups: BTreeMap<usize, (usize, usize)> = BTreeMap::new(); // label -> (size, first index)
    for (i, &l) in labels.iter().enumerate() {
        let e = groups.entry(l).or_insert((0, i));
        e.0 += 1;
    }
    let mut order: Vec<(usize, usize, usize)> = groups.iter().map(|(&l, &(size, first))| (size, first, l)).collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let rename: BTreeMap<usize, usize> = order.iter().enumerate().map(|(new, &(_, _, old))| (old, new)).collect();
    labels.iter().map(|l| rename[l]).collect()
}

/// Weighted undirected graph used across Louvain levels. `loops[i]` holds
/// `A_ii`, which counts each internal edge twice.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
}

impl Level {
    fn len(&self) -> usize {
        self.adj.len()
    }

    fn degree(&self, i: usize) -> f64 {
        self.loops[i] + self.adj[i].iter().map(|&(_, w)| w).sum::<f64>()
    }

    fn modularity(&self, labels: &[usize], two_m: f64) -> f64 {
        let mut internal: BTreeMap<usize, f64> = BTreeMap::new();
        let mut total: BTreeMap<usize, f64> = BTreeMap::new();
        for i in 0..self.len() {
            *total.entry(labels[i]).or_insert(0.0) += self.degree(i);
            let mut w_in = self.loops[i];
            for &(j, w) in &self.adj[i] {
                if labels[j] == labels[i] {
                    w_in += w;
                }
            }
            *internal.entry(labels[i]).or_insert(0.0) += w_in;
        }
        total
            .iter()
            .map(|(c, &tot)| internal[c] / two_m - (tot / two_m) * (tot / two_m))
            .sum()
    }

    /// Phase one: greedy node moves until no move improves modularity.
    fn local_moves(&self, two_m: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let degree: Vec<f64> = (0..n).map(|i| self.degree(i)).collect();
        let mut label: Vec<usize> = (0..n).collect();
        let mut tot = degree.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut weight_to = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_move = false;
        loop {
            let mut moved = false;
            for &i in &order {
                let own = label[i];
                let ki = degree[i];
                tot[own] -= ki;
                touched.clear();
                touched.push(own);
                for &(j, w) in &self.adj[i] {
                    let c = label[j];
                    if weight_to[c] == 0.0 && !touched.contains(&c) {
                        touched.push(c);
                    }
                    weight_to[c] += w;
                }
                let gain = |c: usize, w: f64| w - tot[c] * ki / two_m;
                let mut best = own;
                let mut best_gain = gain(own, weight_to[own]);
                for &c in &touched {
                    let g = gain(c, weight_to[c]);
                    if g > best_gain + 1e-12 {
                        best = c;
                        best_gain = g;
                    }
                }
                for &c in &touched {
                    weight_to[c] = 0.0;
                }
                tot[best] += ki;
                if best != own {
                    label[i] = best;
                    moved = true;
                    any_move = true;
                }
            }
            if !moved {
                break;
            }
        }
        (label, any_move)
    }

    fn aggregate(&self, labels: &[usize]) -> (Level, Vec<usize>) {
        let mut dense: BTreeMap<usize, usize> = BTreeMap::new();
        for &l in labels {
            let next = dense.len();
            dense.entry(l).or_insert(next);
        }
        let map: Vec<usize> = labels.iter().map(|l| dense[l]).collect();
        let k = dense.len();
        let mut loops = vec![0.0; k];
        let mut weights: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
        for i in 0..self.len() {
            let ci = map[i];
            loops[ci] += self.loops[i];
            for &(j, w) in &self.adj[i] {
                let cj = map[j];
                if ci == cj {
                    loops[ci] += w;
                } else {
                    *weights[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        let adj = weights.into_iter().map(|m| m.into_iter().collect()).collect();
        (Level { adj, loops }, map)
    }
}

/// Two-phase Louvain on the undirected projection of `s`. The node visit
/// order at every level is shuffled with `seed`.
pub fn louvain(s: &Snapshot, seed: u64) -> Partition {
    let g = s.graph();
    let n = g.node_count();
    let mut adj = vec![Vec::new(); n];
    for (a, b) in g.undirected_edges() {
        adj[a].push((b, 1.0));
        adj[b].push((a, 1.0));
    }
    let mut level = Level { adj, loops: vec![0.0; n] };
    let two_m: f64 = (0..n).map(|i| level.degree(i)).sum();
    let mut membership: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modularity = 0.0;
    if two_m > 0.0 {
        loop {
            let (labels, moved) = level.local_moves(two_m, &mut rng);
            if !moved {
                modularity = level.modularity(&(0..level.len()).collect::<Vec<_>>(), two_m);
                break;
            }
            let (next, map) = level.aggregate(&labels);
            for m in membership.iter_mut() {
                *m = map[*m];
            }
            level = next;
        }
    }
    let labels = canonical_labels(&membership);
    Partition {
        cutoff: s.cutoff(),
        assignment: s.nodes().iter().copied().zip(labels).collect(),
        modularity,
        seed,
    }
}

/// Newman modularity of `assignment` on the undirected projection of `s`,
/// `sum_c [e_c / m - (d_c / 2m)^2]`. A graph without edges scores 0.
pub fn modularity(s: &Snapshot, assignment: &BTreeMap<PageId, usize>) -> Result<f64> {
    let labels: Vec<usize> = s
        .nodes()
        .iter()
        .map(|id| {
            assignment
                .get(id)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(alloc::format!("page {id} has no cluster")))
        })
        .collect::<Result<_>>()?;
    let edges = s.graph().undirected_edges();
    let m = edges.len() as f64;
    if m == 0.0 {
        return Ok(0.0);
    }
    let mut within: BTreeMap<usize, f64> = BTreeMap::new();
    let mut degree: BTreeMap<usize, f64> = BTreeMap::new();
    for &(a, b) in &edges {
        *degree.entry(labels[a]).or_insert(0.0) += 1.0;
        *degree.entry(labels[b]).or_insert(0.0) += 1.0;
        if labels[a] == labels[b] {
            *within.entry(labels[a]).or_insert(0.0) += 1.0;
        }
    }
    Ok(degree
        .iter()
        .map(|(c, &d)| within.get(c).copied().unwrap_or(0.0) / m - (d / (2.0 * m)) * (d / (2.0 * m)))
        .sum())
}

/// Per-node local clustering with neighborhoods `in ∪ out`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringResult {
    pub per_node: Vec<(PageId, f64)>,
    /// Sum over nodes divided by the node count.
    pub average: f64,
    /// Plain sum over nodes.
    pub sum: f64,
}

/// Directed links among distinct neighbors of each node over
/// `|N(i)| (|N(i)| - 1)`; nodes with fewer than two neighbors score 0.
pub fn local_clustering(s: &Snapshot) -> ClusteringResult {
    let g = s.graph();
    let n = g.node_count();
    let mut per_node = Vec::with_capacity(n);
    let mut sum = 0.0;
    let mut neigh: Vec<usize> = Vec::new();
    for i in 0..n {
        neigh.clear();
        neigh.extend(g.out_neighbors(i).iter().chain(g.in_neighbors(i)).copied().filter(|&j| j != i));
        neigh.sort_unstable();
        neigh.dedup();
        let k = neigh.len();
        let c = if k < 2 {
            0.0
        } else {
            let links = neigh
                .iter()
                .map(|&j| g.out_neighbors(j).iter().filter(|&&t| t != j && neigh.binary_search(&t).is_ok()).count())
                .sum::<usize>();
            links as f64 / (k * (k - 1)) as f64
        };
        sum += c;
        per_node.push((g.ids()[i], c));
    }
    ClusteringResult {
        per_node,
        average: if n > 0 { sum / n as f64 } else { 0.0 },
        sum,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSummary {
    pub cluster: usize,
    pub size: usize,
    pub size_fraction: f64,
    /// Highest-centrality members, descending.
    pub top_pages: Vec<(PageId, f64)>,
    pub dominant_topic: Option<usize>,
    /// Most common norm class among the top pages that carry one.
    pub norm_class: Option<NormClass>,
}

/// One summary per cluster, largest first.
pub fn summarize_clusters(
    partition: &Partition,
    cv: &CentralityVector,
    tm: Option<&TopicModel>,
    classes: Option<&BTreeMap<PageId, NormClass>>,
    top_k: usize,
) -> Result<Vec<ClusterSummary>> {
    if partition.assignment.is_empty() {
        return Err(Error::InvalidArgument("empty partition".into()));
    }
    if partition.cutoff != cv.cutoff {
        return Err(Error::Incompatible("partition and centrality come from different snapshots"));
    }
    let total = partition.assignment.len() as f64;
    partition
        .clusters()
        .into_iter()
        .enumerate()
        .map(|(c, members)| {
            let mut ranked: Vec<(PageId, f64)> = members
                .iter()
                .map(|&id| cv.get(id).map(|s| (id, s)).ok_or(Error::UnknownNode(id)))
                .collect::<Result<_>>()?;
            ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            ranked.truncate(top_k);
            let dominant_topic = match tm {
                Some(tm) => {
                    let profile = cluster_topic_profile(tm, &members)?;
                    let mut best = 0;
                    for (t, &v) in profile.iter().enumerate() {
                        if v > profile[best] {
                            best = t;
                        }
                    }
                    Some(best)
                }
                None => None,
            };
            let norm_class = classes.and_then(|classes| {
                let mut votes: BTreeMap<NormClass, usize> = BTreeMap::new();
                for (id, _) in &ranked {
                    if let Some(&nc) = classes.get(id) {
                        *votes.entry(nc).or_insert(0) += 1;
                    }
                }
                // highest count, earliest class on ties
                let mut best: Option<(NormClass, usize)> = None;
                for (nc, v) in votes {
                    if best.is_none_or(|(_, bv)| v > bv) {
                        best = Some((nc, v));
                    }
                }
                best.map(|(nc, _)| nc)
            });
            Ok(ClusterSummary {
                cluster: c,
                size: members.len(),
                size_fraction: members.len() as f64 / total,
                top_pages: ranked,
                dominant_topic,
                norm_class,
            })
        })
        .collect()
}

/// For every ordered pair of distinct clusters, the fraction of the origin
/// cluster's out-links that land in the other cluster.
pub fn cluster_link_fractions(s: &Snapshot, partition: &Partition) -> Vec<(usize, usize, f64)> {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut out_total: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in s.edges() {
        if let (Some(ca), Some(cb)) = (partition.cluster_of(a), partition.cluster_of(b)) {
            *out_total.entry(ca).or_insert(0) += 1;
            if ca != cb {
                *counts.entry((ca, cb)).or_insert(0) += 1;
            }
        }
    }
    counts
        .into_iter()
        .map(|((a, b), c)| (a, b, c as f64 / out_total[&a] as f64))
        .collect()
}
