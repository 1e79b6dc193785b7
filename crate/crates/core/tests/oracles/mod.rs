//! Independent reference implementations shared by the oracle suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use normnet_core::community::modularity;
use normnet_core::{PageId, Snapshot, Timestamp};
use rand::Rng;

pub fn random_digraph<R: Rng>(rng: &mut R, n: u32, p: f64) -> Snapshot {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.random::<f64>() < p {
                edges.push((PageId(a), PageId(b)));
            }
        }
    }
    Snapshot::from_parts(Timestamp(0), (0..n).map(PageId).collect(), edges)
}

pub fn snapshot(n: u32, edges: &[(u32, u32)]) -> Snapshot {
    Snapshot::from_parts(
        Timestamp(0),
        (0..n).map(PageId).collect(),
        edges.iter().map(|&(a, b)| (PageId(a), PageId(b))).collect(),
    )
}

fn position(s: &Snapshot, id: PageId) -> usize {
    s.nodes().iter().position(|&p| p == id).unwrap()
}

/// Dense `n x n` matrix of the reversed walk: `t[v][u]` is the chance of
/// stepping from `v` to its in-neighbor `u`; nodes without in-neighbors stay.
fn reversed_transition(s: &Snapshot) -> Vec<Vec<f64>> {
    let n = s.node_count();
    let mut t = vec![vec![0.0; n]; n];
    for v in 0..n {
        let ins: Vec<usize> = s
            .edges()
            .iter()
            .filter(|e| position(s, e.1) == v)
            .map(|e| position(s, e.0))
            .collect();
        if ins.is_empty() {
            t[v][v] = 1.0;
        } else {
            for u in &ins {
                t[v][*u] += 1.0 / ins.len() as f64;
            }
        }
    }
    t
}

/// Row vector `e_origin * T^steps`.
pub fn influence_by_matrix_power(s: &Snapshot, origin: PageId, steps: usize) -> Vec<f64> {
    let t = reversed_transition(s);
    let n = t.len();
    let mut x = vec![0.0; n];
    x[position(s, origin)] = 1.0;
    for _ in 0..steps {
        let mut y = vec![0.0; n];
        for v in 0..n {
            for u in 0..n {
                y[u] += x[v] * t[v][u];
            }
        }
        x = y;
    }
    x
}

/// Sums the probability of every individual walk of length `steps`.
pub fn influence_by_walk_enumeration(s: &Snapshot, origin: PageId, steps: usize) -> Vec<f64> {
    let t = reversed_transition(s);
    let mut out = vec![0.0; t.len()];
    fn walk(t: &[Vec<f64>], at: usize, left: usize, prob: f64, out: &mut [f64]) {
        if left == 0 {
            out[at] += prob;
            return;
        }
        for (u, &w) in t[at].iter().enumerate() {
            if w > 0.0 {
                walk(t, u, left - 1, prob * w, out);
            }
        }
    }
    walk(&t, position(s, origin), steps, 1.0, &mut out);
    out
}

/// Gaussian elimination with partial pivoting on a dense system.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Stationary vector of the jump-ε walk with uniform dangling mass,
/// solved as `(I - (1-ε) G) x = ε/N`.
pub fn pagerank_by_linear_solve(s: &Snapshot, epsilon: f64) -> Vec<f64> {
    let n = s.node_count();
    let mut g = vec![vec![0.0; n]; n];
    for u in 0..n {
        let outs: Vec<usize> = s
            .edges()
            .iter()
            .filter(|e| position(s, e.0) == u)
            .map(|e| position(s, e.1))
            .collect();
        for v in 0..n {
            g[v][u] = if outs.is_empty() {
                1.0 / n as f64
            } else {
                outs.iter().filter(|&&o| o == v).count() as f64 / outs.len() as f64
            };
        }
    }
    let a = (0..n)
        .map(|v| {
            (0..n)
                .map(|u| f64::from(u8::from(u == v)) - (1.0 - epsilon) * g[v][u])
                .collect()
        })
        .collect();
    dense_solve(a, vec![epsilon / n as f64; n])
}

/// Every set partition of `0..n` as a restricted growth string.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    fn rec(i: usize, max: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == a.len() {
            out.push(a.clone());
            return;
        }
        for c in 0..=max + 1 {
            a[i] = c;
            rec(i + 1, max.max(c), a, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(1, 0, &mut a, &mut out);
    out
}

/// Highest modularity over all set partitions of the snapshot's nodes.
pub fn brute_force_modularity(s: &Snapshot) -> f64 {
    set_partitions(s.node_count())
        .into_iter()
        .map(|labels| {
            let m: BTreeMap<PageId, usize> = s.nodes().iter().copied().zip(labels).collect();
            modularity(s, &m).unwrap()
        })
        .fold(f64::MIN, f64::max)
}

/// Cohen's kappa computed from expanded label lists.
pub fn kappa_from_labels(a: &[usize], b: &[usize], k: usize) -> f64 {
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64 / n;
    let chance: f64 = (0..k)
        .map(|c| {
            let pa = a.iter().filter(|&&x| x == c).count() as f64 / n;
            let pb = b.iter().filter(|&&x| x == c).count() as f64 / n;
            pa * pb
        })
        .sum();
    (agree - chance) / (1.0 - chance)
}

pub fn clique(nodes: &[u32]) -> Vec<(u32, u32)> {
    let mut e = Vec::new();
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            e.push((a, b));
        }
    }
    e
}

/// Graphs with planted community structure, fixed before any run.
pub fn planted_graphs() -> Vec<(&'static str, Snapshot)> {
    let mut two_k4 = clique(&[0, 1, 2, 3]);
    two_k4.extend(clique(&[4, 5, 6, 7]));
    two_k4.push((3, 4));
    let mut two_k3 = clique(&[0, 1, 2]);
    two_k3.extend(clique(&[3, 4, 5]));
    two_k3.push((2, 3));
    let mut k3_k4 = clique(&[0, 1, 2]);
    k3_k4.extend(clique(&[3, 4, 5, 6]));
    k3_k4.push((0, 6));
    let mut disjoint = clique(&[0, 1, 2]);
    disjoint.extend(clique(&[3, 4, 5]));
    disjoint.push((6, 7));
    let mut ring = Vec::new();
    for t in 0..2u32 {
        ring.extend(clique(&[4 * t, 4 * t + 1, 4 * t + 2, 4 * t + 3]));
    }
    ring.extend([(3, 4), (7, 0)]);
    vec![
        ("two 4-cliques and a bridge", snapshot(8, &two_k4)),
        ("two triangles and a bridge", snapshot(6, &two_k3)),
        ("triangle bridged to a 4-clique", snapshot(7, &k3_k4)),
        ("two triangles and a separate edge", snapshot(8, &disjoint)),
        ("two 4-cliques in a ring", snapshot(8, &ring)),
    ]
}

/// Graphs without dense groups; the greedy pass may stop short here.
pub fn structureless_graphs() -> Vec<(&'static str, Snapshot)> {
    vec![
        ("complete graph", snapshot(6, &clique(&[0, 1, 2, 3, 4, 5]))),
        (
            "star",
            snapshot(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]),
        ),
        (
            "path",
            snapshot(8, &(0..7).map(|i| (i, i + 1)).collect::<Vec<_>>()),
        ),
    ]
}
