//! Pages, link events and time-sliced snapshots.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::graph::{DisjointSets, IndexedGraph};
use crate::math;
use crate::time::{Month, Timestamp};
use crate::{Error, Result};

/// Stable page identifier, assigned in canonical-title order at ingest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PageId(pub u32);

impl fmt::Display for PageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Editor-assigned page class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Policy,
    Guideline,
    Essay,
    Proposal,
    Humor,
    Other,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Policy,
        Category::Guideline,
        Category::Essay,
        Category::Proposal,
        Category::Humor,
        Category::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Policy => "policy",
            Category::Guideline => "guideline",
            Category::Essay => "essay",
            Category::Proposal => "proposal",
            Category::Humor => "humor",
            Category::Other => "other",
        }
    }

    /// Policies and guidelines are grouped together as "policy" pages in the
    /// population comparison.
    pub fn is_policy_like(self) -> bool {
        matches!(self, Category::Policy | Category::Guideline)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown category {s:?}")))
    }
}

/// Which interactions a norm governs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormClass {
    UserContent,
    UserUser,
    UserAdmin,
    Mixed,
}

impl NormClass {
    pub const ALL: [NormClass; 4] = [
        NormClass::UserContent,
        NormClass::UserUser,
        NormClass::UserAdmin,
        NormClass::Mixed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NormClass::UserContent => "user_content",
            NormClass::UserUser => "user_user",
            NormClass::UserAdmin => "user_admin",
            NormClass::Mixed => "mixed",
        }
    }
}

impl fmt::Display for NormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NormClass::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown norm class {s:?}")))
    }
}

/// A norm page with its attention counters and one-gram counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Page {
    pub id: PageId,
    pub title: String,
    pub category: Category,
    pub created_at: Timestamp,
    pub page_size_bytes: u64,
    pub n_edits: u64,
    pub n_talk_edits: u64,
    pub n_editors: u64,
    /// Views over a 31-day window.
    pub page_views: u64,
    pub token_counts: BTreeMap<String, u64>,
    pub norm_class: Option<NormClass>,
}

impl Page {
    /// A page with zeroed counters and no text.
    pub fn new(id: PageId, title: impl Into<String>, category: Category, created_at: Timestamp) -> Self {
        Page {
            id,
            title: title.into(),
            category,
            created_at,
            page_size_bytes: 0,
            n_edits: 0,
            n_talk_edits: 0,
            n_editors: 0,
            page_views: 0,
            token_counts: BTreeMap::new(),
            norm_class: None,
        }
    }
}

/// First qualifying hyperlink from `src` to `dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinkEvent {
    pub src: PageId,
    pub dst: PageId,
    pub first_seen_at: Timestamp,
}

/// Active users (five or more edits) in one calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PopulationPoint {
    pub month: Month,
    pub active_users: u64,
}

/// Monthly active-user counts with strictly increasing months.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PopulationSeries {
    points: Vec<PopulationPoint>,
}

impl PopulationSeries {
    pub fn new(points: Vec<PopulationPoint>) -> Result<Self> {
        if let Some(w) = points.windows(2).find(|w| w[0].month >= w[1].month) {
            return Err(Error::InvalidCorpus(format!(
                "population months not strictly increasing at {}",
                w[1].month
            )));
        }
        Ok(PopulationSeries { points })
    }

    pub fn points(&self) -> &[PopulationPoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A validated batch corpus. Pages are sorted by id, links by `(src, dst)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pages: Vec<Page>,
    links: Vec<LinkEvent>,
    population: PopulationSeries,
}

impl Corpus {
    /// Validates and sorts the collections.
    ///
    /// Rejects duplicate ids or titles, dangling link endpoints, self-edges,
    /// repeated `(src, dst)` pairs and links older than their source page.
    pub fn new(
        mut pages: Vec<Page>,
        mut links: Vec<LinkEvent>,
        population: PopulationSeries,
    ) -> Result<Self> {
        pages.sort_by_key(|p| p.id);
        if let Some(w) = pages.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::InvalidCorpus(format!("duplicate page id {}", w[0].id)));
        }
        let mut titles: Vec<&str> = pages.iter().map(|p| p.title.as_str()).collect();
        titles.sort_unstable();
        if let Some(w) = titles.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidCorpus(format!("duplicate page title {:?}", w[0])));
        }
        for p in &pages {
            if p.token_counts.values().any(|&c| c == 0) {
                return Err(Error::InvalidCorpus(format!(
                    "page {:?} has a zero token count",
                    p.title
                )));
            }
        }

        links.sort_by_key(|l| (l.src, l.dst));
        for (i, l) in links.iter().enumerate() {
            if l.src == l.dst {
                return Err(Error::InvalidCorpus(format!("self-edge on page {}", l.src)));
            }
            if i > 0 && links[i - 1].src == l.src && links[i - 1].dst == l.dst {
                return Err(Error::InvalidCorpus(format!(
                    "duplicate link {} -> {}",
                    l.src, l.dst
                )));
            }
            let src = find_page(&pages, l.src)
                .ok_or_else(|| Error::InvalidCorpus(format!("link from unknown page {}", l.src)))?;
            if find_page(&pages, l.dst).is_none() {
                return Err(Error::InvalidCorpus(format!("link to unknown page {}", l.dst)));
            }
            if l.first_seen_at < src.created_at {
                return Err(Error::InvalidCorpus(format!(
                    "link {} -> {} predates its source page",
                    l.src, l.dst
                )));
            }
        }
        Ok(Corpus {
            pages,
            links,
            population,
        })
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    pub fn links(&self) -> &[LinkEvent] {
        &self.links
    }

    pub fn population(&self) -> &PopulationSeries {
        &self.population
    }

    pub fn page(&self, id: PageId) -> Option<&Page> {
        find_page(&self.pages, id)
    }

    pub fn page_by_title(&self, title: &str) -> Option<&Page> {
        self.pages.iter().find(|p| p.title == title)
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }

    /// Earliest and latest timestamps among pages and links.
    pub fn time_span(&self) -> Option<(Timestamp, Timestamp)> {
        let times = self
            .pages
            .iter()
            .map(|p| p.created_at)
            .chain(self.links.iter().map(|l| l.first_seen_at));
        let mut span: Option<(Timestamp, Timestamp)> = None;
        for t in times {
            span = Some(match span {
                None => (t, t),
                Some((lo, hi)) => (lo.min(t), hi.max(t)),
            });
        }
        span
    }
}

fn find_page(pages: &[Page], id: PageId) -> Option<&Page> {
    pages
        .binary_search_by_key(&id, |p| p.id)
        .ok()
        .map(|i| &pages[i])
}

/// Induced directed graph of the pages and links that exist at `cutoff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    cutoff: Timestamp,
    nodes: Vec<PageId>,
    edges: Vec<(PageId, PageId)>,
}

impl Snapshot {
    /// Builds a snapshot from raw parts, sorting and deduplicating.
    ///
    /// Edges whose endpoints are missing from `nodes`, and self-edges, are
    /// discarded.
    pub fn from_parts(cutoff: Timestamp, mut nodes: Vec<PageId>, mut edges: Vec<(PageId, PageId)>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        edges.retain(|&(s, d)| {
            s != d && nodes.binary_search(&s).is_ok() && nodes.binary_search(&d).is_ok()
        });
        edges.sort_unstable();
        edges.dedup();
        Snapshot {
            cutoff,
            nodes,
            edges,
        }
    }

    pub fn cutoff(&self) -> Timestamp {
        self.cutoff
    }

    pub fn nodes(&self) -> &[PageId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(PageId, PageId)] {
        &self.edges
    }

    pub fn contains(&self, id: PageId) -> bool {
        self.nodes.binary_search(&id).is_ok()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Induced subgraph on `keep`.
    pub fn restrict(&self, keep: &[PageId]) -> Snapshot {
        let nodes: Vec<PageId> = keep.iter().copied().filter(|&id| self.contains(id)).collect();
        Snapshot::from_parts(self.cutoff, nodes, self.edges.clone())
    }

    pub fn graph(&self) -> IndexedGraph {
        IndexedGraph::new(&self.nodes, &self.edges)
    }

    /// In-degree of every node, aligned with [`Snapshot::nodes`].
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = alloc::vec![0usize; self.nodes.len()];
        for &(_, d) in &self.edges {
            if let Ok(i) = self.nodes.binary_search(&d) {
                deg[i] += 1;
            }
        }
        deg
    }
}

/// Pages created at or before `cutoff` and links first seen at or before it
/// whose endpoints both exist.
pub fn build_snapshot(corpus: &Corpus, cutoff: Timestamp) -> Snapshot {
    let nodes: Vec<PageId> = corpus
        .pages
        .iter()
        .filter(|p| p.created_at <= cutoff)
        .map(|p| p.id)
        .collect();
    let edges: Vec<(PageId, PageId)> = corpus
        .links
        .iter()
        .filter(|l| l.first_seen_at <= cutoff)
        .map(|l| (l.src, l.dst))
        .collect();
    Snapshot::from_parts(cutoff, nodes, edges)
}

/// Directed density without self-loops, `|E| / (n (n - 1))`.
pub fn density(s: &Snapshot) -> Result<f64> {
    let n = s.node_count();
    if n < 2 {
        return Err(Error::UndefinedInput("density needs at least two nodes"));
    }
    Ok(s.edge_count() as f64 / (n as f64 * (n as f64 - 1.0)))
}

/// Largest weakly connected component, sorted by id.
///
/// Among equally large components the one holding the smallest id wins.
pub fn giant_component(s: &Snapshot) -> Vec<PageId> {
    let n = s.node_count();
    if n == 0 {
        return Vec::new();
    }
    let g = s.graph();
    let mut sets = DisjointSets::new(n);
    for u in 0..n {
        for &v in g.out_neighbors(u) {
            sets.union(u, v);
        }
    }
    let mut size = alloc::vec![0usize; n];
    for u in 0..n {
        size[sets.find(u)] += 1;
    }
    // nodes are id-sorted, so the first root reaching the max size holds the smallest member id
    let mut best_root = sets.find(0);
    for u in 0..n {
        let r = sets.find(u);
        if size[r] > size[best_root] {
            best_root = r;
        }
    }
    (0..n)
        .filter(|&u| sets.find(u) == best_root)
        .map(|u| s.nodes()[u])
        .collect()
}

/// Mean and standard error of yearly in-degree growth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Per node-year relative in-degree change `(d1 + 1) / (d0 + 1) - 1`,
/// over consecutive snapshot pairs, for nodes present in both with `d0 <
/// degree_cap`.
pub fn in_degree_growth_rates(snapshots: &[Snapshot], degree_cap: usize) -> Result<GrowthRate> {
    if snapshots.len() < 2 {
        return Err(Error::InsufficientData("growth rates need at least two snapshots"));
    }
    let mut rates = Vec::new();
    for pair in snapshots.windows(2) {
        let (before, after) = (&pair[0], &pair[1]);
        let deg_before = before.in_degrees();
        let deg_after = after.in_degrees();
        for (i, id) in before.nodes().iter().enumerate() {
            let d0 = deg_before[i];
            if d0 >= degree_cap {
                continue;
            }
            if let Ok(j) = after.nodes().binary_search(id) {
                let d1 = deg_after[j];
                rates.push((d1 as f64 + 1.0) / (d0 as f64 + 1.0) - 1.0);
            }
        }
    }
    if rates.is_empty() {
        return Err(Error::InsufficientData("no qualifying node-years"));
    }
    let mean = math::mean(&rates);
    let std_error = if rates.len() > 1 {
        let var = rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>()
            / (rates.len() as f64 - 1.0);
        math::sqrt(var / rates.len() as f64)
    } else {
        0.0
    };
    Ok(GrowthRate {
        mean,
        std_error,
        samples: rates.len(),
    })
}
