//! Title normalization, exclusion filters, redirect merging and edge
//! cleanup that turn raw crawled records into a validated [`Corpus`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{Category, Corpus, LinkEvent, NormClass, Page, PageId, PopulationSeries};
use crate::time::Timestamp;
use crate::{Error, Result};

/// Exclusion rules and markup conventions for ingest.
///
/// Title patterns starting with `^` match at the start of the title, all
/// others anywhere in it. Matching ignores case and treats `_` as a space.
/// Category patterns match the same way against each editor-assigned tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    pub title_exclude_patterns: Vec<String>,
    pub category_exclude_patterns: Vec<String>,
    /// Class or id substrings marking navigation boxes.
    pub navbox_markers: Vec<String>,
    pub namespace_prefixes: Vec<String>,
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Default for FilterConfig {
    /// Editable starting profile: lists, noticeboards and project pages out.
    fn default() -> Self {
        FilterConfig {
            title_exclude_patterns: strings(&[
                "^list of",
                "^lists of",
                "^index of",
                "noticeboard",
                "wikiproject",
                "^requests for",
                "village pump",
                "/archive",
                "^help desk",
            ]),
            category_exclude_patterns: strings(&[
                "lists",
                "noticeboards",
                "wikiprojects",
                "navigational templates",
                "redirects",
            ]),
            navbox_markers: strings(&["navbox", "sidebar"]),
            namespace_prefixes: strings(&["Wikipedia:", "WP:", "Project:"]),
        }
    }
}

fn fold(s: &str) -> String {
    s.replace('_', " ").to_lowercase()
}

fn pattern_matches(pattern: &str, subject: &str) -> bool {
    let subject = fold(subject);
    match pattern.strip_prefix('^') {
        Some(p) => subject.starts_with(&fold(p)),
        None => subject.contains(&fold(pattern)),
    }
}

impl FilterConfig {
    pub fn excludes_title(&self, title: &str) -> bool {
        let bare = self.strip_namespace(title).unwrap_or(title);
        self.title_exclude_patterns.iter().any(|p| pattern_matches(p, bare.trim()))
    }

    pub fn excludes_tags(&self, tags: &[String]) -> bool {
        tags.iter()
            .any(|t| self.category_exclude_patterns.iter().any(|p| pattern_matches(p, t)))
    }

    /// The title without a recognised namespace prefix, or `None` when it
    /// carries none.
    pub fn strip_namespace<'a>(&self, title: &'a str) -> Option<&'a str> {
        let title = title.trim_start();
        self.namespace_prefixes.iter().find_map(|p| {
            let head = title.get(..p.len())?;
            head.eq_ignore_ascii_case(p).then(|| &title[p.len()..])
        })
    }

    /// Canonical spelling: namespace removed, spaces as `_`, runs collapsed,
    /// first letter upper-cased.
    pub fn normalize_title(&self, title: &str) -> String {
        let bare = self.strip_namespace(title).unwrap_or(title);
        let joined = bare
            .split(|c: char| c == '_' || c.is_whitespace())
            .filter(|w| !w.is_empty())
            .collect::<Vec<_>>()
            .join("_");
        let mut chars = joined.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().chain(chars).collect(),
            None => String::new(),
        }
    }

    pub fn is_navbox_marker(&self, attribute_value: &str) -> bool {
        let v = attribute_value.to_lowercase();
        self.navbox_markers.iter().any(|m| v.contains(&m.to_lowercase()))
    }
}

/// Alias titles mapped to their redirect targets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RedirectTable {
    map: BTreeMap<String, String>,
}

impl RedirectTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `alias -> target`; a later entry for the same alias wins.
    pub fn insert(&mut self, alias: impl Into<String>, target: impl Into<String>) {
        let (alias, target) = (alias.into(), target.into());
        if alias != target {
            self.map.insert(alias, target);
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(a, t)| (a.as_str(), t.as_str()))
    }

    /// Same table with both sides put through `cfg.normalize_title`.
    pub fn normalized(&self, cfg: &FilterConfig) -> RedirectTable {
        let mut out = RedirectTable::new();
        for (a, t) in &self.map {
            out.insert(cfg.normalize_title(a), cfg.normalize_title(t));
        }
        out
    }

    /// Follows redirects from `title` to a fixed point.
    pub fn resolve<'a>(&'a self, title: &'a str) -> Result<&'a str> {
        let mut path: Vec<&str> = Vec::new();
        let mut cur = title;
        while let Some(next) = self.map.get(cur) {
            if path.len() > self.map.len() || path.contains(&cur) {
                let start = path.iter().position(|&p| p == cur).unwrap_or(0);
                let mut members: Vec<String> = path[start..].iter().map(|s| s.to_string()).collect();
                members.sort();
                return Err(Error::RedirectCycle(members));
            }
            path.push(cur);
            cur = next;
        }
        Ok(cur)
    }

    /// Every alias mapped straight to its final target.
    pub fn resolved(&self) -> Result<RedirectTable> {
        let mut map = BTreeMap::new();
        for a in self.map.keys() {
            map.insert(a.clone(), self.resolve(a)?.to_string());
        }
        Ok(RedirectTable { map })
    }
}

/// A page as crawled, before normalization and filtering.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPage {
    pub title: String,
    pub category: Category,
    /// Editor-assigned category tags.
    pub tags: Vec<String>,
    pub created_at: Timestamp,
    pub page_size_bytes: u64,
    pub n_edits: u64,
    pub n_talk_edits: u64,
    pub n_editors: u64,
    pub page_views: u64,
    pub token_counts: BTreeMap<String, u64>,
    pub norm_class: Option<NormClass>,
}

impl RawPage {
    pub fn new(title: impl Into<String>, category: Category, created_at: Timestamp) -> Self {
        RawPage {
            title: title.into(),
            category,
            tags: Vec::new(),
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

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLink {
    pub src: String,
    pub dst: String,
    pub first_seen_at: Timestamp,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawCorpus {
    pub pages: Vec<RawPage>,
    pub links: Vec<RawLink>,
    pub population: PopulationSeries,
}

/// Folds `other` into `into`. Activity counters and token counts add up;
/// editor counts take the maximum since the editor sets may overlap.
fn merge_page(into: &mut RawPage, other: RawPage) {
    into.created_at = into.created_at.min(other.created_at);
    into.page_size_bytes = into.page_size_bytes.max(other.page_size_bytes);
    into.n_edits += other.n_edits;
    into.n_talk_edits += other.n_talk_edits;
    into.n_editors = into.n_editors.max(other.n_editors);
    into.page_views += other.page_views;
    for (w, c) in other.token_counts {
        *into.token_counts.entry(w).or_insert(0) += c;
    }
    into.tags.extend(other.tags);
    if into.norm_class.is_none() {
        into.norm_class = other.norm_class;
    }
}

/// Builds a validated corpus from raw records.
///
/// Titles are normalized and resolved through `redirects`; pages that
/// resolve to the same title are merged, with the record already carrying
/// the canonical title providing category and class. Excluded pages vanish
/// with their links. Links to pages outside the corpus and self-links are
/// dropped, parallel links keep the earliest sighting, and a link is never
/// dated before either endpoint exists. Ids follow sorted title order.
pub fn canonicalize(raw: RawCorpus, redirects: &RedirectTable, cfg: &FilterConfig) -> Result<Corpus> {
    let table = redirects.normalized(cfg).resolved()?;
    let canon = |title: &str| -> String {
        let t = cfg.normalize_title(title);
        match table.map.get(&t) {
            Some(target) => target.clone(),
            None => t,
        }
    };

    let mut merged: BTreeMap<String, RawPage> = BTreeMap::new();
    let mut aliased: Vec<(String, RawPage)> = Vec::new();
    for mut p in raw.pages {
        let norm = cfg.normalize_title(&p.title);
        if norm.is_empty() {
            return Err(Error::InvalidCorpus("page with an empty title".into()));
        }
        let target = canon(&p.title);
        if target == norm {
            p.title = norm;
            match merged.remove(&target) {
                Some(prev) => {
                    let mut prev = prev;
                    core::mem::swap(&mut prev, &mut p);
                    merge_page(&mut p, prev);
                    merged.insert(target, p);
                }
                None => {
                    merged.insert(target, p);
                }
            }
        } else {
            aliased.push((target, p));
        }
    }
    for (target, mut p) in aliased {
        match merged.get_mut(&target) {
            Some(into) => merge_page(into, p),
            None => {
                p.title = target.clone();
                merged.insert(target, p);
            }
        }
    }
    merged.retain(|title, p| !cfg.excludes_title(title) && !cfg.excludes_tags(&p.tags));

    let ids: BTreeMap<&str, PageId> = merged
        .keys()
        .enumerate()
        .map(|(i, t)| (t.as_str(), PageId(i as u32)))
        .collect();
    let mut earliest: BTreeMap<(PageId, PageId), Timestamp> = BTreeMap::new();
    for l in &raw.links {
        let (s, d) = (canon(&l.src), canon(&l.dst));
        let (Some(&si), Some(&di)) = (ids.get(s.as_str()), ids.get(d.as_str())) else {
            continue;
        };
        if si == di {
            continue;
        }
        let floor = merged[&s].created_at.max(merged[&d].created_at);
        let t = l.first_seen_at.max(floor);
        earliest.entry((si, di)).and_modify(|e| *e = (*e).min(t)).or_insert(t);
    }

    let pages: Vec<Page> = merged
        .into_iter()
        .enumerate()
        .map(|(i, (title, p))| Page {
            id: PageId(i as u32),
            title,
            category: p.category,
            created_at: p.created_at,
            page_size_bytes: p.page_size_bytes,
            n_edits: p.n_edits,
            n_talk_edits: p.n_talk_edits,
            n_editors: p.n_editors,
            page_views: p.page_views,
            token_counts: p.token_counts.into_iter().filter(|&(_, c)| c > 0).collect(),
            norm_class: p.norm_class,
        })
        .collect();
    let links = earliest
        .into_iter()
        .map(|((src, dst), first_seen_at)| LinkEvent { src, dst, first_seen_at })
        .collect();
    Corpus::new(pages, links, raw.population)
}

/// Titles in `corpus` that appear as aliases in `redirects`.
pub fn alias_titles(corpus: &Corpus, redirects: &RedirectTable, cfg: &FilterConfig) -> BTreeSet<String> {
    let table = redirects.normalized(cfg);
    corpus
        .pages()
        .iter()
        .filter(|p| table.map.contains_key(&p.title))
        .map(|p| p.title.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page(title: &str, year: i32) -> RawPage {
        RawPage::new(title, Category::Guideline, Timestamp::year_start(year))
    }

    fn link(a: &str, b: &str, t: i64) -> RawLink {
        RawLink { src: a.into(), dst: b.into(), first_seen_at: Timestamp(t) }
    }

    fn corpus(pages: Vec<RawPage>, links: Vec<RawLink>) -> RawCorpus {
        RawCorpus { pages, links, population: PopulationSeries::default() }
    }

    #[test]
    fn normalizes_titles() {
        let cfg = FilterConfig::default();
        assert_eq!(cfg.normalize_title("WP:Consensus"), "Consensus");
        assert_eq!(cfg.normalize_title("wikipedia:assume  good faith"), "Assume_good_faith");
        assert_eq!(cfg.normalize_title(" Neutral_point of_view "), "Neutral_point_of_view");
        assert_eq!(cfg.strip_namespace("Talk:Foo"), None);
    }

    #[test]
    fn filters_titles_and_tags() {
        let cfg = FilterConfig::default();
        assert!(cfg.excludes_title("List_of_guidelines"));
        assert!(cfg.excludes_title("Wikipedia:List of policies"));
        assert!(cfg.excludes_title("Administrators'_noticeboard"));
        assert!(!cfg.excludes_title("Blacklist of spam"));
        assert!(!cfg.excludes_title("Consensus"));
        assert!(cfg.excludes_tags(&["Wikipedia noticeboards".into()]));
        assert!(!cfg.excludes_tags(&["Wikipedia conduct policies".into()]));
        assert!(cfg.is_navbox_marker("vertical-navbox nowraplinks"));
        assert!(!FilterConfig::default().title_exclude_patterns.is_empty());
    }

    #[test]
    fn list_pages_removed_with_links() {
        let raw = corpus(
            vec![page("Consensus", 2004), page("List of guidelines", 2004), page("Civility", 2004)],
            vec![
                link("List of guidelines", "Consensus", 0),
                link("Civility", "List_of_guidelines", 0),
                link("Civility", "Consensus", 0),
            ],
        );
        let c = canonicalize(raw, &RedirectTable::new(), &FilterConfig::default()).unwrap();
        let titles: Vec<&str> = c.pages().iter().map(|p| p.title.as_str()).collect();
        assert_eq!(titles, ["Civility", "Consensus"]);
        assert_eq!(c.links().len(), 1);
        assert_eq!((c.links()[0].src, c.links()[0].dst), (PageId(0), PageId(1)));
    }

    #[test]
    fn self_edges_dropped_and_parallel_collapsed() {
        let t0 = Timestamp::year_start(2004).secs();
        let raw = corpus(
            vec![page("A", 2004), page("B", 2004)],
            vec![link("A", "A", t0), link("A", "B", t0 + 5), link("A", "B", t0 + 2)],
        );
        let c = canonicalize(raw, &RedirectTable::new(), &FilterConfig::default()).unwrap();
        assert_eq!(
            c.links(),
            &[LinkEvent { src: PageId(0), dst: PageId(1), first_seen_at: Timestamp(t0 + 2) }]
        );
    }

    #[test]
    fn links_never_predate_endpoints() {
        let raw = corpus(vec![page("A", 2004), page("B", 2006)], vec![link("A", "B", 0)]);
        let c = canonicalize(raw, &RedirectTable::new(), &FilterConfig::default()).unwrap();
        assert_eq!(c.links()[0].first_seen_at, Timestamp::year_start(2006));
    }

    #[test]
    fn redirects_merge_synonyms() {
        let mut r = RedirectTable::new();
        r.insert("AGF", "Assume good faith");
        r.insert("WP:GOODFAITH", "AGF");
        let mut agf = page("AGF", 2003);
        agf.n_edits = 3;
        let mut full = page("Assume_good_faith", 2004);
        full.n_edits = 10;
        full.category = Category::Guideline;
        agf.category = Category::Essay;
        let raw = corpus(
            vec![agf, full, page("Civility", 2004)],
            vec![link("Civility", "AGF", 0), link("Civility", "WP:GOODFAITH", 1), link("AGF", "Civility", 0)],
        );
        let cfg = FilterConfig::default();
        let c = canonicalize(raw, &r, &cfg).unwrap();
        assert_eq!(c.pages().len(), 2);
        let p = c.page_by_title("Assume_good_faith").unwrap();
        assert_eq!((p.n_edits, p.category), (13, Category::Guideline));
        assert_eq!(p.created_at, Timestamp::year_start(2003));
        assert_eq!(c.links().len(), 2);
        assert!(alias_titles(&c, &r, &cfg).is_empty());
        assert_eq!(r.normalized(&cfg).resolve("GOODFAITH").unwrap(), "Assume_good_faith");
    }

    #[test]
    fn redirect_cycle_names_members() {
        let mut r = RedirectTable::new();
        r.insert("A", "B");
        r.insert("B", "C");
        r.insert("C", "A");
        r.insert("D", "A");
        match r.resolved() {
            Err(Error::RedirectCycle(m)) => assert_eq!(m, ["A", "B", "C"]),
            other => panic!("{other:?}"),
        }
        let raw = corpus(vec![page("A", 2004)], vec![]);
        assert!(matches!(
            canonicalize(raw, &r, &FilterConfig::default()),
            Err(Error::RedirectCycle(_))
        ));
    }

    #[test]
    fn ids_follow_title_order() {
        let raw = corpus(vec![page("Zeta", 2004), page("Alpha", 2005), page("Mid", 2004)], vec![]);
        let c = canonicalize(raw, &RedirectTable::new(), &FilterConfig::default()).unwrap();
        let titles: Vec<&str> = c.pages().iter().map(|p| p.title.as_str()).collect();
        assert_eq!(titles, ["Alpha", "Mid", "Zeta"]);
    }
}
