//! The canonical corpus directory: pages.tsv, links.tsv, tokens.tsv and an
//! optional population.tsv.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use chrono::DateTime;
use normnet_core::corpus::PopulationPoint;
use normnet_core::{
    Category, Corpus, LinkEvent, Month, NormClass, Page, PageId, PopulationSeries, Timestamp,
};

use crate::error::{NormnetError, Result};
use crate::tsv::{check_cell, write_file, Table, Writer};

pub const PAGES_HEADER: [&str; 10] = [
    "id",
    "title",
    "category",
    "created_at",
    "size",
    "edits",
    "talk_edits",
    "editors",
    "views",
    "norm_class",
];
pub const LINKS_HEADER: [&str; 3] = ["src_id", "dst_id", "first_seen_at"];
pub const TOKENS_HEADER: [&str; 3] = ["page_id", "word", "count"];
pub const POPULATION_HEADER: [&str; 2] = ["month", "active_users"];

pub fn parse_timestamp(s: &str) -> std::result::Result<Timestamp, String> {
    DateTime::parse_from_rfc3339(s)
        .map(|t| Timestamp(t.timestamp()))
        .map_err(|e| format!("bad timestamp {s:?}: {e}"))
}

pub fn parse_month(s: &str) -> std::result::Result<Month, String> {
    let bad = || format!("bad month {s:?}, expected YYYY-MM");
    let (y, m) = s.split_once('-').ok_or_else(bad)?;
    let year: i32 = y.parse().map_err(|_| bad())?;
    let month: u8 = m.parse().map_err(|_| bad())?;
    if y.len() != 4 || m.len() != 2 || !(1..=12).contains(&month) {
        return Err(bad());
    }
    Ok(Month::new(year, month))
}

fn timestamp_field(t: &Table, line: usize, fields: &[String], col: usize) -> Result<Timestamp> {
    parse_timestamp(&fields[col]).map_err(|m| t.error(line, m))
}

fn read_pages(t: &Table) -> Result<Vec<Page>> {
    let col: Vec<usize> = PAGES_HEADER
        .iter()
        .map(|c| t.column(c))
        .collect::<Result<_>>()?;
    let mut seen_ids: BTreeMap<PageId, usize> = BTreeMap::new();
    let mut seen_titles: BTreeMap<String, usize> = BTreeMap::new();
    let mut pages = Vec::new();
    for (line, f) in &t.rows {
        let line = *line;
        let id = PageId(t.parse_field(line, f, col[0])?);
        let title = f[col[1]].clone();
        if title.is_empty() {
            return Err(t.error(line, "empty title"));
        }
        if let Some(first) = seen_ids.insert(id, line) {
            return Err(t.error(
                line,
                format!("duplicate page id {id} (first on line {first})"),
            ));
        }
        if let Some(first) = seen_titles.insert(title.clone(), line) {
            return Err(t.error(
                line,
                format!("duplicate page title {title:?} (first on line {first})"),
            ));
        }
        let category: Category = t.parse_field(line, f, col[2])?;
        let mut page = Page::new(id, title, category, timestamp_field(t, line, f, col[3])?);
        page.page_size_bytes = t.parse_field(line, f, col[4])?;
        page.n_edits = t.parse_field(line, f, col[5])?;
        page.n_talk_edits = t.parse_field(line, f, col[6])?;
        page.n_editors = t.parse_field(line, f, col[7])?;
        page.page_views = t.parse_field(line, f, col[8])?;
        page.norm_class = match f[col[9]].as_str() {
            "" => None,
            _ => Some(t.parse_field::<NormClass>(line, f, col[9])?),
        };
        pages.push(page);
    }
    Ok(pages)
}

fn read_links(t: &Table, ids: &BTreeSet<PageId>) -> Result<Vec<LinkEvent>> {
    let col: Vec<usize> = LINKS_HEADER
        .iter()
        .map(|c| t.column(c))
        .collect::<Result<_>>()?;
    let mut seen = BTreeMap::new();
    let mut links = Vec::new();
    for (line, f) in &t.rows {
        let line = *line;
        let src = PageId(t.parse_field(line, f, col[0])?);
        let dst = PageId(t.parse_field(line, f, col[1])?);
        for id in [src, dst] {
            if !ids.contains(&id) {
                return Err(t.error(line, format!("unknown page id {id}")));
            }
        }
        if src == dst {
            return Err(t.error(line, format!("self-link on page {src}")));
        }
        if let Some(first) = seen.insert((src, dst), line) {
            return Err(t.error(
                line,
                format!("duplicate link {src} -> {dst} (first on line {first})"),
            ));
        }
        links.push(LinkEvent {
            src,
            dst,
            first_seen_at: timestamp_field(t, line, f, col[2])?,
        });
    }
    Ok(links)
}

fn read_tokens(t: &Table, pages: &mut [Page]) -> Result<()> {
    let col: Vec<usize> = TOKENS_HEADER
        .iter()
        .map(|c| t.column(c))
        .collect::<Result<_>>()?;
    let index: BTreeMap<PageId, usize> = pages.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
    for (line, f) in &t.rows {
        let line = *line;
        let id = PageId(t.parse_field(line, f, col[0])?);
        let &i = index
            .get(&id)
            .ok_or_else(|| t.error(line, format!("unknown page id {id}")))?;
        let word = f[col[1]].clone();
        if word.is_empty() {
            return Err(t.error(line, "empty word"));
        }
        let count: u64 = t.parse_field(line, f, col[2])?;
        if count == 0 {
            return Err(t.error(line, "token count must be positive"));
        }
        if pages[i].token_counts.insert(word.clone(), count).is_some() {
            return Err(t.error(line, format!("duplicate word {word:?} for page {id}")));
        }
    }
    Ok(())
}

fn read_population(t: &Table) -> Result<PopulationSeries> {
    let col: Vec<usize> = POPULATION_HEADER
        .iter()
        .map(|c| t.column(c))
        .collect::<Result<_>>()?;
    let mut points: Vec<PopulationPoint> = Vec::new();
    for (line, f) in &t.rows {
        let month = parse_month(&f[col[0]]).map_err(|m| t.error(*line, m))?;
        if points.last().is_some_and(|p| p.month >= month) {
            return Err(t.error(*line, "months must be strictly increasing"));
        }
        points.push(PopulationPoint {
            month,
            active_users: t.parse_field(*line, f, col[1])?,
        });
    }
    Ok(PopulationSeries::new(points)?)
}

pub fn read_population_file(path: &Path) -> Result<PopulationSeries> {
    read_population(&Table::read(path)?)
}

/// Reads and validates a canonical corpus directory.
pub fn read_corpus(dir: &Path) -> Result<Corpus> {
    let mut pages = read_pages(&Table::read(&dir.join("pages.tsv"))?)?;
    let ids: BTreeSet<PageId> = pages.iter().map(|p| p.id).collect();
    let links = read_links(&Table::read(&dir.join("links.tsv"))?, &ids)?;
    read_tokens(&Table::read(&dir.join("tokens.tsv"))?, &mut pages)?;
    let pop_path = dir.join("population.tsv");
    let population = if pop_path.exists() {
        read_population_file(&pop_path)?
    } else {
        PopulationSeries::default()
    };
    Corpus::new(pages, links, population).map_err(|e| NormnetError::Validation(e.to_string()))
}

/// File name and contents of each canonical file for `corpus`.
pub fn corpus_files(corpus: &Corpus) -> Result<Vec<(&'static str, String)>> {
    let mut pages = Writer::new(&PAGES_HEADER);
    let mut tokens = Writer::new(&TOKENS_HEADER);
    for p in corpus.pages() {
        check_cell("title", &p.title)?;
        pages.row([
            p.id.to_string(),
            p.title.clone(),
            p.category.to_string(),
            p.created_at.to_string(),
            p.page_size_bytes.to_string(),
            p.n_edits.to_string(),
            p.n_talk_edits.to_string(),
            p.n_editors.to_string(),
            p.page_views.to_string(),
            p.norm_class.map(|c| c.to_string()).unwrap_or_default(),
        ]);
        for (w, c) in &p.token_counts {
            check_cell("word", w)?;
            if w.is_empty() {
                return Err(NormnetError::Validation(format!(
                    "empty word on page {}",
                    p.id
                )));
            }
            tokens.row([p.id.to_string(), w.clone(), c.to_string()]);
        }
    }
    let mut links = Writer::new(&LINKS_HEADER);
    for l in corpus.links() {
        links.row([
            l.src.to_string(),
            l.dst.to_string(),
            l.first_seen_at.to_string(),
        ]);
    }
    let mut files = vec![
        ("pages.tsv", pages.finish()),
        ("links.tsv", links.finish()),
        ("tokens.tsv", tokens.finish()),
    ];
    if !corpus.population().is_empty() {
        let mut pop = Writer::new(&POPULATION_HEADER);
        for pt in corpus.population().points() {
            pop.row([pt.month.to_string(), pt.active_users.to_string()]);
        }
        files.push(("population.tsv", pop.finish()));
    }
    Ok(files)
}

pub fn write_corpus(corpus: &Corpus, dir: &Path) -> Result<()> {
    for (name, text) in corpus_files(corpus)? {
        write_file(&dir.join(name), &text)?;
    }
    Ok(())
}
