//! Builds a corpus from a directory of stored HTML pages.
//!
//! Layout: `meta.tsv` lists one page per row (file, title, category, tags,
//! created_at, size, edits, talk_edits, editors, views, norm_class) with
//! `tags` separated by `;`. Optional files: `redirects.tsv` (alias,
//! canonical), `link_times.tsv` (src, dst, first_seen_at) and
//! `population.tsv`. Links without a recorded time date from the later
//! creation of their two endpoints.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use normnet_core::canonical::{
    canonicalize, FilterConfig, RawCorpus, RawLink, RawPage, RedirectTable,
};
use normnet_core::semantics::tokenize;
use normnet_core::{Category, Corpus, NormClass, PopulationSeries, Timestamp};

use crate::corpus_io::parse_timestamp;
use crate::error::{NormnetError, Result};
use crate::html::parse_page;
use crate::tsv::Table;

const META_COLUMNS: [&str; 11] = [
    "file",
    "title",
    "category",
    "tags",
    "created_at",
    "size",
    "edits",
    "talk_edits",
    "editors",
    "views",
    "norm_class",
];

pub fn read_redirects(path: &Path) -> Result<RedirectTable> {
    let t = Table::read(path)?;
    let (a, c) = (t.column("alias")?, t.column("canonical")?);
    let mut table = RedirectTable::new();
    for (_, f) in &t.rows {
        table.insert(f[a].clone(), f[c].clone());
    }
    Ok(table)
}

fn read_link_times(
    path: &Path,
    cfg: &FilterConfig,
) -> Result<BTreeMap<(String, String), Timestamp>> {
    let t = Table::read(path)?;
    let col: Vec<usize> = ["src", "dst", "first_seen_at"]
        .iter()
        .map(|c| t.column(c))
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for (line, f) in &t.rows {
        let ts = parse_timestamp(&f[col[2]]).map_err(|m| t.error(*line, m))?;
        out.insert(
            (
                cfg.normalize_title(&f[col[0]]),
                cfg.normalize_title(&f[col[1]]),
            ),
            ts,
        );
    }
    Ok(out)
}

/// Parses every listed page, then filters, merges redirects and validates.
pub fn ingest_html_dir(dir: &Path, cfg: &FilterConfig) -> Result<Corpus> {
    let meta = Table::read(&dir.join("meta.tsv"))?;
    let col: Vec<usize> = META_COLUMNS
        .iter()
        .map(|c| meta.column(c))
        .collect::<Result<_>>()?;
    let redirects = match dir.join("redirects.tsv") {
        p if p.exists() => read_redirects(&p)?,
        _ => RedirectTable::new(),
    };
    let times = match dir.join("link_times.tsv") {
        p if p.exists() => read_link_times(&p, cfg)?,
        _ => BTreeMap::new(),
    };
    let population = match dir.join("population.tsv") {
        p if p.exists() => crate::corpus_io::read_population_file(&p)?,
        _ => PopulationSeries::default(),
    };

    let mut raw = RawCorpus {
        population,
        ..RawCorpus::default()
    };
    for (line, f) in &meta.rows {
        let line = *line;
        let path = dir.join(&f[col[0]]);
        let html = fs::read_to_string(&path).map_err(|e| NormnetError::io(&path, e))?;
        let parsed = parse_page(&html, cfg).map_err(|source| NormnetError::Html {
            path: path.clone(),
            source,
        })?;
        let created = parse_timestamp(&f[col[4]]).map_err(|m| meta.error(line, m))?;
        let category: Category = meta.parse_field(line, f, col[2])?;
        let mut page = RawPage::new(f[col[1]].clone(), category, created);
        page.tags = f[col[3]]
            .split(';')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect();
        page.page_size_bytes = meta.parse_field(line, f, col[5])?;
        page.n_edits = meta.parse_field(line, f, col[6])?;
        page.n_talk_edits = meta.parse_field(line, f, col[7])?;
        page.n_editors = meta.parse_field(line, f, col[8])?;
        page.page_views = meta.parse_field(line, f, col[9])?;
        page.norm_class = match f[col[10]].as_str() {
            "" => None,
            _ => Some(meta.parse_field::<NormClass>(line, f, col[10])?),
        };
        page.token_counts = tokenize(&parsed.text).counts;
        let src = cfg.normalize_title(&page.title);
        for dst in parsed.links {
            let first_seen_at = times
                .get(&(src.clone(), dst.clone()))
                .copied()
                .unwrap_or(Timestamp::MIN);
            raw.links.push(RawLink {
                src: src.clone(),
                dst,
                first_seen_at,
            });
        }
        raw.pages.push(page);
    }
    Ok(canonicalize(raw, &redirects, cfg)?)
}
