//! Pipeline stages. Each stage reads what it needs from the output
//! directory and writes its own artifacts there, so running the stages one
//! by one produces the same tree as [`run_pipeline`].

use std::path::{Path, PathBuf};

use normnet_core::canonical::FilterConfig;
use normnet_core::semantics::TopicModel;
use normnet_core::Corpus;
use serde::Serialize;

use crate::analysis::{self as an, AnalysisReport, Context, KappaReport};
use crate::config::{CorpusFormat, PipelineConfig};
use crate::corpus_io::{read_corpus, write_corpus};
use crate::error::{NormnetError, Result};
use crate::html_ingest::ingest_html_dir;
use crate::model_io::{read_topic_model, write_topic_model};
use crate::num::{fmt12, fmt_opt};
use crate::tsv::{write_file, Table, Writer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Snapshot,
    Centrality,
    Gini,
    Influence,
    OverlapSeries,
    Topics,
    Coherence,
    Communities,
    Clustering,
    Regress,
    Correlate,
    Kappa,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 14] = [
        Stage::Ingest,
        Stage::Snapshot,
        Stage::Centrality,
        Stage::Gini,
        Stage::Influence,
        Stage::OverlapSeries,
        Stage::Topics,
        Stage::Coherence,
        Stage::Communities,
        Stage::Clustering,
        Stage::Regress,
        Stage::Correlate,
        Stage::Kappa,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Snapshot => "snapshot",
            Stage::Centrality => "centrality",
            Stage::Gini => "gini",
            Stage::Influence => "influence",
            Stage::OverlapSeries => "overlap-series",
            Stage::Topics => "topics",
            Stage::Coherence => "coherence",
            Stage::Communities => "communities",
            Stage::Clustering => "clustering",
            Stage::Regress => "regress",
            Stage::Correlate => "correlate",
            Stage::Kappa => "kappa",
            Stage::Report => "report",
        }
    }

    pub fn from_name(name: &str) -> Option<Stage> {
        Stage::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Runs the stage, tagging any failure with its name.
    pub fn run(self, cfg: &PipelineConfig) -> Result<()> {
        self.run_inner(cfg).map_err(|e| NormnetError::Stage {
            stage: self.name(),
            source: Box::new(e),
        })
    }

    fn run_inner(self, cfg: &PipelineConfig) -> Result<()> {
        let out = &cfg.out;
        if self == Stage::Ingest {
            return ingest(cfg);
        }
        let ctx = load_context(cfg)?;
        match self {
            Stage::Ingest => unreachable!(),
            Stage::Snapshot => {
                write_rows(out, "snapshots.tsv", &an::snapshot_rows(&ctx)?)?;
                write_json(out, "growth.json", &an::growth(&ctx)?)
            }
            Stage::Centrality => {
                write_rows(out, "centrality.tsv", &an::centrality_rows(&ctx))?;
                write_rows(out, "ranking.tsv", &an::ranking(&ctx, usize::MAX))?;
                write_rows(out, "breaks.tsv", &an::breaks(&ctx)?)?;
                write_rows(out, "persistence.tsv", &an::persistence(&ctx)?)
            }
            Stage::Gini => write_rows(out, "gini.tsv", &an::gini_rows(&ctx)?),
            Stage::Influence => {
                write_rows(out, "core_set.tsv", &an::ranking(&ctx, cfg.core_set_size))?;
                write_rows(out, "influence.tsv", &an::influence_rows(&ctx)?)
            }
            Stage::OverlapSeries => write_rows(out, "overlap.tsv", &an::overlap_rows(&ctx)?),
            Stage::Topics => {
                let tm = ctx.fit_topics()?;
                write_topic_model(&tm, &out.join("topics"))?;
                write_rows(out, "topics.tsv", &an::topic_rows(&tm, an::TOPIC_WORDS))
            }
            Stage::Coherence => {
                let tm = load_topics(cfg)?;
                let (entries, series) = an::coherence(&ctx, &tm)?;
                write_rows(out, "coherence.tsv", &entries)?;
                write_rows(out, "coherence_series.tsv", &series)
            }
            Stage::Communities => {
                let tm = load_topics_if_present(cfg)?;
                let c = an::communities(&ctx, tm.as_ref())?;
                write_rows(out, "partition.tsv", &c.assignment)?;
                write_rows(out, "cluster_links.tsv", &c.cluster_links)?;
                write_json(out, "communities.json", &c)
            }
            Stage::Clustering => {
                write_rows(out, "clustering.tsv", &an::clustering_rows(&ctx))?;
                write_rows(out, "clustering_nodes.tsv", &an::final_clustering(&ctx))
            }
            Stage::Regress => write_json(out, "regression.json", &an::regression(&ctx)?),
            Stage::Correlate => {
                let (rows, power) = an::correlations(&ctx)?;
                write_rows(out, "correlations.tsv", &rows)?;
                write_json(out, "powerlaw.json", &power)
            }
            Stage::Kappa => write_json(out, "kappa.json", &load_kappa(cfg)?),
            Stage::Report => {
                let tm = load_topics(cfg)?;
                let report = AnalysisReport::build(&ctx, &tm, load_kappa(cfg)?)?;
                write_json(out, "report.json", &report)?;
                for id in FIGURES {
                    emit_figure_data(&report, id, &out.join("figures"))?;
                }
                Ok(())
            }
        }
    }
}

fn ingest(cfg: &PipelineConfig) -> Result<()> {
    let corpus = match cfg.corpus_format {
        CorpusFormat::Canonical => read_corpus(&cfg.corpus)?,
        CorpusFormat::Html => ingest_html_dir(&cfg.corpus, &FilterConfig::default())?,
    };
    if corpus.is_empty() {
        return Err(NormnetError::Validation(format!(
            "{}: the corpus has no pages",
            cfg.corpus.display()
        )));
    }
    let ctx = Context::new(cfg.clone(), corpus)?;
    write_corpus(&ctx.corpus, &corpus_dir(cfg))?;
    write_json(&cfg.out, "ingest.json", &an::corpus_stats(&ctx)?)
}

pub fn corpus_dir(cfg: &PipelineConfig) -> PathBuf {
    cfg.out.join("corpus")
}

fn load_context(cfg: &PipelineConfig) -> Result<Context> {
    let dir = corpus_dir(cfg);
    if !dir.is_dir() {
        return Err(NormnetError::Validation(format!(
            "{} is missing; run the ingest stage first",
            dir.display()
        )));
    }
    let corpus: Corpus = read_corpus(&dir)?;
    Context::new(cfg.clone(), corpus)
}

fn load_topics(cfg: &PipelineConfig) -> Result<TopicModel> {
    let dir = cfg.out.join("topics");
    if !dir.is_dir() {
        return Err(NormnetError::Validation(format!(
            "{} is missing; run the topics stage first",
            dir.display()
        )));
    }
    read_topic_model(&dir)
}

fn load_topics_if_present(cfg: &PipelineConfig) -> Result<Option<TopicModel>> {
    if cfg.out.join("topics").is_dir() {
        load_topics(cfg).map(Some)
    } else {
        Ok(None)
    }
}

/// Reads `item, rater_a, rater_b` label pairs, if configured.
pub fn read_kappa_labels(path: &Path) -> Result<(Vec<String>, Vec<String>)> {
    let t = Table::read(path)?;
    let (a, b) = (t.column("rater_a")?, t.column("rater_b")?);
    t.column("item")?;
    Ok(t.rows
        .iter()
        .map(|(_, f)| (f[a].clone(), f[b].clone()))
        .unzip())
}

fn load_kappa(cfg: &PipelineConfig) -> Result<Option<KappaReport>> {
    match &cfg.kappa_labels {
        None => Ok(None),
        Some(path) => {
            let (a, b) = read_kappa_labels(path)?;
            an::kappa(&a, &b).map(Some)
        }
    }
}

/// Runs every stage in order and returns the assembled report.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<AnalysisReport> {
    for stage in Stage::ALL {
        stage.run(cfg)?;
    }
    let ctx = load_context(cfg)?;
    AnalysisReport::build(&ctx, &load_topics(cfg)?, load_kappa(cfg)?)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| NormnetError::Validation(e.to_string()))?;
    text.push('\n');
    write_file(&dir.join(name), &text)
}

/// One TSV line per row: the header is the field names, numbers print with
/// twelve significant digits, `null` prints as `NA` and lists join with `;`.
/// No rows gives an empty file.
fn write_rows<T: Serialize>(dir: &Path, name: &str, rows: &[T]) -> Result<()> {
    write_file(&dir.join(name), &rows_tsv(rows)?)
}

pub fn rows_tsv<T: Serialize>(rows: &[T]) -> Result<String> {
    let values: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| serde_json::to_value(r).map_err(|e| NormnetError::Validation(e.to_string())))
        .collect::<Result<_>>()?;
    let header: Vec<String> = match values.first() {
        Some(serde_json::Value::Object(m)) => m.keys().cloned().collect(),
        _ => return Ok(String::new()),
    };
    let mut out = String::new();
    out.push_str(&header.join("\t"));
    out.push('\n');
    for v in &values {
        let cells: Vec<String> = header.iter().map(|k| cell(&v[k])).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    Ok(out)
}

fn cell(v: &serde_json::Value) -> String {
    use serde_json::Value as V;
    match v {
        V::Null => "NA".into(),
        V::Bool(b) => b.to_string(),
        V::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (_, Some(i)) => i.to_string(),
            _ => fmt12(n.as_f64().unwrap_or(f64::NAN)),
        },
        V::String(s) => s.clone(),
        V::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        V::Object(_) => v.to_string(),
    }
}

pub const FIGURES: [&str; 10] = [
    "fig1",
    "fig2",
    "fig3_nodes",
    "fig3_edges",
    "fig3_clusters",
    "fig4",
    "figB",
    "figC",
    "figD",
    "figE",
];

/// Columnar plot data for one figure.
pub fn figure_tsv(report: &AnalysisReport, id: &str) -> Result<String> {
    let mut w;
    match id {
        "fig1" => {
            w = Writer::new(&["month", "policy_pages", "other_pages", "active_users"]);
            for r in &report.population {
                let users = r.active_users.map_or("NA".to_string(), |u| u.to_string());
                w.row([
                    r.month.clone(),
                    r.policy_pages.to_string(),
                    r.other_pages.to_string(),
                    users,
                ]);
            }
        }
        "fig2" => {
            w = Writer::new(&["year", "gini"]);
            for r in &report.gini {
                w.row([r.year.to_string(), fmt_opt(r.gini)]);
            }
        }
        "fig3_nodes" => {
            w = Writer::new(&["page_id", "title", "cluster", "ec"]);
            let c = &report.communities;
            for a in &c.assignment {
                let rank = report.ranking.iter().find(|r| r.page_id == a.page_id);
                let (title, ec) = rank.map_or((String::new(), "NA".into()), |r| {
                    (r.title.clone(), fmt12(r.score))
                });
                w.row([a.page_id.to_string(), title, a.cluster.to_string(), ec]);
            }
        }
        "fig3_edges" => {
            w = Writer::new(&["src_id", "dst_id"]);
            for (a, b) in &report.communities.edges {
                w.row([a.to_string(), b.to_string()]);
            }
        }
        "fig3_clusters" => {
            w = Writer::new(&[
                "cluster",
                "size",
                "size_fraction",
                "dominant_topic",
                "norm_class",
                "top_pages",
            ]);
            for c in &report.communities.clusters {
                let titles: Vec<&str> = c.top_pages.iter().map(|p| p.title.as_str()).collect();
                w.row([
                    c.cluster.to_string(),
                    c.size.to_string(),
                    fmt12(c.size_fraction),
                    c.dominant_topic.map_or("NA".into(), |t| t.to_string()),
                    c.norm_class.clone().unwrap_or_else(|| "NA".into()),
                    titles.join(";"),
                ]);
            }
        }
        "fig4" => {
            w = Writer::new(&[
                "year",
                "mean_overlap",
                "mean_coherence",
                "alt_mean_overlap",
                "alt_mean_coherence",
            ]);
            for (o, c) in report.overlap.iter().zip(&report.coherence) {
                w.row([
                    o.year.to_string(),
                    fmt_opt(o.mean_overlap),
                    fmt_opt(c.mean_coherence),
                    fmt_opt(o.alt_mean_overlap),
                    fmt_opt(c.alt_mean_coherence),
                ]);
            }
        }
        "figB" => {
            w = Writer::new(&["page_id", "ec", "view_share"]);
            for r in &report.powerlaw.scatter {
                w.row([r.page_id.to_string(), fmt12(r.ec), fmt12(r.view_share)]);
            }
        }
        "figC" => {
            w = Writer::new(&["page_id", "age_days", "editors", "ec", "core"]);
            let core: Vec<u32> = report.core_set.iter().map(|r| r.page_id).collect();
            for r in &report.regression.fitted {
                w.row([
                    r.page_id.to_string(),
                    fmt12(r.age_days),
                    r.editors.to_string(),
                    fmt12(r.observed),
                    core.contains(&r.page_id).to_string(),
                ]);
            }
        }
        "figD" => {
            w = Writer::new(&["rank", "page_id", "category", "ec", "break_after"]);
            for r in &report.ranking {
                let brk = report.breaks.iter().any(|b| b.rank == r.rank);
                w.row([
                    r.rank.to_string(),
                    r.page_id.to_string(),
                    r.category.clone(),
                    fmt12(r.score),
                    brk.to_string(),
                ]);
            }
        }
        "figE" => {
            w = Writer::new(&["year", "average_clustering"]);
            for r in &report.clustering {
                w.row([r.year.to_string(), fmt12(r.average)]);
            }
        }
        other => return Err(NormnetError::UnknownFigure(other.to_string())),
    }
    Ok(w.finish())
}

/// Writes `<dir>/<id>.tsv` and returns its path.
pub fn emit_figure_data(report: &AnalysisReport, id: &str, dir: &Path) -> Result<PathBuf> {
    let text = figure_tsv(report, id)?;
    let path = dir.join(format!("{id}.tsv"));
    write_file(&path, &text)?;
    Ok(path)
}
