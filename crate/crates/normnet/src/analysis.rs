//! Every computed table of the pipeline, as plain serializable rows.
//!
//! Numbers are rounded to twelve significant digits when rows are built, so
//! JSON and TSV renderings of the same value agree.

use std::collections::BTreeMap;

use normnet_core::centrality::{
    centrality_persistence, detect_breaks, eigenvector_centrality, gini, CentralityOptions,
    CentralityVector,
};
use normnet_core::community::{
    cluster_link_fractions, local_clustering, louvain, summarize_clusters,
};
use normnet_core::influence::{influence, mean_pairwise_overlap};
use normnet_core::semantics::{fit_lda, semantic_coherence, TopicModel};
use normnet_core::stats::{
    cohens_kappa, compare_models, ols, pearson, pearson_p_value, powerlaw_fit, zscore, ModelForm,
};
use normnet_core::{
    build_snapshot, density, giant_component, in_degree_growth_rates, Corpus, Month, NormClass,
    PageId, Snapshot, Timestamp,
};
use serde::Serialize;

use crate::config::{CommunityScope, PipelineConfig};
use crate::error::{NormnetError, Result};
use crate::num::round12;

/// Maps "not defined for this data" failures to `None`.
fn defined<T>(r: normnet_core::Result<T>) -> Result<Option<T>> {
    use normnet_core::Error as E;
    match r {
        Ok(v) => Ok(Some(v)),
        Err(
            E::UndefinedInput(_)
            | E::InsufficientData(_)
            | E::UndefinedCorrelation
            | E::DegenerateColumn(_),
        ) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn ro(x: Option<f64>) -> Option<f64> {
    x.map(round12)
}

/// One yearly snapshot with its centrality vector.
#[derive(Debug, Clone)]
pub struct YearSlice {
    pub year: i32,
    pub snapshot: Snapshot,
    pub centrality: CentralityVector,
}

/// A loaded corpus with its yearly snapshots.
#[derive(Debug, Clone)]
pub struct Context {
    pub cfg: PipelineConfig,
    pub corpus: Corpus,
    pub years: Vec<YearSlice>,
}

/// Snapshot labelled `year` holds everything up to the end of that year.
pub fn year_cutoff(year: i32) -> Timestamp {
    Timestamp::year_start(year + 1)
}

impl Context {
    pub fn new(cfg: PipelineConfig, corpus: Corpus) -> Result<Context> {
        let (first, last) = corpus
            .time_span()
            .ok_or_else(|| NormnetError::Validation("the corpus has no pages".into()))?;
        let first_page = corpus
            .pages()
            .iter()
            .map(|p| p.created_at)
            .min()
            .unwrap_or(first);
        let first_year = cfg.first_year.unwrap_or(first_page.year());
        let last_year = cfg.last_year.unwrap_or(last.year());
        if first_year > last_year {
            return Err(NormnetError::Validation(format!(
                "no snapshot years between {first_year} and {last_year}"
            )));
        }
        let opts = CentralityOptions {
            epsilon: cfg.epsilon,
            tol: cfg.ec_tol,
            max_iter: cfg.ec_max_iter,
        };
        let mut years = Vec::new();
        for year in first_year..=last_year {
            let snapshot = build_snapshot(&corpus, year_cutoff(year));
            if snapshot.node_count() == 0 {
                continue;
            }
            let centrality = eigenvector_centrality(&snapshot, &opts)?;
            years.push(YearSlice {
                year,
                snapshot,
                centrality,
            });
        }
        if years.is_empty() {
            return Err(NormnetError::Validation(
                "no snapshot year contains any page".into(),
            ));
        }
        Ok(Context { cfg, corpus, years })
    }

    pub fn last(&self) -> &YearSlice {
        self.years.last().expect("at least one year")
    }

    pub fn title(&self, id: PageId) -> &str {
        self.corpus.page(id).map_or("", |p| p.title.as_str())
    }

    /// Top `n` pages of the final centrality ranking.
    pub fn core_set(&self, n: usize) -> Vec<PageId> {
        self.last()
            .centrality
            .ranked()
            .into_iter()
            .take(n)
            .map(|(id, _)| id)
            .collect()
    }

    pub fn documents(&self) -> Vec<(PageId, &BTreeMap<String, u64>)> {
        self.corpus
            .pages()
            .iter()
            .map(|p| (p.id, &p.token_counts))
            .collect()
    }

    pub fn fit_topics(&self) -> Result<TopicModel> {
        Ok(fit_lda(&self.documents(), &self.cfg.lda())?)
    }

    /// The final snapshot restricted to the configured community scope.
    pub fn community_snapshot(&self) -> Snapshot {
        let s = &self.last().snapshot;
        match self.cfg.community_scope {
            CommunityScope::Full => s.clone(),
            CommunityScope::Giant => s.restrict(&giant_component(s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    pub pages: usize,
    pub links: usize,
    pub density: Option<f64>,
    pub giant_component_size: usize,
    pub giant_component_fraction: f64,
    pub first_timestamp: String,
    pub last_timestamp: String,
    pub first_year: i32,
    pub last_year: i32,
}

pub fn corpus_stats(ctx: &Context) -> Result<CorpusStats> {
    let all = build_snapshot(&ctx.corpus, Timestamp::MAX);
    let giant = giant_component(&all).len();
    let (first, last) = ctx.corpus.time_span().expect("nonempty corpus");
    Ok(CorpusStats {
        pages: all.node_count(),
        links: all.edge_count(),
        density: ro(defined(density(&all))?),
        giant_component_size: giant,
        giant_component_fraction: round12(giant as f64 / all.node_count() as f64),
        first_timestamp: first.to_string(),
        last_timestamp: last.to_string(),
        first_year: ctx.years[0].year,
        last_year: ctx.last().year,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotRow {
    pub year: i32,
    pub cutoff: String,
    pub nodes: usize,
    pub edges: usize,
    pub density: Option<f64>,
    pub giant_size: usize,
}

pub fn snapshot_rows(ctx: &Context) -> Result<Vec<SnapshotRow>> {
    ctx.years
        .iter()
        .map(|y| {
            Ok(SnapshotRow {
                year: y.year,
                cutoff: y.snapshot.cutoff().to_string(),
                nodes: y.snapshot.node_count(),
                edges: y.snapshot.edge_count(),
                density: ro(defined(density(&y.snapshot))?),
                giant_size: giant_component(&y.snapshot).len(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSummary {
    pub degree_cap: usize,
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

pub fn growth(ctx: &Context) -> Result<Option<GrowthSummary>> {
    let snaps: Vec<Snapshot> = ctx.years.iter().map(|y| y.snapshot.clone()).collect();
    let g = defined(in_degree_growth_rates(&snaps, ctx.cfg.growth_degree_cap))?;
    Ok(g.map(|g| GrowthSummary {
        degree_cap: ctx.cfg.growth_degree_cap,
        mean: round12(g.mean),
        std_error: round12(g.std_error),
        samples: g.samples,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub page_id: u32,
    pub title: String,
    pub category: String,
    pub score: f64,
}

pub fn ranking(ctx: &Context, top: usize) -> Vec<RankRow> {
    ctx.last()
        .centrality
        .ranked()
        .into_iter()
        .take(top)
        .enumerate()
        .map(|(i, (id, score))| RankRow {
            rank: i + 1,
            page_id: id.0,
            title: ctx.title(id).to_string(),
            category: ctx
                .corpus
                .page(id)
                .map_or(String::new(), |p| p.category.to_string()),
            score: round12(score),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityRow {
    pub year: i32,
    pub page_id: u32,
    pub score: f64,
}

pub fn centrality_rows(ctx: &Context) -> Vec<CentralityRow> {
    ctx.years
        .iter()
        .flat_map(|y| {
            y.centrality
                .ids()
                .iter()
                .zip(y.centrality.scores())
                .map(move |(id, &s)| CentralityRow {
                    year: y.year,
                    page_id: id.0,
                    score: round12(s),
                })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BreakRow {
    pub rank: usize,
    pub size: f64,
}

pub fn breaks(ctx: &Context) -> Result<Vec<BreakRow>> {
    let found = defined(detect_breaks(
        &ctx.last().centrality,
        ctx.cfg.min_break_separation,
        ctx.cfg.break_top_m,
    ))?;
    Ok(found
        .unwrap_or_default()
        .into_iter()
        .map(|b| BreakRow {
            rank: b.rank,
            size: round12(b.size),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersistenceRow {
    pub from_year: i32,
    pub to_year: i32,
    pub r: Option<f64>,
}

/// Year-over-year correlations, then first year against final year.
pub fn persistence(ctx: &Context) -> Result<Vec<PersistenceRow>> {
    let mut pairs: Vec<(usize, usize)> = (1..ctx.years.len()).map(|i| (i - 1, i)).collect();
    if ctx.years.len() > 2 {
        pairs.push((0, ctx.years.len() - 1));
    }
    pairs
        .into_iter()
        .map(|(a, b)| {
            let r = defined(centrality_persistence(
                &ctx.years[a].centrality,
                &ctx.years[b].centrality,
            ))?;
            Ok(PersistenceRow {
                from_year: ctx.years[a].year,
                to_year: ctx.years[b].year,
                r: ro(r),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GiniRow {
    pub year: i32,
    pub pages: usize,
    pub gini: Option<f64>,
}

pub fn gini_rows(ctx: &Context) -> Result<Vec<GiniRow>> {
    ctx.years
        .iter()
        .map(|y| {
            Ok(GiniRow {
                year: y.year,
                pages: y.centrality.len(),
                gini: ro(defined(gini(y.centrality.scores()))?),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluenceRow {
    pub origin: u32,
    pub page_id: u32,
    pub probability: f64,
}

/// Final-snapshot influence vectors of the core set.
pub fn influence_rows(ctx: &Context) -> Result<Vec<InfluenceRow>> {
    let s = &ctx.last().snapshot;
    let mut rows = Vec::new();
    for origin in ctx.core_set(ctx.cfg.core_set_size) {
        let v = influence(s, origin, ctx.cfg.walk_steps)?;
        rows.extend(v.probs().iter().map(|&(id, p)| InfluenceRow {
            origin: origin.0,
            page_id: id.0,
            probability: round12(p),
        }));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapRow {
    pub year: i32,
    pub core_present: usize,
    pub mean_overlap: Option<f64>,
    pub alt_present: usize,
    pub alt_mean_overlap: Option<f64>,
}

pub fn overlap_rows(ctx: &Context) -> Result<Vec<OverlapRow>> {
    let core = ctx.core_set(ctx.cfg.core_set_size);
    let alt = ctx.core_set(ctx.cfg.alt_core_set_size);
    let steps = ctx.cfg.walk_steps;
    ctx.years
        .iter()
        .map(|y| {
            let s = &y.snapshot;
            let present = |set: &[PageId]| set.iter().filter(|&&p| s.contains(p)).count();
            Ok(OverlapRow {
                year: y.year,
                core_present: present(&core),
                mean_overlap: ro(defined(mean_pairwise_overlap(s, &core, steps))?),
                alt_present: present(&alt),
                alt_mean_overlap: ro(defined(mean_pairwise_overlap(s, &alt, steps))?),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicRow {
    pub rank: usize,
    pub topic: usize,
    pub weight: f64,
    pub words: Vec<String>,
}

pub fn topic_rows(tm: &TopicModel, words: usize) -> Vec<TopicRow> {
    tm.topics_by_prevalence()
        .into_iter()
        .enumerate()
        .map(|(i, t)| TopicRow {
            rank: i + 1,
            topic: t,
            weight: round12(tm.topic_weight[t]),
            words: tm
                .top_words(t, words, true)
                .into_iter()
                .map(str::to_string)
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceEntry {
    pub year: i32,
    pub page_id: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceRow {
    pub year: i32,
    pub core_scored: usize,
    pub mean_coherence: Option<f64>,
    pub alt_scored: usize,
    pub alt_mean_coherence: Option<f64>,
}

/// Coherence of every core page present in each year, and yearly means
/// over the pages where it is defined.
pub fn coherence(
    ctx: &Context,
    tm: &TopicModel,
) -> Result<(Vec<CoherenceEntry>, Vec<CoherenceRow>)> {
    let core = ctx.core_set(ctx.cfg.core_set_size);
    let alt: Vec<PageId> = ctx.core_set(ctx.cfg.alt_core_set_size);
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for y in &ctx.years {
        let mut values: BTreeMap<PageId, f64> = BTreeMap::new();
        for &p in core.iter().chain(&alt) {
            if !y.snapshot.contains(p) || values.contains_key(&p) {
                continue;
            }
            if let Some(c) = defined(semantic_coherence(&y.snapshot, tm, p, ctx.cfg.walk_steps))? {
                values.insert(p, c.value);
            }
        }
        let mean_of = |set: &[PageId]| {
            let v: Vec<f64> = set.iter().filter_map(|p| values.get(p).copied()).collect();
            let mean = (!v.is_empty()).then(|| round12(v.iter().sum::<f64>() / v.len() as f64));
            (v.len(), mean)
        };
        let (core_scored, mean_coherence) = mean_of(&core);
        let (alt_scored, alt_mean_coherence) = mean_of(&alt);
        rows.push(CoherenceRow {
            year: y.year,
            core_scored,
            mean_coherence,
            alt_scored,
            alt_mean_coherence,
        });
        entries.extend(values.iter().map(|(p, &v)| CoherenceEntry {
            year: y.year,
            page_id: p.0,
            value: round12(v),
        }));
    }
    Ok((entries, rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopPage {
    pub page_id: u32,
    pub title: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterRow {
    pub cluster: usize,
    pub size: usize,
    pub size_fraction: f64,
    pub dominant_topic: Option<usize>,
    pub norm_class: Option<String>,
    pub top_pages: Vec<TopPage>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assignment {
    pub page_id: u32,
    pub cluster: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterLink {
    pub from: usize,
    pub to: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommunityReport {
    pub scope: String,
    pub seed: u64,
    pub year: i32,
    pub nodes: usize,
    pub edges: Vec<(u32, u32)>,
    pub modularity: f64,
    pub clusters: Vec<ClusterRow>,
    pub assignment: Vec<Assignment>,
    pub cluster_links: Vec<ClusterLink>,
}

pub fn communities(ctx: &Context, tm: Option<&TopicModel>) -> Result<CommunityReport> {
    let s = ctx.community_snapshot();
    let partition = louvain(&s, ctx.cfg.louvain_seed);
    // centrality stays that of the full final snapshot
    let full = &ctx.last().centrality;
    let scores: Vec<f64> = s
        .nodes()
        .iter()
        .map(|&id| full.get(id).unwrap_or(0.0))
        .collect();
    let cv = CentralityVector::from_parts(s.cutoff(), s.nodes().to_vec(), scores);
    let classes: BTreeMap<PageId, NormClass> = ctx
        .corpus
        .pages()
        .iter()
        .filter_map(|p| p.norm_class.map(|c| (p.id, c)))
        .collect();
    let summaries = summarize_clusters(&partition, &cv, tm, Some(&classes), ctx.cfg.cluster_top_k)?;
    Ok(CommunityReport {
        scope: match ctx.cfg.community_scope {
            CommunityScope::Giant => "giant".into(),
            CommunityScope::Full => "full".into(),
        },
        seed: partition.seed,
        year: ctx.last().year,
        nodes: s.node_count(),
        edges: s.edges().iter().map(|(a, b)| (a.0, b.0)).collect(),
        modularity: round12(partition.modularity),
        clusters: summaries
            .into_iter()
            .map(|c| ClusterRow {
                cluster: c.cluster,
                size: c.size,
                size_fraction: round12(c.size_fraction),
                dominant_topic: c.dominant_topic,
                norm_class: c.norm_class.map(|n| n.to_string()),
                top_pages: c
                    .top_pages
                    .into_iter()
                    .map(|(id, score)| TopPage {
                        page_id: id.0,
                        title: ctx.title(id).to_string(),
                        score: round12(score),
                    })
                    .collect(),
            })
            .collect(),
        assignment: partition
            .assignment()
            .iter()
            .map(|&(id, cluster)| Assignment {
                page_id: id.0,
                cluster,
            })
            .collect(),
        cluster_links: cluster_link_fractions(&s, &partition)
            .into_iter()
            .map(|(from, to, f)| ClusterLink {
                from,
                to,
                fraction: round12(f),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringRow {
    pub year: i32,
    pub nodes: usize,
    pub average: f64,
    pub sum: f64,
}

pub fn clustering_rows(ctx: &Context) -> Vec<ClusteringRow> {
    ctx.years
        .iter()
        .map(|y| {
            let c = local_clustering(&y.snapshot);
            ClusteringRow {
                year: y.year,
                nodes: y.snapshot.node_count(),
                average: round12(c.average),
                sum: round12(c.sum),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeValue {
    pub page_id: u32,
    pub value: f64,
}

pub fn final_clustering(ctx: &Context) -> Vec<NodeValue> {
    local_clustering(&ctx.last().snapshot)
        .per_node
        .into_iter()
        .map(|(id, v)| NodeValue {
            page_id: id.0,
            value: round12(v),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientRow {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FittedRow {
    pub page_id: u32,
    pub age_days: f64,
    pub editors: u64,
    pub observed: f64,
    pub fitted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionReport {
    pub target: String,
    pub rows: usize,
    pub intercept: CoefficientRow,
    pub coefficients: Vec<CoefficientRow>,
    pub r_squared: f64,
    pub mse: f64,
    pub residual_df: usize,
    pub linear_mse: Option<f64>,
    pub logistic_curve_mse: Option<f64>,
    pub logistic_curve_error: Option<String>,
    pub winner: String,
    pub fitted: Vec<FittedRow>,
}

pub const PREDICTORS: [&str; 5] = ["age_days", "edits", "talk_edits", "editors", "size_bytes"];

/// Final centrality regressed on z-scored page attributes. Age runs from
/// creation to the final snapshot cutoff.
pub fn regression(ctx: &Context) -> Result<RegressionReport> {
    let last = ctx.last();
    let cutoff = last.snapshot.cutoff();
    let pages: Vec<_> = last
        .snapshot
        .nodes()
        .iter()
        .filter_map(|&id| ctx.corpus.page(id))
        .collect();
    let raw: Vec<Vec<f64>> = vec![
        pages
            .iter()
            .map(|p| (cutoff.secs() - p.created_at.secs()) as f64 / 86_400.0)
            .collect(),
        pages.iter().map(|p| p.n_edits as f64).collect(),
        pages.iter().map(|p| p.n_talk_edits as f64).collect(),
        pages.iter().map(|p| p.n_editors as f64).collect(),
        pages.iter().map(|p| p.page_size_bytes as f64).collect(),
    ];
    let design = zscore(&raw).map_err(|e| match e {
        normnet_core::Error::DegenerateColumn(i) => NormnetError::Validation(format!(
            "predictor {} is constant across pages",
            PREDICTORS[i]
        )),
        other => other.into(),
    })?;
    let target: Vec<f64> = pages
        .iter()
        .map(|p| last.centrality.get(p.id).unwrap_or(0.0))
        .collect();
    let fit = ols(&design, &target)?;
    let cmp = compare_models(&design, &target)?;
    let coef = |name: &str, c: &normnet_core::stats::Coefficient| CoefficientRow {
        name: name.to_string(),
        estimate: round12(c.estimate),
        std_error: round12(c.std_error),
        t_value: round12(c.t_value),
        p_value: round12(c.p_value),
    };
    Ok(RegressionReport {
        target: "eigenvector_centrality".into(),
        rows: target.len(),
        intercept: coef("intercept", &fit.intercept),
        coefficients: PREDICTORS
            .iter()
            .zip(&fit.coefficients)
            .map(|(n, c)| coef(n, c))
            .collect(),
        r_squared: round12(fit.r_squared),
        mse: round12(fit.mse),
        residual_df: fit.residual_df,
        linear_mse: cmp.linear_mse.as_ref().ok().map(|&m| round12(m)),
        logistic_curve_mse: cmp.logistic_mse.as_ref().ok().map(|&m| round12(m)),
        logistic_curve_error: cmp.logistic_mse.err(),
        winner: match cmp.winner {
            ModelForm::Linear => "linear".into(),
            ModelForm::LogisticCurve => "logistic_curve".into(),
        },
        fitted: pages
            .iter()
            .zip(&target)
            .zip(&fit.residuals)
            .zip(&raw[0])
            .map(|(((p, &y), &e), &age)| FittedRow {
                page_id: p.id.0,
                age_days: round12(age),
                editors: p.n_editors,
                observed: round12(y),
                fitted: round12(y - e),
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationRow {
    pub attribute: String,
    pub r: Option<f64>,
    pub p_value: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub page_id: u32,
    pub ec: f64,
    pub view_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawReport {
    pub exponent: Option<f64>,
    pub std_error: Option<f64>,
    pub log_prefactor: Option<f64>,
    pub points: usize,
    /// Pages left out because they have no views.
    pub excluded: usize,
    pub scatter: Vec<ScatterRow>,
}

/// Final centrality against attention measures, and the power-law fit of
/// page-view share against centrality.
pub fn correlations(ctx: &Context) -> Result<(Vec<CorrelationRow>, PowerLawReport)> {
    let last = ctx.last();
    let pages: Vec<_> = last
        .snapshot
        .nodes()
        .iter()
        .filter_map(|&id| ctx.corpus.page(id))
        .collect();
    let ec: Vec<f64> = pages
        .iter()
        .map(|p| last.centrality.get(p.id).unwrap_or(0.0))
        .collect();
    type Getter = fn(&normnet_core::Page) -> u64;
    let attrs: [(&str, Getter); 4] = [
        ("views", |p| p.page_views),
        ("edits", |p| p.n_edits),
        ("talk_edits", |p| p.n_talk_edits),
        ("editors", |p| p.n_editors),
    ];
    let mut rows = Vec::new();
    for (name, get) in attrs {
        let x: Vec<f64> = pages.iter().map(|p| get(p) as f64).collect();
        let r = defined(pearson(&ec, &x))?;
        rows.push(CorrelationRow {
            attribute: name.to_string(),
            r: ro(r),
            p_value: ro(r.map(|r| pearson_p_value(r, x.len()))),
            n: x.len(),
        });
    }
    let total_views: u64 = pages.iter().map(|p| p.page_views).sum();
    let scatter: Vec<ScatterRow> = if total_views == 0 {
        Vec::new()
    } else {
        pages
            .iter()
            .zip(&ec)
            .filter(|(p, _)| p.page_views > 0)
            .map(|(p, &e)| ScatterRow {
                page_id: p.id.0,
                ec: e,
                view_share: p.page_views as f64 / total_views as f64,
            })
            .collect()
    };
    let xs: Vec<f64> = scatter.iter().map(|s| s.ec).collect();
    let ys: Vec<f64> = scatter.iter().map(|s| s.view_share).collect();
    let fit = defined(powerlaw_fit(&xs, &ys))?;
    let power = PowerLawReport {
        exponent: ro(fit.map(|f| f.exponent)),
        std_error: ro(fit.map(|f| f.std_error)),
        log_prefactor: ro(fit.map(|f| f.log_prefactor)),
        points: scatter.len(),
        excluded: pages.len() - scatter.len(),
        scatter: scatter
            .into_iter()
            .map(|s| ScatterRow {
                page_id: s.page_id,
                ec: round12(s.ec),
                view_share: round12(s.view_share),
            })
            .collect(),
    };
    Ok((rows, power))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaReport {
    pub items: usize,
    pub categories: usize,
    pub agreement: f64,
    pub kappa: f64,
}

pub fn kappa(labels_a: &[String], labels_b: &[String]) -> Result<KappaReport> {
    let r = cohens_kappa(labels_a, labels_b)?;
    Ok(KappaReport {
        items: r.n_items,
        categories: r.n_categories,
        agreement: round12(r.agreement),
        kappa: round12(r.kappa),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PopulationRow {
    pub month: String,
    pub policy_pages: usize,
    pub other_pages: usize,
    pub active_users: Option<u64>,
}

/// Monthly cumulative page counts by class alongside active users, from
/// the first page's month through the last page or population month.
pub fn population_rows(ctx: &Context) -> Vec<PopulationRow> {
    let pages = ctx.corpus.pages();
    let pop: BTreeMap<Month, u64> = ctx
        .corpus
        .population()
        .points()
        .iter()
        .map(|p| (p.month, p.active_users))
        .collect();
    let first_page = pages
        .iter()
        .map(|p| p.created_at.month())
        .min()
        .expect("nonempty corpus");
    let last_page = pages
        .iter()
        .map(|p| p.created_at.month())
        .max()
        .expect("nonempty corpus");
    let start = pop.keys().next().map_or(first_page, |&m| m.min(first_page));
    let end = pop
        .keys()
        .next_back()
        .map_or(last_page, |&m| m.max(last_page));
    let mut created: Vec<(Timestamp, bool)> = pages
        .iter()
        .map(|p| (p.created_at, p.category.is_policy_like()))
        .collect();
    created.sort();
    let mut rows = Vec::new();
    let (mut at, mut policy, mut other) = (0, 0, 0);
    let mut m = start;
    while m <= end {
        let next = m.next().start();
        while at < created.len() && created[at].0 < next {
            if created[at].1 {
                policy += 1;
            } else {
                other += 1;
            }
            at += 1;
        }
        rows.push(PopulationRow {
            month: m.to_string(),
            policy_pages: policy,
            other_pages: other,
            active_users: pop.get(&m).copied(),
        });
        m = m.next();
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEntry {
    pub key: String,
    pub value: String,
}

/// Everything the pipeline computes, in one document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub config: Vec<ConfigEntry>,
    pub corpus: CorpusStats,
    pub snapshots: Vec<SnapshotRow>,
    pub growth: Option<GrowthSummary>,
    pub gini: Vec<GiniRow>,
    pub ranking: Vec<RankRow>,
    pub core_set: Vec<RankRow>,
    pub alt_core_set: Vec<RankRow>,
    pub breaks: Vec<BreakRow>,
    pub persistence: Vec<PersistenceRow>,
    pub overlap: Vec<OverlapRow>,
    pub topics: Vec<TopicRow>,
    pub coherence: Vec<CoherenceRow>,
    pub communities: CommunityReport,
    pub clustering: Vec<ClusteringRow>,
    pub regression: RegressionReport,
    pub correlations: Vec<CorrelationRow>,
    pub powerlaw: PowerLawReport,
    pub kappa: Option<KappaReport>,
    pub population: Vec<PopulationRow>,
}

pub const TOPIC_WORDS: usize = 20;

impl AnalysisReport {
    pub fn build(
        ctx: &Context,
        tm: &TopicModel,
        kappa: Option<KappaReport>,
    ) -> Result<AnalysisReport> {
        let (correlations, powerlaw) = correlations(ctx)?;
        Ok(AnalysisReport {
            tool: "normnet".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: ctx
                .cfg
                .echo()
                .into_iter()
                .map(|(k, v)| ConfigEntry {
                    key: k.into(),
                    value: v,
                })
                .collect(),
            corpus: corpus_stats(ctx)?,
            snapshots: snapshot_rows(ctx)?,
            growth: growth(ctx)?,
            gini: gini_rows(ctx)?,
            ranking: ranking(ctx, usize::MAX),
            core_set: ranking(ctx, ctx.cfg.core_set_size),
            alt_core_set: ranking(ctx, ctx.cfg.alt_core_set_size),
            breaks: breaks(ctx)?,
            persistence: persistence(ctx)?,
            overlap: overlap_rows(ctx)?,
            topics: topic_rows(tm, TOPIC_WORDS),
            coherence: coherence(ctx, tm)?.1,
            communities: communities(ctx, Some(tm))?,
            clustering: clustering_rows(ctx),
            regression: regression(ctx)?,
            correlations,
            powerlaw,
            kappa,
            population: population_rows(ctx),
        })
    }
}
