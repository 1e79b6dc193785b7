use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use normnet::analysis::{AnalysisReport, Context};
use normnet::config::PipelineConfig;
use normnet::corpus_io::read_corpus;
use normnet::model_io::read_topic_model;
use normnet::pipeline::{corpus_dir, emit_figure_data, read_kappa_labels, run_pipeline, Stage};
use normnet::{NormnetError, Result};

/// Temporal analysis of norm-page citation networks.
#[derive(Parser)]
#[command(name = "normnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Every stage in order.
    Run(Common),
    Ingest(Common),
    Snapshot(Common),
    Centrality(Common),
    Gini(Common),
    Influence(Common),
    OverlapSeries(Common),
    Topics(Common),
    Coherence(Common),
    Communities(Common),
    Clustering(Common),
    Regress(Common),
    Correlate(Common),
    Kappa(Common),
    Report(Common),
    /// Plot data for one figure, from the stages already run.
    Figure {
        #[command(flatten)]
        common: Common,
        /// fig1, fig2, fig3_nodes, fig3_edges, fig3_clusters, fig4, figB, figC, figD or figE.
        #[arg(long)]
        id: String,
    },
}

fn load(common: &Common) -> Result<PipelineConfig> {
    let mut cfg = PipelineConfig::load(&common.config)?;
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    Ok(cfg)
}

fn figure(cfg: &PipelineConfig, id: &str) -> Result<PathBuf> {
    let ctx = Context::new(cfg.clone(), read_corpus(&corpus_dir(cfg))?)?;
    let tm = read_topic_model(&cfg.out.join("topics"))?;
    let kappa = match &cfg.kappa_labels {
        Some(path) => {
            let (a, b) = read_kappa_labels(path)?;
            Some(normnet::analysis::kappa(&a, &b)?)
        }
        None => None,
    };
    let report = AnalysisReport::build(&ctx, &tm, kappa)?;
    emit_figure_data(&report, id, &cfg.out.join("figures"))
}

fn execute(command: Command) -> Result<()> {
    let (common, stage) = match command {
        Command::Run(c) => {
            run_pipeline(&load(&c)?)?;
            return Ok(());
        }
        Command::Figure { common, id } => {
            let cfg = load(&common)?;
            let path = figure(&cfg, &id).map_err(|e| NormnetError::Stage {
                stage: "figure",
                source: Box::new(e),
            })?;
            println!("{}", path.display());
            return Ok(());
        }
        Command::Ingest(c) => (c, Stage::Ingest),
        Command::Snapshot(c) => (c, Stage::Snapshot),
        Command::Centrality(c) => (c, Stage::Centrality),
        Command::Gini(c) => (c, Stage::Gini),
        Command::Influence(c) => (c, Stage::Influence),
        Command::OverlapSeries(c) => (c, Stage::OverlapSeries),
        Command::Topics(c) => (c, Stage::Topics),
        Command::Coherence(c) => (c, Stage::Coherence),
        Command::Communities(c) => (c, Stage::Communities),
        Command::Clustering(c) => (c, Stage::Clustering),
        Command::Regress(c) => (c, Stage::Regress),
        Command::Correlate(c) => (c, Stage::Correlate),
        Command::Kappa(c) => (c, Stage::Kappa),
        Command::Report(c) => (c, Stage::Report),
    };
    stage.run(&load(&common)?)
}

fn error_kind(e: &NormnetError) -> &'static str {
    if e.is_validation() {
        "validation"
    } else {
        "internal"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = serde_json::json!({
                "stage": e.stage().unwrap_or("config"),
                "kind": error_kind(&e),
                "message": e.to_string(),
            });
            eprintln!("{report}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
