use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use normnet::config::PipelineConfig;
use normnet::pipeline::{figure_tsv, run_pipeline, Stage};

fn fixture_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/fixture.conf")
}

fn normnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normnet"))
        .args(args)
        .output()
        .unwrap()
}

fn tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    fs::read(&p).unwrap(),
                );
            }
        }
    }
    out
}

#[test]
fn run_succeeds_and_writes_every_figure() {
    let out = tempfile::tempdir().unwrap();
    let o = normnet(&[
        "run",
        "--config",
        fixture_config().to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for id in normnet::pipeline::FIGURES {
        assert!(
            out.path().join(format!("figures/{id}.tsv")).is_file(),
            "{id}"
        );
    }
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(out.path().join("report.json")).unwrap()).unwrap();
    let echo: Vec<&str> = report["config"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["key"].as_str().unwrap())
        .collect();
    for key in [
        "epsilon",
        "walk_steps",
        "lda_k",
        "core_set_size",
        "alt_core_set_size",
        "min_break_separation",
        "lda_seed",
        "louvain_seed",
    ] {
        assert!(echo.contains(&key), "{key}");
    }
}

#[test]
fn runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = normnet(&[
            "run",
            "--config",
            fixture_config().to_str().unwrap(),
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    assert!(ta.len() > 30);
    assert_eq!(ta, tb);
}

#[test]
fn stages_compose_to_the_full_run() {
    let mut cfg = PipelineConfig::load(&fixture_config()).unwrap();
    let whole = tempfile::tempdir().unwrap();
    cfg.out = whole.path().to_path_buf();
    let report = run_pipeline(&cfg).unwrap();

    let staged = tempfile::tempdir().unwrap();
    for stage in Stage::ALL {
        let o = normnet(&[
            stage.name(),
            "--config",
            fixture_config().to_str().unwrap(),
            "--out",
            staged.path().to_str().unwrap(),
        ]);
        assert!(
            o.status.success(),
            "{}: {}",
            stage.name(),
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert_eq!(tree(whole.path()), tree(staged.path()));

    let from_disk = fs::read_to_string(staged.path().join("figures/fig2.tsv")).unwrap();
    assert_eq!(figure_tsv(&report, "fig2").unwrap(), from_disk);
}

#[test]
fn figure_subcommand_and_unknown_figure() {
    let out = tempfile::tempdir().unwrap();
    let cfg = fixture_config();
    let (cfg, dir) = (cfg.to_str().unwrap(), out.path().to_str().unwrap());
    assert!(normnet(&["run", "--config", cfg, "--out", dir])
        .status
        .success());
    let before = fs::read(out.path().join("figures/fig4.tsv")).unwrap();
    let o = normnet(&["figure", "--id", "fig4", "--config", cfg, "--out", dir]);
    assert!(o.status.success());
    assert_eq!(
        fs::read(out.path().join("figures/fig4.tsv")).unwrap(),
        before
    );

    let o = normnet(&["figure", "--id", "fig9", "--config", cfg, "--out", dir]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["stage"], "figure");
    assert_eq!(err["kind"], "validation");
}

#[test]
fn fig1_echoes_population() {
    let mut cfg = PipelineConfig::load(&fixture_config()).unwrap();
    let out = tempfile::tempdir().unwrap();
    cfg.out = out.path().to_path_buf();
    let report = run_pipeline(&cfg).unwrap();
    let fig = figure_tsv(&report, "fig1").unwrap();
    let population = fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus30/population.tsv"),
    )
    .unwrap();
    let from_fig: Vec<String> = fig
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[3] != "NA").then(|| format!("{}\t{}", f[0], f[3]))
        })
        .collect();
    let expected: Vec<&str> = population.lines().skip(1).collect();
    assert_eq!(from_fig, expected);
}

#[test]
fn empty_corpus_fails_ingest_with_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let corpus = d.path().join("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::write(
        corpus.join("pages.tsv"),
        "id\ttitle\tcategory\tcreated_at\tsize\tedits\ttalk_edits\teditors\tviews\tnorm_class\n",
    )
    .unwrap();
    fs::write(corpus.join("links.tsv"), "src_id\tdst_id\tfirst_seen_at\n").unwrap();
    fs::write(corpus.join("tokens.tsv"), "page_id\tword\tcount\n").unwrap();
    let conf = d.path().join("empty.conf");
    fs::write(&conf, "corpus = corpus\nout = out\n").unwrap();
    let o = normnet(&["run", "--config", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["stage"], "ingest");
    assert_eq!(err["kind"], "validation");
    assert!(!d.path().join("out/report.json").exists());
}

#[test]
fn bad_config_and_missing_inputs_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let conf = d.path().join("bad.conf");
    fs::write(&conf, "corpus = nowhere\nepsilon = 1.5\n").unwrap();
    assert_eq!(
        normnet(&["run", "--config", conf.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    fs::write(&conf, "corpus = nowhere\n").unwrap();
    let o = normnet(&["ingest", "--config", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = normnet(&["coherence", "--config", conf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["stage"], "coherence");
}
