//! Pipeline configuration as a flat `key = value` file.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use normnet_core::semantics::LdaConfig;

use crate::error::{NormnetError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Canonical,
    Html,
}

/// Which part of the final snapshot community detection sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommunityScope {
    Giant,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Corpus location as written in the file.
    pub corpus_spec: String,
    /// `corpus_spec` resolved against the config file's directory.
    pub corpus: PathBuf,
    pub corpus_format: CorpusFormat,
    pub out: PathBuf,
    pub first_year: Option<i32>,
    pub last_year: Option<i32>,
    pub epsilon: f64,
    pub ec_tol: f64,
    pub ec_max_iter: usize,
    pub walk_steps: usize,
    pub core_set_size: usize,
    pub alt_core_set_size: usize,
    pub lda_k: usize,
    pub lda_alpha: Option<f64>,
    pub lda_beta: f64,
    pub lda_sweeps: usize,
    pub lda_seed: u64,
    pub louvain_seed: u64,
    pub community_scope: CommunityScope,
    pub min_break_separation: usize,
    pub break_top_m: usize,
    pub cluster_top_k: usize,
    pub growth_degree_cap: usize,
    pub kappa_labels_spec: Option<String>,
    pub kappa_labels: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            corpus_spec: String::new(),
            corpus: PathBuf::new(),
            corpus_format: CorpusFormat::Canonical,
            out: PathBuf::from("out"),
            first_year: None,
            last_year: None,
            epsilon: 0.15,
            ec_tol: 1e-12,
            ec_max_iter: 10_000,
            walk_steps: 5,
            core_set_size: 20,
            alt_core_set_size: 10,
            lda_k: 20,
            lda_alpha: None,
            lda_beta: 0.01,
            lda_sweeps: 2000,
            lda_seed: 0,
            louvain_seed: 0,
            community_scope: CommunityScope::Giant,
            min_break_separation: 5,
            break_top_m: 5,
            cluster_top_k: 10,
            growth_degree_cap: 100,
            kappa_labels_spec: None,
            kappa_labels: None,
        }
    }
}

fn value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T>
where
    T::Err: Display,
{
    raw.parse()
        .map_err(|e| NormnetError::Config(format!("line {line}: {key}: {e} ({raw:?})")))
}

impl PipelineConfig {
    /// Parses config text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        let mut seen = Vec::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, raw) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| {
                    NormnetError::Config(format!("line {line}: expected key = value"))
                })?;
            if seen.contains(&key.to_string()) {
                return Err(NormnetError::Config(format!(
                    "line {line}: duplicate key {key}"
                )));
            }
            seen.push(key.to_string());
            match key {
                "corpus" => {
                    cfg.corpus_spec = raw.to_string();
                    cfg.corpus = base.join(raw);
                }
                "corpus_format" => {
                    cfg.corpus_format = match raw {
                        "canonical" => CorpusFormat::Canonical,
                        "html" => CorpusFormat::Html,
                        _ => {
                            return Err(NormnetError::Config(format!(
                                "line {line}: corpus_format must be canonical or html"
                            )))
                        }
                    }
                }
                "out" => cfg.out = base.join(raw),
                "snapshot_cadence" => {
                    if raw != "yearly" {
                        return Err(NormnetError::Config(format!(
                            "line {line}: only yearly snapshots are supported"
                        )));
                    }
                }
                "first_year" => cfg.first_year = Some(value(line, key, raw)?),
                "last_year" => cfg.last_year = Some(value(line, key, raw)?),
                "epsilon" => cfg.epsilon = value(line, key, raw)?,
                "ec_tol" => cfg.ec_tol = value(line, key, raw)?,
                "ec_max_iter" => cfg.ec_max_iter = value(line, key, raw)?,
                "walk_steps" => cfg.walk_steps = value(line, key, raw)?,
                "core_set_size" => cfg.core_set_size = value(line, key, raw)?,
                "alt_core_set_size" => cfg.alt_core_set_size = value(line, key, raw)?,
                "lda_k" => cfg.lda_k = value(line, key, raw)?,
                "lda_alpha" => cfg.lda_alpha = Some(value(line, key, raw)?),
                "lda_beta" => cfg.lda_beta = value(line, key, raw)?,
                "lda_sweeps" => cfg.lda_sweeps = value(line, key, raw)?,
                "lda_seed" => cfg.lda_seed = value(line, key, raw)?,
                "louvain_seed" => cfg.louvain_seed = value(line, key, raw)?,
                "community_scope" => {
                    cfg.community_scope = match raw {
                        "giant" => CommunityScope::Giant,
                        "full" => CommunityScope::Full,
                        _ => {
                            return Err(NormnetError::Config(format!(
                                "line {line}: community_scope must be giant or full"
                            )))
                        }
                    }
                }
                "min_break_separation" => cfg.min_break_separation = value(line, key, raw)?,
                "break_top_m" => cfg.break_top_m = value(line, key, raw)?,
                "cluster_top_k" => cfg.cluster_top_k = value(line, key, raw)?,
                "growth_degree_cap" => cfg.growth_degree_cap = value(line, key, raw)?,
                "kappa_labels" => {
                    cfg.kappa_labels_spec = Some(raw.to_string());
                    cfg.kappa_labels = Some(base.join(raw));
                }
                _ => {
                    return Err(NormnetError::Config(format!(
                        "line {line}: unknown key {key}"
                    )))
                }
            }
        }
        if cfg.corpus_spec.is_empty() {
            return Err(NormnetError::Config("missing required key corpus".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| NormnetError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        PipelineConfig::parse(&text, base)
    }

    fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(NormnetError::Config(m.to_string()));
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail("epsilon must lie strictly between 0 and 1");
        }
        if self.ec_tol.is_nan() || self.ec_tol <= 0.0 || self.ec_max_iter == 0 {
            return fail("ec_tol must be positive and ec_max_iter at least 1");
        }
        if self.core_set_size < 2 || self.alt_core_set_size < 2 {
            return fail("core set sizes must be at least 2");
        }
        if self.lda_k < 2 || self.lda_sweeps == 0 || self.lda_beta.is_nan() || self.lda_beta <= 0.0 {
            return fail("lda_k must be at least 2, lda_sweeps positive and lda_beta positive");
        }
        if self.lda_alpha.is_some_and(|a| a.is_nan() || a <= 0.0) {
            return fail("lda_alpha must be positive");
        }
        if self.break_top_m == 0 || self.cluster_top_k == 0 {
            return fail("break_top_m and cluster_top_k must be positive");
        }
        if let (Some(a), Some(b)) = (self.first_year, self.last_year) {
            if a > b {
                return fail("first_year is after last_year");
            }
        }
        Ok(())
    }

    pub fn lda(&self) -> LdaConfig {
        LdaConfig {
            k: self.lda_k,
            alpha: self.lda_alpha,
            beta: self.lda_beta,
            sweeps: self.lda_sweeps,
            seed: self.lda_seed,
        }
    }

    /// Every parameter with its effective value, in a fixed order. The
    /// output location is left out so runs into different directories
    /// agree.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "auto".to_string());
        vec![
            ("corpus", self.corpus_spec.clone()),
            (
                "corpus_format",
                match self.corpus_format {
                    CorpusFormat::Canonical => "canonical".into(),
                    CorpusFormat::Html => "html".into(),
                },
            ),
            ("snapshot_cadence", "yearly".into()),
            ("first_year", opt(self.first_year.map(|y| y.to_string()))),
            ("last_year", opt(self.last_year.map(|y| y.to_string()))),
            ("epsilon", self.epsilon.to_string()),
            ("ec_tol", format!("{:e}", self.ec_tol)),
            ("ec_max_iter", self.ec_max_iter.to_string()),
            ("walk_steps", self.walk_steps.to_string()),
            ("core_set_size", self.core_set_size.to_string()),
            ("alt_core_set_size", self.alt_core_set_size.to_string()),
            ("lda_k", self.lda_k.to_string()),
            ("lda_alpha", self.lda().alpha().to_string()),
            ("lda_beta", self.lda_beta.to_string()),
            ("lda_sweeps", self.lda_sweeps.to_string()),
            ("lda_seed", self.lda_seed.to_string()),
            ("louvain_seed", self.louvain_seed.to_string()),
            (
                "community_scope",
                match self.community_scope {
                    CommunityScope::Giant => "giant".into(),
                    CommunityScope::Full => "full".into(),
                },
            ),
            (
                "min_break_separation",
                self.min_break_separation.to_string(),
            ),
            ("break_top_m", self.break_top_m.to_string()),
            ("cluster_top_k", self.cluster_top_k.to_string()),
            ("growth_degree_cap", self.growth_degree_cap.to_string()),
            (
                "kappa_labels",
                self.kappa_labels_spec
                    .clone()
                    .unwrap_or_else(|| "none".into()),
            ),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = PipelineConfig::parse(
            "# demo\ncorpus = data\nlda_k = 5 # small\ncore_set_size=10\n",
            Path::new("/x"),
        )
        .unwrap();
        assert_eq!(cfg.corpus, Path::new("/x/data"));
        assert_eq!((cfg.lda_k, cfg.core_set_size, cfg.walk_steps), (5, 10, 5));
        assert_eq!(cfg.epsilon, 0.15);
        let echo = cfg.echo();
        for key in [
            "epsilon",
            "walk_steps",
            "lda_k",
            "core_set_size",
            "min_break_separation",
        ] {
            assert!(echo.iter().any(|(k, _)| *k == key));
        }
        assert!(echo.iter().any(|(k, v)| *k == "lda_alpha" && v == "10"));
    }

    #[test]
    fn rejects_bad_input() {
        let base = Path::new(".");
        for text in [
            "lda_k = 5",
            "corpus = a\nbogus = 1",
            "corpus = a\ncorpus = b",
            "corpus = a\nepsilon = 1.5",
            "corpus = a\nwalk_steps = -1",
            "corpus = a\nsnapshot_cadence = monthly",
            "corpus = a\njust words",
        ] {
            assert!(
                matches!(
                    PipelineConfig::parse(text, base),
                    Err(NormnetError::Config(_))
                ),
                "{text}"
            );
        }
    }
}
