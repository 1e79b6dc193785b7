//! Topic model files: model.json, topic_word.tsv and page_topic.tsv.

use std::path::Path;

use normnet_core::semantics::{LdaConfig, TopicModel};
use normnet_core::PageId;
use serde::{Deserialize, Serialize};

use crate::error::{NormnetError, Result};
use crate::num::{fmt12, round12};
use crate::tsv::{write_file, Table, Writer};

#[derive(Debug, Serialize, Deserialize)]
struct ModelHeader {
    k: usize,
    alpha: f64,
    beta: f64,
    sweeps: usize,
    seed: u64,
    vocabulary: Vec<String>,
    topic_weight: Vec<f64>,
}

pub fn write_topic_model(tm: &TopicModel, dir: &Path) -> Result<()> {
    let header = ModelHeader {
        k: tm.k,
        alpha: round12(tm.alpha),
        beta: round12(tm.beta),
        sweeps: tm.sweeps,
        seed: tm.seed,
        vocabulary: tm.vocabulary.clone(),
        topic_weight: tm.topic_weight.iter().map(|&w| round12(w)).collect(),
    };
    let json = serde_json::to_string_pretty(&header).expect("model header serializes");
    write_file(&dir.join("model.json"), &(json + "\n"))?;

    let mut head = vec!["topic"];
    head.extend(tm.vocabulary.iter().map(String::as_str));
    let mut tw = Writer::new(&head);
    for (t, row) in tm.topic_word.iter().enumerate() {
        tw.row(std::iter::once(t.to_string()).chain(row.iter().map(|&p| fmt12(p))));
    }
    write_file(&dir.join("topic_word.tsv"), &tw.finish())?;

    let topic_cols: Vec<String> = (0..tm.k).map(|t| format!("t{t}")).collect();
    let mut head = vec!["page_id"];
    head.extend(topic_cols.iter().map(String::as_str));
    let mut pt = Writer::new(&head);
    for (id, mix) in tm.mixtures() {
        pt.row(std::iter::once(id.to_string()).chain(mix.iter().map(|&p| fmt12(p))));
    }
    write_file(&dir.join("page_topic.tsv"), &pt.finish())
}

fn numbers(t: &Table, line: usize, fields: &[String]) -> Result<Vec<f64>> {
    (1..fields.len())
        .map(|c| t.parse_field(line, fields, c))
        .collect()
}

pub fn read_topic_model(dir: &Path) -> Result<TopicModel> {
    let path = dir.join("model.json");
    let text = std::fs::read_to_string(&path).map_err(|e| NormnetError::io(&path, e))?;
    let h: ModelHeader = serde_json::from_str(&text)
        .map_err(|e| NormnetError::format("model.json", e.line(), e.to_string()))?;

    let tw = Table::read(&dir.join("topic_word.tsv"))?;
    if tw.header.len() != h.vocabulary.len() + 1 || tw.header[1..] != h.vocabulary[..] {
        return Err(tw.error(1, "vocabulary does not match model.json"));
    }
    let topic_word = tw
        .rows
        .iter()
        .map(|(line, f)| numbers(&tw, *line, f))
        .collect::<Result<Vec<_>>>()?;

    let pt = Table::read(&dir.join("page_topic.tsv"))?;
    let mut pages = Vec::new();
    for (line, f) in &pt.rows {
        pages.push((
            PageId(pt.parse_field(*line, f, 0)?),
            numbers(&pt, *line, f)?,
        ));
    }
    let config = LdaConfig {
        k: h.k,
        alpha: Some(h.alpha),
        beta: h.beta,
        sweeps: h.sweeps,
        seed: h.seed,
    };
    Ok(TopicModel::from_parts(
        &config,
        h.vocabulary,
        topic_word,
        h.topic_weight,
        pages,
    )?)
}
