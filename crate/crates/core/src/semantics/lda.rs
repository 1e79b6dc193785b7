//! Latent Dirichlet allocation by collapsed Gibbs sampling.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::PageId;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdaConfig {
    pub k: usize,
    /// Symmetric document-topic prior; `None` means `50 / k`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub sweeps: usize,
    pub seed: u64,
}

impl Default for LdaConfig {
    fn default() -> Self {
        LdaConfig {
            k: 20,
            alpha: None,
            beta: 0.01,
            sweeps: 2000,
            seed: 0,
        }
    }
}

impl LdaConfig {
    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(50.0 / self.k as f64)
    }
}

/// Collapsed Gibbs state over word-topic assignments.
///
/// Exposed so the sampler's stationary behavior can be checked against the
/// exact collapsed posterior on tiny corpora.
#[derive(Debug, Clone)]
pub struct GibbsSampler {
    k: usize,
    vocab_size: usize,
    alpha: f64,
    beta: f64,
    docs: Vec<Vec<usize>>,
    assignments: Vec<Vec<usize>>,
    doc_topic: Vec<Vec<u64>>,
    topic_word: Vec<Vec<u64>>,
    topic_total: Vec<u64>,
    rng: ChaCha8Rng,
    weights: Vec<f64>,
}

impl GibbsSampler {
    /// `docs` hold word indices below `vocab_size`. Initial topics are drawn
    /// uniformly.
    pub fn new(docs: Vec<Vec<usize>>, vocab_size: usize, k: usize, alpha: f64, beta: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut doc_topic = vec![vec![0u64; k]; docs.len()];
        let mut topic_word = vec![vec![0u64; vocab_size]; k];
        let mut topic_total = vec![0u64; k];
        let assignments: Vec<Vec<usize>> = docs
            .iter()
            .enumerate()
            .map(|(d, words)| {
                words
                    .iter()
                    .map(|&w| {
                        let z = rng.random_range(0..k);
                        doc_topic[d][z] += 1;
                        topic_word[z][w] += 1;
                        topic_total[z] += 1;
                        z
                    })
                    .collect()
            })
            .collect();
        GibbsSampler {
            k,
            vocab_size,
            alpha,
            beta,
            docs,
            assignments,
            doc_topic,
            topic_word,
            topic_total,
            rng,
            weights: vec![0.0; k],
        }
    }

    /// Resamples every token once, in document order.
    pub fn sweep(&mut self) {
        let vbeta = self.vocab_size as f64 * self.beta;
        for d in 0..self.docs.len() {
            for i in 0..self.docs[d].len() {
                let w = self.docs[d][i];
                let old = self.assignments[d][i];
                self.doc_topic[d][old] -= 1;
                self.topic_word[old][w] -= 1;
                self.topic_total[old] -= 1;

                let mut total = 0.0;
                for t in 0..self.k {
                    let p = (self.doc_topic[d][t] as f64 + self.alpha) * (self.topic_word[t][w] as f64 + self.beta)
                        / (self.topic_total[t] as f64 + vbeta);
                    total += p;
                    self.weights[t] = total;
                }
                let u = self.rng.random::<f64>() * total;
                let new = self.weights.iter().position(|&c| u < c).unwrap_or(self.k - 1);

                self.assignments[d][i] = new;
                self.doc_topic[d][new] += 1;
                self.topic_word[new][w] += 1;
                self.topic_total[new] += 1;
            }
        }
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.assignments
    }

    /// Smoothed topic-word distributions from the current counts.
    pub fn topic_word(&self) -> Vec<Vec<f64>> {
        let vbeta = self.vocab_size as f64 * self.beta;
        (0..self.k)
            .map(|t| {
                let denom = self.topic_total[t] as f64 + vbeta;
                self.topic_word[t].iter().map(|&c| (c as f64 + self.beta) / denom).collect()
            })
            .collect()
    }

    /// Per-document topic mixture: the average over the document's tokens of
    /// each token's topic posterior `theta_dt * phi_tw` (normalized). Empty
    /// documents get the uniform mixture.
    pub fn doc_mixtures(&self, phi: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let kalpha = self.k as f64 * self.alpha;
        (0..self.docs.len())
            .map(|d| {
                let words = &self.docs[d];
                if words.is_empty() {
                    return vec![1.0 / self.k as f64; self.k];
                }
                let nd = words.len() as f64;
                let theta: Vec<f64> = self.doc_topic[d].iter().map(|&c| (c as f64 + self.alpha) / (nd + kalpha)).collect();
                let mut mix = vec![0.0; self.k];
                let mut post = vec![0.0; self.k];
                for &w in words {
                    let mut z = 0.0;
                    for t in 0..self.k {
                        post[t] = theta[t] * phi[t][w];
                        z += post[t];
                    }
                    for t in 0..self.k {
                        mix[t] += post[t] / z;
                    }
                }
                let s: f64 = mix.iter().sum();
                mix.iter().map(|m| m / s).collect()
            })
            .collect()
    }

    /// Tokens currently assigned to each topic.
    pub fn topic_totals(&self) -> &[u64] {
        &self.topic_total
    }
}

/// A fitted topic model. Rows of `topic_word` and every page mixture are
/// probability distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicModel {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub sweeps: usize,
    pub seed: u64,
    pub vocabulary: Vec<String>,
    pub topic_word: Vec<Vec<f64>>,
    /// Fraction of all tokens assigned to each topic.
    pub topic_weight: Vec<f64>,
    page_ids: Vec<PageId>,
    page_topic: Vec<Vec<f64>>,
}

impl TopicModel {
    /// Assembles a model from stored parts; `pages` need not be sorted.
    pub fn from_parts(
        config: &LdaConfig,
        vocabulary: Vec<String>,
        topic_word: Vec<Vec<f64>>,
        topic_weight: Vec<f64>,
        mut pages: Vec<(PageId, Vec<f64>)>,
    ) -> Result<Self> {
        let k = config.k;
        if topic_word.len() != k || topic_word.iter().any(|r| r.len() != vocabulary.len()) {
            return Err(Error::InvalidArgument("topic-word matrix does not match k and vocabulary".into()));
        }
        if topic_weight.len() != k || pages.iter().any(|(_, m)| m.len() != k) {
            return Err(Error::InvalidArgument("page mixtures must have length k".into()));
        }
        pages.sort_by_key(|(id, _)| *id);
        let (page_ids, page_topic) = pages.into_iter().unzip();
        Ok(TopicModel {
            k,
            alpha: config.alpha(),
            beta: config.beta,
            sweeps: config.sweeps,
            seed: config.seed,
            vocabulary,
            topic_word,
            topic_weight,
            page_ids,
            page_topic,
        })
    }

    pub fn config(&self) -> LdaConfig {
        LdaConfig {
            k: self.k,
            alpha: Some(self.alpha),
            beta: self.beta,
            sweeps: self.sweeps,
            seed: self.seed,
        }
    }

    pub fn page_ids(&self) -> &[PageId] {
        &self.page_ids
    }

    pub fn mixture(&self, page: PageId) -> Option<&[f64]> {
        self.page_ids
            .binary_search(&page)
            .ok()
            .map(|i| self.page_topic[i].as_slice())
    }

    pub fn mixtures(&self) -> impl Iterator<Item = (PageId, &[f64])> {
        self.page_ids.iter().copied().zip(self.page_topic.iter().map(|m| m.as_slice()))
    }

    /// Topics ordered by descending token share; ties by index.
    pub fn topics_by_prevalence(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.k).collect();
        order.sort_by(|&a, &b| self.topic_weight[b].total_cmp(&self.topic_weight[a]).then(a.cmp(&b)));
        order
    }

    /// Highest-probability words of `topic`. With `for_report`, drops the
    /// words filtered from published topic tables (see [`is_report_stopword`])
    /// and `+s` plurals whose singular already ranks higher.
    pub fn top_words(&self, topic: usize, count: usize, for_report: bool) -> Vec<&str> {
        let row = &self.topic_word[topic];
        let mut order: Vec<usize> = (0..row.len()).collect();
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
        let mut out: Vec<&str> = Vec::with_capacity(count);
        for w in order {
            if out.len() == count {
                break;
            }
            let word = self.vocabulary[w].as_str();
            if for_report {
                if is_report_stopword(word) {
                    continue;
                }
                if word != "wikipedias" {
                    if let Some(stem) = word.strip_suffix('s') {
                        if out.contains(&stem) {
                            continue;
                        }
                    }
                }
            }
            out.push(word);
        }
        out
    }
}

const DATE_TERMS: &[&str] = &[
    "utc", "january", "february", "march", "april", "may", "june", "july", "august", "september", "october",
    "november", "december", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday",
];

/// Words excluded from topic listings: "wikipedia" and date/time terms.
pub fn is_report_stopword(word: &str) -> bool {
    word == "wikipedia" || DATE_TERMS.contains(&word)
}

/// Fits a `k`-topic model to the pages' one-gram counts.
///
/// Documents are expanded in vocabulary order, so the fit depends only on
/// the counts and `config.seed`.
pub fn fit_lda(docs: &[(PageId, &BTreeMap<String, u64>)], config: &LdaConfig) -> Result<TopicModel> {
    let k = config.k;
    if k < 2 {
        return Err(Error::InvalidArgument("a topic model needs k >= 2".into()));
    }
    if k > docs.len() {
        return Err(Error::InvalidArgument(alloc::format!(
            "k = {k} exceeds the {} available documents",
            docs.len()
        )));
    }
    if config.beta.is_nan() || config.beta <= 0.0 || config.alpha().is_nan() || config.alpha() <= 0.0 {
        return Err(Error::InvalidArgument("Dirichlet priors must be positive".into()));
    }
    let mut vocab: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, counts) in docs {
        for (w, &c) in counts.iter() {
            if c > 0 {
                vocab.insert(w.as_str(), 0);
            }
        }
    }
    if vocab.is_empty() {
        return Err(Error::InvalidArgument("empty vocabulary".into()));
    }
    for (i, v) in vocab.values_mut().enumerate() {
        *v = i;
    }
    let encoded: Vec<Vec<usize>> = docs
        .iter()
        .map(|(_, counts)| {
            counts
                .iter()
                .flat_map(|(w, &c)| core::iter::repeat_n(vocab[w.as_str()], c as usize))
                .collect()
        })
        .collect();
    let mut sampler = GibbsSampler::new(encoded, vocab.len(), k, config.alpha(), config.beta, config.seed);
    for _ in 0..config.sweeps {
        sampler.sweep();
    }
    let phi = sampler.topic_word();
    let mixtures = sampler.doc_mixtures(&phi);
    let total: u64 = sampler.topic_totals().iter().sum();
    let weight = sampler
        .topic_totals()
        .iter()
        .map(|&c| if total > 0 { c as f64 / total as f64 } else { 0.0 })
        .collect();
    TopicModel::from_parts(
        config,
        vocab.keys().map(|w| String::from(*w)).collect(),
        phi,
        weight,
        docs.iter().map(|(id, _)| *id).zip(mixtures).collect(),
    )
}
