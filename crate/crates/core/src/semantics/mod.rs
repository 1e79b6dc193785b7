//! One-gram distributions, topic models, Jensen-Shannon distance and
//! semantic coherence.

mod coherence;
mod divergence;
mod lda;
mod tokenize;

pub use coherence::{cluster_topic_profile, semantic_coherence, semantic_coherence_in, CoherenceScore};
pub use divergence::{jensen_shannon_divergence, jsd};
pub use lda::{fit_lda, is_report_stopword, GibbsSampler, LdaConfig, TopicModel};
pub use tokenize::{tokenize, TokenDistribution};
