use alloc::collections::BTreeMap;
use alloc::string::String;

/// Word counts of one text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenDistribution {
    pub counts: BTreeMap<String, u64>,
    pub total: u64,
}

impl TokenDistribution {
    pub fn from_counts(counts: BTreeMap<String, u64>) -> Self {
        let counts: BTreeMap<String, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        let total = counts.values().sum();
        TokenDistribution { counts, total }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

/// Lowercases, deletes every character that is neither alphanumeric nor
/// whitespace (so hyphenated words and contractions fuse), and counts the
/// whitespace-separated words. No stemming.
pub fn tokenize(raw_text: &str) -> TokenDistribution {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut word = String::new();
    let mut flush = |word: &mut String| {
        if !word.is_empty() {
            *counts.entry(core::mem::take(word)).or_insert(0) += 1;
        }
    };
    for ch in raw_text.chars() {
        if ch.is_whitespace() {
            flush(&mut word);
        } else if ch.is_alphanumeric() {
            word.extend(ch.to_lowercase());
        }
    }
    flush(&mut word);
    TokenDistribution::from_counts(counts)
}
