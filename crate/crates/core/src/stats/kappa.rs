use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Inter-rater agreement between two label sequences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementResult {
    /// Observed fraction of items on which the raters agree.
    pub agreement: f64,
    pub kappa: f64,
    pub n_items: usize,
    pub n_categories: usize,
}

/// Cohen's kappa, `(p_o - p_e) / (1 - p_e)` with chance agreement from the
/// two raters' marginals.
pub fn cohens_kappa<T: Ord>(labels_a: &[T], labels_b: &[T]) -> Result<AgreementResult> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::InvalidArgument(alloc::format!(
            "raters labelled {} and {} items",
            labels_a.len(),
            labels_b.len()
        )));
    }
    if labels_a.len() < 2 {
        return Err(Error::InsufficientData("kappa needs at least two items"));
    }
    let mut index: BTreeMap<&T, usize> = BTreeMap::new();
    for l in labels_a.iter().chain(labels_b) {
        let next = index.len();
        index.entry(l).or_insert(next);
    }
    let k = index.len();
    let mut confusion = vec![vec![0u64; k]; k];
    for (a, b) in labels_a.iter().zip(labels_b) {
        confusion[index[a]][index[b]] += 1;
    }
    kappa_from_confusion(&confusion)
}

/// Kappa from a square confusion matrix, rows for rater A and columns for
/// rater B.
pub fn kappa_from_confusion(confusion: &[Vec<u64>]) -> Result<AgreementResult> {
    let k = confusion.len();
    if confusion.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidArgument("confusion matrix must be square".into()));
    }
    let total: u64 = confusion.iter().flatten().sum();
    if total < 2 {
        return Err(Error::InsufficientData("kappa needs at least two items"));
    }
    let n = total as f64;
    let observed: u64 = (0..k).map(|i| confusion[i][i]).sum();
    let p_o = observed as f64 / n;
    let p_e: f64 = (0..k)
        .map(|i| {
            let row: u64 = confusion[i].iter().sum();
            let col: u64 = confusion.iter().map(|r| r[i]).sum();
            (row as f64 / n) * (col as f64 / n)
        })
        .sum();
    if (1.0 - p_e).abs() < 1e-15 {
        return Err(Error::UndefinedKappa);
    }
    let used = (0..k)
        .filter(|&i| confusion[i].iter().sum::<u64>() > 0 || confusion.iter().any(|r| r[i] > 0))
        .count();
    Ok(AgreementResult {
        agreement: p_o,
        kappa: (p_o - p_e) / (1.0 - p_e),
        n_items: total as usize,
        n_categories: used,
    })
}
