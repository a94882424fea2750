use std::collections::HashMap;

use super::{MetricDetail, MetricResult, NgramStat, TokenSequence};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RougeError {
    #[error("k must be at least 1")]
    InvalidK,
    #[error("reference has {len} tokens, fewer than k = {k}")]
    ReferenceTooShort { k: usize, len: usize },
}

/// ROUGE-k recall: the fraction of the reference's k-grams found in the
/// candidate, clipping each k-gram's credit by its candidate multiplicity.
pub fn rouge_k_recall(
    candidate: &TokenSequence,
    reference: &TokenSequence,
    k: usize,
) -> Result<MetricResult, RougeError> {
    if k < 1 {
        return Err(RougeError::InvalidK);
    }
    if reference.len() < k {
        return Err(RougeError::ReferenceTooShort {
            k,
            len: reference.len(),
        });
    }

    let refr = reference.tokens();
    let cand = candidate.tokens();

    let mut cand_counts: HashMap<&[String], usize> = HashMap::new();
    if cand.len() >= k {
        for gram in cand.windows(k) {
            *cand_counts.entry(gram).or_insert(0) += 1;
        }
    }

    let mut matched = 0;
    let mut total = 0;
    for gram in refr.windows(k) {
        total += 1;
        if let Some(remaining) = cand_counts.get_mut(gram) {
            if *remaining > 0 {
                *remaining -= 1;
                matched += 1;
            }
        }
    }

    let value = matched as f64 / total as f64;
    Ok(MetricResult {
        value,
        detail: MetricDetail {
            per_n: vec![NgramStat {
                n: k,
                matched,
                total,
                value,
                smoothed: false,
            }],
            brevity_penalty: None,
            empty_candidate: candidate.is_empty(),
        },
    })
}
