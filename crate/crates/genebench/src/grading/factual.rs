//! Truthfulness graders for the gene-description and protein tasks.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use crate::corpus::GeneRecord;
use crate::text_metrics::tokenize;

use super::lcs::{longest_common_subsequence_len, longest_common_substring, normalize_for_match};
use super::GradingError;

/// Knobs for the deterministic graders. Defaults match the shipped rubric.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GraderConfig {
    /// Minimum content-word recall for a gene description to count as
    /// factually correct (inclusive).
    pub function_recall_threshold: f64,
    /// Score the protein task by longest common subsequence instead of
    /// substring (sensitivity-check mode).
    pub use_subsequence: bool,
    /// Field name searched for an explicit stance, e.g. "answer: yes".
    pub marker_answer_field: String,
}

impl Default for GraderConfig {
    fn default() -> Self {
        Self {
            function_recall_threshold: 0.3,
            use_subsequence: false,
            marker_answer_field: "answer".to_string(),
        }
    }
}

const STOPWORDS_V1: &str = include_str!("stopwords_v1.txt");

fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS_V1
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

/// Distinct content-word types of a text: tokens minus stopwords.
pub fn content_words(text: &str) -> BTreeSet<String> {
    tokenize(text)
        .tokens()
        .iter()
        .filter(|t| !stopwords().contains(t.as_str()))
        .cloned()
        .collect()
}

/// Fraction of the reference's distinct content words that appear in the
/// candidate. 1.0 when the reference has no content words.
pub fn content_word_recall(candidate: &str, reference: &str) -> f64 {
    let ref_words = content_words(reference);
    if ref_words.is_empty() {
        return 1.0;
    }
    let cand_words = content_words(candidate);
    let matched = ref_words.intersection(&cand_words).count();
    matched as f64 / ref_words.len() as f64
}

/// True when `phrase`'s token sequence occurs contiguously in the output's
/// token sequence (case-insensitive, punctuation-robust).
fn mentions(output_tokens: &[String], phrase: &str) -> bool {
    let phrase_tokens = tokenize(phrase);
    let needle = phrase_tokens.tokens();
    if needle.is_empty() {
        return false;
    }
    output_tokens
        .windows(needle.len())
        .any(|window| window == needle)
}

/// Binary gene-description grade: 1 iff the gene is named (symbol, full
/// name, or any alias) AND the output's content-word recall against the
/// reference summary reaches the configured threshold (inclusive).
pub fn grade_gene_factual(
    output: &str,
    gold: &GeneRecord,
    cfg: &GraderConfig,
) -> Result<u8, GradingError> {
    if !gold.has_summary() {
        return Err(GradingError::EmptyGold);
    }
    let output_seq = tokenize(output);
    let output_tokens = output_seq.tokens();
    let name_matches = mentions(output_tokens, &gold.symbol)
        || mentions(output_tokens, &gold.full_name)
        || gold.aliases.iter().any(|a| mentions(output_tokens, a));
    if !name_matches {
        return Ok(0);
    }
    let recall = content_word_recall(output, &gold.summary);
    Ok((recall >= cfg.function_recall_threshold) as u8)
}

/// Protein-task grade: length of the largest common string between output
/// and the correct name, divided by the (normalized) length of the correct
/// name. Always in [0, 1].
pub fn grade_protein_factual(
    output: &str,
    gold_name: &str,
    cfg: &GraderConfig,
) -> Result<f64, GradingError> {
    let gold_norm = normalize_for_match(gold_name);
    if gold_norm.is_empty() {
        return Err(GradingError::EmptyGold);
    }
    let gold_len = gold_norm.chars().count();
    let common = if cfg.use_subsequence {
        longest_common_subsequence_len(output, gold_name)
    } else {
        longest_common_substring(output, gold_name).length
    };
    Ok((common.min(gold_len)) as f64 / gold_len as f64)
}
