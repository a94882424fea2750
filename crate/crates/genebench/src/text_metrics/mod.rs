//! Reference text metrics: BLEU, ROUGE-k recall, and Pearson correlation.
//!
//! Both n-gram metrics share one tokenizer (see [`tokenize`]) so their
//! values are comparable, and both are plain counting computations with no
//! randomness anywhere.

mod bleu;
mod pearson;
mod rouge;
mod tokenize;

pub use bleu::bleu;
pub use pearson::{pearson, pearson_test, PearsonError, PearsonTest};
pub use rouge::{rouge_k_recall, RougeError};
pub use tokenize::{tokenize, TOKENIZER_VERSION};

/// An ordered sequence of lowercase word tokens.
///
/// Tokens never contain whitespace; construction goes through [`tokenize`]
/// or [`TokenSequence::from_tokens`], both of which enforce this.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSequence {
    tokens: Vec<String>,
}

impl TokenSequence {
    /// Builds a sequence from pre-split tokens, lowercasing each one.
    ///
    /// Panics in debug builds if a token contains whitespace.
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens
            .into_iter()
            .map(|t| t.into().to_lowercase())
            .collect();
        debug_assert!(
            tokens.iter().all(|t| !t.chars().any(char::is_whitespace)),
            "tokens must not contain whitespace"
        );
        Self { tokens }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// A metric value in `[0, 1]` together with its per-n breakdown.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricResult {
    pub value: f64,
    pub detail: MetricDetail,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricDetail {
    /// Per-order n-gram statistics, in order of increasing `n`.
    pub per_n: Vec<NgramStat>,
    /// Brevity penalty (BLEU only).
    pub brevity_penalty: Option<f64>,
    /// Set when the candidate was empty and the value pinned to zero.
    pub empty_candidate: bool,
}

/// Counted matches for one n-gram order.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramStat {
    pub n: usize,
    pub matched: usize,
    pub total: usize,
    /// The precision (BLEU) or recall (ROUGE) actually used for this order.
    pub value: f64,
    /// True when the zero-count smoothing rule produced `value`.
    pub smoothed: bool,
}
