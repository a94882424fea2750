use super::TokenSequence;

/// Version tag for the shared tokenizer; recorded in reports so scores can
/// be reproduced bit-for-bit.
pub const TOKENIZER_VERSION: &str = "v1";

/// Lowercases, treats every non-alphanumeric character as a separator, and
/// splits on the result. Empty text yields an empty sequence.
///
/// "TP53, a gene" → `["tp53", "a", "gene"]`
pub fn tokenize(text: &str) -> TokenSequence {
    let lowered = text.to_lowercase();
    TokenSequence::from_tokens(
        lowered
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| !t.is_empty()),
    )
}
