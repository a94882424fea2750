//! Marker-gene task grader: parse a yes/no stance out of the output and
//! compare it with the ground-truth relation.

use crate::text_metrics::tokenize;

use super::{GraderConfig, GradingError, MarkerRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stance {
    Yes,
    No,
}

/// Extracts an affirmation/negation stance: either the leading token of the
/// output, or the token following the configured answer field anywhere in
/// it ("answer: yes"). Returns `None` when neither form is present.
pub fn parse_stance(output: &str, answer_field: &str) -> Option<Stance> {
    let sequence = tokenize(output);
    let tokens = sequence.tokens();
    let as_stance = |token: &str| match token {
        "yes" => Some(Stance::Yes),
        "no" => Some(Stance::No),
        _ => None,
    };
    if let Some(first) = tokens.first() {
        if let Some(stance) = as_stance(first) {
            return Some(stance);
        }
    }
    let field = answer_field.to_lowercase();
    tokens
        .windows(2)
        .find(|w| w[0] == field)
        .and_then(|w| as_stance(&w[1]))
}

/// Binary marker grade: 1 iff the parsed stance equals the gold relation.
/// An output with no recognizable stance is an error so callers can score
/// it 0 while reporting it separately from plain wrong answers.
pub fn grade_marker(
    output: &str,
    gold: &MarkerRelation,
    cfg: &GraderConfig,
) -> Result<u8, GradingError> {
    let stance =
        parse_stance(output, &cfg.marker_answer_field).ok_or(GradingError::UnparseableStance)?;
    let claimed = stance == Stance::Yes;
    Ok((claimed == gold.is_marker) as u8)
}
