//! Numeric ID detection and correction.

use std::sync::LazyLock;

use regex::Regex;

use super::db::GeneIdDatabase;
use super::{Edit, PostprocessError};

/// The two ID systems the repairer knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdKind {
    Ensembl,
    Hgnc,
}

/// One detected ID mention in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdSpan {
    /// Byte offsets into the source text; `text == source[start..end]`.
    pub start: usize,
    pub end: usize,
    pub kind: IdKind,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOptions {
    /// When the output mentions no ID at all, append a canonical ID
    /// sentence rather than leaving the omission in place.
    pub append_missing_ids: bool,
}

impl Default for RepairOptions {
    fn default() -> Self {
        Self {
            append_missing_ids: true,
        }
    }
}

// Detection is deliberately generous: any ENSG/HGNC-prefixed digit run is
// an ID mention, including hallucinated runs of the wrong length, so a
// malformed ID still gets rewritten to the canonical value.
static ENSEMBL_MENTION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\bENSG[0-9]+").expect("static pattern"));
static HGNC_MENTION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\bHGNC:\s?[0-9]+").expect("static pattern"));

/// Finds all non-overlapping ID mentions, left to right.
pub fn detect_id_spans(text: &str) -> Vec<IdSpan> {
    let mut spans: Vec<IdSpan> = ENSEMBL_MENTION
        .find_iter(text)
        .map(|m| IdSpan {
            start: m.start(),
            end: m.end(),
            kind: IdKind::Ensembl,
            text: m.as_str().to_string(),
        })
        .chain(HGNC_MENTION.find_iter(text).map(|m| IdSpan {
            start: m.start(),
            end: m.end(),
            kind: IdKind::Hgnc,
            text: m.as_str().to_string(),
        }))
        .collect();
    spans.sort_by_key(|s| s.start);
    spans
}

/// Separator needed between existing text and an appended sentence: adds a
/// terminator when the text does not end with one, and a space when there
/// is no trailing whitespace.
pub(crate) fn append_glue(text: &str) -> &'static str {
    if text.is_empty() {
        return "";
    }
    let ends_with_ws = text.chars().last().is_some_and(char::is_whitespace);
    let last_non_ws = text.chars().rev().find(|c| !c.is_whitespace());
    let terminated = matches!(last_non_ws, Some('.') | Some('!') | Some('?'));
    match (terminated, ends_with_ws) {
        (true, true) => "",
        (true, false) => " ",
        (false, _) => ". ",
    }
}

/// Rewrites every detected ID mention to the database value for `gene`;
/// text outside the spans is untouched. When the output mentions no ID and
/// `options.append_missing_ids` is set, a canonical ID sentence is appended
/// instead.
pub fn correct_numeric_ids_logged(
    text: &str,
    gene: &str,
    database: &GeneIdDatabase,
    options: &RepairOptions,
) -> Result<(String, Vec<Edit>), PostprocessError> {
    let entry = database
        .get(gene)
        .ok_or_else(|| PostprocessError::GeneNotInDb(gene.to_string()))?;

    let spans = detect_id_spans(text);
    if spans.is_empty() {
        if !options.append_missing_ids {
            return Ok((text.to_string(), Vec::new()));
        }
        let sentence = format!(
            "Its Ensembl ID is {} and its HGNC ID is {}.",
            entry.ensembl_id, entry.hgnc_id
        );
        let glue = append_glue(text);
        let mut repaired = String::with_capacity(text.len() + glue.len() + sentence.len());
        repaired.push_str(text);
        repaired.push_str(glue);
        repaired.push_str(&sentence);
        let edit = Edit {
            start: text.len(),
            end: text.len(),
            before: String::new(),
            after: format!("{glue}{sentence}"),
        };
        return Ok((repaired, vec![edit]));
    }

    let mut repaired = String::with_capacity(text.len());
    let mut edits = Vec::new();
    let mut cursor = 0;
    for span in &spans {
        let replacement = match span.kind {
            IdKind::Ensembl => &entry.ensembl_id,
            IdKind::Hgnc => &entry.hgnc_id,
        };
        repaired.push_str(&text[cursor..span.start]);
        repaired.push_str(replacement);
        if span.text != *replacement {
            edits.push(Edit {
                start: span.start,
                end: span.end,
                before: span.text.clone(),
                after: replacement.clone(),
            });
        }
        cursor = span.end;
    }
    repaired.push_str(&text[cursor..]);
    Ok((repaired, edits))
}

/// [`correct_numeric_ids_logged`] without the change log, using default
/// options.
pub fn correct_numeric_ids(
    text: &str,
    gene: &str,
    database: &GeneIdDatabase,
) -> Result<String, PostprocessError> {
    correct_numeric_ids_logged(text, gene, database, &RepairOptions::default()).map(|(t, _)| t)
}
