//! Alias-passage normalization.
//!
//! Model outputs often degenerate into repeated "also known as ..." runs.
//! The repair removes sentences matching a fixed list of alias clause
//! markers plus parenthesized symbol lists directly after the gene symbol,
//! then inserts one canonical clause built from the database — "Its aliases
//! include A1, A2." — right after the first sentence. Genes without
//! database aliases get no clause at all.
//!
//! The inserted clause itself matches the removal patterns, which is what
//! makes re-application a byte-identical no-op: the second pass removes the
//! clause and re-inserts it at the same position.

use super::db::GeneIdDatabase;
use super::ids::append_glue;
use super::{Edit, PostprocessError};

/// Clause markers identifying an alias-mention sentence (matched
/// case-insensitively). Fixed, versioned list: anything not matching is
/// left alone.
const ALIAS_CLAUSE_MARKERS: &[&str] = &[
    "also known as",
    "aliases include",
    "aliases are",
    "alias is",
    "known aliases",
];

/// Removes redundant alias passages and inserts the canonical clause.
pub fn normalize_aliases_logged(
    text: &str,
    gene: &str,
    database: &GeneIdDatabase,
) -> Result<(String, Vec<Edit>), PostprocessError> {
    let entry = database
        .get(gene)
        .ok_or_else(|| PostprocessError::GeneNotInDb(gene.to_string()))?;

    let mut edits = Vec::new();
    let mut kept: Vec<String> = Vec::new();
    let mut offset = 0usize;
    for segment in segment_sentences(text) {
        let segment_start = offset;
        offset += segment.len();
        if is_alias_sentence(&segment) {
            edits.push(Edit {
                start: segment_start,
                end: segment_start + segment.len(),
                before: segment,
                after: String::new(),
            });
            continue;
        }
        let (stripped, removals) = strip_alias_parentheticals(&segment, gene);
        for (local_start, removed) in removals {
            edits.push(Edit {
                start: segment_start + local_start,
                end: segment_start + local_start + removed.len(),
                before: removed,
                after: String::new(),
            });
        }
        kept.push(stripped);
    }

    if entry.aliases.is_empty() {
        return Ok((kept.concat(), edits));
    }

    let clause = format!("Its aliases include {}.", entry.aliases.join(", "));
    let mut out = String::new();
    if kept.is_empty() {
        out.push_str(&clause);
    } else {
        let first = &kept[0];
        let glue = append_glue(first);
        out.push_str(first);
        out.push_str(glue);
        out.push_str(&clause);
        if kept.len() > 1 {
            out.push(' ');
        }
        for segment in &kept[1..] {
            out.push_str(segment);
        }
    }
    let insert_at = kept.first().map(|s| s.len()).unwrap_or(0);
    edits.push(Edit {
        start: insert_at,
        end: insert_at,
        before: String::new(),
        after: clause,
    });
    Ok((out, edits))
}

/// [`normalize_aliases_logged`] without the change log.
pub fn normalize_aliases(
    text: &str,
    gene: &str,
    database: &GeneIdDatabase,
) -> Result<String, PostprocessError> {
    normalize_aliases_logged(text, gene, database).map(|(t, _)| t)
}

fn is_alias_sentence(segment: &str) -> bool {
    let lower = segment.to_lowercase();
    ALIAS_CLAUSE_MARKERS.iter().any(|m| lower.contains(m))
}

/// Splits text into sentence segments whose concatenation equals the input
/// byte-for-byte. A boundary is a run of `.!?` followed by whitespace; the
/// whitespace attaches to the preceding segment.
pub(crate) fn segment_sentences(text: &str) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut segments = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        if matches!(chars[i].1, '.' | '!' | '?') {
            let mut j = i + 1;
            while j < chars.len() && matches!(chars[j].1, '.' | '!' | '?') {
                j += 1;
            }
            if j >= chars.len() {
                break;
            }
            if chars[j].1.is_whitespace() {
                let mut k = j;
                while k < chars.len() && chars[k].1.is_whitespace() {
                    k += 1;
                }
                let end = if k < chars.len() { chars[k].0 } else { text.len() };
                segments.push(text[start..end].to_string());
                start = end;
                i = k;
            } else {
                i = j;
            }
        } else {
            i += 1;
        }
    }
    if start < text.len() {
        segments.push(text[start..].to_string());
    }
    segments
}

/// Removes parenthesized symbol lists that directly follow the gene symbol,
/// e.g. `TP53 (P53, LFS1)`. Returns the cleaned segment plus the removed
/// pieces with their local byte offsets.
fn strip_alias_parentheticals(segment: &str, gene: &str) -> (String, Vec<(usize, String)>) {
    let bytes = segment.as_bytes();
    let mut out = String::with_capacity(segment.len());
    let mut removals = Vec::new();
    let mut cursor = 0usize;
    let mut search_from = 0usize;
    while let Some(hit) = find_word_ci(segment, gene, search_from) {
        let symbol_end = hit + gene.len();
        search_from = symbol_end;
        // Optional single space, then an opening parenthesis.
        let mut paren_start = symbol_end;
        if paren_start < bytes.len() && bytes[paren_start] == b' ' {
            paren_start += 1;
        }
        if paren_start >= bytes.len() || bytes[paren_start] != b'(' {
            continue;
        }
        let Some(close_rel) = segment[paren_start..].find(')') else {
            continue;
        };
        let paren_end = paren_start + close_rel + 1;
        let contents = &segment[paren_start + 1..paren_end - 1];
        if !looks_like_symbol_list(contents) {
            continue;
        }
        // Drop the parenthetical and the single space before it, if any.
        let removal_start = if paren_start > symbol_end { symbol_end } else { paren_start };
        out.push_str(&segment[cursor..removal_start]);
        removals.push((removal_start, segment[removal_start..paren_end].to_string()));
        cursor = paren_end;
        search_from = paren_end;
    }
    out.push_str(&segment[cursor..]);
    (out, removals)
}

/// Case-insensitive whole-word search over ASCII symbols.
fn find_word_ci(haystack: &str, needle: &str, from: usize) -> Option<usize> {
    let h = haystack.as_bytes();
    let n = needle.as_bytes();
    if n.is_empty() || h.len() < n.len() {
        return None;
    }
    let mut i = from;
    while i + n.len() <= h.len() {
        if h[i..i + n.len()].eq_ignore_ascii_case(n) {
            let before_ok = i == 0 || !h[i - 1].is_ascii_alphanumeric();
            let after = i + n.len();
            let after_ok = after >= h.len() || !h[after].is_ascii_alphanumeric();
            if before_ok && after_ok {
                return Some(i);
            }
        }
        i += 1;
    }
    None
}

fn looks_like_symbol_list(contents: &str) -> bool {
    if contents.is_empty() || contents.len() > 80 {
        return false;
    }
    let pieces: Vec<&str> = contents.split([',', ';', '/']).map(str::trim).collect();
    !pieces.is_empty()
        && pieces.iter().all(|p| {
            !p.is_empty()
                && p.len() <= 15
                && p.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'))
        })
}
