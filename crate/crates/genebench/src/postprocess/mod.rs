//! Tool-augmented repair of model outputs: rewrite hallucinated numeric
//! gene IDs to database truth and normalize redundant alias passages.
//!
//! Both repairs are local (text outside the touched regions is preserved
//! byte-for-byte) and idempotent (re-running them is a no-op).

pub mod aliases;
pub mod db;
pub mod ids;

pub use aliases::{normalize_aliases, normalize_aliases_logged};
pub use db::{GeneIdDatabase, GeneIdEntry};
pub use ids::{correct_numeric_ids, correct_numeric_ids_logged, detect_id_spans, IdKind, IdSpan, RepairOptions};

/// A recorded text edit, for the audit change log.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Edit {
    /// Byte offset range in the pre-edit text ([start, start] for pure insertions).
    pub start: usize,
    pub end: usize,
    pub before: String,
    pub after: String,
}

#[derive(Debug, thiserror::Error)]
pub enum PostprocessError {
    #[error("gene {0} is not present in the ID database")]
    GeneNotInDb(String),
    #[error("database line {line}: {reason}")]
    BadDatabaseLine { line: usize, reason: String },
    #[error("duplicate database entry for symbol {0}")]
    DuplicateSymbol(String),
    #[error("invalid Ensembl ID {0:?} (expected ENSG followed by 11 digits)")]
    BadEnsemblId(String),
    #[error("invalid HGNC ID {0:?} (expected HGNC: followed by 1-6 digits)")]
    BadHgncId(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Applies the full repair pipeline (aliases, then IDs) and returns the
/// repaired text with the combined change log.
pub fn repair_output(
    text: &str,
    gene: &str,
    database: &GeneIdDatabase,
    options: &RepairOptions,
) -> Result<(String, Vec<Edit>), PostprocessError> {
    let (after_aliases, mut edits) = normalize_aliases_logged(text, gene, database)?;
    let (after_ids, id_edits) = correct_numeric_ids_logged(&after_aliases, gene, database, options)?;
    edits.extend(id_edits);
    Ok((after_ids, edits))
}
