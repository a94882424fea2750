//! The gene ID retrieval table backing the post-processor.
//!
//! On disk this is a plain tab-separated file, one gene per line:
//!
//! ```text
//! symbol<TAB>ensembl_id<TAB>hgnc_id<TAB>comma-joined aliases
//! ```
//!
//! Lines starting with `#` are comments; the alias column may be empty.
//! The whole table is loaded into memory (tens of thousands of genes fit
//! trivially) and is immutable afterwards, so it can be shared freely
//! across worker threads.

use std::collections::BTreeMap;
use std::path::Path;

use super::PostprocessError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneIdEntry {
    pub ensembl_id: String,
    pub hgnc_id: String,
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, Default)]
pub struct GeneIdDatabase {
    entries: BTreeMap<String, GeneIdEntry>,
}

pub(crate) fn is_valid_ensembl(id: &str) -> bool {
    id.strip_prefix("ENSG")
        .map(|digits| digits.len() == 11 && digits.bytes().all(|b| b.is_ascii_digit()))
        .unwrap_or(false)
}

pub(crate) fn is_valid_hgnc(id: &str) -> bool {
    id.strip_prefix("HGNC:")
        .map(|digits| (1..=6).contains(&digits.len()) && digits.bytes().all(|b| b.is_ascii_digit()))
        .unwrap_or(false)
}

impl GeneIdDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one validated entry; symbols must be unique.
    pub fn insert(
        &mut self,
        symbol: impl Into<String>,
        entry: GeneIdEntry,
    ) -> Result<(), PostprocessError> {
        if !is_valid_ensembl(&entry.ensembl_id) {
            return Err(PostprocessError::BadEnsemblId(entry.ensembl_id));
        }
        if !is_valid_hgnc(&entry.hgnc_id) {
            return Err(PostprocessError::BadHgncId(entry.hgnc_id));
        }
        let symbol = symbol.into();
        if self.entries.contains_key(&symbol) {
            return Err(PostprocessError::DuplicateSymbol(symbol));
        }
        self.entries.insert(symbol, entry);
        Ok(())
    }

    pub fn get(&self, symbol: &str) -> Option<&GeneIdEntry> {
        self.entries.get(symbol)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn parse(text: &str) -> Result<Self, PostprocessError> {
        let mut db = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 3 {
                return Err(PostprocessError::BadDatabaseLine {
                    line: line_no,
                    reason: "expected symbol, ensembl, hgnc, aliases columns".into(),
                });
            }
            let aliases = fields
                .get(3)
                .map(|col| {
                    col.split(',')
                        .map(|a| a.trim().to_string())
                        .filter(|a| !a.is_empty())
                        .collect()
                })
                .unwrap_or_default();
            db.insert(
                fields[0].trim(),
                GeneIdEntry {
                    ensembl_id: fields[1].trim().to_string(),
                    hgnc_id: fields[2].trim().to_string(),
                    aliases,
                },
            )?;
        }
        Ok(db)
    }

    pub fn from_file(path: &Path) -> Result<Self, PostprocessError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_valid_table() {
        let text = "# comment\nTP53\tENSG00000141510\tHGNC:11998\tP53, LFS1\nBRCA1\tENSG00000012048\tHGNC:1100\t\n";
        let db = GeneIdDatabase::parse(text).unwrap();
        assert_eq!(db.len(), 2);
        let tp53 = db.get("TP53").unwrap();
        assert_eq!(tp53.aliases, vec!["P53", "LFS1"]);
        assert!(db.get("BRCA1").unwrap().aliases.is_empty());
    }

    #[test]
    fn rejects_bad_ensembl_shapes() {
        for bad in ["ENSG123", "ENSG0000014151A", "ENST00000141510", "ENSG000001415100"] {
            let line = format!("X\t{bad}\tHGNC:1\t");
            assert!(GeneIdDatabase::parse(&line).is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn rejects_bad_hgnc_shapes() {
        for bad in ["HGNC:", "HGNC:1234567", "HGNC:12a4", "1100"] {
            let line = format!("X\tENSG00000141510\t{bad}\t");
            assert!(GeneIdDatabase::parse(&line).is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn rejects_duplicate_symbols() {
        let text = "A\tENSG00000000001\tHGNC:1\t\nA\tENSG00000000002\tHGNC:2\t\n";
        assert!(matches!(
            GeneIdDatabase::parse(text),
            Err(PostprocessError::DuplicateSymbol(_))
        ));
    }
}
