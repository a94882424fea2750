use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Gene class, per the catalog's annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Biotype {
    ProteinCoding,
    NonCoding,
    Pseudogene,
}

impl std::fmt::Display for Biotype {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Biotype::ProteinCoding => "protein_coding",
            Biotype::NonCoding => "non_coding",
            Biotype::Pseudogene => "pseudogene",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Biotype {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "protein_coding" => Ok(Biotype::ProteinCoding),
            "non_coding" => Ok(Biotype::NonCoding),
            "pseudogene" => Ok(Biotype::Pseudogene),
            other => Err(format!("unknown biotype: {other:?}")),
        }
    }
}

/// One gene's identity plus its reference functional summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneRecord {
    /// Short official symbol, e.g. "TP53". Non-empty, no whitespace.
    pub symbol: String,
    pub full_name: String,
    /// Alternate symbols; never contains `symbol` itself.
    #[serde(default)]
    pub aliases: Vec<String>,
    pub ensembl_id: String,
    pub hgnc_id: String,
    pub biotype: Biotype,
    /// Reference functional description; may be empty when the catalog has none.
    #[serde(default)]
    pub summary: String,
}

impl GeneRecord {
    /// Builds a validated record. Aliases equal to the symbol
    /// (case-insensitively) are rejected.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        symbol: impl Into<String>,
        full_name: impl Into<String>,
        aliases: Vec<String>,
        ensembl_id: impl Into<String>,
        hgnc_id: impl Into<String>,
        biotype: Biotype,
        summary: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        let record = Self {
            symbol: symbol.into(),
            full_name: full_name.into(),
            aliases,
            ensembl_id: ensembl_id.into(),
            hgnc_id: hgnc_id.into(),
            biotype,
            summary: summary.into(),
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.symbol.is_empty() || self.symbol.chars().any(char::is_whitespace) {
            return Err(CorpusError::BadSymbol(self.symbol.clone()));
        }
        if self
            .aliases
            .iter()
            .any(|a| a.eq_ignore_ascii_case(&self.symbol))
        {
            return Err(CorpusError::AliasIsSymbol(self.symbol.clone()));
        }
        Ok(())
    }

    pub fn has_summary(&self) -> bool {
        !self.summary.trim().is_empty()
    }
}
