//! Benchmark tables and the correlation summary.
//!
//! The table is tab-separated with one row per model:
//!
//! ```text
//! model<TAB>factual<TAB>structural<TAB>average<TAB>bleu<TAB>rouge1<TAB>finetuned
//! ```
//!
//! Optional metric columns hold `-` when a task has no reference text.
//! Reports embed the resolved run configuration as `#` comment lines and
//! append Pearson(BLEU, Average) / Pearson(ROUGE1, Average) with two-sided
//! p-values whenever at least two rows carry metric values.

use std::io::Write;
use std::path::Path;

use crate::text_metrics::{pearson_test, PearsonError};

use super::HarnessError;

/// One benchmark-table row. The average column is always
/// `(factual + structural) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub model: String,
    pub factual: f64,
    pub structural: f64,
    pub average: f64,
    pub bleu: Option<f64>,
    pub rouge1: Option<f64>,
    pub finetuned: bool,
}

impl BenchmarkRow {
    pub fn new(
        model: String,
        factual: f64,
        structural: f64,
        bleu: Option<f64>,
        rouge1: Option<f64>,
        finetuned: bool,
    ) -> Self {
        Self {
            model,
            factual,
            structural,
            average: (factual + structural) / 2.0,
            bleu,
            rouge1,
            finetuned,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if ((self.factual + self.structural) / 2.0 - self.average).abs() > 1e-9 {
            return Err(HarnessError::Data(format!(
                "row {}: average {} != (factual + structural) / 2",
                self.model, self.average
            )));
        }
        Ok(())
    }
}

/// Writes the benchmark table with provenance comments and the correlation
/// summary. With fewer than two metric-bearing rows the correlation section
/// is replaced by a notice.
pub fn emit_report<W: Write>(
    mut out: W,
    rows: &[BenchmarkRow],
    resolved_config: &[(String, String)],
) -> Result<(), HarnessError> {
    for row in rows {
        row.validate()?;
    }
    for (key, value) in resolved_config {
        writeln!(out, "# {key} = {value}")?;
    }
    writeln!(out, "model\tfactual\tstructural\taverage\tbleu\trouge1\tfinetuned")?;
    let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
    for row in rows {
        writeln!(
            out,
            "{}\t{:.3}\t{:.3}\t{:.3}\t{}\t{}\t{}",
            row.model,
            row.factual,
            row.structural,
            row.average,
            fmt_opt(row.bleu),
            fmt_opt(row.rouge1),
            if row.finetuned { "Y" } else { "N" }
        )?;
    }

    for (metric, column) in [
        ("BLEU", rows.iter().map(|r| r.bleu).collect::<Vec<_>>()),
        ("ROUGE1", rows.iter().map(|r| r.rouge1).collect::<Vec<_>>()),
    ] {
        let paired: Vec<(f64, f64)> = rows
            .iter()
            .zip(&column)
            .filter_map(|(row, metric_value)| metric_value.map(|m| (m, row.average)))
            .collect();
        if paired.len() < 2 {
            writeln!(
                out,
                "# correlation({metric}, average): not computed (need >= 2 rows with {metric} values)"
            )?;
            continue;
        }
        let xs: Vec<f64> = paired.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = paired.iter().map(|p| p.1).collect();
        match pearson_test(&xs, &ys) {
            Ok(test) => writeln!(
                out,
                "# pearson({metric}, average) = {:.6} (two-sided p = {:.6e}, n = {})",
                test.r, test.p_value, test.n
            )?,
            Err(PearsonError::ConstantColumn) => {
                writeln!(out, "# correlation({metric}, average): not computed (constant column)")?
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

/// Reads a benchmark table back (provenance comments skipped), validating
/// the average-column identity of every row.
pub fn parse_benchmark_table(text: &str) -> Result<Vec<BenchmarkRow>, HarnessError> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') || line.starts_with("model\t") {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 7 {
            return Err(HarnessError::Data(format!(
                "line {}: expected 7 tab-separated fields, got {}",
                i + 1,
                fields.len()
            )));
        }
        let parse = |s: &str, what: &str| -> Result<f64, HarnessError> {
            s.parse()
                .map_err(|e| HarnessError::Data(format!("line {}: bad {what}: {e}", i + 1)))
        };
        let parse_opt = |s: &str, what: &str| -> Result<Option<f64>, HarnessError> {
            if s == "-" {
                Ok(None)
            } else {
                parse(s, what).map(Some)
            }
        };
        let row = BenchmarkRow {
            model: fields[0].to_string(),
            factual: parse(fields[1], "factual")?,
            structural: parse(fields[2], "structural")?,
            average: parse(fields[3], "average")?,
            bleu: parse_opt(fields[4], "bleu")?,
            rouge1: parse_opt(fields[5], "rouge1")?,
            finetuned: matches!(fields[6], "Y" | "y" | "true"),
        };
        row.validate()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_benchmark_table(path: &Path) -> Result<Vec<BenchmarkRow>, HarnessError> {
    parse_benchmark_table(
        &std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?,
    )
}
