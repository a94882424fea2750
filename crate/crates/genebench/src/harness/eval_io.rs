//! Line-delimited eval-sample and model-output files.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::grading::EvalSample;

use super::HarnessError;

/// One model output, joined to its eval sample by id. Failed requests keep
/// an empty output plus an error marker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelOutput {
    pub id: String,
    pub output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Reads eval samples, validating per-sample invariants and id uniqueness.
pub fn read_eval_samples(path: &Path) -> Result<Vec<EvalSample>, HarnessError> {
    let reader = BufReader::new(
        std::fs::File::open(path)
            .map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?,
    );
    let mut samples: Vec<EvalSample> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let sample: EvalSample = serde_json::from_str(&line)
            .map_err(|e| HarnessError::Data(format!("{} line {}: {e}", path.display(), i + 1)))?;
        sample.validate()?;
        if !seen.insert(sample.id.clone()) {
            return Err(HarnessError::Data(format!("duplicate sample id {:?}", sample.id)));
        }
        samples.push(sample);
    }
    samples.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(samples)
}

pub fn write_outputs<W: Write>(mut out: W, outputs: &[ModelOutput]) -> Result<(), HarnessError> {
    for output in outputs {
        serde_json::to_writer(&mut out, output)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_outputs(path: &Path) -> Result<Vec<ModelOutput>, HarnessError> {
    let reader = BufReader::new(
        std::fs::File::open(path)
            .map_err(|e| HarnessError::Data(format!("{}: {e}", path.display())))?,
    );
    let mut outputs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let output: ModelOutput = serde_json::from_str(&line)
            .map_err(|e| HarnessError::Data(format!("{} line {}: {e}", path.display(), i + 1)))?;
        outputs.push(output);
    }
    outputs.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(outputs)
}
