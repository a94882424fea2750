//! Score aggregation into the report shape shared by all tasks.

use serde::{Deserialize, Serialize};

use super::GradingError;

/// Per-sample grades: factual in [0, 1], structural in {0, 1}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleScore {
    pub id: String,
    pub factual: f64,
    pub structural: u8,
}

/// The aggregate report: column means and their average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeReport {
    /// Per-sample scores, ordered by sample id.
    pub per_sample: Vec<SampleScore>,
    pub factual_mean: f64,
    pub structural_mean: f64,
    /// `(factual_mean + structural_mean) / 2`.
    pub average: f64,
}

/// Averages the per-sample columns. Samples are reordered by id so the
/// report is canonical no matter how the grading work was scheduled.
pub fn aggregate(mut per_sample: Vec<SampleScore>) -> Result<GradeReport, GradingError> {
    if per_sample.is_empty() {
        return Err(GradingError::EmptySampleList);
    }
    per_sample.sort_by(|a, b| a.id.cmp(&b.id));
    let n = per_sample.len() as f64;
    let factual_mean = per_sample.iter().map(|s| s.factual).sum::<f64>() / n;
    let structural_mean = per_sample.iter().map(|s| s.structural as f64).sum::<f64>() / n;
    Ok(GradeReport {
        per_sample,
        factual_mean,
        structural_mean,
        average: (factual_mean + structural_mean) / 2.0,
    })
}
