//! Batch orchestration: deterministic inference over a provider, grading
//! runs over eval samples, and benchmark-table reports.

pub mod config;
pub mod eval_io;
pub mod grade_run;
pub mod infer;
pub mod report;

pub use config::{RetryPolicy, RunConfig};
pub use eval_io::{read_eval_samples, read_outputs, write_outputs, ModelOutput};
pub use grade_run::{run_grading, write_rubric_worksheet, GradingRun, SampleDetail};
pub use infer::run_inference;
pub use report::{emit_report, parse_benchmark_table, BenchmarkRow};

use crate::corpus::{CorpusError, ProviderError};
use crate::embed_eval::EmbedError;
use crate::grading::GradingError;
use crate::postprocess::PostprocessError;
use crate::text_metrics::{PearsonError, RougeError};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("provider unreachable after {attempts} attempts: {reason}")]
    ProviderUnreachable { attempts: u32, reason: String },
    #[error("outputs do not align with eval samples: {0}")]
    Misaligned(String),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Postprocess(#[from] PostprocessError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error("provider error: {0}")]
    Provider(#[from] ProviderError),
    #[error("metric error: {0}")]
    Rouge(#[from] RougeError),
    #[error("correlation error: {0}")]
    Pearson(#[from] PearsonError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("encode error: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Process exit code classification: 1 config, 2 data, 3 provider.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Provider(_) | HarnessError::ProviderUnreachable { .. } => 3,
            _ => 2,
        }
    }
}
