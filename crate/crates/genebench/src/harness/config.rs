//! Run configuration: one flat key=value file per run plus CLI overrides.
//!
//! Recognized keys:
//!
//! ```text
//! task                 gene_description | protein_classification | marker_gene
//! eval                 path to the eval-sample jsonl file
//! prompt_spec          path to the structural-rule file
//! output_dir           directory for outputs and reports
//! model_label          row label in the benchmark table
//! finetuned            true | false
//! seed                 u64
//! parallelism          worker count, >= 1
//! provider.endpoint    generation endpoint URL (omit to grade precomputed outputs)
//! provider.model       model name sent on the wire
//! provider.timeout_ms  request timeout
//! provider.rate_limit  max requests per second
//! retry.attempts       bounded retry count
//! retry.backoff_ms     initial backoff, doubled per attempt
//! grader.function_recall_threshold   [0,1]
//! grader.use_subsequence             true | false
//! grader.marker_answer_field         field name for explicit stances
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::corpus::{ProviderSpec, Task};
use crate::grading::GraderConfig;

use super::HarnessError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetryPolicy {
    pub attempts: u32,
    pub backoff: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            attempts: 3,
            backoff: Duration::from_secs(1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub task: Task,
    pub eval_path: PathBuf,
    pub prompt_spec_path: PathBuf,
    pub output_dir: PathBuf,
    pub model_label: String,
    pub finetuned: bool,
    pub seed: u64,
    pub parallelism: usize,
    /// Absent when grading precomputed outputs.
    pub provider: Option<ProviderSpec>,
    pub retry: RetryPolicy,
    pub grader: GraderConfig,
}

impl RunConfig {
    /// Parses the key=value file, applies overrides, and validates.
    pub fn load(path: &Path, overrides: &[(String, String)]) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        let mut pairs = parse_pairs(&text)?;
        for (key, value) in overrides {
            pairs.insert(key.clone(), value.clone());
        }
        Self::from_pairs(&pairs)
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, HarnessError> {
        let known = [
            "task",
            "eval",
            "prompt_spec",
            "output_dir",
            "model_label",
            "finetuned",
            "seed",
            "parallelism",
            "provider.endpoint",
            "provider.model",
            "provider.timeout_ms",
            "provider.rate_limit",
            "retry.attempts",
            "retry.backoff_ms",
            "grader.function_recall_threshold",
            "grader.use_subsequence",
            "grader.marker_answer_field",
        ];
        if let Some(unknown) = pairs.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(HarnessError::Config(format!("unknown config key {unknown:?}")));
        }
        let get = |key: &str| pairs.get(key).map(String::as_str);
        let require = |key: &str| {
            get(key).ok_or_else(|| HarnessError::Config(format!("missing config key {key:?}")))
        };

        let task: Task = require("task")?
            .parse()
            .map_err(HarnessError::Config)?;
        let eval_path = PathBuf::from(require("eval")?);
        let prompt_spec_path = PathBuf::from(require("prompt_spec")?);
        let output_dir = PathBuf::from(require("output_dir")?);
        let model_label = get("model_label").unwrap_or("model").to_string();
        let finetuned = parse_bool(get("finetuned").unwrap_or("false"))
            .map_err(HarnessError::Config)?;
        let seed = get("seed")
            .unwrap_or("0")
            .parse::<u64>()
            .map_err(|e| HarnessError::Config(format!("seed: {e}")))?;
        let parallelism = get("parallelism")
            .unwrap_or("1")
            .parse::<usize>()
            .map_err(|e| HarnessError::Config(format!("parallelism: {e}")))?;

        let provider = match get("provider.endpoint") {
            None => None,
            Some(endpoint) => {
                let mut spec = ProviderSpec::new(endpoint, get("provider.model").unwrap_or("default"));
                if let Some(t) = get("provider.timeout_ms") {
                    spec.request_timeout_ms = t
                        .parse()
                        .map_err(|e| HarnessError::Config(format!("provider.timeout_ms: {e}")))?;
                }
                if let Some(r) = get("provider.rate_limit") {
                    spec.rate_limit = r
                        .parse()
                        .map_err(|e| HarnessError::Config(format!("provider.rate_limit: {e}")))?;
                }
                Some(spec)
            }
        };

        let mut retry = RetryPolicy::default();
        if let Some(a) = get("retry.attempts") {
            retry.attempts = a
                .parse()
                .map_err(|e| HarnessError::Config(format!("retry.attempts: {e}")))?;
        }
        if let Some(b) = get("retry.backoff_ms") {
            retry.backoff = Duration::from_millis(
                b.parse()
                    .map_err(|e| HarnessError::Config(format!("retry.backoff_ms: {e}")))?,
            );
        }

        let mut grader = GraderConfig::default();
        if let Some(t) = get("grader.function_recall_threshold") {
            grader.function_recall_threshold = t
                .parse()
                .map_err(|e| HarnessError::Config(format!("grader.function_recall_threshold: {e}")))?;
        }
        if let Some(u) = get("grader.use_subsequence") {
            grader.use_subsequence = parse_bool(u).map_err(HarnessError::Config)?;
        }
        if let Some(f) = get("grader.marker_answer_field") {
            grader.marker_answer_field = f.to_string();
        }

        let config = Self {
            task,
            eval_path,
            prompt_spec_path,
            output_dir,
            model_label,
            finetuned,
            seed,
            parallelism,
            provider,
            retry,
            grader,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.parallelism < 1 {
            return Err(HarnessError::Config("parallelism must be >= 1".into()));
        }
        if !self.eval_path.is_file() {
            return Err(HarnessError::Config(format!(
                "eval file does not exist: {}",
                self.eval_path.display()
            )));
        }
        if !self.prompt_spec_path.is_file() {
            return Err(HarnessError::Config(format!(
                "prompt spec does not exist: {}",
                self.prompt_spec_path.display()
            )));
        }
        if !(0.0..=1.0).contains(&self.grader.function_recall_threshold) {
            return Err(HarnessError::Config(
                "grader.function_recall_threshold must be in [0, 1]".into(),
            ));
        }
        if let Some(spec) = &self.provider {
            spec.validate()
                .map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        Ok(())
    }

    /// The resolved configuration as sorted pairs, embedded in every report
    /// for provenance.
    pub fn resolved_pairs(&self) -> Vec<(String, String)> {
        let mut pairs = vec![
            ("task".to_string(), self.task.to_string()),
            ("eval".to_string(), self.eval_path.display().to_string()),
            ("prompt_spec".to_string(), self.prompt_spec_path.display().to_string()),
            ("output_dir".to_string(), self.output_dir.display().to_string()),
            ("model_label".to_string(), self.model_label.clone()),
            ("finetuned".to_string(), self.finetuned.to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("parallelism".to_string(), self.parallelism.to_string()),
            ("retry.attempts".to_string(), self.retry.attempts.to_string()),
            ("retry.backoff_ms".to_string(), self.retry.backoff.as_millis().to_string()),
            (
                "grader.function_recall_threshold".to_string(),
                format!("{}", self.grader.function_recall_threshold),
            ),
            ("grader.use_subsequence".to_string(), self.grader.use_subsequence.to_string()),
            ("grader.marker_answer_field".to_string(), self.grader.marker_answer_field.clone()),
        ];
        if let Some(spec) = &self.provider {
            pairs.push(("provider.endpoint".to_string(), spec.endpoint.clone()));
            pairs.push(("provider.model".to_string(), spec.model_name.clone()));
            pairs.push(("provider.deterministic".to_string(), "true".to_string()));
            pairs.push(("provider.timeout_ms".to_string(), spec.request_timeout_ms.to_string()));
            pairs.push(("provider.rate_limit".to_string(), spec.rate_limit.to_string()));
        }
        pairs.sort();
        pairs
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("expected a boolean, got {other:?}")),
    }
}

/// Parses `key=value` lines; `#` comments and blank lines are skipped.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut pairs = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("line {}: expected key=value", i + 1)))?;
        pairs.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(pairs)
}

/// Parses a CLI `--set key=value` override.
pub fn parse_override(raw: &str) -> Result<(String, String), HarnessError> {
    raw.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| HarnessError::Config(format!("override {raw:?} is not key=value")))
}
