//! Batch inference: a bounded worker pool maps eval samples through the
//! provider with retry and backoff; results are re-ordered by sample id so
//! scheduling never shows up in the output file.

use rayon::prelude::*;

use crate::corpus::{Provider, ProviderError};
use crate::grading::EvalSample;

use super::config::RunConfig;
use super::eval_io::ModelOutput;
use super::HarnessError;

/// Requests one output per sample. Per-sample failures are retried with
/// exponential backoff and then recorded as empty outputs with an error
/// marker; if every sample failed and at least one failure was a transport
/// error, the provider is reported unreachable instead.
pub fn run_inference(
    config: &RunConfig,
    samples: &[EvalSample],
    provider: &dyn Provider,
) -> Result<Vec<ModelOutput>, HarnessError> {
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;

    let mut outputs: Vec<ModelOutput> = pool.install(|| {
        samples
            .par_iter()
            .map(|sample| {
                match generate_with_retry(provider, &sample.prompt, config) {
                    Ok(text) => ModelOutput {
                        id: sample.id.clone(),
                        output: text,
                        error: None,
                    },
                    Err(e) => ModelOutput {
                        id: sample.id.clone(),
                        output: String::new(),
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });
    outputs.sort_by(|a, b| a.id.cmp(&b.id));

    let failed = outputs.iter().filter(|o| o.error.is_some()).count();
    if failed == outputs.len() {
        let unreachable = outputs
            .iter()
            .filter_map(|o| o.error.as_deref())
            .find(|e| e.contains("unreachable"));
        if let Some(reason) = unreachable {
            return Err(HarnessError::ProviderUnreachable {
                attempts: config.retry.attempts,
                reason: reason.to_string(),
            });
        }
    }
    Ok(outputs)
}

fn generate_with_retry(
    provider: &dyn Provider,
    prompt: &str,
    config: &RunConfig,
) -> Result<String, ProviderError> {
    let attempts = config.retry.attempts.max(1);
    let mut backoff = config.retry.backoff;
    let mut last_error = None;
    for attempt in 0..attempts {
        match provider.generate(prompt) {
            Ok(text) => return Ok(text),
            Err(e) => {
                last_error = Some(e);
                if attempt + 1 < attempts {
                    std::thread::sleep(backoff);
                    backoff *= 2;
                }
            }
        }
    }
    Err(last_error.expect("at least one attempt ran"))
}
