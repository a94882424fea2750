//! Text-generation provider contract.
//!
//! The wire protocol is a single HTTP POST to the configured endpoint:
//!
//! ```text
//! request:  {"model": "<name>", "prompt": "<text>", "deterministic": true}
//! response: {"text": "<generated text>"}
//! ```
//!
//! `deterministic` is always true — providers must run their non-sampling
//! decoding mode so repeated runs return identical text. Any backend that
//! speaks this shape can be plugged in.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::catalog::RateLimiter;

#[derive(Debug, thiserror::Error)]
pub enum ProviderError {
    #[error("provider endpoint unreachable: {0}")]
    Unreachable(String),
    #[error("provider request timed out")]
    Timeout,
    #[error("provider returned status {0}")]
    Http(u16),
    #[error("provider response failed to parse: {0}")]
    Malformed(String),
    #[error("provider spec invalid: {0}")]
    InvalidSpec(String),
}

/// Anything that can deterministically turn a prompt into text.
pub trait Provider: Send + Sync {
    fn generate(&self, prompt: &str) -> Result<String, ProviderError>;
}

/// Connection details for a remote provider. Deserialization rejects specs
/// that ask for sampling: the `deterministic` field must be true (it
/// defaults to true when omitted).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProviderSpec {
    pub endpoint: String,
    pub model_name: String,
    #[serde(default = "default_true")]
    deterministic: bool,
    #[serde(default = "default_timeout_ms")]
    pub request_timeout_ms: u64,
    /// Max requests per second against the endpoint.
    #[serde(default = "default_rate_limit")]
    pub rate_limit: u32,
}

fn default_true() -> bool {
    true
}

fn default_timeout_ms() -> u64 {
    30_000
}

fn default_rate_limit() -> u32 {
    super::catalog::DEFAULT_RATE_LIMIT
}

impl ProviderSpec {
    pub fn new(endpoint: impl Into<String>, model_name: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            model_name: model_name.into(),
            deterministic: true,
            request_timeout_ms: default_timeout_ms(),
            rate_limit: default_rate_limit(),
        }
    }

    /// The decoding mode is fixed: non-sampling, always.
    pub fn deterministic(&self) -> bool {
        true
    }

    pub fn validate(&self) -> Result<(), ProviderError> {
        if !self.deterministic {
            return Err(ProviderError::InvalidSpec(
                "sampling mode is not supported; deterministic must be true".into(),
            ));
        }
        if self.endpoint.is_empty() {
            return Err(ProviderError::InvalidSpec("endpoint must be non-empty".into()));
        }
        if self.request_timeout_ms == 0 {
            return Err(ProviderError::InvalidSpec("request_timeout_ms must be positive".into()));
        }
        Ok(())
    }

    pub fn request_timeout(&self) -> Duration {
        Duration::from_millis(self.request_timeout_ms)
    }
}

#[derive(Serialize)]
struct GenerateRequest<'a> {
    model: &'a str,
    prompt: &'a str,
    deterministic: bool,
}

#[derive(Deserialize)]
struct GenerateResponse {
    text: String,
}

/// Environment variable holding an optional bearer token for the provider
/// endpoint. Secrets stay out of config files.
pub const PROVIDER_TOKEN_ENV: &str = "GENEBENCH_PROVIDER_TOKEN";

/// HTTP implementation of [`Provider`] speaking the wire contract above.
pub struct HttpProvider {
    spec: ProviderSpec,
    client: reqwest::blocking::Client,
    limiter: RateLimiter,
    bearer_token: Option<String>,
}

impl HttpProvider {
    pub fn new(spec: ProviderSpec) -> Result<Self, ProviderError> {
        spec.validate()?;
        let client = reqwest::blocking::Client::builder()
            .timeout(spec.request_timeout())
            .build()
            .map_err(|e| ProviderError::InvalidSpec(e.to_string()))?;
        let limiter = RateLimiter::system(spec.rate_limit);
        let bearer_token = std::env::var(PROVIDER_TOKEN_ENV).ok().filter(|t| !t.is_empty());
        Ok(Self {
            spec,
            client,
            limiter,
            bearer_token,
        })
    }

    pub fn spec(&self) -> &ProviderSpec {
        &self.spec
    }
}

impl Provider for HttpProvider {
    fn generate(&self, prompt: &str) -> Result<String, ProviderError> {
        self.limiter.acquire();
        let request = GenerateRequest {
            model: &self.spec.model_name,
            prompt,
            deterministic: true,
        };
        let mut builder = self.client.post(&self.spec.endpoint).json(&request);
        if let Some(token) = &self.bearer_token {
            builder = builder.bearer_auth(token);
        }
        let response = builder
            .send()
            .map_err(|e| {
                if e.is_timeout() {
                    ProviderError::Timeout
                } else {
                    ProviderError::Unreachable(e.to_string())
                }
            })?;
        if !response.status().is_success() {
            return Err(ProviderError::Http(response.status().as_u16()));
        }
        let body: GenerateResponse = response
            .json()
            .map_err(|e| ProviderError::Malformed(e.to_string()))?;
        Ok(body.text)
    }
}

/// A text template with `{symbol}` and `{summary}` placeholders.
#[derive(Debug, Clone)]
pub struct PromptTemplate {
    template: String,
}

impl PromptTemplate {
    pub fn new(template: impl Into<String>) -> Self {
        Self {
            template: template.into(),
        }
    }

    pub fn from_file(path: &std::path::Path) -> std::io::Result<Self> {
        Ok(Self::new(std::fs::read_to_string(path)?.trim_end().to_string()))
    }

    pub fn render(&self, symbol: &str, summary: &str) -> String {
        self.template
            .replace("{symbol}", symbol)
            .replace("{summary}", summary)
    }

    pub fn text(&self) -> &str {
        &self.template
    }
}

/// Default instruction shown to the model for the gene-description task.
pub const DEFAULT_INSTRUCTION_TEMPLATE: &str =
    include_str!("../../config/instruction_prompt.txt");

/// Default rephrasing template applied to catalog summaries.
pub const DEFAULT_REPHRASE_TEMPLATE: &str = include_str!("../../config/rephrase_prompt.txt");

/// Default synthetic-generation template; the same template is used for
/// every gene.
pub const DEFAULT_GENERATION_TEMPLATE: &str = include_str!("../../config/generation_prompt.txt");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_defaults_are_deterministic() {
        let spec = ProviderSpec::new("http://localhost:9999/generate", "demo");
        assert!(spec.deterministic());
        spec.validate().unwrap();
    }

    #[test]
    fn sampling_spec_is_rejected() {
        let json = r#"{"endpoint": "http://x/y", "model_name": "m", "deterministic": false}"#;
        let spec: ProviderSpec = serde_json::from_str(json).unwrap();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn omitted_deterministic_defaults_true() {
        let json = r#"{"endpoint": "http://x/y", "model_name": "m"}"#;
        let spec: ProviderSpec = serde_json::from_str(json).unwrap();
        spec.validate().unwrap();
    }

    #[test]
    fn template_renders_both_placeholders() {
        let t = PromptTemplate::new("Summarize {symbol}: {summary}");
        assert_eq!(t.render("TP53", "a tumor suppressor"), "Summarize TP53: a tumor suppressor");
    }

    #[test]
    fn unreachable_endpoint_errors() {
        let provider = HttpProvider::new(ProviderSpec::new("http://127.0.0.1:1/generate", "demo")).unwrap();
        assert!(matches!(
            provider.generate("hello"),
            Err(ProviderError::Unreachable(_)) | Err(ProviderError::Timeout)
        ));
    }
}
