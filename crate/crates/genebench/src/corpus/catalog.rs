//! Gene catalog clients: a remote E-utilities-style HTTP client, a local
//! fixture catalog, and a caching wrapper.
//!
//! The remote protocol is two GET endpoints under a configurable base URL:
//!
//! - `{base}/esearch?db=gene&term={SYMBOL}` →
//!   `{"esearchresult": {"idlist": ["<uid>", ...]}}`
//! - `{base}/esummary?db=gene&id={uid}` →
//!   `{"result": {"<uid>": {"name": "TP53", "description": "...",
//!    "otheraliases": "P53, LFS1", "summary": "...",
//!    "genetype": "protein-coding", "ensemblid": "ENSG...",
//!    "hgncid": "HGNC:..."}}}`
//!
//! An empty id list means the symbol is unknown. HTTP 429 surfaces as
//! [`CatalogError::RateLimited`] with any `Retry-After` value attached.

use std::collections::VecDeque;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{Biotype, GeneRecord};

/// Default request budget against public catalog endpoints.
pub const DEFAULT_RATE_LIMIT: u32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("symbol {0:?} is unknown to the catalog")]
    NotFound(String),
    #[error("catalog rate limit hit; retry after {retry_after:?}")]
    RateLimited { retry_after: Option<Duration> },
    #[error("catalog payload failed to parse: {0}")]
    MalformedResponse(String),
    #[error("catalog transport error: {0}")]
    Transport(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("symbol must be non-empty")]
    EmptySymbol,
}

/// A source of gene records, addressed by symbol.
pub trait GeneCatalog: Send + Sync {
    fn fetch(&self, symbol: &str) -> Result<GeneRecord, CatalogError>;

    /// Version tag of the catalog snapshot; cache entries are keyed by it.
    fn version(&self) -> &str;
}

/// Fetches one gene record, validating the symbol first.
pub fn fetch_gene_record(symbol: &str, catalog: &dyn GeneCatalog) -> Result<GeneRecord, CatalogError> {
    if symbol.trim().is_empty() {
        return Err(CatalogError::EmptySymbol);
    }
    catalog.fetch(symbol)
}

// ---------------------------------------------------------------------------
// Clock + rate limiter
// ---------------------------------------------------------------------------

/// Time source, injectable so rate-limit behavior is testable.
pub trait Clock: Send + Sync {
    fn now(&self) -> Instant;
    fn sleep(&self, d: Duration);
}

/// Wall-clock implementation.
#[derive(Debug, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Instant {
        Instant::now()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// Sliding-window limiter: at most `max_per_sec` admissions in any
/// one-second window. Callers block (via the clock) until admitted.
pub struct RateLimiter {
    clock: Arc<dyn Clock>,
    max_per_sec: u32,
    admitted: Mutex<VecDeque<Instant>>,
}

impl RateLimiter {
    pub fn new(max_per_sec: u32, clock: Arc<dyn Clock>) -> Self {
        Self {
            clock,
            max_per_sec: max_per_sec.max(1),
            admitted: Mutex::new(VecDeque::new()),
        }
    }

    pub fn system(max_per_sec: u32) -> Self {
        Self::new(max_per_sec, Arc::new(SystemClock))
    }

    /// Blocks until a request may proceed; returns the admission time.
    pub fn acquire(&self) -> Instant {
        let window = Duration::from_secs(1);
        let mut admitted = self.admitted.lock().expect("rate limiter poisoned");
        loop {
            let now = self.clock.now();
            while let Some(&front) = admitted.front() {
                if now.duration_since(front) >= window {
                    admitted.pop_front();
                } else {
                    break;
                }
            }
            if (admitted.len() as u32) < self.max_per_sec {
                admitted.push_back(now);
                return now;
            }
            let oldest = *admitted.front().expect("non-empty window");
            let wait = window.saturating_sub(now.duration_since(oldest));
            self.clock.sleep(wait.max(Duration::from_millis(1)));
        }
    }
}

// ---------------------------------------------------------------------------
// HTTP catalog
// ---------------------------------------------------------------------------

pub struct HttpCatalog {
    base_url: String,
    version: String,
    client: reqwest::blocking::Client,
    limiter: RateLimiter,
}

#[derive(Deserialize)]
struct EsearchEnvelope {
    esearchresult: EsearchResult,
}

#[derive(Deserialize)]
struct EsearchResult {
    #[serde(default)]
    idlist: Vec<String>,
}

#[derive(Deserialize)]
struct EsummaryEnvelope {
    result: serde_json::Map<String, serde_json::Value>,
}

#[derive(Deserialize)]
struct GeneSummaryDoc {
    name: String,
    #[serde(default)]
    description: String,
    #[serde(default)]
    otheraliases: String,
    #[serde(default)]
    summary: String,
    #[serde(default)]
    genetype: String,
    #[serde(default)]
    ensemblid: String,
    #[serde(default)]
    hgncid: String,
}

impl HttpCatalog {
    pub fn new(base_url: impl Into<String>, version: impl Into<String>, rate_limit: u32) -> Self {
        Self {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            version: version.into(),
            client: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(30))
                .build()
                .expect("client construction cannot fail with static config"),
            limiter: RateLimiter::system(rate_limit),
        }
    }

    fn get_json(&self, url: &str) -> Result<serde_json::Value, CatalogError> {
        self.limiter.acquire();
        let response = self
            .client
            .get(url)
            .send()
            .map_err(|e| CatalogError::Transport(e.to_string()))?;
        if response.status().as_u16() == 429 {
            let retry_after = response
                .headers()
                .get(reqwest::header::RETRY_AFTER)
                .and_then(|v| v.to_str().ok())
                .and_then(|s| s.parse::<u64>().ok())
                .map(Duration::from_secs);
            return Err(CatalogError::RateLimited { retry_after });
        }
        if !response.status().is_success() {
            return Err(CatalogError::Transport(format!(
                "unexpected status {} from {url}",
                response.status()
            )));
        }
        response
            .json()
            .map_err(|e| CatalogError::MalformedResponse(e.to_string()))
    }

    fn parse_biotype(genetype: &str) -> Biotype {
        let lower = genetype.to_lowercase();
        if lower.contains("protein") {
            Biotype::ProteinCoding
        } else if lower.contains("pseudo") {
            Biotype::Pseudogene
        } else {
            Biotype::NonCoding
        }
    }
}

impl GeneCatalog for HttpCatalog {
    fn fetch(&self, symbol: &str) -> Result<GeneRecord, CatalogError> {
        let search_url = format!("{}/esearch?db=gene&term={}", self.base_url, symbol);
        let search: EsearchEnvelope = serde_json::from_value(self.get_json(&search_url)?)
            .map_err(|e| CatalogError::MalformedResponse(e.to_string()))?;
        let uid = search
            .esearchresult
            .idlist
            .first()
            .ok_or_else(|| CatalogError::NotFound(symbol.to_string()))?
            .clone();

        let summary_url = format!("{}/esummary?db=gene&id={}", self.base_url, uid);
        let envelope: EsummaryEnvelope = serde_json::from_value(self.get_json(&summary_url)?)
            .map_err(|e| CatalogError::MalformedResponse(e.to_string()))?;
        let doc_value = envelope
            .result
            .get(&uid)
            .cloned()
            .ok_or_else(|| CatalogError::MalformedResponse(format!("no document for uid {uid}")))?;
        let doc: GeneSummaryDoc = serde_json::from_value(doc_value)
            .map_err(|e| CatalogError::MalformedResponse(e.to_string()))?;

        let aliases: Vec<String> = doc
            .otheraliases
            .split(',')
            .map(|a| a.trim().to_string())
            .filter(|a| !a.is_empty() && !a.eq_ignore_ascii_case(&doc.name))
            .collect();
        GeneRecord::new(
            doc.name,
            doc.description,
            aliases,
            doc.ensemblid,
            doc.hgncid,
            Self::parse_biotype(&doc.genetype),
            doc.summary,
        )
        .map_err(|e| CatalogError::MalformedResponse(e.to_string()))
    }

    fn version(&self) -> &str {
        &self.version
    }
}

// ---------------------------------------------------------------------------
// Fixture catalog: one JSON record per file
// ---------------------------------------------------------------------------

/// Reads records from `{dir}/{SYMBOL}.json`, each file holding a
/// [`GeneRecord`] in its serde form. Stands in for the remote catalog in
/// tests and offline runs.
pub struct FileCatalog {
    dir: PathBuf,
    version: String,
}

impl FileCatalog {
    pub fn new(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Self {
            dir: dir.into(),
            version: version.into(),
        }
    }
}

impl GeneCatalog for FileCatalog {
    fn fetch(&self, symbol: &str) -> Result<GeneRecord, CatalogError> {
        let path = self.dir.join(format!("{symbol}.json"));
        if !path.is_file() {
            return Err(CatalogError::NotFound(symbol.to_string()));
        }
        let text = std::fs::read_to_string(&path)?;
        let record: GeneRecord = serde_json::from_str(&text)
            .map_err(|e| CatalogError::MalformedResponse(format!("{}: {e}", path.display())))?;
        record
            .validate()
            .map_err(|e| CatalogError::MalformedResponse(e.to_string()))?;
        Ok(record)
    }

    fn version(&self) -> &str {
        &self.version
    }
}

// ---------------------------------------------------------------------------
// Disk cache
// ---------------------------------------------------------------------------

/// On-disk cache entry format for `cache/genes/{symbol}.record`.
#[derive(Serialize, Deserialize)]
struct CacheEntry {
    catalog_version: String,
    record: GeneRecord,
}

/// Caches fetches under `{cache_dir}/genes/{symbol}.record`, keyed by the
/// inner catalog's version. Writers are concurrent-safe: entries are
/// written to a unique temporary file and renamed into place.
pub struct CachingCatalog<C> {
    inner: C,
    cache_dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl<C: GeneCatalog> CachingCatalog<C> {
    pub fn new(inner: C, cache_dir: impl Into<PathBuf>) -> Self {
        Self {
            inner,
            cache_dir: cache_dir.into(),
        }
    }

    fn entry_path(&self, symbol: &str) -> PathBuf {
        self.cache_dir.join("genes").join(format!("{symbol}.record"))
    }

    fn read_cached(&self, symbol: &str) -> Option<GeneRecord> {
        let text = std::fs::read_to_string(self.entry_path(symbol)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.catalog_version == self.inner.version()).then_some(entry.record)
    }

    fn write_cached(&self, symbol: &str, record: &GeneRecord) -> Result<(), CatalogError> {
        let path = self.entry_path(symbol);
        let dir = path.parent().expect("entry path has a parent");
        std::fs::create_dir_all(dir)?;
        let entry = CacheEntry {
            catalog_version: self.inner.version().to_string(),
            record: record.clone(),
        };
        let tmp = dir.join(format!(
            ".{symbol}.{}.{}.tmp",
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        std::fs::write(&tmp, serde_json::to_vec_pretty(&entry).expect("serializable"))?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }
}

impl<C: GeneCatalog> GeneCatalog for CachingCatalog<C> {
    fn fetch(&self, symbol: &str) -> Result<GeneRecord, CatalogError> {
        if let Some(record) = self.read_cached(symbol) {
            return Ok(record);
        }
        let record = self.inner.fetch(symbol)?;
        self.write_cached(symbol, &record)?;
        Ok(record)
    }

    fn version(&self) -> &str {
        self.inner.version()
    }
}
