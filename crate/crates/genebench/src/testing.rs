//! In-memory and in-process stand-ins for the remote pieces: a memory
//! catalog, a mock clock, scripted providers, and small HTTP servers that
//! speak the provider and catalog wire contracts. Used throughout the test
//! suites and the runnable examples.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use crate::corpus::catalog::{CatalogError, Clock, GeneCatalog};
use crate::corpus::provider::{Provider, ProviderError};
use crate::corpus::GeneRecord;

// ---------------------------------------------------------------------------
// Mock clock
// ---------------------------------------------------------------------------

/// A clock whose time only advances when someone sleeps on it.
pub struct MockClock {
    base: Instant,
    offset: Mutex<Duration>,
    sleeps: Mutex<Vec<Duration>>,
}

impl MockClock {
    pub fn new() -> Self {
        Self {
            base: Instant::now(),
            offset: Mutex::new(Duration::ZERO),
            sleeps: Mutex::new(Vec::new()),
        }
    }

    pub fn sleeps(&self) -> Vec<Duration> {
        self.sleeps.lock().unwrap().clone()
    }
}

impl Default for MockClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for MockClock {
    fn now(&self) -> Instant {
        self.base + *self.offset.lock().unwrap()
    }

    fn sleep(&self, d: Duration) {
        *self.offset.lock().unwrap() += d;
        self.sleeps.lock().unwrap().push(d);
    }
}

// ---------------------------------------------------------------------------
// Memory catalog
// ---------------------------------------------------------------------------

/// In-memory gene catalog that counts fetches.
pub struct MemoryCatalog {
    records: BTreeMap<String, GeneRecord>,
    version: String,
    fetches: AtomicUsize,
}

impl MemoryCatalog {
    pub fn new(version: impl Into<String>) -> Self {
        Self {
            records: BTreeMap::new(),
            version: version.into(),
            fetches: AtomicUsize::new(0),
        }
    }

    pub fn with_record(mut self, record: GeneRecord) -> Self {
        self.records.insert(record.symbol.clone(), record);
        self
    }

    pub fn insert(&mut self, record: GeneRecord) {
        self.records.insert(record.symbol.clone(), record);
    }

    pub fn fetch_count(&self) -> usize {
        self.fetches.load(Ordering::SeqCst)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &String> {
        self.records.keys()
    }
}

impl GeneCatalog for MemoryCatalog {
    fn fetch(&self, symbol: &str) -> Result<GeneRecord, CatalogError> {
        self.fetches.fetch_add(1, Ordering::SeqCst);
        self.records
            .get(symbol)
            .cloned()
            .ok_or_else(|| CatalogError::NotFound(symbol.to_string()))
    }

    fn version(&self) -> &str {
        &self.version
    }
}

// ---------------------------------------------------------------------------
// Scripted providers
// ---------------------------------------------------------------------------

type TransformFn = Box<dyn Fn(&str) -> String + Send + Sync>;

/// In-process provider driven by a closure; records every prompt it sees
/// and can be told to fail the first `n` calls.
pub struct MockProvider {
    transform: TransformFn,
    prompts: Mutex<Vec<String>>,
    fail_first: AtomicUsize,
}

impl MockProvider {
    pub fn new(transform: impl Fn(&str) -> String + Send + Sync + 'static) -> Self {
        Self {
            transform: Box::new(transform),
            prompts: Mutex::new(Vec::new()),
            fail_first: AtomicUsize::new(0),
        }
    }

    /// Returns the prompt unchanged.
    pub fn echo() -> Self {
        Self::new(|p| p.to_string())
    }

    /// Uppercases the prompt.
    pub fn uppercase() -> Self {
        Self::new(|p| p.to_uppercase())
    }

    /// Fails the first `n` calls with an unreachable error, then behaves
    /// normally.
    pub fn failing_first(self, n: usize) -> Self {
        self.fail_first.store(n, Ordering::SeqCst);
        self
    }

    pub fn prompts(&self) -> Vec<String> {
        self.prompts.lock().unwrap().clone()
    }

    pub fn call_count(&self) -> usize {
        self.prompts.lock().unwrap().len()
    }
}

impl Provider for MockProvider {
    fn generate(&self, prompt: &str) -> Result<String, ProviderError> {
        self.prompts.lock().unwrap().push(prompt.to_string());
        let remaining = self.fail_first.load(Ordering::SeqCst);
        if remaining > 0 {
            self.fail_first.store(remaining - 1, Ordering::SeqCst);
            return Err(ProviderError::Unreachable("scripted failure".into()));
        }
        Ok((self.transform)(prompt))
    }
}

// ---------------------------------------------------------------------------
// Minimal HTTP plumbing shared by the two servers
// ---------------------------------------------------------------------------

struct HttpRequest {
    method: String,
    path: String,
    body: Vec<u8>,
}

fn read_request(stream: &mut TcpStream) -> std::io::Result<HttpRequest> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut parts = request_line.split_whitespace();
    let method = parts.next().unwrap_or_default().to_string();
    let path = parts.next().unwrap_or_default().to_string();

    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line)?;
        let line = line.trim_end();
        if line.is_empty() {
            break;
        }
        if let Some(value) = line.to_ascii_lowercase().strip_prefix("content-length:") {
            content_length = value.trim().parse().unwrap_or(0);
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;
    Ok(HttpRequest { method, path, body })
}

fn write_response(stream: &mut TcpStream, status: &str, body: &str) -> std::io::Result<()> {
    write!(
        stream,
        "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
}

fn spawn_server(
    handler: impl Fn(HttpRequest, &mut TcpStream) + Send + Sync + 'static,
) -> (String, Arc<AtomicBool>, std::thread::JoinHandle<()>) {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind loopback");
    let addr = listener.local_addr().expect("local addr");
    let stop = Arc::new(AtomicBool::new(false));
    let stop_flag = Arc::clone(&stop);
    let handle = std::thread::spawn(move || {
        for stream in listener.incoming() {
            if stop_flag.load(Ordering::SeqCst) {
                break;
            }
            let Ok(mut stream) = stream else { continue };
            match read_request(&mut stream) {
                Ok(request) => handler(request, &mut stream),
                Err(_) => {
                    let _ = write_response(&mut stream, "400 Bad Request", "{}");
                }
            }
        }
    });
    (format!("http://{addr}"), stop, handle)
}

fn stop_server(base_url: &str, stop: &AtomicBool, handle: std::thread::JoinHandle<()>) {
    stop.store(true, Ordering::SeqCst);
    // Wake the accept loop.
    if let Some(addr) = base_url.strip_prefix("http://") {
        let _ = TcpStream::connect(addr);
    }
    let _ = handle.join();
}

// ---------------------------------------------------------------------------
// Provider server
// ---------------------------------------------------------------------------

/// How the in-process provider server answers prompts.
#[derive(Clone)]
pub enum ProviderBehavior {
    /// Respond with the prompt itself.
    Echo,
    /// Respond with the uppercased prompt.
    Uppercase,
    /// Respond with a fixed string.
    Fixed(String),
    /// Fail the first `n` requests with HTTP 500, then echo.
    FailFirst(usize),
}

/// A loopback HTTP server speaking the provider wire contract
/// (`POST {model, prompt, deterministic} → {text}`).
pub struct ProviderServer {
    base_url: String,
    stop: Arc<AtomicBool>,
    handle: Option<std::thread::JoinHandle<()>>,
    requests: Arc<AtomicUsize>,
}

impl ProviderServer {
    pub fn start(behavior: ProviderBehavior) -> Self {
        let requests = Arc::new(AtomicUsize::new(0));
        let counter = Arc::clone(&requests);
        let fail_remaining = Arc::new(AtomicUsize::new(match &behavior {
            ProviderBehavior::FailFirst(n) => *n,
            _ => 0,
        }));
        let (base_url, stop, handle) = spawn_server(move |request, stream| {
            counter.fetch_add(1, Ordering::SeqCst);
            if request.method != "POST" {
                let _ = write_response(stream, "405 Method Not Allowed", "{}");
                return;
            }
            let parsed: Result<serde_json::Value, _> = serde_json::from_slice(&request.body);
            let Ok(body) = parsed else {
                let _ = write_response(stream, "400 Bad Request", "{}");
                return;
            };
            let prompt = body["prompt"].as_str().unwrap_or_default().to_string();
            if body["deterministic"] != serde_json::Value::Bool(true) {
                let _ = write_response(stream, "400 Bad Request", r#"{"error":"sampling not supported"}"#);
                return;
            }
            let remaining = fail_remaining.load(Ordering::SeqCst);
            if remaining > 0 {
                fail_remaining.store(remaining - 1, Ordering::SeqCst);
                let _ = write_response(stream, "500 Internal Server Error", "{}");
                return;
            }
            let text = match &behavior {
                ProviderBehavior::Echo | ProviderBehavior::FailFirst(_) => prompt,
                ProviderBehavior::Uppercase => prompt.to_uppercase(),
                ProviderBehavior::Fixed(s) => s.clone(),
            };
            let response = serde_json::json!({ "text": text }).to_string();
            let _ = write_response(stream, "200 OK", &response);
        });
        Self {
            base_url,
            stop,
            handle: Some(handle),
            requests,
        }
    }

    /// Endpoint URL to point a provider spec at.
    pub fn endpoint(&self) -> String {
        format!("{}/generate", self.base_url)
    }

    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }
}

impl Drop for ProviderServer {
    fn drop(&mut self) {
        if let Some(handle) = self.handle.take() {
            stop_server(&self.base_url, &self.stop, handle);
        }
    }
}

// ---------------------------------------------------------------------------
// Catalog server
// ---------------------------------------------------------------------------

/// A loopback HTTP server speaking the esearch/esummary catalog contract,
/// backed by a fixed set of records. Optionally answers the first `n`
/// requests with HTTP 429 to exercise rate-limit handling.
pub struct CatalogServer {
    base_url: String,
    stop: Arc<AtomicBool>,
    handle: Option<std::thread::JoinHandle<()>>,
}

impl CatalogServer {
    pub fn start(records: Vec<GeneRecord>, reject_first: usize) -> Self {
        let by_symbol: BTreeMap<String, GeneRecord> = records
            .into_iter()
            .map(|r| (r.symbol.to_uppercase(), r))
            .collect();
        let reject = Arc::new(AtomicUsize::new(reject_first));
        let (base_url, stop, handle) = spawn_server(move |request, stream| {
            let remaining = reject.load(Ordering::SeqCst);
            if remaining > 0 {
                reject.store(remaining - 1, Ordering::SeqCst);
                let _ = write!(
                    stream,
                    "HTTP/1.1 429 Too Many Requests\r\nRetry-After: 2\r\nContent-Length: 0\r\nConnection: close\r\n\r\n"
                );
                return;
            }
            let (path, query) = match request.path.split_once('?') {
                Some((p, q)) => (p, q),
                None => (request.path.as_str(), ""),
            };
            let params: BTreeMap<&str, &str> = query
                .split('&')
                .filter_map(|kv| kv.split_once('='))
                .collect();
            let body = if path.ends_with("/esearch") {
                let term = params.get("term").copied().unwrap_or_default().to_uppercase();
                let idlist: Vec<String> = by_symbol
                    .keys()
                    .position(|s| *s == term)
                    .map(|i| vec![format!("{}", 1000 + i)])
                    .unwrap_or_default();
                serde_json::json!({ "esearchresult": { "idlist": idlist } })
            } else if path.ends_with("/esummary") {
                let uid = params.get("id").copied().unwrap_or_default();
                let index: usize = uid.parse::<usize>().unwrap_or(0).saturating_sub(1000);
                match by_symbol.values().nth(index) {
                    Some(record) => serde_json::json!({ "result": { uid: {
                        "name": record.symbol,
                        "description": record.full_name,
                        "otheraliases": record.aliases.join(", "),
                        "summary": record.summary,
                        "genetype": match record.biotype {
                            crate::corpus::Biotype::ProteinCoding => "protein-coding",
                            crate::corpus::Biotype::NonCoding => "ncRNA",
                            crate::corpus::Biotype::Pseudogene => "pseudogene",
                        },
                        "ensemblid": record.ensembl_id,
                        "hgncid": record.hgnc_id,
                    }}}),
                    None => serde_json::json!({ "result": {} }),
                }
            } else {
                let _ = write_response(stream, "404 Not Found", "{}");
                return;
            };
            let _ = write_response(stream, "200 OK", &body.to_string());
        });
        Self {
            base_url,
            stop,
            handle: Some(handle),
        }
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }
}

impl Drop for CatalogServer {
    fn drop(&mut self) {
        if let Some(handle) = self.handle.take() {
            stop_server(&self.base_url, &self.stop, handle);
        }
    }
}

/// Builds a deterministic synthetic catalog of `n` genes with mixed
/// biotypes, for policy and end-to-end tests.
pub fn synthetic_catalog(n: usize, version: &str) -> MemoryCatalog {
    let mut catalog = MemoryCatalog::new(version);
    for i in 0..n {
        let biotype = match i % 4 {
            0 | 1 => crate::corpus::Biotype::ProteinCoding,
            2 => crate::corpus::Biotype::NonCoding,
            _ => crate::corpus::Biotype::Pseudogene,
        };
        let symbol = format!("GB{i:04}");
        let record = GeneRecord::new(
            symbol.clone(),
            format!("synthetic benchmark gene {i}"),
            vec![format!("GBALT{i}")],
            format!("ENSG{:011}", 700_000 + i),
            format!("HGNC:{}", 40_000 + i),
            biotype,
            format!(
                "The {symbol} locus encodes a demonstration product that participates in pathway {} and regulates process {}.",
                i % 7,
                i % 5
            ),
        )
        .expect("synthetic record is valid");
        catalog.insert(record);
    }
    catalog
}
