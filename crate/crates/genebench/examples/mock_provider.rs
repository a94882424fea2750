//! Spin up an in-process HTTP provider speaking the wire contract
//! (`POST {model, prompt, deterministic: true} -> {text}`), point the real
//! HTTP client at it, and run batch inference over the fixture eval set.
//!
//! ```bash
//! cargo run -p genebench --example mock_provider
//! ```

use std::collections::BTreeMap;

use genebench::corpus::{HttpProvider, Provider, ProviderSpec};
use genebench::harness::{config::RunConfig, eval_io::read_eval_samples, infer::run_inference};
use genebench::testing::{ProviderBehavior, ProviderServer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let server = ProviderServer::start(ProviderBehavior::Uppercase);
    println!("provider listening at {}", server.endpoint());

    let provider = HttpProvider::new(ProviderSpec::new(server.endpoint(), "demo-backend"))?;
    let reply = provider.generate("echo check: tp53")?;
    println!("single call -> {reply}");

    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let out_dir = std::env::temp_dir().join("genebench-example-infer");
    std::fs::create_dir_all(&out_dir)?;
    let mut pairs = BTreeMap::new();
    pairs.insert("task".into(), "gene_description".into());
    pairs.insert("eval".into(), format!("{fixtures}/eval_gene.jsonl"));
    pairs.insert(
        "prompt_spec".into(),
        format!("{fixtures}/prompt_specs/gene_description.rules"),
    );
    pairs.insert("output_dir".into(), out_dir.display().to_string());
    pairs.insert("parallelism".into(), "2".into());
    pairs.insert("provider.endpoint".into(), server.endpoint());
    pairs.insert("provider.model".into(), "demo-backend".into());
    let config = RunConfig::from_pairs(&pairs)?;

    let samples = read_eval_samples(&config.eval_path)?;
    let outputs = run_inference(&config, &samples, &provider)?;
    println!("ran inference over {} samples:", outputs.len());
    for output in &outputs {
        let preview: String = output.output.chars().take(60).collect();
        println!("  {}: {preview}...", output.id);
    }
    println!("server handled {} requests", server.request_count());
    Ok(())
}
