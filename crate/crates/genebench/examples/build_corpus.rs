//! Build an instruction corpus from the fixture catalog, merge in
//! synthetic samples from a mock provider, and split off an eval set.
//!
//! ```bash
//! cargo run -p genebench --example build_corpus
//! ```

use std::collections::BTreeMap;

use genebench::corpus::{
    build_real_sample, build_synthetic_sample, fetch_gene_record, merge_corpora, split_eval,
    Biotype, CorpusTemplates, FileCatalog, GeneCatalog,
};
use genebench::testing::MockProvider;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/catalog");
    let catalog = FileCatalog::new(fixtures, "fixture-v1");
    let templates = CorpusTemplates::default();

    // A provider that fabricates a deterministic "generated" summary.
    let provider = MockProvider::new(|prompt| {
        let symbol = prompt
            .split_whitespace()
            .find(|w| w.chars().all(|c| c.is_ascii_uppercase() || c.is_ascii_digit()))
            .unwrap_or("GENE");
        format!("{symbol} encodes a product with a role synthesized for this demonstration.")
    });

    let symbols = ["TP53", "BRCA1", "GLI1", "CD4", "MYC", "XIST", "GAPDHP1", "LINC00115"];
    let mut biotypes: BTreeMap<String, Biotype> = BTreeMap::new();
    let mut real = Vec::new();
    let mut synthetic = Vec::new();
    for symbol in symbols {
        let record = fetch_gene_record(symbol, &catalog)?;
        biotypes.insert(record.symbol.clone(), record.biotype);
        if record.has_summary() {
            real.push(build_real_sample(&record, &templates, None)?);
        } else {
            println!("(skipping {symbol}: catalog has no summary)");
        }
        // Synthetic generation is restricted to protein-coding genes.
        if record.biotype == Biotype::ProteinCoding {
            synthetic.push(build_synthetic_sample(&record, &provider, &templates)?);
        }
    }

    let manifest = merge_corpora(real, synthetic, &biotypes, 7, catalog.version())?;
    println!("merged corpus: {} samples", manifest.samples.len());
    for row in &manifest.counts {
        println!("  {} / {} / {} -> {}", row.task, row.source, row.biotype, row.count);
    }

    let (train, eval) = split_eval(&manifest, 2, 42)?;
    println!(
        "split: train {} samples over {:?}",
        train.samples.len(),
        train.genes()
    );
    println!("       eval  {} samples over {:?}", eval.samples.len(), eval.genes());

    let dir = std::env::temp_dir().join("genebench-example-corpus");
    std::fs::create_dir_all(&dir)?;
    train.save(&dir.join("train.jsonl"), &dir.join("train.manifest.json"))?;
    eval.save(&dir.join("eval.jsonl"), &dir.join("eval.manifest.json"))?;
    println!("wrote corpus files under {}", dir.display());
    Ok(())
}
