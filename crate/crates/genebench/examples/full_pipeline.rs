//! End to end: inference against an in-process provider, grading, text
//! metrics, post-processing, and the final report table — all on fixture
//! data, all deterministic.
//!
//! ```bash
//! cargo run -p genebench --example full_pipeline
//! ```

use std::collections::BTreeMap;

use genebench::corpus::{HttpProvider, ProviderSpec};
use genebench::grading::Gold;
use genebench::harness::{
    config::RunConfig, eval_io::read_eval_samples, grade_run::run_grading, infer::run_inference,
    report::emit_report,
};
use genebench::postprocess::{repair_output, GeneIdDatabase, RepairOptions};
use genebench::testing::{ProviderBehavior, ProviderServer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let out_dir = std::env::temp_dir().join("genebench-example-pipeline");
    std::fs::create_dir_all(&out_dir)?;

    // A provider that answers every gene-description prompt with a fixed,
    // plausible paragraph about TP53 (wrong for the other genes, which is
    // the point: the graders notice).
    let canned = "TP53 encodes a transcription factor that responds to cellular stress by \
                  arresting the cell cycle and triggering apoptosis. Its Ensembl ID is \
                  ENSG00000999999 and it is also known as QQQ1, also known as QQQ1.";
    let server = ProviderServer::start(ProviderBehavior::Fixed(canned.to_string()));
    let provider = HttpProvider::new(ProviderSpec::new(server.endpoint(), "demo"))?;

    let mut pairs = BTreeMap::new();
    pairs.insert("task".into(), "gene_description".into());
    pairs.insert("eval".into(), format!("{fixtures}/eval_gene.jsonl"));
    pairs.insert(
        "prompt_spec".into(),
        format!("{fixtures}/prompt_specs/gene_description.rules"),
    );
    pairs.insert("output_dir".into(), out_dir.display().to_string());
    pairs.insert("model_label".into(), "canned-demo".into());
    pairs.insert("provider.endpoint".into(), server.endpoint());
    let config = RunConfig::from_pairs(&pairs)?;

    // 1. Inference.
    let samples = read_eval_samples(&config.eval_path)?;
    let outputs = run_inference(&config, &samples, &provider)?;
    println!("inference: {} outputs", outputs.len());

    // 2. Grading + metrics.
    let run = run_grading(&config, &samples, &outputs)?;
    println!(
        "grading: factual {:.3}, structural {:.3}, average {:.3}",
        run.report.factual_mean, run.report.structural_mean, run.report.average
    );
    for detail in &run.details {
        println!(
            "  {}: factual {:.2} structural {} bleu {:.3} rouge1 {:.3}",
            detail.id,
            detail.factual,
            detail.structural,
            detail.bleu.unwrap_or(0.0),
            detail.rouge1.unwrap_or(0.0)
        );
    }

    // 3. Post-processing: fix the hallucinated ID and the alias loop.
    let database = GeneIdDatabase::from_file(std::path::Path::new(&format!("{fixtures}/gene_ids.tsv")))?;
    let options = RepairOptions::default();
    for (sample, output) in samples.iter().zip(&outputs).take(1) {
        let Gold::Gene(record) = &sample.gold else { continue };
        let (repaired, edits) = repair_output(&output.output, &record.symbol, &database, &options)?;
        println!("postprocess ({}): {} edits", record.symbol, edits.len());
        println!("  {repaired}");
    }

    // 4. Report.
    let report_path = out_dir.join("report.tsv");
    let mut buf = Vec::new();
    emit_report(&mut buf, std::slice::from_ref(&run.row), &config.resolved_pairs())?;
    std::fs::write(&report_path, buf)?;
    println!("report written to {}", report_path.display());
    Ok(())
}
