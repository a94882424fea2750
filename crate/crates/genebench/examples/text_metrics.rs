//! BLEU, ROUGE-1, and the benchmark-table correlations on the shipped
//! 20-row fixture table.
//!
//! ```bash
//! cargo run -p genebench --example text_metrics
//! ```

use genebench::harness::report::read_benchmark_table;
use genebench::text_metrics::{bleu, pearson_test, rouge_k_recall, tokenize};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let candidate = tokenize("TP53 arrests the cell cycle and triggers apoptosis under stress.");
    let reference = tokenize(
        "TP53 responds to cellular stress by arresting the cell cycle and triggering apoptosis.",
    );
    let b = bleu(&candidate, &reference, 4);
    let r = rouge_k_recall(&candidate, &reference, 1)?;
    println!("candidate vs reference:");
    println!("  BLEU     = {:.4}  (brevity penalty {:.4})", b.value, b.detail.brevity_penalty.unwrap());
    for stat in &b.detail.per_n {
        println!(
            "    {}-gram precision: {}/{} = {:.4}{}",
            stat.n,
            stat.matched,
            stat.total,
            stat.value,
            if stat.smoothed { " (smoothed)" } else { "" }
        );
    }
    println!("  ROUGE-1  = {:.4}", r.value);

    let table_path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/table1.tsv");
    let rows = read_benchmark_table(std::path::Path::new(table_path))?;
    println!("\nbenchmark fixture: {} rows", rows.len());
    let average: Vec<f64> = rows.iter().map(|r| r.average).collect();
    for (name, column) in [
        ("BLEU", rows.iter().map(|r| r.bleu.unwrap()).collect::<Vec<_>>()),
        ("ROUGE1", rows.iter().map(|r| r.rouge1.unwrap()).collect::<Vec<_>>()),
    ] {
        let test = pearson_test(&column, &average)?;
        println!(
            "  pearson({name}, average) = {:.4}   two-sided p = {:.3e}",
            test.r, test.p_value
        );
    }
    Ok(())
}
