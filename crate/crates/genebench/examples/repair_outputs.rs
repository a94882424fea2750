//! Repair gene IDs and alias passages in the shipped 50-case fixture and
//! show a few before/after pairs.
//!
//! ```bash
//! cargo run -p genebench --example repair_outputs
//! ```

use genebench::postprocess::{repair_output, GeneIdDatabase, RepairOptions};

#[derive(serde::Deserialize)]
struct Case {
    id: String,
    gene: String,
    text: String,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let database = GeneIdDatabase::from_file(std::path::Path::new(&format!("{fixtures}/gene_ids.tsv")))?;
    let options = RepairOptions::default();

    let cases: Vec<Case> = std::fs::read_to_string(format!("{fixtures}/postprocess_cases.jsonl"))?
        .lines()
        .map(serde_json::from_str)
        .collect::<Result<_, _>>()?;

    let mut total_edits = 0usize;
    for (i, case) in cases.iter().enumerate() {
        let (repaired, edits) = repair_output(&case.text, &case.gene, &database, &options)?;
        total_edits += edits.len();
        if i < 4 {
            println!("{} ({}):", case.id, case.gene);
            println!("  before: {}", case.text);
            println!("  after:  {repaired}");
            for edit in &edits {
                if edit.before.is_empty() {
                    println!("    + inserted {:?}", edit.after);
                } else if edit.after.is_empty() {
                    println!("    - removed  {:?}", edit.before);
                } else {
                    println!("    ~ {:?} -> {:?}", edit.before, edit.after);
                }
            }
        }
        // Re-application changes nothing.
        let (again, _) = repair_output(&repaired, &case.gene, &database, &options)?;
        assert_eq!(again, repaired, "repair must be idempotent");
    }
    println!("\nrepaired {} cases with {} edits; all idempotent", cases.len(), total_edits);
    Ok(())
}
