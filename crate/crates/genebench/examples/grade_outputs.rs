//! Grade the shipped 30-sample fixture with both graders and print the
//! aggregate report per task.
//!
//! ```bash
//! cargo run -p genebench --example grade_outputs
//! ```

use genebench::grading::{
    aggregate, grade_gene_factual, grade_marker, grade_protein_factual, grade_structural, Gold,
    GraderConfig, GradingError, PromptSpec, SampleScore,
};

#[derive(serde::Deserialize)]
struct Case {
    id: String,
    spec: String,
    gold: Gold,
    output: String,
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let cases: Vec<Case> = std::fs::read_to_string(format!("{fixtures}/grader_cases.jsonl"))?
        .lines()
        .map(serde_json::from_str)
        .collect::<Result<_, _>>()?;
    let cfg = GraderConfig::default();

    let mut by_task: std::collections::BTreeMap<String, Vec<SampleScore>> = Default::default();
    for case in &cases {
        let spec = PromptSpec::from_file(
            std::path::Path::new(&format!("{fixtures}/prompt_specs/{}.rules", case.spec)),
        )?;
        let structural = grade_structural(&case.output, &spec);
        let factual = match &case.gold {
            Gold::Gene(record) => grade_gene_factual(&case.output, record, &cfg)? as f64,
            Gold::Protein(name) => grade_protein_factual(&case.output, name, &cfg)?,
            Gold::Marker(relation) => match grade_marker(&case.output, relation, &cfg) {
                Ok(score) => score as f64,
                Err(GradingError::UnparseableStance) => {
                    println!("  note: {} has no recognizable stance (scored 0)", case.id);
                    0.0
                }
                Err(e) => return Err(e.into()),
            },
        };
        by_task.entry(case.spec.clone()).or_default().push(SampleScore {
            id: case.id.clone(),
            factual,
            structural,
        });
    }

    for (task, scores) in by_task {
        let report = aggregate(scores)?;
        println!(
            "{task:<18} factual {:.3}  structural {:.3}  average {:.3}  ({} samples)",
            report.factual_mean,
            report.structural_mean,
            report.average,
            report.per_sample.len()
        );
    }
    Ok(())
}
