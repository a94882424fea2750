//! One grading run: task-appropriate factual grader, structural grader,
//! text metrics for the gene-description task, and aggregation.

use std::io::Write;

use rayon::prelude::*;

use crate::grading::{
    aggregate, grade_gene_factual, grade_marker, grade_protein_factual, grade_structural,
    EvalSample, Gold, GradeReport, GradingError, PromptSpec, SampleScore,
};
use crate::text_metrics::{bleu, rouge_k_recall, tokenize};

use super::config::RunConfig;
use super::eval_io::ModelOutput;
use super::report::BenchmarkRow;
use super::HarnessError;

/// Per-sample grading detail, one row per eval sample.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SampleDetail {
    pub id: String,
    pub factual: f64,
    pub structural: u8,
    pub bleu: Option<f64>,
    pub rouge1: Option<f64>,
    /// "unparseable_stance" or the inference error marker, when present.
    pub note: Option<String>,
}

/// Everything a grading run produces.
#[derive(Debug, Clone)]
pub struct GradingRun {
    pub report: GradeReport,
    pub row: BenchmarkRow,
    pub details: Vec<SampleDetail>,
    /// Marker outputs with no recognizable stance (scored 0, counted apart).
    pub unparseable_count: usize,
}

/// Grades aligned (sample, output) pairs. Outputs must match samples 1:1 by
/// id. Grading is pure, so samples fan out over the worker pool and results
/// are re-ordered by id afterwards.
pub fn run_grading(
    config: &RunConfig,
    samples: &[EvalSample],
    outputs: &[ModelOutput],
) -> Result<GradingRun, HarnessError> {
    if samples.len() != outputs.len() {
        return Err(HarnessError::Misaligned(format!(
            "{} samples vs {} outputs",
            samples.len(),
            outputs.len()
        )));
    }
    let mut pairs: Vec<(&EvalSample, &ModelOutput)> = Vec::with_capacity(samples.len());
    let mut sorted_outputs: Vec<&ModelOutput> = outputs.iter().collect();
    sorted_outputs.sort_by(|a, b| a.id.cmp(&b.id));
    let mut sorted_samples: Vec<&EvalSample> = samples.iter().collect();
    sorted_samples.sort_by(|a, b| a.id.cmp(&b.id));
    for (sample, output) in sorted_samples.iter().zip(&sorted_outputs) {
        if sample.id != output.id {
            return Err(HarnessError::Misaligned(format!(
                "sample id {:?} has no matching output (found {:?})",
                sample.id, output.id
            )));
        }
        pairs.push((sample, output));
    }

    let spec = PromptSpec::from_file(&config.prompt_spec_path)?;
    let details: Vec<SampleDetail> = pairs
        .par_iter()
        .map(|(sample, output)| grade_one(sample, output, &spec, config))
        .collect::<Result<_, _>>()?;

    let unparseable_count = details
        .iter()
        .filter(|d| d.note.as_deref() == Some("unparseable_stance"))
        .count();
    let scores: Vec<SampleScore> = details
        .iter()
        .map(|d| SampleScore {
            id: d.id.clone(),
            factual: d.factual,
            structural: d.structural,
        })
        .collect();
    let report = aggregate(scores)?;

    let bleu_values: Vec<f64> = details.iter().filter_map(|d| d.bleu).collect();
    let rouge_values: Vec<f64> = details.iter().filter_map(|d| d.rouge1).collect();
    let mean = |values: &[f64]| -> Option<f64> {
        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
    };
    let row = BenchmarkRow::new(
        config.model_label.clone(),
        report.factual_mean,
        report.structural_mean,
        mean(&bleu_values),
        mean(&rouge_values),
        config.finetuned,
    );

    Ok(GradingRun {
        report,
        row,
        details,
        unparseable_count,
    })
}

fn grade_one(
    sample: &EvalSample,
    output: &ModelOutput,
    spec: &PromptSpec,
    config: &RunConfig,
) -> Result<SampleDetail, HarnessError> {
    let text = output.output.as_str();
    let structural = grade_structural(text, spec);
    let mut note = output.error.clone();
    let mut bleu_value = None;
    let mut rouge_value = None;

    let factual = match &sample.gold {
        Gold::Gene(record) => {
            let score = grade_gene_factual(text, record, &config.grader)? as f64;
            let reference = tokenize(&record.summary);
            let candidate = tokenize(text);
            bleu_value = Some(bleu(&candidate, &reference, 4).value);
            rouge_value = Some(rouge_k_recall(&candidate, &reference, 1)?.value);
            score
        }
        Gold::Protein(name) => grade_protein_factual(text, name, &config.grader)?,
        Gold::Marker(relation) => match grade_marker(text, relation, &config.grader) {
            Ok(score) => score as f64,
            Err(GradingError::UnparseableStance) => {
                note = Some("unparseable_stance".to_string());
                0.0
            }
            Err(e) => return Err(e.into()),
        },
    };

    Ok(SampleDetail {
        id: sample.id.clone(),
        factual,
        structural,
        bleu: bleu_value,
        rouge1: rouge_value,
        note,
    })
}

/// Writes the per-sample detail table.
pub fn write_details<W: Write>(mut out: W, details: &[SampleDetail]) -> Result<(), HarnessError> {
    writeln!(out, "id\tfactual\tstructural\tbleu\trouge1\tnote")?;
    for d in details {
        let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "{}\t{:.6}\t{}\t{}\t{}\t{}",
            d.id,
            d.factual,
            d.structural,
            fmt_opt(d.bleu),
            fmt_opt(d.rouge1),
            d.note.as_deref().unwrap_or("-")
        )?;
    }
    Ok(())
}

/// Emits a human-grading worksheet: sample id, prompt, output, gold
/// reference, and blank columns for a manual factual/structural audit.
pub fn write_rubric_worksheet<W: Write>(
    mut out: W,
    samples: &[EvalSample],
    outputs: &[ModelOutput],
) -> Result<(), HarnessError> {
    writeln!(
        out,
        "id\ttask\tprompt\toutput\tgold\thuman_factual\thuman_structural\tnotes"
    )?;
    let flat = |s: &str| s.replace(['\t', '\n'], " ");
    for (sample, output) in samples.iter().zip(outputs) {
        let gold = match &sample.gold {
            Gold::Gene(record) => format!("{}: {}", record.symbol, record.summary),
            Gold::Protein(name) => name.clone(),
            Gold::Marker(relation) => format!(
                "{} / {} / {}",
                relation.gene,
                relation.cell_type,
                if relation.is_marker { "yes" } else { "no" }
            ),
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t\t\t",
            sample.id,
            sample.task,
            flat(&sample.prompt),
            flat(&output.output),
            flat(&gold)
        )?;
    }
    Ok(())
}
