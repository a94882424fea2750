//! Instruction samples and the line-delimited corpus file format.
//!
//! The on-disk layout follows the Alpaca convention: one JSON object per
//! line with `instruction` / `input` / `output` keys, extended with
//! `image`, `task`, `source`, and `gene` fields.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// The three supported task kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    GeneDescription,
    ProteinClassification,
    MarkerGene,
}

impl Task {
    pub fn takes_image(self) -> bool {
        matches!(self, Task::ProteinClassification | Task::MarkerGene)
    }
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Task::GeneDescription => "gene_description",
            Task::ProteinClassification => "protein_classification",
            Task::MarkerGene => "marker_gene",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gene_description" => Ok(Task::GeneDescription),
            "protein_classification" => Ok(Task::ProteinClassification),
            "marker_gene" => Ok(Task::MarkerGene),
            other => Err(format!("unknown task: {other:?}")),
        }
    }
}

/// Whether a sample's target text came from the catalog or was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    Real,
    Synthetic,
}

impl std::fmt::Display for SampleSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SampleSource::Real => "real",
            SampleSource::Synthetic => "synthetic",
        })
    }
}

/// One (instruction, optional input/image, target output) triple.
#[derive(Debug, Clone, PartialEq)]
pub struct InstructionSample {
    pub instruction: String,
    pub input: Option<String>,
    pub image_ref: Option<String>,
    pub output: String,
    pub task: Task,
    pub source: SampleSource,
    pub gene: String,
}

impl InstructionSample {
    /// Validating constructor: image tasks require `image_ref`, text tasks
    /// forbid it, and the output must be non-empty.
    pub fn new(
        instruction: impl Into<String>,
        input: Option<String>,
        image_ref: Option<String>,
        output: impl Into<String>,
        task: Task,
        source: SampleSource,
        gene: impl Into<String>,
    ) -> Result<Self, CorpusError> {
        let sample = Self {
            instruction: instruction.into(),
            input,
            image_ref,
            output: output.into(),
            task,
            source,
            gene: gene.into(),
        };
        sample.validate()?;
        Ok(sample)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.image_ref.is_some() != self.task.takes_image() {
            return Err(CorpusError::ImageRefMismatch {
                task: self.task,
                present: self.image_ref.is_some(),
            });
        }
        if self.output.trim().is_empty() {
            return Err(CorpusError::EmptyOutput);
        }
        Ok(())
    }
}

/// Assembles an image-task sample, checking that the image exists (for
/// paths) or is a well-formed URL, and that the task actually takes one.
pub fn build_mllm_sample(
    image_ref: &str,
    instruction: &str,
    answer: &str,
    task: Task,
    gene: &str,
) -> Result<InstructionSample, CorpusError> {
    if !task.takes_image() {
        return Err(CorpusError::BadTask(task));
    }
    if !image_ref_exists(image_ref) {
        return Err(CorpusError::MissingImage(image_ref.to_string()));
    }
    InstructionSample::new(
        instruction,
        None,
        Some(image_ref.to_string()),
        answer,
        task,
        SampleSource::Real,
        gene,
    )
}

fn image_ref_exists(image_ref: &str) -> bool {
    if let Some(rest) = image_ref
        .strip_prefix("http://")
        .or_else(|| image_ref.strip_prefix("https://"))
    {
        return !rest.is_empty() && !rest.starts_with('/');
    }
    Path::new(image_ref).is_file()
}

/// Wire form of a sample in the line-delimited corpus file. `input` is an
/// empty string when absent, matching the Alpaca layout.
#[derive(Serialize, Deserialize)]
struct SampleWire {
    instruction: String,
    #[serde(default)]
    input: String,
    output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    image: Option<String>,
    task: Task,
    source: SampleSource,
    gene: String,
}

impl From<&InstructionSample> for SampleWire {
    fn from(s: &InstructionSample) -> Self {
        SampleWire {
            instruction: s.instruction.clone(),
            input: s.input.clone().unwrap_or_default(),
            output: s.output.clone(),
            image: s.image_ref.clone(),
            task: s.task,
            source: s.source,
            gene: s.gene.clone(),
        }
    }
}

impl TryFrom<SampleWire> for InstructionSample {
    type Error = CorpusError;

    fn try_from(w: SampleWire) -> Result<Self, Self::Error> {
        InstructionSample::new(
            w.instruction,
            if w.input.is_empty() { None } else { Some(w.input) },
            w.image,
            w.output,
            w.task,
            w.source,
            w.gene,
        )
    }
}

/// Writes samples as line-delimited JSON.
pub fn write_samples_jsonl<W: Write>(mut out: W, samples: &[InstructionSample]) -> Result<(), CorpusError> {
    for sample in samples {
        let wire = SampleWire::from(sample);
        serde_json::to_writer(&mut out, &wire)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads and validates a line-delimited corpus file.
pub fn read_samples_jsonl(path: &Path) -> Result<Vec<InstructionSample>, CorpusError> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut samples = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let wire: SampleWire = serde_json::from_str(&line)?;
        samples.push(InstructionSample::try_from(wire)?);
    }
    Ok(samples)
}
