//! Dual graders: truthfulness (task-specific) and structural correctness
//! (rule-based), plus aggregation into report rows.
//!
//! All graders are pure string computations — no model-as-judge anywhere —
//! so identical inputs always score identically.

pub mod factual;
pub mod lcs;
pub mod marker;
pub mod report;
pub mod rules;

pub use factual::{content_word_recall, grade_gene_factual, grade_protein_factual, GraderConfig};
pub use lcs::{longest_common_subsequence_len, longest_common_substring, normalize_for_match, LcsMatch};
pub use marker::{grade_marker, parse_stance, Stance};
pub use report::{aggregate, GradeReport, SampleScore};
pub use rules::{grade_structural, PromptSpec, StructuralRule};

use serde::{Deserialize, Serialize};

use crate::corpus::{GeneRecord, Task};

#[derive(Debug, thiserror::Error)]
pub enum GradingError {
    #[error("a prompt spec needs at least one rule")]
    EmptyRuleSet,
    #[error("unknown structural rule: {0:?}")]
    UnknownRule(String),
    #[error("bad rule arguments for {rule}: {reason}")]
    BadRuleArgs { rule: String, reason: String },
    #[error("gold standard is empty")]
    EmptyGold,
    #[error("no yes/no stance found in output")]
    UnparseableStance,
    #[error("cannot aggregate an empty sample list")]
    EmptySampleList,
    #[error("gold value kind does not match task {task:?}")]
    GoldTaskMismatch { task: Task },
    #[error("marker relation fields must be non-empty")]
    EmptyMarkerField,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Ground-truth marker relation for the marker-gene task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerRelation {
    pub gene: String,
    pub cell_type: String,
    pub is_marker: bool,
}

impl MarkerRelation {
    pub fn new(
        gene: impl Into<String>,
        cell_type: impl Into<String>,
        is_marker: bool,
    ) -> Result<Self, GradingError> {
        let relation = Self {
            gene: gene.into(),
            cell_type: cell_type.into(),
            is_marker,
        };
        if relation.gene.trim().is_empty() || relation.cell_type.trim().is_empty() {
            return Err(GradingError::EmptyMarkerField);
        }
        Ok(relation)
    }
}

/// Task-specific ground truth attached to an eval sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Gold {
    Gene(GeneRecord),
    Protein(String),
    Marker(MarkerRelation),
}

impl Gold {
    pub fn matches_task(&self, task: Task) -> bool {
        matches!(
            (self, task),
            (Gold::Gene(_), Task::GeneDescription)
                | (Gold::Protein(_), Task::ProteinClassification)
                | (Gold::Marker(_), Task::MarkerGene)
        )
    }
}

/// One evaluation unit: the prompt shown to the model, the model's output,
/// and the gold value for the task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSample {
    pub id: String,
    pub task: Task,
    pub prompt: String,
    pub gold: Gold,
}

impl EvalSample {
    pub fn new(
        id: impl Into<String>,
        task: Task,
        prompt: impl Into<String>,
        gold: Gold,
    ) -> Result<Self, GradingError> {
        if !gold.matches_task(task) {
            return Err(GradingError::GoldTaskMismatch { task });
        }
        Ok(Self {
            id: id.into(),
            task,
            prompt: prompt.into(),
            gold,
        })
    }

    pub fn validate(&self) -> Result<(), GradingError> {
        if !self.gold.matches_task(self.task) {
            return Err(GradingError::GoldTaskMismatch { task: self.task });
        }
        Ok(())
    }
}
