//! Gene records, catalog clients, and instruction-corpus construction.
//!
//! The pipeline: fetch [`GeneRecord`]s through a [`catalog::GeneCatalog`]
//! (cached and rate-limited), turn them into [`InstructionSample`]s with
//! [`builder::build_real_sample`] / [`builder::build_synthetic_sample`],
//! merge into a [`CorpusManifest`], and split off a gene-disjoint eval set
//! with [`manifest::split_eval`]. Image-task samples are assembled with
//! [`sample::build_mllm_sample`]; the marker-task input images come from
//! [`plot::render_spatial_plot`].

pub mod builder;
pub mod catalog;
pub mod manifest;
pub mod plot;
pub mod provider;
mod record;
pub mod sample;

pub use builder::{build_real_sample, build_synthetic_sample, merge_corpora, CorpusTemplates};
pub use catalog::{fetch_gene_record, CachingCatalog, CatalogError, FileCatalog, GeneCatalog, HttpCatalog};
pub use manifest::{split_eval, CorpusManifest, CountRow};
pub use plot::{render_spatial_plot, PlotStyle};
pub use provider::{HttpProvider, PromptTemplate, Provider, ProviderError, ProviderSpec};
pub use record::{Biotype, GeneRecord};
pub use sample::{build_mllm_sample, InstructionSample, SampleSource, Task};

/// Errors from corpus construction and validation.
#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("gene symbol must be non-empty and contain no whitespace: {0:?}")]
    BadSymbol(String),
    #[error("aliases must not contain the symbol itself: {0}")]
    AliasIsSymbol(String),
    #[error("record for {0} has an empty summary")]
    EmptySummary(String),
    #[error("gene {symbol} has biotype {biotype}; synthetic samples are restricted to protein-coding genes")]
    BiotypeRejected { symbol: String, biotype: Biotype },
    #[error("provider call failed: {0}")]
    Provider(#[from] ProviderError),
    #[error("synthetic sample for {gene} violates the protein-coding policy (catalog biotype: {biotype:?})")]
    PolicyViolation { gene: String, biotype: Option<Biotype> },
    #[error("sample list for merge contains a sample with source {found:?} where {expected:?} was required")]
    SourceMismatch { expected: SampleSource, found: SampleSource },
    #[error("gene {0} is not present in the catalog biotype table")]
    UnknownGene(String),
    #[error("image reference {0:?} does not exist and is not a well-formed URL")]
    MissingImage(String),
    #[error("task {0:?} does not take an image")]
    BadTask(Task),
    #[error("image_ref must be present exactly for image tasks (task {task:?}, image_ref present: {present})")]
    ImageRefMismatch { task: Task, present: bool },
    #[error("sample output must be non-empty")]
    EmptyOutput,
    #[error("coords and expression lengths differ ({coords} vs {expression})")]
    LengthMismatch { coords: usize, expression: usize },
    #[error("expression values must be finite")]
    NonFiniteExpression,
    #[error("coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("cannot hold out {n} genes; manifest has only {available}")]
    NTooLarge { n: usize, available: usize },
    #[error("manifest counts are inconsistent: {0}")]
    InconsistentManifest(String),
    #[error("duplicate sample for (task {task:?}, gene {gene}, source {sample_source:?})")]
    DuplicateSample { task: Task, gene: String, sample_source: SampleSource },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("encode error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("png encode error: {0}")]
    Png(#[from] png::EncodingError),
}
