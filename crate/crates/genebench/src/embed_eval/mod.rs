//! Embedding-quality evaluation: k-NN graph construction, Leiden community
//! detection, NMI against functional labels, and hypergeometric gene-set
//! over-representation with Bonferroni correction.
//!
//! Embeddings come from files produced elsewhere — this module never calls
//! an embedding service.

pub mod enrich;
pub mod graph;
pub mod knn;
pub mod leiden;
pub mod matrix;
pub mod nmi;

pub use enrich::{bonferroni, enrich_clusters, ora_enrichment, top_pathways, EnrichmentRow, GeneSetCollection};
pub use graph::WeightedGraph;
pub use knn::{knn_graph, Metric};
pub use leiden::{leiden, modularity, Partition};
pub use matrix::{EmbeddingMatrix, LabelVector};
pub use nmi::nmi;

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("k = {k} is out of range for {n} rows (need 1 <= k < n)")]
    KTooLarge { k: usize, n: usize },
    #[error("row {row} ({symbol}) is a zero vector; cosine similarity is undefined")]
    DegenerateRow { row: usize, symbol: String },
    #[error("label vectors have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("{what} is not a subset of the universe (offending symbol: {symbol})")]
    NotSubset { what: String, symbol: String },
    #[error("p-value {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("graph edge error: {0}")]
    BadEdge(String),
    #[error("embedding matrix error: {0}")]
    BadMatrix(String),
    #[error("labels error: {0}")]
    BadLabels(String),
    #[error("gene sets file error: {0}")]
    BadGeneSets(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
