//! genebench: a toolkit for building instruction corpora from gene catalogs,
//! grading model outputs for truthfulness and structural correctness, and
//! analysing the quality of description embeddings.
//!
//! The crate is organised around six subsystems:
//!
//! - [`corpus`] — gene records, catalog clients, corpus construction,
//!   train/eval splitting, and spatial-expression plot rendering.
//! - [`grading`] — the dual graders (factual + structural) for the three
//!   supported tasks, plus score aggregation.
//! - [`text_metrics`] — BLEU, ROUGE-k recall, and Pearson correlation.
//! - [`postprocess`] — database-backed repair of gene IDs and alias clauses
//!   in model outputs.
//! - [`embed_eval`] — k-NN graphs, Leiden community detection, NMI, and
//!   gene-set over-representation analysis.
//! - [`harness`] — batch inference over a provider endpoint, grading runs,
//!   and benchmark-table reports.
//!
//! Every scoring path is deterministic: fixed seeds, fixed tokenization,
//! and canonical ordering throughout. See the `examples/` directory for a
//! runnable walkthrough of each subsystem; the `genebench` binary exposes
//! the same functionality as subcommands.

pub mod cli;
pub mod corpus;
pub mod embed_eval;
pub mod grading;
pub mod harness;
pub mod postprocess;
pub mod testing;
pub mod text_metrics;
