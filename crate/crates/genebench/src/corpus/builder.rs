//! Sample construction and the corpus merge policy.

use std::collections::BTreeMap;

use super::manifest::CorpusManifest;
use super::provider::{
    PromptTemplate, Provider, DEFAULT_GENERATION_TEMPLATE, DEFAULT_INSTRUCTION_TEMPLATE,
    DEFAULT_REPHRASE_TEMPLATE,
};
use super::{Biotype, CorpusError, GeneRecord, InstructionSample, SampleSource, Task};

/// The three editable templates driving corpus construction. The generation
/// template is applied identically to every gene.
#[derive(Debug, Clone)]
pub struct CorpusTemplates {
    pub instruction: PromptTemplate,
    pub rephrase: PromptTemplate,
    pub generation: PromptTemplate,
}

impl Default for CorpusTemplates {
    fn default() -> Self {
        Self {
            instruction: PromptTemplate::new(DEFAULT_INSTRUCTION_TEMPLATE.trim_end()),
            rephrase: PromptTemplate::new(DEFAULT_REPHRASE_TEMPLATE.trim_end()),
            generation: PromptTemplate::new(DEFAULT_GENERATION_TEMPLATE.trim_end()),
        }
    }
}

/// Collapses line breaks so the output reads as one flowing paragraph.
fn flatten_paragraph(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Builds a real (catalog-derived) gene-description sample. When a provider
/// is given, the summary is rephrased through it; otherwise the raw summary
/// is used verbatim. Either way the output is flattened to one paragraph.
pub fn build_real_sample(
    record: &GeneRecord,
    templates: &CorpusTemplates,
    provider: Option<&dyn Provider>,
) -> Result<InstructionSample, CorpusError> {
    if !record.has_summary() {
        return Err(CorpusError::EmptySummary(record.symbol.clone()));
    }
    let output = match provider {
        Some(p) => p.generate(&templates.rephrase.render(&record.symbol, &record.summary))?,
        None => record.summary.clone(),
    };
    InstructionSample::new(
        templates.instruction.render(&record.symbol, ""),
        None,
        None,
        flatten_paragraph(&output),
        Task::GeneDescription,
        SampleSource::Real,
        record.symbol.clone(),
    )
}

/// Builds a synthetic gene-description sample by asking the provider with
/// the fixed generation template. Restricted to protein-coding genes.
pub fn build_synthetic_sample(
    record: &GeneRecord,
    provider: &dyn Provider,
    templates: &CorpusTemplates,
) -> Result<InstructionSample, CorpusError> {
    if record.biotype != Biotype::ProteinCoding {
        return Err(CorpusError::BiotypeRejected {
            symbol: record.symbol.clone(),
            biotype: record.biotype,
        });
    }
    let output = provider.generate(&templates.generation.render(&record.symbol, ""))?;
    InstructionSample::new(
        templates.instruction.render(&record.symbol, ""),
        None,
        None,
        flatten_paragraph(&output),
        Task::GeneDescription,
        SampleSource::Synthetic,
        record.symbol.clone(),
    )
}

/// Merges real and synthetic samples into a manifest under the augmentation
/// policy:
///
/// - every synthetic sample's gene is re-verified as protein-coding against
///   the catalog biotype table, and anything else is a policy violation;
/// - per (task, gene, source) at most one sample is kept — the one with the
///   longest output (ties broken by lexicographic order);
/// - samples are canonically ordered by (gene, task, source).
pub fn merge_corpora(
    real: Vec<InstructionSample>,
    synthetic: Vec<InstructionSample>,
    biotypes: &BTreeMap<String, Biotype>,
    build_seed: u64,
    catalog_version: &str,
) -> Result<CorpusManifest, CorpusError> {
    for sample in &synthetic {
        if sample.source != SampleSource::Synthetic {
            return Err(CorpusError::SourceMismatch {
                expected: SampleSource::Synthetic,
                found: sample.source,
            });
        }
        match biotypes.get(&sample.gene) {
            Some(Biotype::ProteinCoding) => {}
            other => {
                return Err(CorpusError::PolicyViolation {
                    gene: sample.gene.clone(),
                    biotype: other.copied(),
                })
            }
        }
    }

    let mut deduped: BTreeMap<(String, Task, SampleSource), InstructionSample> = BTreeMap::new();
    for sample in real.into_iter().chain(synthetic) {
        if !biotypes.contains_key(&sample.gene) {
            return Err(CorpusError::UnknownGene(sample.gene.clone()));
        }
        let key = (sample.gene.clone(), sample.task, sample.source);
        match deduped.get(&key) {
            Some(existing)
                if (existing.output.len(), &sample.output)
                    >= (sample.output.len(), &existing.output) =>
            {
                // Keep the longer output; on equal length keep the
                // lexicographically smaller one.
                if existing.output.len() == sample.output.len()
                    && sample.output < existing.output
                {
                    deduped.insert(key, sample);
                }
            }
            Some(existing) if existing.output.len() >= sample.output.len() => {}
            _ => {
                deduped.insert(key, sample);
            }
        }
    }

    let samples: Vec<InstructionSample> = deduped.into_values().collect();
    CorpusManifest::assemble(samples, biotypes, build_seed, catalog_version)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::MockProvider;

    fn record(symbol: &str, biotype: Biotype, summary: &str) -> GeneRecord {
        GeneRecord::new(
            symbol,
            format!("{symbol} full name"),
            vec![],
            "ENSG00000000001",
            "HGNC:1",
            biotype,
            summary,
        )
        .unwrap()
    }

    fn biotype_table(entries: &[(&str, Biotype)]) -> BTreeMap<String, Biotype> {
        entries
            .iter()
            .map(|(s, b)| (s.to_string(), *b))
            .collect()
    }

    #[test]
    fn real_sample_passes_summary_through_without_provider() {
        let r = record("TP53", Biotype::ProteinCoding, "S");
        let s = build_real_sample(&r, &CorpusTemplates::default(), None).unwrap();
        assert_eq!(s.output, "S");
        assert_eq!(s.source, SampleSource::Real);
        assert_eq!(s.task, Task::GeneDescription);
    }

    #[test]
    fn real_sample_rejects_empty_summary() {
        let r = record("TP53", Biotype::ProteinCoding, "   ");
        assert!(matches!(
            build_real_sample(&r, &CorpusTemplates::default(), None),
            Err(CorpusError::EmptySummary(_))
        ));
    }

    #[test]
    fn real_sample_uses_provider_for_rephrasing() {
        let r = record("TP53", Biotype::ProteinCoding, "s u m");
        let provider = MockProvider::uppercase();
        // With a pass-through rephrase template the provider sees the raw
        // summary, so the output is exactly its uppercased form.
        let templates = CorpusTemplates {
            rephrase: PromptTemplate::new("{summary}"),
            ..CorpusTemplates::default()
        };
        let s = build_real_sample(&r, &templates, Some(&provider)).unwrap();
        assert_eq!(s.output, "S U M");
        assert_eq!(provider.prompts(), vec!["s u m".to_string()]);
    }

    #[test]
    fn rephrase_prompt_carries_symbol_and_summary() {
        let r = record("TP53", Biotype::ProteinCoding, "guards the genome");
        let provider = MockProvider::echo();
        build_real_sample(&r, &CorpusTemplates::default(), Some(&provider)).unwrap();
        let prompts = provider.prompts();
        assert!(prompts[0].contains("TP53"));
        assert!(prompts[0].contains("guards the genome"));
    }

    #[test]
    fn real_sample_output_is_single_paragraph() {
        let r = record("TP53", Biotype::ProteinCoding, "line one\n\nline two\nline three");
        let s = build_real_sample(&r, &CorpusTemplates::default(), None).unwrap();
        assert_eq!(s.output, "line one line two line three");
    }

    #[test]
    fn synthetic_sample_for_protein_coding_gene() {
        let r = record("TP53", Biotype::ProteinCoding, "");
        let provider = MockProvider::new(|_| "generated summary".into());
        let s = build_synthetic_sample(&r, &provider, &CorpusTemplates::default()).unwrap();
        assert_eq!(s.source, SampleSource::Synthetic);
        assert_eq!(s.output, "generated summary");
    }

    #[test]
    fn synthetic_sample_rejects_pseudogene() {
        let r = record("PS1", Biotype::Pseudogene, "");
        let provider = MockProvider::echo();
        assert!(matches!(
            build_synthetic_sample(&r, &provider, &CorpusTemplates::default()),
            Err(CorpusError::BiotypeRejected { .. })
        ));
        assert_eq!(provider.call_count(), 0, "provider must not be called");
    }

    #[test]
    fn synthetic_sample_rejects_non_coding() {
        let r = record("NC1", Biotype::NonCoding, "");
        let provider = MockProvider::echo();
        assert!(matches!(
            build_synthetic_sample(&r, &provider, &CorpusTemplates::default()),
            Err(CorpusError::BiotypeRejected { .. })
        ));
    }

    #[test]
    fn same_generation_template_for_every_gene() {
        let provider = MockProvider::echo();
        let templates = CorpusTemplates::default();
        for symbol in ["AAA1", "BBB2"] {
            let r = record(symbol, Biotype::ProteinCoding, "");
            build_synthetic_sample(&r, &provider, &templates).unwrap();
        }
        let prompts = provider.prompts();
        assert_eq!(
            prompts[0].replace("AAA1", "{symbol}"),
            prompts[1].replace("BBB2", "{symbol}"),
            "prompts must differ only in the substituted symbol"
        );
    }

    fn sample(gene: &str, source: SampleSource, output: &str) -> InstructionSample {
        InstructionSample::new(
            format!("Describe {gene}."),
            None,
            None,
            output,
            Task::GeneDescription,
            source,
            gene,
        )
        .unwrap()
    }

    #[test]
    fn merge_disjoint_sets() {
        let biotypes = biotype_table(&[
            ("A", Biotype::ProteinCoding),
            ("B", Biotype::ProteinCoding),
            ("C", Biotype::Pseudogene),
        ]);
        let real = vec![
            sample("A", SampleSource::Real, "ra"),
            sample("B", SampleSource::Real, "rb"),
            sample("C", SampleSource::Real, "rc"),
        ];
        let synthetic = vec![
            sample("A", SampleSource::Synthetic, "sa"),
            sample("B", SampleSource::Synthetic, "sb"),
        ];
        let manifest = merge_corpora(real, synthetic, &biotypes, 7, "v1").unwrap();
        assert_eq!(manifest.samples.len(), 5);
        manifest.validate().unwrap();
    }

    #[test]
    fn merge_rejects_synthetic_pseudogene() {
        let biotypes = biotype_table(&[("P", Biotype::Pseudogene)]);
        let synthetic = vec![sample("P", SampleSource::Synthetic, "sp")];
        assert!(matches!(
            merge_corpora(vec![], synthetic, &biotypes, 0, "v1"),
            Err(CorpusError::PolicyViolation { .. })
        ));
    }

    #[test]
    fn merge_deduplicates_keeping_longest_output() {
        let biotypes = biotype_table(&[("A", Biotype::ProteinCoding)]);
        let synthetic = vec![
            sample("A", SampleSource::Synthetic, "short"),
            sample("A", SampleSource::Synthetic, "a longer output"),
        ];
        let manifest = merge_corpora(vec![], synthetic, &biotypes, 0, "v1").unwrap();
        assert_eq!(manifest.samples.len(), 1);
        assert_eq!(manifest.samples[0].output, "a longer output");
    }

    #[test]
    fn merge_rejects_mislabeled_synthetic_list() {
        let biotypes = biotype_table(&[("A", Biotype::ProteinCoding)]);
        let mislabeled = vec![sample("A", SampleSource::Real, "x")];
        assert!(matches!(
            merge_corpora(vec![], mislabeled, &biotypes, 0, "v1"),
            Err(CorpusError::SourceMismatch { .. })
        ));
    }
}
