//! The corpus manifest: samples plus bookkeeping, and the gene-level
//! train/eval split.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sample::{read_samples_jsonl, write_samples_jsonl};
use super::{Biotype, CorpusError, InstructionSample, SampleSource, Task};

/// One row of the per-(task, source, biotype) sample counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub task: Task,
    pub source: SampleSource,
    pub biotype: Biotype,
    pub count: usize,
}

/// A built corpus: canonically ordered samples, counts, and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub samples: Vec<InstructionSample>,
    pub counts: Vec<CountRow>,
    /// Catalog biotype for every gene appearing in `samples`.
    pub gene_biotypes: BTreeMap<String, Biotype>,
    pub build_seed: u64,
    pub catalog_version: String,
}

/// Metadata half of the on-disk layout (the samples live in the
/// line-delimited corpus file next to it).
#[derive(Serialize, Deserialize)]
struct ManifestMeta {
    build_seed: u64,
    catalog_version: String,
    sample_count: usize,
    counts: Vec<CountRow>,
    gene_biotypes: BTreeMap<String, Biotype>,
}

impl CorpusManifest {
    /// Canonicalizes sample order, recomputes counts, and validates the
    /// no-duplicate invariant.
    pub fn assemble(
        mut samples: Vec<InstructionSample>,
        biotypes: &BTreeMap<String, Biotype>,
        build_seed: u64,
        catalog_version: &str,
    ) -> Result<Self, CorpusError> {
        samples.sort_by(|a, b| {
            (&a.gene, a.task, a.source).cmp(&(&b.gene, b.task, b.source))
        });
        let mut counts: BTreeMap<(Task, SampleSource, Biotype), usize> = BTreeMap::new();
        let mut gene_biotypes = BTreeMap::new();
        for pair in samples.windows(2) {
            if pair[0].gene == pair[1].gene
                && pair[0].task == pair[1].task
                && pair[0].source == pair[1].source
            {
                return Err(CorpusError::DuplicateSample {
                    task: pair[0].task,
                    gene: pair[0].gene.clone(),
                    sample_source: pair[0].source,
                });
            }
        }
        for sample in &samples {
            let biotype = *biotypes
                .get(&sample.gene)
                .ok_or_else(|| CorpusError::UnknownGene(sample.gene.clone()))?;
            gene_biotypes.insert(sample.gene.clone(), biotype);
            *counts.entry((sample.task, sample.source, biotype)).or_insert(0) += 1;
        }
        let counts = counts
            .into_iter()
            .map(|((task, source, biotype), count)| CountRow {
                task,
                source,
                biotype,
                count,
            })
            .collect();
        Ok(Self {
            samples,
            counts,
            gene_biotypes,
            build_seed,
            catalog_version: catalog_version.to_string(),
        })
    }

    /// Checks the manifest invariants: counts sum to the number of samples,
    /// no duplicate (task, gene, source), and every synthetic sample's gene
    /// is protein-coding.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let total: usize = self.counts.iter().map(|c| c.count).sum();
        if total != self.samples.len() {
            return Err(CorpusError::InconsistentManifest(format!(
                "counts sum to {total} but there are {} samples",
                self.samples.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for sample in &self.samples {
            if !seen.insert((sample.gene.clone(), sample.task, sample.source)) {
                return Err(CorpusError::DuplicateSample {
                    task: sample.task,
                    gene: sample.gene.clone(),
                    sample_source: sample.source,
                });
            }
            if sample.source == SampleSource::Synthetic {
                match self.gene_biotypes.get(&sample.gene) {
                    Some(Biotype::ProteinCoding) => {}
                    other => {
                        return Err(CorpusError::PolicyViolation {
                            gene: sample.gene.clone(),
                            biotype: other.copied(),
                        })
                    }
                }
            }
        }
        Ok(())
    }

    /// Distinct gene symbols, in order.
    pub fn genes(&self) -> Vec<String> {
        let mut genes: Vec<String> = self.gene_biotypes.keys().cloned().collect();
        genes.sort();
        genes
    }

    /// Writes the corpus file (line-delimited samples) and the manifest
    /// metadata JSON.
    pub fn save(&self, corpus_path: &Path, manifest_path: &Path) -> Result<(), CorpusError> {
        let file = std::fs::File::create(corpus_path)?;
        write_samples_jsonl(std::io::BufWriter::new(file), &self.samples)?;
        let meta = ManifestMeta {
            build_seed: self.build_seed,
            catalog_version: self.catalog_version.clone(),
            sample_count: self.samples.len(),
            counts: self.counts.clone(),
            gene_biotypes: self.gene_biotypes.clone(),
        };
        std::fs::write(manifest_path, serde_json::to_vec_pretty(&meta)?)?;
        Ok(())
    }

    /// Loads and cross-validates the two-file layout produced by [`save`].
    ///
    /// [`save`]: CorpusManifest::save
    pub fn load(corpus_path: &Path, manifest_path: &Path) -> Result<Self, CorpusError> {
        let samples = read_samples_jsonl(corpus_path)?;
        let meta: ManifestMeta = serde_json::from_str(&std::fs::read_to_string(manifest_path)?)?;
        if meta.sample_count != samples.len() {
            return Err(CorpusError::InconsistentManifest(format!(
                "manifest declares {} samples, corpus file has {}",
                meta.sample_count,
                samples.len()
            )));
        }
        let manifest = Self {
            samples,
            counts: meta.counts,
            gene_biotypes: meta.gene_biotypes,
            build_seed: meta.build_seed,
            catalog_version: meta.catalog_version,
        };
        manifest.validate()?;
        Ok(manifest)
    }
}

/// Splits a manifest into (train, eval) by holding out exactly `n` genes,
/// chosen by a seeded shuffle of the sorted gene list. Every sample of a
/// held-out gene moves to the eval side, so the two gene sets are disjoint.
pub fn split_eval(
    manifest: &CorpusManifest,
    n: usize,
    seed: u64,
) -> Result<(CorpusManifest, CorpusManifest), CorpusError> {
    let mut genes = manifest.genes();
    if n > genes.len() {
        return Err(CorpusError::NTooLarge {
            n,
            available: genes.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    genes.shuffle(&mut rng);
    let eval_genes: std::collections::BTreeSet<String> = genes.into_iter().take(n).collect();

    let (eval_samples, train_samples): (Vec<_>, Vec<_>) = manifest
        .samples
        .iter()
        .cloned()
        .partition(|s| eval_genes.contains(&s.gene));

    let train = CorpusManifest::assemble(
        train_samples,
        &manifest.gene_biotypes,
        manifest.build_seed,
        &manifest.catalog_version,
    )?;
    let eval = CorpusManifest::assemble(
        eval_samples,
        &manifest.gene_biotypes,
        manifest.build_seed,
        &manifest.catalog_version,
    )?;
    Ok((train, eval))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest_of(genes: &[&str]) -> CorpusManifest {
        let biotypes: BTreeMap<String, Biotype> = genes
            .iter()
            .map(|g| (g.to_string(), Biotype::ProteinCoding))
            .collect();
        let samples: Vec<InstructionSample> = genes
            .iter()
            .map(|g| {
                InstructionSample::new(
                    format!("Describe {g}."),
                    None,
                    None,
                    format!("{g} does something."),
                    Task::GeneDescription,
                    SampleSource::Real,
                    *g,
                )
                .unwrap()
            })
            .collect();
        CorpusManifest::assemble(samples, &biotypes, 7, "v1").unwrap()
    }

    #[test]
    fn split_is_deterministic_and_disjoint() {
        let genes: Vec<String> = (0..100).map(|i| format!("G{i:03}")).collect();
        let refs: Vec<&str> = genes.iter().map(String::as_str).collect();
        let manifest = manifest_of(&refs);
        let (train1, eval1) = split_eval(&manifest, 20, 7).unwrap();
        let (train2, eval2) = split_eval(&manifest, 20, 7).unwrap();
        assert_eq!(eval1.samples, eval2.samples);
        assert_eq!(train1.samples, train2.samples);
        assert_eq!(eval1.genes().len(), 20);

        let train_genes: std::collections::BTreeSet<_> = train1.genes().into_iter().collect();
        let eval_genes: std::collections::BTreeSet<_> = eval1.genes().into_iter().collect();
        assert!(train_genes.is_disjoint(&eval_genes));
        let union: std::collections::BTreeSet<_> =
            train_genes.union(&eval_genes).cloned().collect();
        assert_eq!(union.len(), 100);
    }

    #[test]
    fn split_n_zero_keeps_everything_in_train() {
        let manifest = manifest_of(&["A", "B", "C"]);
        let (train, eval) = split_eval(&manifest, 0, 1).unwrap();
        assert!(eval.samples.is_empty());
        assert_eq!(train.samples, manifest.samples);
    }

    #[test]
    fn split_rejects_oversized_holdout() {
        let manifest = manifest_of(&["A", "B"]);
        assert!(matches!(
            split_eval(&manifest, 3, 1),
            Err(CorpusError::NTooLarge { n: 3, available: 2 })
        ));
    }

    #[test]
    fn different_seeds_give_different_holdouts() {
        let genes: Vec<String> = (0..50).map(|i| format!("G{i:03}")).collect();
        let refs: Vec<&str> = genes.iter().map(String::as_str).collect();
        let manifest = manifest_of(&refs);
        let (_, eval_a) = split_eval(&manifest, 10, 1).unwrap();
        let (_, eval_b) = split_eval(&manifest, 10, 2).unwrap();
        assert_ne!(eval_a.genes(), eval_b.genes());
    }

    #[test]
    fn save_load_round_trip() {
        let manifest = manifest_of(&["A", "B", "C"]);
        let dir = tempfile::tempdir().unwrap();
        let corpus = dir.path().join("corpus.jsonl");
        let meta = dir.path().join("manifest.json");
        manifest.save(&corpus, &meta).unwrap();
        let back = CorpusManifest::load(&corpus, &meta).unwrap();
        assert_eq!(back, manifest);
    }

    #[test]
    fn counts_sum_matches_sample_count() {
        let manifest = manifest_of(&["A", "B", "C", "D"]);
        let total: usize = manifest.counts.iter().map(|c| c.count).sum();
        assert_eq!(total, manifest.samples.len());
        manifest.validate().unwrap();
    }
}
