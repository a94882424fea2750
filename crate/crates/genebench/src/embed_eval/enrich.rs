//! Gene-set over-representation analysis: exact hypergeometric upper-tail
//! p-values with Bonferroni correction.
//!
//! Gene sets load from a tab-separated file whose first line declares the
//! universe:
//!
//! ```text
//! universe<TAB>A,B,C,D,E
//! pathway_x<TAB>A,B
//! pathway_y<TAB>C,D,E
//! ```

use std::collections::BTreeSet;
use std::path::Path;

use super::EmbedError;

/// Named pathway sets over a declared gene universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneSetCollection {
    universe: BTreeSet<String>,
    sets: Vec<(String, BTreeSet<String>)>,
}

impl GeneSetCollection {
    pub fn new(
        universe: BTreeSet<String>,
        sets: Vec<(String, BTreeSet<String>)>,
    ) -> Result<Self, EmbedError> {
        for (name, set) in &sets {
            if let Some(symbol) = set.iter().find(|s| !universe.contains(*s)) {
                return Err(EmbedError::NotSubset {
                    what: format!("gene set {name}"),
                    symbol: symbol.clone(),
                });
            }
        }
        Ok(Self { universe, sets })
    }

    pub fn parse(text: &str) -> Result<Self, EmbedError> {
        let mut lines = text
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let first = lines
            .next()
            .ok_or_else(|| EmbedError::BadGeneSets("empty gene sets file".into()))?;
        let (_, universe_col) = first
            .split_once('\t')
            .ok_or_else(|| EmbedError::BadGeneSets("first line must declare the universe".into()))?;
        let universe: BTreeSet<String> = split_symbols(universe_col);
        let mut sets = Vec::new();
        for (i, line) in lines.enumerate() {
            let (name, symbols) = line.split_once('\t').ok_or_else(|| {
                EmbedError::BadGeneSets(format!("line {}: expected name<TAB>symbols", i + 2))
            })?;
            sets.push((name.trim().to_string(), split_symbols(symbols)));
        }
        Self::new(universe, sets)
    }

    pub fn from_file(path: &Path) -> Result<Self, EmbedError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn universe(&self) -> &BTreeSet<String> {
        &self.universe
    }

    pub fn sets(&self) -> &[(String, BTreeSet<String>)] {
        &self.sets
    }
}

fn split_symbols(column: &str) -> BTreeSet<String> {
    column
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Hypergeometric upper tail: the probability of drawing at least the
/// observed overlap when `|cluster|` genes are sampled without replacement
/// from the universe. Computed in log space from exact factorials — no
/// normal approximation.
pub fn ora_enrichment(
    cluster_genes: &BTreeSet<String>,
    gene_set: &BTreeSet<String>,
    universe: &BTreeSet<String>,
) -> Result<f64, EmbedError> {
    for (what, set) in [("cluster_genes", cluster_genes), ("gene_set", gene_set)] {
        if let Some(symbol) = set.iter().find(|s| !universe.contains(*s)) {
            return Err(EmbedError::NotSubset {
                what: what.to_string(),
                symbol: symbol.clone(),
            });
        }
    }
    let population = universe.len();
    let successes = gene_set.len();
    let draws = cluster_genes.len();
    let observed = cluster_genes.intersection(gene_set).count();
    Ok(hypergeometric_tail_ge(population, successes, draws, observed))
}

/// `P(X >= k)` for X ~ Hypergeometric(population, successes, draws).
pub fn hypergeometric_tail_ge(population: usize, successes: usize, draws: usize, k: usize) -> f64 {
    let lower = draws.saturating_sub(population - successes);
    if k <= lower {
        return 1.0;
    }
    let upper = successes.min(draws);
    if k > upper {
        return 0.0;
    }
    let ln_fact = ln_factorials(population);
    let ln_choose = |n: usize, r: usize| -> f64 { ln_fact[n] - ln_fact[r] - ln_fact[n - r] };
    let denom = ln_choose(population, draws);
    let mut p = 0.0;
    for i in k..=upper {
        p += (ln_choose(successes, i) + ln_choose(population - successes, draws - i) - denom).exp();
    }
    p.clamp(0.0, 1.0)
}

fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    table.push(0.0);
    for i in 1..=n {
        table.push(table[i - 1] + (i as f64).ln());
    }
    table
}

/// Bonferroni correction: each p-value multiplied by the number of tests,
/// clamped at 1. Inputs outside [0, 1] are rejected.
pub fn bonferroni(pvals: &[f64]) -> Result<Vec<f64>, EmbedError> {
    if let Some(&bad) = pvals.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(EmbedError::OutOfRange(bad));
    }
    let m = pvals.len() as f64;
    Ok(pvals.iter().map(|p| (p * m).min(1.0)).collect())
}

/// Ranks pathways by ascending adjusted p (descending −log p), ties broken
/// lexicographically by name, truncated to `n`.
pub fn top_pathways(results: &[(String, f64)], n: usize) -> Vec<(String, f64)> {
    let mut sorted = results.to_vec();
    sorted.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    sorted.truncate(n);
    sorted
}

/// One pathway's enrichment against one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentRow {
    pub pathway: String,
    pub overlap: usize,
    pub raw_p: f64,
    pub adjusted_p: f64,
}

/// Tests every pathway in the collection against one cluster, applying
/// Bonferroni across the pathways tested.
pub fn enrich_clusters(
    cluster_genes: &BTreeSet<String>,
    collection: &GeneSetCollection,
) -> Result<Vec<EnrichmentRow>, EmbedError> {
    let raw: Vec<f64> = collection
        .sets()
        .iter()
        .map(|(_, set)| ora_enrichment(cluster_genes, set, collection.universe()))
        .collect::<Result<_, _>>()?;
    let adjusted = bonferroni(&raw)?;
    Ok(collection
        .sets()
        .iter()
        .zip(raw.iter().zip(&adjusted))
        .map(|((name, set), (&raw_p, &adjusted_p))| EnrichmentRow {
            pathway: name.clone(),
            overlap: cluster_genes.intersection(set).count(),
            raw_p,
            adjusted_p,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symbols(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn numbered(n: usize) -> BTreeSet<String> {
        (0..n).map(|i| format!("G{i}")).collect()
    }

    /// Worked example: universe 10, set 5, cluster 3, overlap 3 →
    /// C(5,3)·C(5,0)/C(10,3) = 10/120.
    #[test]
    fn worked_full_overlap_example() {
        let universe = numbered(10);
        let set = numbered(5);
        let cluster = numbered(3);
        let p = ora_enrichment(&cluster, &set, &universe).unwrap();
        assert!((p - 10.0 / 120.0).abs() < 1e-12, "got {p}");
    }

    #[test]
    fn zero_overlap_is_full_tail() {
        let universe = numbered(10);
        let set: BTreeSet<String> = (5..10).map(|i| format!("G{i}")).collect();
        let cluster = numbered(3);
        assert_eq!(ora_enrichment(&cluster, &set, &universe).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_everything_is_certain() {
        let universe = numbered(6);
        assert_eq!(ora_enrichment(&universe, &universe, &universe).unwrap(), 1.0);
    }

    #[test]
    fn not_subset_is_rejected() {
        let universe = numbered(4);
        let cluster = symbols(&["G0", "OUTSIDER"]);
        assert!(matches!(
            ora_enrichment(&cluster, &numbered(2), &universe),
            Err(EmbedError::NotSubset { .. })
        ));
    }

    /// Exhaustive enumeration oracle over all draws for small universes.
    fn tail_by_enumeration(population: usize, successes: usize, draws: usize, k: usize) -> f64 {
        assert!(population <= 20);
        let mut favorable = 0u64;
        let mut total = 0u64;
        for mask in 0u32..(1 << population) {
            if mask.count_ones() as usize != draws {
                continue;
            }
            total += 1;
            let overlap = (mask & ((1u32 << successes) - 1)).count_ones() as usize;
            if overlap >= k {
                favorable += 1;
            }
        }
        favorable as f64 / total as f64
    }

    #[test]
    fn matches_enumeration_for_all_small_universes() {
        for population in 1..=12 {
            for successes in 0..=population {
                for draws in 0..=population {
                    for k in 0..=draws.min(successes) {
                        let exact = hypergeometric_tail_ge(population, successes, draws, k);
                        let enumerated = tail_by_enumeration(population, successes, draws, k);
                        assert!(
                            (exact - enumerated).abs() < 1e-12,
                            "N={population} K={successes} n={draws} k={k}: {exact} vs {enumerated}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bonferroni_scales_and_clamps() {
        assert_eq!(bonferroni(&[0.01, 0.5]).unwrap(), vec![0.02, 1.0]);
        assert_eq!(bonferroni(&[1.0]).unwrap(), vec![1.0]);
        let out = bonferroni(&[0.3, 0.4, 0.5]).unwrap();
        assert!((out[0] - 0.9).abs() < 1e-12);
        assert_eq!(&out[1..], &[1.0, 1.0]);
        assert!(bonferroni(&[1.2]).is_err());
        assert!(bonferroni(&[-0.1]).is_err());
    }

    #[test]
    fn top_pathways_ranks_and_tie_breaks() {
        let results = vec![("A".to_string(), 0.2), ("B".to_string(), 0.01)];
        assert_eq!(top_pathways(&results, 1), vec![("B".to_string(), 0.01)]);

        let tied = vec![("B".to_string(), 0.05), ("A".to_string(), 0.05)];
        let ranked = top_pathways(&tied, 2);
        assert_eq!(ranked[0].0, "A");
        assert_eq!(ranked[1].0, "B");

        assert_eq!(top_pathways(&tied, 10).len(), 2);
    }

    #[test]
    fn top_pathways_is_a_prefix_of_the_full_ranking() {
        let results: Vec<(String, f64)> = (0..8)
            .map(|i| (format!("P{i}"), ((i * 7) % 8) as f64 / 8.0))
            .collect();
        let full = top_pathways(&results, results.len());
        for n in 1..=results.len() {
            assert_eq!(top_pathways(&results, n), full[..n].to_vec());
        }
    }

    #[test]
    fn gene_sets_file_round_trip() {
        let text = "universe\tA,B,C,D,E\npathway_x\tA,B\npathway_y\tC,D,E\n";
        let collection = GeneSetCollection::parse(text).unwrap();
        assert_eq!(collection.universe().len(), 5);
        assert_eq!(collection.sets().len(), 2);
        assert!(GeneSetCollection::parse("universe\tA,B\nbad\tA,Z\n").is_err());
    }

    #[test]
    fn enrich_clusters_applies_bonferroni_across_pathways() {
        let collection = GeneSetCollection::parse(
            "universe\tG0,G1,G2,G3,G4,G5,G6,G7,G8,G9\npx\tG0,G1,G2,G3,G4\npy\tG9\n",
        )
        .unwrap();
        let cluster = numbered(3);
        let rows = enrich_clusters(&cluster, &collection).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].overlap, 3);
        assert!((rows[0].raw_p - 10.0 / 120.0).abs() < 1e-12);
        assert!((rows[0].adjusted_p - 2.0 * 10.0 / 120.0).abs() < 1e-12);
    }
}
