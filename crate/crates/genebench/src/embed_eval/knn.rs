//! k-nearest-neighbor graph construction over embedding rows.

use rayon::prelude::*;

use super::graph::WeightedGraph;
use super::matrix::EmbeddingMatrix;
use super::EmbedError;

/// Positive floor for cosine edge weights (similarities can be negative,
/// graph weights cannot).
const COSINE_WEIGHT_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Cosine,
    Euclidean,
}

impl std::str::FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "cosine" => Ok(Metric::Cosine),
            "euclidean" => Ok(Metric::Euclidean),
            other => Err(format!("unknown metric: {other:?}")),
        }
    }
}

/// Connects each row to its `k` nearest neighbors under the metric, merging
/// mutual picks into single undirected edges. Ties are broken by lower row
/// index, so construction is deterministic. Edge weight is 1 for euclidean
/// and `max(similarity, ε)` for cosine.
pub fn knn_graph(emb: &EmbeddingMatrix, k: usize, metric: Metric) -> Result<WeightedGraph, EmbedError> {
    let n = emb.rows();
    if k < 1 || k >= n {
        return Err(EmbedError::KTooLarge { k, n });
    }

    // Cosine needs unit rows; detect zero vectors up front.
    let norms: Vec<f64> = (0..n)
        .map(|i| emb.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    if metric == Metric::Cosine {
        if let Some(row) = norms.iter().position(|&x| x == 0.0) {
            return Err(EmbedError::DegenerateRow {
                row,
                symbol: emb.row_ids()[row].clone(),
            });
        }
    }

    let neighbor_lists: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut scored: Vec<(usize, f64)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let score = match metric {
                        Metric::Cosine => cosine_similarity(emb.row(i), emb.row(j), norms[i], norms[j]),
                        Metric::Euclidean => -euclidean_distance(emb.row(i), emb.row(j)),
                    };
                    (j, score)
                })
                .collect();
            // Higher score first; ties by lower index.
            scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal).then(a.0.cmp(&b.0)));
            scored.truncate(k);
            scored
        })
        .collect();

    let mut graph = WeightedGraph::new(n);
    let mut seen = std::collections::BTreeSet::new();
    for (i, neighbors) in neighbor_lists.iter().enumerate() {
        for &(j, score) in neighbors {
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                continue;
            }
            let weight = match metric {
                Metric::Cosine => score.max(COSINE_WEIGHT_FLOOR),
                Metric::Euclidean => 1.0,
            };
            graph.add_edge(key.0, key.1, weight)?;
        }
    }
    Ok(graph)
}

fn cosine_similarity(a: &[f64], b: &[f64], norm_a: f64, norm_b: f64) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    dot / (norm_a * norm_b)
}

fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
