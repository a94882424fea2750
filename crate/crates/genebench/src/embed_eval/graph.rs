//! Undirected weighted graph with validated construction.

use super::EmbedError;

/// Simple undirected graph: no self-loops, at most one edge per unordered
/// pair, positive finite weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    adj: Vec<Vec<(usize, f64)>>,
    total_weight: f64,
    edge_count: usize,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![Vec::new(); n],
            total_weight: 0.0,
            edge_count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, EmbedError> {
        let mut graph = Self::new(n);
        for &(u, v, w) in edges {
            graph.add_edge(u, v, w)?;
        }
        Ok(graph)
    }

    /// Convenience for unit-weight fixtures.
    pub fn from_unweighted_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, EmbedError> {
        let weighted: Vec<(usize, usize, f64)> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Self::from_edges(n, &weighted)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<(), EmbedError> {
        if u >= self.n || v >= self.n {
            return Err(EmbedError::BadEdge(format!(
                "edge ({u}, {v}) out of range for {} nodes",
                self.n
            )));
        }
        if u == v {
            return Err(EmbedError::BadEdge(format!("self-loop at node {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(EmbedError::BadEdge(format!(
                "edge ({u}, {v}) has non-positive or non-finite weight {w}"
            )));
        }
        if self.adj[u].iter().any(|&(x, _)| x == v) {
            return Err(EmbedError::BadEdge(format!("duplicate edge ({u}, {v})")));
        }
        self.adj[u].push((v, w));
        self.adj[v].push((u, w));
        self.total_weight += w;
        self.edge_count += 1;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of edge weights, W.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    /// Weighted degree of a node.
    pub fn degree(&self, u: usize) -> f64 {
        self.adj[u].iter().map(|&(_, w)| w).sum()
    }

    /// Edges as (u, v, w) with u < v, in insertion-independent sorted order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut edges = Vec::with_capacity(self.edge_count);
        for (u, neighbors) in self.adj.iter().enumerate() {
            for &(v, w) in neighbors {
                if u < v {
                    edges.push((u, v, w));
                }
            }
        }
        edges.sort_by_key(|e| (e.0, e.1));
        edges
    }
}
