//! Leiden community detection: local moving, refinement, and aggregation,
//! with a seeded RNG so results are reproducible run to run.
//!
//! The returned partition is a local optimum of resolution-parameterized
//! modularity under single-node moves, and every community is internally
//! connected. Modularity is asserted non-decreasing across aggregation
//! levels while the algorithm runs.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use super::graph::WeightedGraph;

const GAIN_EPS: f64 = 1e-12;
const Q_TOLERANCE: f64 = 1e-9;

/// A complete assignment of nodes to communities `0..k-1`, every id used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    community_count: usize,
}

impl Partition {
    /// Renumbers raw community labels to dense ids in first-appearance
    /// order, which also makes partitions comparable across relabelings.
    pub fn from_assignment(raw: &[usize]) -> Self {
        let mut mapping = std::collections::BTreeMap::new();
        let mut next = 0usize;
        let assignment = raw
            .iter()
            .map(|&c| {
                *mapping.entry(c).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Self {
            assignment,
            community_count: next,
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Member lists per community id.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut communities = vec![Vec::new(); self.community_count];
        for (node, &c) in self.assignment.iter().enumerate() {
            communities[c].push(node);
        }
        communities
    }
}

/// Weighted modularity with resolution parameter γ:
/// `Q = Σ_c [ w_in(c)/W − γ·(deg(c)/(2W))² ]`, defined as 0 for edgeless
/// graphs.
pub fn modularity(graph: &WeightedGraph, partition: &Partition, resolution: f64) -> f64 {
    let total = graph.total_weight();
    if total == 0.0 {
        return 0.0;
    }
    let k = partition.community_count();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    let assignment = partition.assignment();
    for (u, v, w) in graph.edges() {
        if assignment[u] == assignment[v] {
            internal[assignment[u]] += w;
        }
    }
    for u in 0..graph.node_count() {
        degree[assignment[u]] += graph.degree(u);
    }
    let two_w = 2.0 * total;
    (0..k)
        .map(|c| internal[c] / total - resolution * (degree[c] / two_w).powi(2))
        .sum()
}

// ---------------------------------------------------------------------------
// Internal multilevel graph (aggregated levels carry self-loops)
// ---------------------------------------------------------------------------

struct LevelGraph {
    n: usize,
    adj: Vec<Vec<(usize, f64)>>,
    self_loops: Vec<f64>,
    degrees: Vec<f64>,
    two_w: f64,
}

impl LevelGraph {
    fn from_graph(graph: &WeightedGraph) -> Self {
        let n = graph.node_count();
        let mut adj = vec![Vec::new(); n];
        for (u, v, w) in graph.edges() {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        for list in &mut adj {
            list.sort_by_key(|entry| entry.0);
        }
        let degrees: Vec<f64> = (0..n).map(|u| adj[u].iter().map(|&(_, w)| w).sum()).collect();
        let two_w = degrees.iter().sum();
        Self {
            n,
            adj,
            self_loops: vec![0.0; n],
            degrees,
            two_w,
        }
    }
}

/// Move-evaluation state shared by the local-moving and refinement phases.
struct MoveBuffers {
    neighbor_weight: Vec<f64>,
    touched: Vec<usize>,
}

impl MoveBuffers {
    fn new(n: usize) -> Self {
        Self {
            neighbor_weight: vec![0.0; n],
            touched: Vec::with_capacity(16),
        }
    }

    fn clear(&mut self) {
        for &c in &self.touched {
            self.neighbor_weight[c] = 0.0;
        }
        self.touched.clear();
    }

    fn add(&mut self, community: usize, weight: f64) {
        if self.neighbor_weight[community] == 0.0 {
            self.touched.push(community);
        }
        self.neighbor_weight[community] += weight;
    }
}

/// One full local-moving phase: seeded visit order, repeated sweeps until
/// no single-node move improves modularity. Returns true when anything
/// moved.
fn local_move(
    level: &LevelGraph,
    partition: &mut [usize],
    comm_degrees: &mut [f64],
    comm_sizes: &mut [usize],
    empty_ids: &mut BTreeSet<usize>,
    rng: &mut ChaCha8Rng,
    resolution: f64,
) -> bool {
    if level.two_w == 0.0 {
        return false;
    }
    let mut order: Vec<usize> = (0..level.n).collect();
    order.shuffle(rng);
    let mut buffers = MoveBuffers::new(level.n);
    let mut moved_any = false;
    for _sweep in 0..100 {
        let mut moved_this_sweep = false;
        for &v in &order {
            let current = partition[v];
            let k_v = level.degrees[v];
            comm_degrees[current] -= k_v;
            comm_sizes[current] -= 1;
            if comm_sizes[current] == 0 {
                empty_ids.insert(current);
            }

            buffers.clear();
            for &(u, w) in &level.adj[v] {
                buffers.add(partition[u], w);
            }

            let score = |c: usize, w_vc: f64| -> f64 {
                w_vc - resolution * k_v * comm_degrees[c] / level.two_w
            };
            // Candidates are visited in ascending id order with a strict
            // improvement requirement, so ties resolve to the lowest id and
            // a node only moves for a real gain.
            let stay_score = score(current, buffers.neighbor_weight[current]);
            let mut best_comm = current;
            let mut best_score = stay_score;
            let mut candidates: Vec<usize> = buffers.touched.clone();
            candidates.sort_unstable();
            for c in candidates {
                if c == current {
                    continue;
                }
                let s = score(c, buffers.neighbor_weight[c]);
                if s > best_score + GAIN_EPS {
                    best_score = s;
                    best_comm = c;
                }
            }
            // A fresh singleton community scores 0.
            if let Some(&empty) = empty_ids.iter().next() {
                if 0.0 > best_score + GAIN_EPS {
                    best_comm = empty;
                }
            }

            partition[v] = best_comm;
            comm_degrees[best_comm] += k_v;
            comm_sizes[best_comm] += 1;
            empty_ids.remove(&best_comm);
            if best_comm != current {
                moved_this_sweep = true;
                moved_any = true;
            }
        }
        if !moved_this_sweep {
            break;
        }
    }
    moved_any
}

/// Refinement: within each community from the local-moving phase, nodes
/// start as singletons and may merge — singletons only — into a
/// sub-community they are connected to with positive gain. Sub-communities
/// stay internally connected by construction.
fn refine(
    level: &LevelGraph,
    partition: &[usize],
    rng: &mut ChaCha8Rng,
    resolution: f64,
) -> Vec<usize> {
    let mut sub: Vec<usize> = (0..level.n).collect();
    if level.two_w == 0.0 {
        return sub;
    }
    let mut sub_degrees: Vec<f64> = level.degrees.clone();
    let mut sub_sizes: Vec<usize> = vec![1; level.n];
    let mut order: Vec<usize> = (0..level.n).collect();
    order.shuffle(rng);
    let mut buffers = MoveBuffers::new(level.n);
    for &v in &order {
        if sub_sizes[sub[v]] != 1 {
            continue;
        }
        let k_v = level.degrees[v];
        buffers.clear();
        for &(u, w) in &level.adj[v] {
            if partition[u] == partition[v] && sub[u] != sub[v] {
                buffers.add(sub[u], w);
            }
        }
        let mut best: Option<(usize, f64)> = None;
        let mut candidates: Vec<usize> = buffers.touched.clone();
        candidates.sort_unstable();
        for s in candidates {
            let gain = buffers.neighbor_weight[s] - resolution * k_v * sub_degrees[s] / level.two_w;
            if gain > GAIN_EPS && best.map(|(_, g)| gain > g + GAIN_EPS).unwrap_or(true) {
                best = Some((s, gain));
            }
        }
        if let Some((target, _)) = best {
            sub_degrees[sub[v]] -= k_v;
            sub_sizes[sub[v]] -= 1;
            sub[v] = target;
            sub_degrees[target] += k_v;
            sub_sizes[target] += 1;
        }
    }
    sub
}

/// Collapses each refined sub-community into one node. Returns the new
/// level, the member lists, and the inherited partition (each new node
/// starts in its parent community from the local-moving phase).
fn aggregate(
    level: &LevelGraph,
    sub: &[usize],
    partition: &[usize],
    members: &[Vec<usize>],
) -> (LevelGraph, Vec<Vec<usize>>, Vec<usize>) {
    // Dense ids for sub-communities, first-appearance order.
    let mut sub_id = vec![usize::MAX; level.n];
    let mut count = 0usize;
    for &s in sub.iter() {
        if sub_id[s] == usize::MAX {
            sub_id[s] = count;
            count += 1;
        }
    }
    let node_new: Vec<usize> = (0..level.n).map(|v| sub_id[sub[v]]).collect();

    let mut new_members: Vec<Vec<usize>> = vec![Vec::new(); count];
    let mut new_self = vec![0.0; count];
    let mut adj_maps: Vec<std::collections::BTreeMap<usize, f64>> =
        vec![std::collections::BTreeMap::new(); count];
    for v in 0..level.n {
        let nv = node_new[v];
        new_members[nv].extend(members[v].iter().copied());
        new_self[nv] += level.self_loops[v];
        for &(u, w) in &level.adj[v] {
            if u < v {
                continue;
            }
            let nu = node_new[u];
            if nu == nv {
                new_self[nv] += w;
            } else {
                *adj_maps[nv].entry(nu).or_insert(0.0) += w;
                *adj_maps[nu].entry(nv).or_insert(0.0) += w;
            }
        }
    }
    let adj: Vec<Vec<(usize, f64)>> = adj_maps
        .into_iter()
        .map(|m| m.into_iter().collect())
        .collect();
    let degrees: Vec<f64> = (0..count)
        .map(|v| adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * new_self[v])
        .collect();

    // Inherited communities, renumbered densely over new nodes.
    let mut comm_map = std::collections::BTreeMap::new();
    let mut next = 0usize;
    let mut new_partition = vec![0usize; count];
    for v in 0..level.n {
        let nv = node_new[v];
        let parent = partition[v];
        let dense = *comm_map.entry(parent).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        new_partition[nv] = dense;
    }

    let new_level = LevelGraph {
        n: count,
        two_w: level.two_w,
        adj,
        self_loops: new_self,
        degrees,
    };
    (new_level, new_members, new_partition)
}

fn flat_assignment(members: &[Vec<usize>], partition: &[usize], n_original: usize) -> Vec<usize> {
    let mut flat = vec![0usize; n_original];
    for (node, node_members) in members.iter().enumerate() {
        for &orig in node_members {
            flat[orig] = partition[node];
        }
    }
    flat
}

/// Splits any community that is not internally connected into its
/// connected components. This never decreases modularity (internal weight
/// is unchanged and the degree penalty only shrinks). Returns true when a
/// split happened.
fn split_disconnected(graph: &WeightedGraph, assignment: &mut [usize]) -> bool {
    let n = graph.node_count();
    let mut next_id = assignment.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let mut visited = vec![false; n];
    let mut changed = false;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        // BFS within the community of `start`.
        let community = assignment[start];
        let mut component = vec![start];
        visited[start] = true;
        let mut queue = vec![start];
        while let Some(u) = queue.pop() {
            for &(v, _) in graph.neighbors(u) {
                if !visited[v] && assignment[v] == community {
                    visited[v] = true;
                    component.push(v);
                    queue.push(v);
                }
            }
        }
        let community_size = assignment.iter().filter(|&&c| c == community).count();
        if component.len() < community_size {
            for &v in &component {
                assignment[v] = next_id;
            }
            next_id += 1;
            changed = true;
        }
    }
    changed
}

/// Runs Leiden on `graph`. `max_iters` caps the number of
/// move/refine/aggregate rounds; convergence usually happens much earlier.
pub fn leiden(graph: &WeightedGraph, resolution: f64, seed: u64, max_iters: usize) -> Partition {
    let n = graph.node_count();
    if n == 0 {
        return Partition::from_assignment(&[]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = LevelGraph::from_graph(graph);
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut partition: Vec<usize> = (0..n).collect();
    let mut prev_q = f64::NEG_INFINITY;

    for _round in 0..max_iters.max(1) {
        let mut comm_degrees = vec![0.0; level.n];
        let mut comm_sizes = vec![0usize; level.n];
        let mut empty_ids = BTreeSet::new();
        for v in 0..level.n {
            comm_degrees[partition[v]] += level.degrees[v];
            comm_sizes[partition[v]] += 1;
        }
        local_move(
            &level,
            &mut partition,
            &mut comm_degrees,
            &mut comm_sizes,
            &mut empty_ids,
            &mut rng,
            resolution,
        );

        let flat = flat_assignment(&members, &partition, n);
        let q = modularity(graph, &Partition::from_assignment(&flat), resolution);
        assert!(
            q >= prev_q - Q_TOLERANCE,
            "modularity decreased across levels: {prev_q} -> {q}"
        );
        prev_q = q;

        let sub = refine(&level, &partition, &mut rng, resolution);
        let (new_level, new_members, new_partition) = aggregate(&level, &sub, &partition, &members);
        let converged = new_level.n == level.n;
        level = new_level;
        members = new_members;
        partition = new_partition;
        if converged {
            break;
        }
    }

    // Flat polish: single-node moves over the original graph until no move
    // improves, splitting any disconnected community between passes.
    let mut assignment = flat_assignment(&members, &partition, n);
    let flat_level = LevelGraph::from_graph(graph);
    for _pass in 0..100 {
        let mut comm_degrees = vec![0.0; n];
        let mut comm_sizes = vec![0usize; n];
        let mut empty_ids = BTreeSet::new();
        let dense = Partition::from_assignment(&assignment);
        assignment.copy_from_slice(dense.assignment());
        for v in 0..n {
            comm_degrees[assignment[v]] += flat_level.degrees[v];
            comm_sizes[assignment[v]] += 1;
        }
        for (c, &size) in comm_sizes.iter().enumerate() {
            if size == 0 {
                empty_ids.insert(c);
            }
        }
        let moved = local_move(
            &flat_level,
            &mut assignment,
            &mut comm_degrees,
            &mut comm_sizes,
            &mut empty_ids,
            &mut rng,
            resolution,
        );
        let split = split_disconnected(graph, &mut assignment);
        let q = modularity(graph, &Partition::from_assignment(&assignment), resolution);
        assert!(
            q >= prev_q - Q_TOLERANCE,
            "modularity decreased during polish: {prev_q} -> {q}"
        );
        prev_q = q;
        if !moved && !split {
            break;
        }
    }

    Partition::from_assignment(&assignment)
}


#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_triangles_bridge() -> WeightedGraph {
        WeightedGraph::from_unweighted_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)],
        )
        .unwrap()
    }

    #[test]
    fn modularity_of_two_disjoint_triangles_is_half() {
        let g = WeightedGraph::from_unweighted_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
            .unwrap();
        let p = Partition::from_assignment(&[0, 0, 0, 1, 1, 1]);
        assert!((modularity(&g, &p, 1.0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn modularity_of_single_community_is_zero() {
        let g = two_triangles_bridge();
        let p = Partition::from_assignment(&[0; 6]);
        assert!(modularity(&g, &p, 1.0).abs() < 1e-12);
    }

    #[test]
    fn modularity_of_edgeless_graph_is_zero_by_convention() {
        let g = WeightedGraph::new(4);
        let p = Partition::from_assignment(&[0, 1, 2, 3]);
        assert_eq!(modularity(&g, &p, 1.0), 0.0);
    }

    #[test]
    fn bridge_triangles_split_into_the_two_cliques() {
        let g = two_triangles_bridge();
        let p = leiden(&g, 1.0, 7, 50);
        assert_eq!(p.community_count(), 2);
        let a = p.assignment();
        assert!(a[0] == a[1] && a[1] == a[2]);
        assert!(a[3] == a[4] && a[4] == a[5]);
        assert_ne!(a[0], a[3]);

        // Brute force confirms this is the unique maximum-modularity split.
        let (best_q, argmax) = brute::max_modularity(&g, 1.0);
        assert!((modularity(&g, &p, 1.0) - best_q).abs() < 1e-9);
        assert!(argmax.contains(&p));
    }

    #[test]
    fn complete_graph_is_one_community() {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in (u + 1)..5 {
                edges.push((u, v));
            }
        }
        let g = WeightedGraph::from_unweighted_edges(5, &edges).unwrap();
        let p = leiden(&g, 1.0, 3, 50);
        assert_eq!(p.community_count(), 1);
        let (best_q, _) = brute::max_modularity(&g, 1.0);
        assert!((modularity(&g, &p, 1.0) - best_q).abs() < 1e-9);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let g = WeightedGraph::new(5);
        let p = leiden(&g, 1.0, 1, 50);
        assert_eq!(p.community_count(), 5);
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let g = two_triangles_bridge();
        let a = leiden(&g, 1.0, 42, 50);
        let b = leiden(&g, 1.0, 42, 50);
        assert_eq!(a, b);
    }

    #[test]
    fn communities_are_internally_connected_on_random_graphs() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..20 {
            let n = 12 + (trial % 5) * 7;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.12) {
                        edges.push((u, v, rng.gen_range(0.2..2.0)));
                    }
                }
            }
            let g = WeightedGraph::from_edges(n, &edges).unwrap();
            let p = leiden(&g, 1.0, trial as u64, 50);
            for community in p.communities() {
                assert!(is_connected(&g, &community), "disconnected community in trial {trial}");
            }
        }
    }

    pub(crate) fn is_connected(graph: &WeightedGraph, nodes: &[usize]) -> bool {
        if nodes.len() <= 1 {
            return true;
        }
        let set: std::collections::BTreeSet<usize> = nodes.iter().copied().collect();
        let mut visited = std::collections::BTreeSet::new();
        let mut queue = vec![nodes[0]];
        visited.insert(nodes[0]);
        while let Some(u) = queue.pop() {
            for &(v, _) in graph.neighbors(u) {
                if set.contains(&v) && visited.insert(v) {
                    queue.push(v);
                }
            }
        }
        visited.len() == nodes.len()
    }

    #[test]
    fn partition_renumbering_is_relabel_invariant() {
        let a = Partition::from_assignment(&[5, 5, 9, 9, 5]);
        let b = Partition::from_assignment(&[0, 0, 1, 1, 0]);
        assert_eq!(a, b);
    }
}
