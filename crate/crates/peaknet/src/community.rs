//! Louvain community detection and modularity scoring.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

use crate::graph::ChronoMultigraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CommunityError {
    #[error("no edges to cluster")]
    NoEdges,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

/// Assignment of nodes to communities with its modularity score.
/// Community ids are contiguous, 0-based, numbered by first appearance
/// in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: Vec<usize>,
    modularity: f64,
}

impl Partition {
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn modularity(&self) -> f64 {
        self.modularity
    }

    /// Node indices per community id.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.community_count()];
        for (node, &c) in self.assignment.iter().enumerate() {
            groups[c].push(node);
        }
        groups
    }
}

/// Newman–Girvan modularity of an assignment:
/// `Q = (1/2m) * sum_ij [A_ij - k_i k_j / 2m] * delta(c_i, c_j)`,
/// with `A` either multiplicities (`weighted`) or binary, `k` the matching
/// degrees and `m` the total edge weight. A zero-edge graph has no
/// defined modularity.
pub fn modularity(
    g: &ChronoMultigraph,
    assignment: &[usize],
    weighted: bool,
) -> Result<f64, CommunityError> {
    if assignment.len() != g.node_count() {
        return Err(CommunityError::InvalidPartition(format!(
            "assignment covers {} nodes, graph has {}",
            assignment.len(),
            g.node_count()
        )));
    }
    let m = if weighted {
        g.total_multiplicity()
    } else {
        g.simple_edge_count() as u64
    };
    if m == 0 {
        return Err(CommunityError::NoEdges);
    }
    let m = m as f64;
    let degrees = g.degrees(weighted);

    let mut internal: BTreeMap<usize, f64> = BTreeMap::new();
    let mut degree_sum: BTreeMap<usize, f64> = BTreeMap::new();
    for (node, &c) in assignment.iter().enumerate() {
        *degree_sum.entry(c).or_insert(0.0) += degrees[node] as f64;
    }
    for (a, b, mult) in g.edges() {
        if assignment[a] == assignment[b] {
            let w = if weighted { mult as f64 } else { 1.0 };
            *internal.entry(assignment[a]).or_insert(0.0) += w;
        }
    }

    let mut q = 0.0;
    for (&c, &d) in &degree_sum {
        let l = internal.get(&c).copied().unwrap_or(0.0);
        q += l / m - (d / (2.0 * m)).powi(2);
    }
    Ok(q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LouvainOptions {
    /// Use multiplicities as edge weights; binary otherwise.
    pub weighted: bool,
    /// Resolution of the optimized quality function; 1.0 is classic
    /// modularity. Small networks are sensitive to it.
    pub resolution: f64,
    /// Shuffles the node visit order, making the algorithm's known
    /// order-dependence reproducible.
    pub seed: u64,
}

impl Default for LouvainOptions {
    fn default() -> Self {
        Self {
            weighted: true,
            resolution: 1.0,
            seed: 0,
        }
    }
}

/// Louvain outcome: the partition plus the quality value recorded after
/// each pass (local moving + aggregation) at the configured resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct LouvainResult {
    pub partition: Partition,
    /// Never decreases between consecutive passes.
    pub pass_modularity: Vec<f64>,
}

/// Aggregated working graph; self-loop weights are stored once, degrees
/// count them twice.
struct WorkGraph {
    adj: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
    degree: Vec<f64>,
    /// Total edge weight m.
    m: f64,
}

impl WorkGraph {
    fn from_graph(g: &ChronoMultigraph, weighted: bool) -> Self {
        let n = g.node_count();
        let mut adj = vec![Vec::new(); n];
        let mut total = 0.0;
        for (a, b, mult) in g.edges() {
            let w = if weighted { mult as f64 } else { 1.0 };
            adj[a].push((b, w));
            adj[b].push((a, w));
            total += w;
        }
        let degree: Vec<f64> = adj
            .iter()
            .map(|list| list.iter().map(|&(_, w)| w).sum())
            .collect();
        Self {
            adj,
            loops: vec![0.0; n],
            degree,
            m: total,
        }
    }

    fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Quality of a community labeling at the given resolution.
    fn quality(&self, labels: &[usize], resolution: f64) -> f64 {
        let count = labels.iter().max().map_or(0, |&c| c + 1);
        let mut internal = vec![0.0; count];
        let mut degree_sum = vec![0.0; count];
        for v in 0..self.node_count() {
            internal[labels[v]] += self.loops[v];
            degree_sum[labels[v]] += self.degree[v];
            for &(w, wt) in &self.adj[v] {
                if w > v && labels[w] == labels[v] {
                    internal[labels[v]] += wt;
                }
            }
        }
        let mut q = 0.0;
        for c in 0..count {
            q += internal[c] / self.m - resolution * (degree_sum[c] / (2.0 * self.m)).powi(2);
        }
        q
    }

    /// One local-moving phase. Returns contiguous labels and whether any
    /// node changed community.
    fn local_moving(&self, resolution: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.node_count();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut comm_degree = self.degree.clone();
        let mut link_weight = vec![0.0; n];
        let mut active: Vec<usize> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut any_move = false;

        loop {
            let mut moves = 0usize;
            order.shuffle(rng);
            for &v in &order {
                let current = comm[v];
                let k_v = self.degree[v];

                for &(w, wt) in &self.adj[v] {
                    let c = comm[w];
                    if link_weight[c] == 0.0 && !active.contains(&c) {
                        active.push(c);
                    }
                    link_weight[c] += wt;
                }

                comm_degree[current] -= k_v;
                let scale = resolution * k_v / (2.0 * self.m);
                let mut best = current;
                let mut best_gain = link_weight[current] - scale * comm_degree[current];
                for &c in &active {
                    if c == current {
                        continue;
                    }
                    let gain = link_weight[c] - scale * comm_degree[c];
                    if gain > best_gain + 1e-12 {
                        best_gain = gain;
                        best = c;
                    }
                }
                comm[v] = best;
                comm_degree[best] += k_v;
                if best != current {
                    moves += 1;
                }

                for &c in &active {
                    link_weight[c] = 0.0;
                }
                active.clear();
            }
            if moves == 0 {
                break;
            }
            any_move = true;
        }

        // renumber by first appearance in node order
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        let mut labels = Vec::with_capacity(n);
        for v in 0..n {
            let next = relabel.len();
            let id = *relabel.entry(comm[v]).or_insert(next);
            labels.push(id);
        }
        (labels, any_move)
    }

    /// Quotient graph of a contiguous labeling.
    fn aggregate(&self, labels: &[usize]) -> WorkGraph {
        let count = labels.iter().max().map_or(0, |&c| c + 1);
        let mut loops = vec![0.0; count];
        let mut cross: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for v in 0..self.node_count() {
            loops[labels[v]] += self.loops[v];
            for &(w, wt) in &self.adj[v] {
                if w <= v {
                    continue;
                }
                let (cv, cw) = (labels[v], labels[w]);
                if cv == cw {
                    loops[cv] += wt;
                } else {
                    *cross.entry((cv.min(cw), cv.max(cw))).or_insert(0.0) += wt;
                }
            }
        }
        let mut adj = vec![Vec::new(); count];
        for (&(a, b), &w) in &cross {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        let degree: Vec<f64> = (0..count)
            .map(|c| adj[c].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * loops[c])
            .collect();
        WorkGraph {
            adj,
            loops,
            degree,
            m: self.m,
        }
    }
}

/// Two-phase Louvain: local moving to quality maxima, then graph
/// aggregation, repeated until no further gain. Deterministic for a fixed
/// seed. The returned partition's modularity is the classic
/// (resolution-1) [`modularity`] of the assignment.
pub fn louvain(
    g: &ChronoMultigraph,
    options: &LouvainOptions,
) -> Result<LouvainResult, CommunityError> {
    if g.simple_edge_count() == 0 {
        return Err(CommunityError::NoEdges);
    }
    if !(options.resolution.is_finite() && options.resolution > 0.0) {
        return Err(CommunityError::InvalidPartition(
            "resolution must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut work = WorkGraph::from_graph(g, options.weighted);
    // original node -> node of the current working graph
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    let mut trace: Vec<f64> = Vec::new();

    loop {
        let (labels, moved) = work.local_moving(options.resolution, &mut rng);
        trace.push(work.quality(&labels, options.resolution));
        for slot in membership.iter_mut() {
            *slot = labels[*slot];
        }
        if !moved {
            break;
        }
        work = work.aggregate(&labels);
    }

    // contiguize by first appearance over original node order
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    let assignment: Vec<usize> = membership
        .iter()
        .map(|&c| {
            let next = relabel.len();
            *relabel.entry(c).or_insert(next)
        })
        .collect();
    let score = modularity(g, &assignment, options.weighted)?;
    Ok(LouvainResult {
        partition: Partition {
            assignment,
            modularity: score,
        },
        pass_modularity: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SceneSequence;
    use crate::graph::build_network;

    fn graph(scenes: &[&[&str]]) -> ChronoMultigraph {
        let seq = SceneSequence::new(
            scenes
                .iter()
                .map(|s| s.iter().map(|n| n.to_string()).collect())
                .collect(),
            "test",
        )
        .unwrap();
        build_network(&seq).unwrap()
    }

    fn two_triangles() -> ChronoMultigraph {
        graph(&[&["A", "B", "C"], &["D", "E", "F"]])
    }

    fn bridged_triangles() -> ChronoMultigraph {
        graph(&[&["A", "B", "C"], &["D", "E", "F"], &["C", "D"]])
    }

    #[test]
    fn all_in_one_community_on_a_triangle_scores_zero() {
        let g = graph(&[&["A", "B", "C"]]);
        let q = modularity(&g, &[0, 0, 0], false).unwrap();
        assert!(q.abs() < 1e-12);
    }

    #[test]
    fn singleton_partition_is_negative() {
        let g = bridged_triangles();
        let q = modularity(&g, &[0, 1, 2, 3, 4, 5], false).unwrap();
        assert!(q < 0.0);
        let star = graph(&[&["H", "A"], &["H", "B"], &["H", "C"]]);
        let q = modularity(&star, &[0, 1, 2, 3], false).unwrap();
        assert!((-1.0..0.0).contains(&q));
    }

    #[test]
    fn bridged_triangles_partition_score() {
        // m = 7, internal 3 + 3, degree sums 7 + 7:
        // Q = 2 * (3/7 - (7/14)^2) = 5/14
        let g = bridged_triangles();
        let q = modularity(&g, &[0, 0, 0, 1, 1, 1], false).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-12, "Q = {q}");
    }

    #[test]
    fn modularity_requires_full_coverage() {
        let g = two_triangles();
        assert!(matches!(
            modularity(&g, &[0, 0, 0], false),
            Err(CommunityError::InvalidPartition(_))
        ));
    }

    #[test]
    fn zero_edge_graph_has_undefined_modularity() {
        let g = graph(&[&["A"], &["B"]]);
        assert_eq!(
            modularity(&g, &[0, 1], false),
            Err(CommunityError::NoEdges)
        );
        assert_eq!(
            louvain(&g, &LouvainOptions::default()).unwrap_err(),
            CommunityError::NoEdges
        );
    }

    #[test]
    fn disjoint_triangles_split_into_two_communities() {
        let g = two_triangles();
        let result = louvain(&g, &LouvainOptions::default()).unwrap();
        assert_eq!(result.partition.community_count(), 2);
        let a = result.partition.assignment();
        assert_eq!(a[0], a[1]);
        assert_eq!(a[1], a[2]);
        assert_eq!(a[3], a[4]);
        assert_eq!(a[4], a[5]);
        assert_ne!(a[0], a[3]);
        assert!((result.partition.modularity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn complete_graph_is_one_community() {
        let g = graph(&[&["A", "B", "C", "D", "E"]]);
        let result = louvain(&g, &LouvainOptions::default()).unwrap();
        assert_eq!(result.partition.community_count(), 1);
    }

    #[test]
    fn louvain_is_deterministic_per_seed() {
        let g = bridged_triangles();
        let opts = LouvainOptions { seed: 7, ..Default::default() };
        let a = louvain(&g, &opts).unwrap();
        let b = louvain(&g, &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pass_quality_never_decreases() {
        for seed in 0..10 {
            let g = bridged_triangles();
            let opts = LouvainOptions { seed, ..Default::default() };
            let result = louvain(&g, &opts).unwrap();
            let t = &result.pass_modularity;
            assert!(!t.is_empty());
            assert!(
                t.windows(2).all(|w| w[1] >= w[0] - 1e-12),
                "trace {t:?} decreased"
            );
        }
    }

    #[test]
    fn reported_modularity_matches_assignment() {
        let g = bridged_triangles();
        let opts = LouvainOptions::default();
        let result = louvain(&g, &opts).unwrap();
        let recomputed =
            modularity(&g, result.partition.assignment(), opts.weighted).unwrap();
        assert!((result.partition.modularity() - recomputed).abs() < 1e-12);
    }

    #[test]
    fn uniform_multiplicity_scaling_leaves_the_partition_unchanged() {
        let base = bridged_triangles();
        // triple every scene to triple every multiplicity
        let tripled = graph(&[
            &["A", "B", "C"],
            &["A", "B", "C"],
            &["A", "B", "C"],
            &["D", "E", "F"],
            &["D", "E", "F"],
            &["D", "E", "F"],
            &["C", "D"],
            &["C", "D"],
            &["C", "D"],
        ]);
        let opts = LouvainOptions { seed: 3, ..Default::default() };
        let a = louvain(&base, &opts).unwrap();
        let b = louvain(&tripled, &opts).unwrap();
        assert_eq!(a.partition.assignment(), b.partition.assignment());
        assert!((a.partition.modularity() - b.partition.modularity()).abs() < 1e-12);
    }

    #[test]
    fn modularity_stays_in_bounds() {
        let graphs = [two_triangles(), bridged_triangles()];
        let partitions: Vec<Vec<usize>> = vec![
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 1, 2, 3, 4, 5],
            vec![0, 0, 0, 1, 1, 1],
            vec![0, 1, 0, 1, 0, 1],
        ];
        for g in &graphs {
            for p in &partitions {
                let q = modularity(g, p, true).unwrap();
                assert!((-1.0..=1.0).contains(&q), "Q = {q}");
            }
        }
    }

    #[test]
    fn weighted_flag_changes_the_score() {
        let g = graph(&[&["A", "B"], &["A", "B"], &["A", "B"], &["B", "C"], &["C", "D"]]);
        let p = vec![0, 0, 1, 1];
        let qw = modularity(&g, &p, true).unwrap();
        let qb = modularity(&g, &p, false).unwrap();
        assert!((qw - qb).abs() > 1e-6);
    }
}
