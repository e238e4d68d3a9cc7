//! Degree statistics, complementary CDFs, assortativity and top-k reports.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::ChronoMultigraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("statistic requires a non-empty graph")]
    EmptyGraph,
    #[error("node sets must be identical or disjoint")]
    OverlappingSets,
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
}

/// Degree sequence plus its complementary cumulative distribution
/// function, `ccdf(x) = P(degree > x)` evaluated at `x = 0..=max`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeDistribution {
    degrees: Vec<u64>,
    ccdf: Vec<(u64, f64)>,
}

impl DegreeDistribution {
    /// Degrees in appearance order.
    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// `(x, p)` points for `x = 0..=max degree`.
    pub fn ccdf(&self) -> &[(u64, f64)] {
        &self.ccdf
    }

    pub fn max_degree(&self) -> u64 {
        *self.degrees.iter().max().expect("non-empty by construction")
    }

    /// Step-function evaluation of the CCDF at an arbitrary point.
    pub fn ccdf_at(&self, x: u64) -> f64 {
        match self.ccdf.get(x as usize) {
            Some(&(_, p)) => p,
            None => 0.0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.degrees.iter().sum::<u64>() as f64 / self.degrees.len() as f64
    }

    /// Median degree (midpoint convention for even counts).
    pub fn median(&self) -> f64 {
        let mut sorted = self.degrees.clone();
        sorted.sort_unstable();
        let n = sorted.len();
        if n % 2 == 1 {
            sorted[n / 2] as f64
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
        }
    }
}

/// Computes the degree distribution of a graph.
///
/// Counting is exact: every CCDF value is an integer count divided by the
/// node count.
pub fn degree_distribution(
    g: &ChronoMultigraph,
    weighted: bool,
) -> Result<DegreeDistribution, StatsError> {
    if g.node_count() == 0 {
        return Err(StatsError::EmptyGraph);
    }
    let degrees = g.degrees(weighted);
    let n = degrees.len();
    let max = *degrees.iter().max().unwrap();
    // counts[d] = number of nodes with degree d
    let mut counts = vec![0usize; max as usize + 1];
    for &d in &degrees {
        counts[d as usize] += 1;
    }
    let mut ccdf = Vec::with_capacity(max as usize + 1);
    let mut greater = n;
    for x in 0..=max {
        greater -= counts[x as usize];
        ccdf.push((x, greater as f64 / n as f64));
    }
    Ok(DegreeDistribution { degrees, ccdf })
}

/// Degree assortativity: the Pearson correlation of unweighted endpoint
/// degrees over the simple view's edges, each edge counted in both
/// orientations. `None` when the graph has no edges or all endpoint
/// degrees are equal (zero variance).
///
/// Accumulation is integer-exact, so e.g. the path A-B-C gives exactly -1.
pub fn assortativity(g: &ChronoMultigraph) -> Option<f64> {
    let degrees = g.degrees(false);
    let mut count: u128 = 0; // orientations
    let mut sum: u128 = 0; // sum of x over orientations (= sum of y)
    let mut sum_sq: u128 = 0; // sum of x^2
    let mut sum_xy: u128 = 0; // sum of x*y
    for (a, b, _) in g.edges() {
        let da = degrees[a] as u128;
        let db = degrees[b] as u128;
        count += 2;
        sum += da + db;
        sum_sq += da * da + db * db;
        sum_xy += 2 * da * db;
    }
    if count == 0 {
        return None;
    }
    let numerator = count as i128 * sum_xy as i128 - (sum * sum) as i128;
    let denominator = count as i128 * sum_sq as i128 - (sum * sum) as i128;
    if denominator == 0 {
        return None;
    }
    Some((numerator as f64 / denominator as f64).clamp(-1.0, 1.0))
}

/// Highest-degree nodes and most repeated links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopK {
    /// `(name, unweighted degree)`, degree descending, ties by appearance
    /// index ascending.
    pub nodes: Vec<(String, u64)>,
    /// `(name_a, name_b, multiplicity)` with endpoints in appearance
    /// order, multiplicity descending, ties by index pair ascending.
    pub links: Vec<(String, String, u64)>,
}

/// Top `k` nodes by unweighted degree and top `k` links by multiplicity.
/// Returns fewer than `k` entries if the graph is small.
pub fn top_k(g: &ChronoMultigraph, k: usize) -> TopK {
    let degrees = g.degrees(false);
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    let nodes = order
        .into_iter()
        .take(k)
        .map(|i| (g.node_name(i).to_string(), degrees[i]))
        .collect();

    let mut edges: Vec<(usize, usize, u64)> = g.edges().collect();
    edges.sort_by(|&(a1, b1, m1), &(a2, b2, m2)| m2.cmp(&m1).then((a1, b1).cmp(&(a2, b2))));
    let links = edges
        .into_iter()
        .take(k)
        .map(|(a, b, m)| (g.node_name(a).to_string(), g.node_name(b).to_string(), m))
        .collect();

    TopK { nodes, links }
}

/// Connection density between node sets, on the simple view.
///
/// Identical sets: simple edges within the set over `C(|set|, 2)`.
/// Disjoint sets: cross simple edges over `|a| * |b|`. Degenerate
/// denominators give 0. Overlapping distinct sets are an error.
pub fn density(
    g: &ChronoMultigraph,
    a: &BTreeSet<usize>,
    b: &BTreeSet<usize>,
) -> Result<f64, StatsError> {
    for &i in a.iter().chain(b.iter()) {
        if i >= g.node_count() {
            return Err(StatsError::IndexOutOfRange(i));
        }
    }
    if a == b {
        let size = a.len() as u64;
        let pairs = size * size.saturating_sub(1) / 2;
        if pairs == 0 {
            return Ok(0.0);
        }
        let within = g
            .edges()
            .filter(|(x, y, _)| a.contains(x) && a.contains(y))
            .count();
        Ok(within as f64 / pairs as f64)
    } else if a.is_disjoint(b) {
        let pairs = a.len() as u64 * b.len() as u64;
        if pairs == 0 {
            return Ok(0.0);
        }
        let cross = g
            .edges()
            .filter(|(x, y, _)| {
                (a.contains(x) && b.contains(y)) || (b.contains(x) && a.contains(y))
            })
            .count();
        Ok(cross as f64 / pairs as f64)
    } else {
        Err(StatsError::OverlappingSets)
    }
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

    fn five_node_graph() -> ChronoMultigraph {
        graph(&[&["A", "B"], &["A", "C"], &["A", "D"], &["C", "D"], &["D", "E"]])
    }

    /// Direct Pearson correlation over the materialized orientation list.
    fn assortativity_oracle(g: &ChronoMultigraph) -> Option<f64> {
        let degrees = g.degrees(false);
        let mut xs: Vec<f64> = Vec::new();
        let mut ys: Vec<f64> = Vec::new();
        for (a, b, _) in g.edges() {
            xs.push(degrees[a] as f64);
            ys.push(degrees[b] as f64);
            xs.push(degrees[b] as f64);
            ys.push(degrees[a] as f64);
        }
        if xs.is_empty() {
            return None;
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
        if vx == 0.0 || vy == 0.0 {
            return None;
        }
        Some(cov / (vx * vy).sqrt())
    }

    #[test]
    fn uniform_degrees_have_step_ccdf() {
        let g = graph(&[&["A", "B"], &["C", "D"]]);
        let d = degree_distribution(&g, false).unwrap();
        assert_eq!(d.ccdf(), &[(0, 1.0), (1, 0.0)]);
        assert_eq!(d.ccdf_at(5), 0.0);
    }

    #[test]
    fn five_node_graph_ccdf() {
        let g = five_node_graph();
        let d = degree_distribution(&g, false).unwrap();
        assert_eq!(d.degrees(), &[3, 1, 2, 3, 1]);
        assert_eq!(d.ccdf_at(2), 2.0 / 5.0);
        assert_eq!(d.ccdf_at(0), 1.0);
        assert_eq!(d.ccdf_at(3), 0.0);
        assert_eq!(d.mean(), 2.0);
        assert_eq!(d.median(), 2.0);
    }

    #[test]
    fn ccdf_is_non_increasing_and_ends_at_zero() {
        let g = graph(&[&["A", "B", "C"], &["A", "B"], &["A", "D"], &["E"]]);
        for weighted in [false, true] {
            let d = degree_distribution(&g, weighted).unwrap();
            let ps: Vec<f64> = d.ccdf().iter().map(|&(_, p)| p).collect();
            assert!(ps.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(*ps.last().unwrap(), 0.0);
        }
    }

    #[test]
    fn path_assortativity_is_exactly_minus_one() {
        let g = graph(&[&["A", "B"], &["B", "C"]]);
        assert_eq!(assortativity(&g), Some(-1.0));
    }

    #[test]
    fn complete_graph_assortativity_is_undefined() {
        let g = graph(&[&["A", "B", "C", "D"]]);
        assert_eq!(assortativity(&g), None);
    }

    #[test]
    fn edgeless_graph_assortativity_is_undefined() {
        let g = graph(&[&["A"], &["B"]]);
        assert_eq!(assortativity(&g), None);
    }

    #[test]
    fn assortativity_matches_brute_force_oracle() {
        let graphs = [
            five_node_graph(),
            graph(&[&["A", "B", "C"], &["C", "D"], &["D", "E", "F"], &["A", "F"]]),
            graph(&[&["H", "A"], &["H", "B"], &["H", "C"], &["H", "D"]]),
        ];
        for g in &graphs {
            let fast = assortativity(g).unwrap();
            let slow = assortativity_oracle(g).unwrap();
            assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
        }
    }

    #[test]
    fn assortativity_ignores_multiplicities() {
        let simple = graph(&[&["A", "B"], &["B", "C"], &["C", "D"], &["A", "D"], &["A", "C"]]);
        let multi = graph(&[
            &["A", "B"],
            &["A", "B"],
            &["B", "C"],
            &["C", "D"],
            &["C", "D"],
            &["C", "D"],
            &["A", "D"],
            &["A", "C"],
        ]);
        assert_eq!(assortativity(&simple), assortativity(&multi));
    }

    #[test]
    fn star_graph_top_node_is_the_hub() {
        let g = graph(&[&["H", "A"], &["H", "B"], &["H", "C"]]);
        let t = top_k(&g, 1);
        assert_eq!(t.nodes, vec![("H".to_string(), 3)]);
    }

    #[test]
    fn top_k_breaks_ties_by_appearance() {
        let g = graph(&[&["A", "B"], &["C", "D"]]);
        let t = top_k(&g, 2);
        assert_eq!(
            t.nodes,
            vec![("A".to_string(), 1), ("B".to_string(), 1)]
        );
    }

    #[test]
    fn top_k_links_sort_by_multiplicity() {
        let g = graph(&[
            &["A", "B"],
            &["A", "B"],
            &["A", "B"],
            &["B", "C"],
            &["B", "C"],
            &["A", "C"],
        ]);
        let t = top_k(&g, 2);
        assert_eq!(
            t.links,
            vec![
                ("A".to_string(), "B".to_string(), 3),
                ("B".to_string(), "C".to_string(), 2)
            ]
        );
    }

    #[test]
    fn top_k_larger_than_graph_returns_everything() {
        let g = graph(&[&["A", "B"]]);
        let t = top_k(&g, 10);
        assert_eq!(t.nodes.len(), 2);
        assert_eq!(t.links.len(), 1);
    }

    #[test]
    fn within_density_of_a_triangle_is_one() {
        let g = graph(&[&["A", "B", "C"]]);
        let set: BTreeSet<usize> = [0, 1, 2].into();
        assert_eq!(density(&g, &set, &set).unwrap(), 1.0);
    }

    #[test]
    fn five_node_graph_acd_density_is_one() {
        let g = five_node_graph();
        let set: BTreeSet<usize> = ["A", "C", "D"]
            .iter()
            .map(|n| g.node_index(n).unwrap())
            .collect();
        assert_eq!(density(&g, &set, &set).unwrap(), 1.0);
    }

    #[test]
    fn cross_density_zero_when_no_cross_edges() {
        let g = graph(&[&["A", "B"], &["C", "D"]]);
        let ab: BTreeSet<usize> = [0, 1].into();
        let cd: BTreeSet<usize> = [2, 3].into();
        assert_eq!(density(&g, &ab, &cd).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_denominators_give_zero() {
        let g = graph(&[&["A", "B"]]);
        let single: BTreeSet<usize> = [0].into();
        let empty: BTreeSet<usize> = BTreeSet::new();
        assert_eq!(density(&g, &single, &single).unwrap(), 0.0);
        assert_eq!(density(&g, &empty, &empty).unwrap(), 0.0);
        assert_eq!(density(&g, &single, &empty).unwrap(), 0.0);
    }

    #[test]
    fn overlapping_distinct_sets_are_an_error() {
        let g = graph(&[&["A", "B", "C"]]);
        let ab: BTreeSet<usize> = [0, 1].into();
        let bc: BTreeSet<usize> = [1, 2].into();
        assert_eq!(density(&g, &ab, &bc).unwrap_err(), StatsError::OverlappingSets);
    }

    #[test]
    fn density_counts_cross_edges() {
        let g = five_node_graph();
        // {A} vs {B, C, D}: edges AB, AC, AD all present -> 3 / 3
        let a: BTreeSet<usize> = [0].into();
        let rest: BTreeSet<usize> = [1, 2, 3].into();
        assert_eq!(density(&g, &a, &rest).unwrap(), 1.0);
    }
}
