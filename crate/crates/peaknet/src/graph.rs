//! The chronological co-occurrence multigraph and its matrix views.
//!
//! Nodes are indexed by first appearance: index `i` is the `i`-th character
//! to appear across the scene sequence (within one scene, in within-scene
//! order). Edges are undirected, loop-free, and carry a multiplicity equal
//! to the number of scenes the pair shared.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::corpus::SceneSequence;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("cannot build a network from an empty scene sequence")]
    EmptySequence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct NodeRecord {
    name: String,
    scene_count: u32,
}

/// Undirected loop-free multigraph whose nodes carry first-appearance
/// order and scene counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChronoMultigraph {
    nodes: Vec<NodeRecord>,
    index: HashMap<String, usize>,
    /// `(i, j)` with `i < j` mapped to multiplicity >= 1.
    edges: BTreeMap<(usize, usize), u64>,
}

impl ChronoMultigraph {
    /// Assembles a graph from parts. Node order is appearance order;
    /// scene counts are clamped to >= 1, self-loops are dropped and
    /// duplicate pairs accumulate multiplicity.
    pub(crate) fn from_parts(
        names: Vec<String>,
        scene_counts: Vec<u32>,
        edge_list: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Self {
        debug_assert_eq!(names.len(), scene_counts.len());
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let nodes = names
            .into_iter()
            .zip(scene_counts)
            .map(|(name, sc)| NodeRecord {
                name,
                scene_count: sc.max(1),
            })
            .collect();
        let mut edges = BTreeMap::new();
        for (a, b, mult) in edge_list {
            if a == b || mult == 0 {
                continue;
            }
            let key = (a.min(b), a.max(b));
            *edges.entry(key).or_insert(0) += mult;
        }
        Self {
            nodes,
            index,
            edges,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Node names in appearance order.
    pub fn node_names(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.name.as_str())
    }

    pub fn node_name(&self, index: usize) -> &str {
        &self.nodes[index].name
    }

    /// Appearance index of a named node.
    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Number of scenes the node appeared in.
    pub fn scene_count(&self, index: usize) -> u32 {
        self.nodes[index].scene_count
    }

    /// Edge multiplicity between two nodes; 0 if absent or `a == b`.
    pub fn multiplicity(&self, a: usize, b: usize) -> u64 {
        if a == b {
            return 0;
        }
        self.edges
            .get(&(a.min(b), a.max(b)))
            .copied()
            .unwrap_or(0)
    }

    /// Edges as `(i, j, multiplicity)` with `i < j`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    /// Number of distinct connected pairs.
    pub fn simple_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of all edge multiplicities.
    pub fn total_multiplicity(&self) -> u64 {
        self.edges.values().sum()
    }

    /// Adjacency lists `(neighbor, multiplicity)` per node, neighbor
    /// indices ascending.
    pub fn neighbor_lists(&self) -> Vec<Vec<(usize, u64)>> {
        let mut lists = vec![Vec::new(); self.nodes.len()];
        for (&(a, b), &m) in &self.edges {
            lists[a].push((b, m));
            lists[b].push((a, m));
        }
        for list in &mut lists {
            list.sort_unstable();
        }
        lists
    }

    /// Degree of one node: distinct neighbors, or summed multiplicities
    /// when `weighted`.
    pub fn degree(&self, index: usize, weighted: bool) -> u64 {
        let mut total = 0u64;
        for (&(a, b), &m) in &self.edges {
            if a == index || b == index {
                total += if weighted { m } else { 1 };
            }
        }
        total
    }

    /// Degree of a named node.
    pub fn degree_of(&self, name: &str, weighted: bool) -> Result<u64, GraphError> {
        let idx = self
            .node_index(name)
            .ok_or_else(|| GraphError::UnknownNode(name.to_string()))?;
        Ok(self.degree(idx, weighted))
    }

    /// All degrees in appearance order, one O(edges) pass.
    pub fn degrees(&self, weighted: bool) -> Vec<u64> {
        let mut degrees = vec![0u64; self.nodes.len()];
        for (&(a, b), &m) in &self.edges {
            let inc = if weighted { m } else { 1 };
            degrees[a] += inc;
            degrees[b] += inc;
        }
        degrees
    }

    /// Copy with every multiplicity clamped to 1; node data unchanged.
    pub fn simple_view(&self) -> ChronoMultigraph {
        ChronoMultigraph {
            nodes: self.nodes.clone(),
            index: self.index.clone(),
            edges: self.edges.keys().map(|&k| (k, 1)).collect(),
        }
    }

    /// Collaboration weights: a pair with multiplicity `n` gets weight `1/n`.
    pub fn collaboration_weights(&self) -> BTreeMap<(usize, usize), f64> {
        self.edges
            .iter()
            .map(|(&k, &m)| (k, 1.0 / m as f64))
            .collect()
    }

    /// Maximal connected node sets, ordered by the smallest appearance
    /// index they contain; isolated nodes form singletons.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let lists = self.neighbor_lists();
        let mut visited = vec![false; self.nodes.len()];
        let mut components = Vec::new();
        for start in 0..self.nodes.len() {
            if visited[start] {
                continue;
            }
            let mut component = Vec::new();
            let mut queue = VecDeque::from([start]);
            visited[start] = true;
            while let Some(v) = queue.pop_front() {
                component.push(v);
                for &(w, _) in &lists[v] {
                    if !visited[w] {
                        visited[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Induced multigraph on the nodes where `keep[i]` is true, with
    /// appearance indices re-ranked preserving order.
    pub fn induced(&self, keep: &[bool]) -> ChronoMultigraph {
        debug_assert_eq!(keep.len(), self.nodes.len());
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if keep[i] {
                remap[i] = nodes.len();
                nodes.push(node.clone());
            }
        }
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.clone(), i))
            .collect();
        let edges = self
            .edges
            .iter()
            .filter(|(&(a, b), _)| keep[a] && keep[b])
            .map(|(&(a, b), &m)| ((remap[a], remap[b]), m))
            .collect();
        ChronoMultigraph {
            nodes,
            index,
            edges,
        }
    }

    /// Matrix view; rows and columns in appearance order.
    pub fn adjacency(&self, weighted: bool) -> AdjacencyMatrix {
        let n = self.nodes.len();
        let mut data = vec![0u64; n * n];
        for (&(a, b), &m) in &self.edges {
            let value = if weighted { m } else { 1 };
            data[a * n + b] = value;
            data[b * n + a] = value;
        }
        AdjacencyMatrix {
            names: self.nodes.iter().map(|n| n.name.clone()).collect(),
            n,
            data,
        }
    }
}

/// Symmetric zero-diagonal matrix of edge indicators or multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    names: Vec<String>,
    n: usize,
    data: Vec<u64>,
}

impl AdjacencyMatrix {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.data[i * self.n..(i + 1) * self.n].iter().sum()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Builds the chronological co-occurrence multigraph: every scene adds one
/// node per first-time character and one edge per character pair present,
/// so a scene with `k` characters contributes `C(k, 2)` multiplicity
/// increments.
pub fn build_network(seq: &SceneSequence) -> Result<ChronoMultigraph, GraphError> {
    if seq.is_empty() {
        return Err(GraphError::EmptySequence);
    }
    let mut names: Vec<String> = Vec::new();
    let mut scene_counts: Vec<u32> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: BTreeMap<(usize, usize), u64> = BTreeMap::new();

    for scene in seq.scenes() {
        let mut members = Vec::with_capacity(scene.len());
        for name in scene {
            let idx = *index.entry(name.clone()).or_insert_with(|| {
                names.push(name.clone());
                scene_counts.push(0);
                names.len() - 1
            });
            scene_counts[idx] += 1;
            members.push(idx);
        }
        for (pos, &a) in members.iter().enumerate() {
            for &b in &members[pos + 1..] {
                let key = (a.min(b), a.max(b));
                *edges.entry(key).or_insert(0) += 1;
            }
        }
    }

    Ok(ChronoMultigraph {
        nodes: names
            .into_iter()
            .zip(scene_counts)
            .map(|(name, scene_count)| NodeRecord { name, scene_count })
            .collect(),
        index,
        edges,
    })
}
