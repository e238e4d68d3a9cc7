//! Seeded random-graph generators: Erdős–Rényi, Barabási–Albert, and the
//! spliced core–periphery growth model.
//!
//! All generators draw from a ChaCha stream cipher generator seeded with
//! the 64-bit seed from the parameter struct, so identical parameters give
//! identical graphs. ER pairs are drawn in row-major upper-triangle order;
//! attachment targets are drawn sequentially per new node.
//!
//! Generated nodes are named by their decimal index. Scene counts mirror
//! generation events: an ER pair counts as one shared scene for both
//! endpoints, a grown node gets one debut scene, and receiving a link
//! counts as one scene for the pre-existing endpoint.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::ChronoMultigraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
}

/// Erdős–Rényi G(n, p) parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl ErParams {
    fn validate(&self) -> Result<(), ModelError> {
        if self.n < 1 {
            return Err(ModelError::InvalidParams("n must be >= 1".into()));
        }
        if !self.p.is_finite() || !(0.0..=1.0).contains(&self.p) {
            return Err(ModelError::InvalidParams("p must be in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Barabási–Albert preferential-attachment parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaParams {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl BaParams {
    fn validate(&self) -> Result<(), ModelError> {
        if self.m < 1 {
            return Err(ModelError::InvalidParams("m must be >= 1".into()));
        }
        if self.n <= self.m {
            return Err(ModelError::InvalidParams("n must be > m".into()));
        }
        Ok(())
    }
}

/// Parameters of the spliced core–periphery growth model: an ER core
/// followed by periphery nodes that attach preferentially, aiming each
/// link at the core with probability `bias`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplicedParams {
    pub core_n: usize,
    pub periphery_n: usize,
    pub core_p: f64,
    pub m: usize,
    pub bias: f64,
    pub seed: u64,
}

impl Default for SplicedParams {
    /// Defaults mirror a cast of ~30 characters before the pivot and ~30
    /// after it.
    fn default() -> Self {
        Self {
            core_n: 30,
            periphery_n: 30,
            core_p: 0.3,
            m: 2,
            bias: 0.9,
            seed: 0,
        }
    }
}

impl SplicedParams {
    fn validate(&self) -> Result<(), ModelError> {
        if self.core_n < 1 {
            return Err(ModelError::InvalidParams("core_n must be >= 1".into()));
        }
        if !self.core_p.is_finite() || !(0.0..=1.0).contains(&self.core_p) {
            return Err(ModelError::InvalidParams("core_p must be in [0, 1]".into()));
        }
        if !self.bias.is_finite() || !(0.0..=1.0).contains(&self.bias) {
            return Err(ModelError::InvalidParams("bias must be in [0, 1]".into()));
        }
        if self.m < 1 {
            return Err(ModelError::InvalidParams("m must be >= 1".into()));
        }
        if self.m > self.core_n {
            return Err(ModelError::InvalidParams("m must be <= core_n".into()));
        }
        Ok(())
    }
}

fn index_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn er_edges(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Generates an Erdős–Rényi graph: each of the `C(n, 2)` pairs is
/// included independently with probability `p`.
pub fn generate_er(params: &ErParams) -> Result<ChronoMultigraph, ModelError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let edges = er_edges(params.n, params.p, &mut rng);
    let mut events = vec![0u32; params.n];
    for &(a, b) in &edges {
        events[a] += 1;
        events[b] += 1;
    }
    Ok(ChronoMultigraph::from_parts(
        index_names(params.n),
        events,
        edges.into_iter().map(|(a, b)| (a, b, 1)),
    ))
}

/// Generates a Barabási–Albert graph: growth starts from a complete graph
/// on `m + 1` nodes, and each subsequent node attaches `m` distinct edges
/// to existing nodes with probability proportional to current degree.
pub fn generate_ba(params: &BaParams) -> Result<ChronoMultigraph, ModelError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let BaParams { n, m, .. } = *params;

    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m * (m + 1) / 2 + (n - m - 1) * m);
    // one entry per unit of degree; uniform sampling from it is
    // degree-proportional sampling
    let mut degree_pool: Vec<usize> = Vec::with_capacity(2 * edges.capacity());
    let mut events = vec![0u32; n];

    for i in 0..=m {
        for j in (i + 1)..=m {
            edges.push((i, j));
            degree_pool.push(i);
            degree_pool.push(j);
            events[i] += 1;
            events[j] += 1;
        }
    }

    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for v in (m + 1)..n {
        targets.clear();
        while targets.len() < m {
            let pick = degree_pool[rng.gen_range(0..degree_pool.len())];
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        events[v] += 1; // debut
        for &t in &targets {
            edges.push((t, v));
            degree_pool.push(t);
            degree_pool.push(v);
            events[t] += 1;
        }
    }

    Ok(ChronoMultigraph::from_parts(
        index_names(n),
        events,
        edges.into_iter().map(|(a, b)| (a, b, 1)),
    ))
}

/// Weighted draw proportional to `degree + 1` over `pool`, skipping
/// indices already chosen for the current node.
fn draw_smoothed(
    pool: std::ops::Range<usize>,
    degrees: &[u64],
    chosen: &[usize],
    rng: &mut ChaCha8Rng,
) -> usize {
    let total: u64 = pool
        .clone()
        .filter(|i| !chosen.contains(i))
        .map(|i| degrees[i] + 1)
        .sum();
    debug_assert!(total > 0, "candidate pool exhausted");
    let mut r = rng.gen_range(0..total);
    for i in pool {
        if chosen.contains(&i) {
            continue;
        }
        let w = degrees[i] + 1;
        if r < w {
            return i;
        }
        r -= w;
    }
    unreachable!("weighted draw walked past its total")
}

/// Generates the spliced core–periphery model: an `ER(core_n, core_p)`
/// core, then periphery nodes added one at a time, each forming `m`
/// distinct links. Every link targets the core with probability `bias`
/// (choosing among core nodes proportional to degree + 1) and otherwise
/// any existing node (proportional to degree + 1).
pub fn generate_spliced(params: &SplicedParams) -> Result<ChronoMultigraph, ModelError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let SplicedParams {
        core_n,
        periphery_n,
        core_p,
        m,
        bias,
        ..
    } = *params;
    let n = core_n + periphery_n;

    let mut edges = er_edges(core_n, core_p, &mut rng);
    let mut degrees = vec![0u64; n];
    let mut events = vec![0u32; n];
    for &(a, b) in &edges {
        degrees[a] += 1;
        degrees[b] += 1;
        events[a] += 1;
        events[b] += 1;
    }

    let mut targets: Vec<usize> = Vec::with_capacity(m);
    for v in core_n..n {
        targets.clear();
        for _ in 0..m {
            let target = if rng.gen::<f64>() < bias {
                draw_smoothed(0..core_n, &degrees, &targets, &mut rng)
            } else {
                draw_smoothed(0..v, &degrees, &targets, &mut rng)
            };
            targets.push(target);
        }
        events[v] += 1; // debut
        for &t in &targets {
            edges.push((t, v));
            degrees[t] += 1;
            degrees[v] += 1;
            events[t] += 1;
        }
    }

    Ok(ChronoMultigraph::from_parts(
        index_names(n),
        events,
        edges.into_iter().map(|(a, b)| (a, b, 1)),
    ))
}
