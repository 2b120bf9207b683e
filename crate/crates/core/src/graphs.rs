//! Undirected simple graphs, clique enumeration and corpus generators.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("node {v} is outside 1..={n}")]
    NodeOutOfRange { v: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} listed twice")]
    DuplicateEdge(usize, usize),
}

/// Simple undirected graph on nodes `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    // adj[v] for v in 1..=n; index 0 unused
    adj: Vec<BTreeSet<usize>>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![BTreeSet::new(); n + 1] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 1..=n {
            for v in u + 1..=n {
                g.adj[u].insert(v);
                g.adj[v].insert(u);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        for x in [u, v] {
            if x == 0 || x > self.n {
                return Err(GraphError::NodeOutOfRange { v: x, n: self.n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if !self.adj[u].insert(v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u <= self.n && self.adj[u].contains(&v)
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..=self.n)
            .flat_map(|u| self.adj[u].range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{u}-{v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphDoc { n: self.n, edges: self.edges() })
            .expect("graph document serializes")
    }

    /// Hex SHA-256 of the canonical text form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Parses either the edge-list text form or the JSON document form.
///
/// In the text form `;` works as a line separator, so `"n=3; 1-2 2-3"` is
/// accepted. Lines starting with `#` are comments.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    if text.trim_start().starts_with('{') {
        return parse_graph_json(text);
    }
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| GraphError::Parse { line, message };
        for segment in raw.split(';') {
            let segment = segment.trim();
            if segment.is_empty() || segment.starts_with('#') {
                continue;
            }
            for item in segment.split_whitespace() {
                if let Some(value) = item.strip_prefix("n=") {
                    if graph.is_some() {
                        return Err(err("node count given twice".into()));
                    }
                    let n: usize =
                        value.parse().map_err(|_| err(format!("bad node count `{value}`")))?;
                    if n == 0 {
                        return Err(err("node count must be positive".into()));
                    }
                    graph = Some(Graph::empty(n));
                    continue;
                }
                let g = graph.as_mut().ok_or_else(|| err("edge before `n=` header".into()))?;
                let (u, v) = item
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                    .ok_or_else(|| err(format!("expected `u-v`, found `{item}`")))?;
                g.add_edge(u, v).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    graph.ok_or(GraphError::Parse { line: 1, message: "missing `n=` header".into() })
}

fn parse_graph_json(text: &str) -> Result<Graph, GraphError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    if doc.n == 0 {
        return Err(GraphError::Parse { line: 1, message: "node count must be positive".into() });
    }
    let mut g = Graph::empty(doc.n);
    for (i, &(u, v)) in doc.edges.iter().enumerate() {
        g.add_edge(u, v).map_err(|e| GraphError::Parse {
            line: 1,
            message: format!("edge #{}: {e}", i + 1),
        })?;
    }
    Ok(g)
}

/// Sorted node list of a clique.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Clique(pub Vec<usize>);

impl Clique {
    pub fn nodes(&self) -> &[usize] {
        &self.0
    }
}

/// All k-cliques in lexicographic order of their sorted node lists.
pub fn enumerate_k_cliques(g: &Graph, k: usize) -> Vec<Clique> {
    let mut out = Vec::new();
    if k == 0 || k > g.n {
        return out;
    }
    let mut current = Vec::with_capacity(k);
    let candidates: Vec<usize> = (1..=g.n).collect();
    extend_cliques(g, k, &mut current, &candidates, &mut out);
    out
}

fn extend_cliques(
    g: &Graph,
    k: usize,
    current: &mut Vec<usize>,
    candidates: &[usize],
    out: &mut Vec<Clique>,
) {
    if current.len() == k {
        out.push(Clique(current.clone()));
        return;
    }
    let need = k - current.len();
    for (idx, &v) in candidates.iter().enumerate() {
        if candidates.len() - idx < need {
            break;
        }
        let next: Vec<usize> =
            candidates[idx + 1..].iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        current.push(v);
        extend_cliques(g, k, current, &next, out);
        current.pop();
    }
}

pub fn has_3k_clique(g: &Graph, k: usize) -> bool {
    !enumerate_k_cliques(g, 3 * k).is_empty()
}

/// Encoding width `2·⌈log₂(n+1)⌉`.
pub fn encoding_width(n: usize) -> usize {
    2 * ceil_log2(n as u64 + 1) as usize
}

/// `⌈log₂ x⌉` for `x ≥ 1`.
pub fn ceil_log2(x: u64) -> u32 {
    assert!(x >= 1, "log of zero");
    if x == 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeEncoding {
    bits: Vec<u8>,
}

impl NodeEncoding {
    /// The reserved all-zeros word of the given width.
    pub fn zeros(width: usize) -> Self {
        Self { bits: vec![0; width] }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    /// Bits as the tokens `"0"` / `"1"`.
    pub fn tokens(&self) -> impl DoubleEndedIterator<Item = &'static str> + '_ {
        self.bits.iter().map(|&b| if b == 1 { "1" } else { "0" })
    }
}

impl fmt::Display for NodeEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn encode_node(v: usize, n: usize) -> Result<NodeEncoding, GraphError> {
    if v == 0 || v > n {
        return Err(GraphError::NodeOutOfRange { v, n });
    }
    let width = encoding_width(n);
    let bits = (0..width).rev().map(|i| ((v >> i) & 1) as u8).collect();
    Ok(NodeEncoding { bits })
}

/// Erdős–Rényi graph; each pair is kept with probability `p`.
pub fn gen_random_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                g.adj[u].insert(v);
                g.adj[v].insert(u);
            }
        }
    }
    g
}

/// Random graph with a `3k`-clique planted on a seeded random node set.
pub fn gen_planted_3k_clique(n: usize, p: f64, k: usize, seed: u64) -> Graph {
    assert!(3 * k <= n, "cannot plant a {}-clique in {n} nodes", 3 * k);
    let mut g = gen_random_gnp(n, p, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let chosen = rand::seq::index::sample(&mut rng, n, 3 * k);
    let nodes: Vec<usize> = chosen.iter().map(|i| i + 1).collect();
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
    }
    g
}

/// Every labelled graph on `n` nodes, in order of the edge bitmask.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> =
        (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 32, "too many graphs to enumerate");
    (0u32..1 << pairs.len())
        .map(|mask| {
            let mut g = Graph::empty(n);
            for (bit, &(u, v)) in pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    g.adj[u].insert(v);
                    g.adj[v].insert(u);
                }
            }
            g
        })
        .collect()
}
