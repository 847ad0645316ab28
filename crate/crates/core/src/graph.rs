//! Finite multigraphs, cycle graphs and anchor sets.
//!
//! Vertex and edge ids are 0-based. Human-facing output (see
//! [`crate::complex::Slot`]'s `Display`) uses 1-based labels `v1..vk`, `e1..ek`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite undirected multigraph. Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::invalid(format!(
                    "edge {id} = ({u}, {v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
        }
        Ok(Graph { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The set of endpoints of edge `e`; a loop has a single endpoint.
    pub fn boundary(&self, e: usize) -> BTreeSet<usize> {
        let (u, v) = self.edges[e];
        [u, v].into_iter().collect()
    }

    /// `|E| - |V|`.
    pub fn epsilon(&self) -> i64 {
        self.edges.len() as i64 - self.vertex_count as i64
    }

    /// The empty graph is not considered connected.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return false;
        }
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.vertex_count
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.vertex_count
    }
}

/// The cycle graph `C_k` with `∂(e_i) = {v_i, v_{i+1}}`, indices modulo `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleGraph {
    k: usize,
    graph: Graph,
}

impl CycleGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Tail and head of edge `e`: `(e, e + 1 mod k)`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.graph.edges[e]
    }
}

impl AsRef<Graph> for CycleGraph {
    fn as_ref(&self) -> &Graph {
        &self.graph
    }
}

pub fn make_cycle(k: usize) -> Result<CycleGraph> {
    if k < 2 {
        return Err(Error::invalid(format!("cycle graph needs k >= 2, got {k}")));
    }
    let edges = (0..k).map(|i| (i, (i + 1) % k)).collect();
    Ok(CycleGraph {
        k,
        graph: Graph::new(k, edges)?,
    })
}

/// An anchor set `K` together with the occupancy threshold `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorSpec {
    pub anchors: BTreeSet<usize>,
    pub q: usize,
}

impl AnchorSpec {
    pub fn new(anchors: impl IntoIterator<Item = usize>, q: usize) -> Self {
        AnchorSpec {
            anchors: anchors.into_iter().collect(),
            q,
        }
    }

    /// Every vertex of `g` is an anchor.
    pub fn all_vertices(g: &Graph, q: usize) -> Self {
        Self::new(0..g.vertex_count(), q)
    }

    pub fn k(&self) -> usize {
        self.anchors.len()
    }

    /// Checks `K ⊆ V(g)` and `q ≤ |K|`.
    pub fn check_against(&self, g: &Graph) -> Result<()> {
        if let Some(&v) = self.anchors.iter().find(|&&v| v >= g.vertex_count()) {
            return Err(Error::invalid(format!("anchor {v} is not a vertex of the graph")));
        }
        if self.q > self.anchors.len() {
            return Err(Error::invalid(format!(
                "q = {} exceeds the number of anchors {}",
                self.q,
                self.anchors.len()
            )));
        }
        Ok(())
    }
}

/// A hypothesis of the Euler characteristic formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Connected,
    NotATree,
    AnchorsInGraph,
    AnchorsNonEmpty,
    QPositive,
    QAtMostAnchors,
    NAtLeastQ,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::Connected => "graph is not connected",
            Hypothesis::NotATree => "graph is a tree",
            Hypothesis::AnchorsInGraph => "anchor set is not a subset of the vertices",
            Hypothesis::AnchorsNonEmpty => "anchor set is empty",
            Hypothesis::QPositive => "q must be positive",
            Hypothesis::QAtMostAnchors => "q exceeds the number of anchors",
            Hypothesis::NAtLeastQ => "n is smaller than q",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Hypothesis),
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            Verdict::Accept => Ok(()),
            Verdict::Reject(h) => Err(Error::Hypothesis(h)),
        }
    }
}

/// Checks the hypotheses under which the closed-form Euler characteristic holds.
/// The first violated hypothesis, in declaration order of [`Hypothesis`], is reported.
pub fn validate_for_euler(g: &Graph, a: &AnchorSpec, n: usize) -> Verdict {
    let checks = [
        (Hypothesis::Connected, g.is_connected()),
        // a connected graph is a tree exactly when |E| = |V| - 1
        (Hypothesis::NotATree, g.edge_count() >= g.vertex_count()),
        (
            Hypothesis::AnchorsInGraph,
            a.anchors.iter().all(|&v| v < g.vertex_count()),
        ),
        (Hypothesis::AnchorsNonEmpty, !a.anchors.is_empty()),
        (Hypothesis::QPositive, a.q >= 1),
        (Hypothesis::QAtMostAnchors, a.q <= a.anchors.len()),
        (Hypothesis::NAtLeastQ, n >= a.q),
    ];
    checks
        .into_iter()
        .find(|&(_, ok)| !ok)
        .map_or(Verdict::Accept, |(h, _)| Verdict::Reject(h))
}

/// The graph input file: `{"vertices": α, "edges": [[u,v], ...], "anchors": [ids], "q": int}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub anchors: Vec<usize>,
    pub q: usize,
}

impl GraphFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn graph(&self) -> Result<Graph> {
        Graph::new(self.vertices, self.edges.iter().map(|&[u, v]| (u, v)).collect())
    }

    pub fn anchor_spec(&self) -> AnchorSpec {
        AnchorSpec::new(self.anchors.iter().copied(), self.q)
    }
}
