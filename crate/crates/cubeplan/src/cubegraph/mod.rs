//! Cube-like graph machinery: difference families induced by bit-vector
//! node assignments, edge colorings, exact chromatic index, optimal
//! assignments, and compilation of graphs into grounded action models.
//!
//! A graph is cube-like under an assignment when every edge's bit difference
//! falls in a small family D. Undirected edges contribute XOR masks; the
//! directed variant carries (add-set, delete-set) pairs and coincides with
//! precondition-free STRIPS models.

mod assign;
mod chromatic;
mod compile;

pub use assign::{min_diff_assignment, verify_bound, BoundReport, SearchCaps};
pub use chromatic::chromatic_index;
pub use compile::{compile_conditional, compile_strips, StripsCompilation};

use serde::Deserialize;
use thiserror::Error;

use crate::bits::BitState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self loops are not allowed (node {node})")]
    SelfLoop { node: usize },
    #[error("assignment covers {found} nodes, graph has {expected}")]
    AssignmentSizeMismatch { found: usize, expected: usize },
    #[error("assignment is not injective: nodes {a} and {b} share a code")]
    NotInjective { a: usize, b: usize },
    #[error("operation requires an undirected graph")]
    DirectedUnsupported,
    #[error("{what} exceeds cap ({value} > {cap})")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("{num_bits} bits cannot injectively encode {n} nodes")]
    Infeasible { n: usize, num_bits: usize },
    #[error("coloring is not proper at edges {a:?} and {b:?}")]
    ImproperColoring { a: (usize, usize), b: (usize, usize) },
    #[error("graph text: {0}")]
    Parse(String),
}

/// A simple graph on nodes `0..n`, undirected or directed. Undirected edges
/// are stored as ordered `(min, max)` pairs; the edge list is sorted and
/// duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn undirected(n: usize) -> Self {
        Graph { n, directed: false, edges: Vec::new() }
    }

    pub fn directed(n: usize) -> Self {
        Graph { n, directed: true, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::NodeOutOfRange { node: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::NodeOutOfRange { node: v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop { node: u });
        }
        let e = if self.directed || u < v { (u, v) } else { (v, u) };
        if let Err(pos) = self.edges.binary_search(&e) {
            self.edges.insert(pos, e);
        }
        Ok(())
    }

    pub fn with_edges(n: usize, edges: &[(usize, usize)], directed: bool) -> Result<Self, GraphError> {
        let mut g = if directed { Graph::directed(n) } else { Graph::undirected(n) };
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Maximum degree (undirected) or maximum of in/out degree (directed).
    pub fn max_degree(&self) -> usize {
        let mut out_deg = vec![0usize; self.n];
        let mut in_deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            out_deg[u] += 1;
            in_deg[v] += 1;
            if !self.directed {
                out_deg[v] += 1;
                in_deg[u] += 1;
            }
        }
        out_deg.into_iter().chain(in_deg).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Accepts `{"n": 4, "edges": [[0,1],[1,2]], "directed": false}`.
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        #[derive(Deserialize)]
        struct Spec {
            n: usize,
            edges: Vec<(usize, usize)>,
            #[serde(default)]
            directed: bool,
        }
        let spec: Spec = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
        Graph::with_edges(spec.n, &spec.edges, spec.directed)
    }

    /// Minimal DOT import: `graph { 0 -- 1; ... }` or `digraph { 0 -> 1; }`
    /// with integer node ids. Node count is one past the largest id seen.
    pub fn from_dot(text: &str) -> Result<Self, GraphError> {
        let body_start = text.find('{').ok_or_else(|| GraphError::Parse("missing '{'".into()))?;
        let head = &text[..body_start];
        let directed = head.contains("digraph");
        if !directed && !head.contains("graph") {
            return Err(GraphError::Parse("expected 'graph' or 'digraph'".into()));
        }
        let body_end = text.rfind('}').ok_or_else(|| GraphError::Parse("missing '}'".into()))?;
        let body = &text[body_start + 1..body_end];
        let arrow = if directed { "->" } else { "--" };
        let mut edges = Vec::new();
        let mut max_node = None::<usize>;
        for raw in body.split([';', '\n']) {
            let stmt = raw.trim();
            if stmt.is_empty() || stmt.starts_with("//") {
                continue;
            }
            let parse_node = |s: &str| -> Result<usize, GraphError> {
                s.trim().parse().map_err(|_| GraphError::Parse(format!("bad node id {s:?}")))
            };
            if let Some((left, right)) = stmt.split_once(arrow) {
                let u = parse_node(left)?;
                let v = parse_node(right)?;
                max_node = Some(max_node.unwrap_or(0).max(u).max(v));
                edges.push((u, v));
            } else {
                let u = parse_node(stmt)?;
                max_node = Some(max_node.unwrap_or(0).max(u));
            }
        }
        let n = max_node.map_or(0, |m| m + 1);
        Graph::with_edges(n, &edges, directed)
    }
}

/// An injective map from graph nodes to F-bit codes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub num_bits: usize,
    pub codes: Vec<BitState>,
}

impl Assignment {
    pub fn new(num_bits: usize, codes: Vec<BitState>) -> Result<Self, GraphError> {
        let a = Assignment { num_bits, codes };
        a.check_injective()?;
        Ok(a)
    }

    pub fn check_injective(&self) -> Result<(), GraphError> {
        for (i, ci) in self.codes.iter().enumerate() {
            for (j, cj) in self.codes.iter().enumerate().skip(i + 1) {
                if ci == cj {
                    return Err(GraphError::NotInjective { a: i, b: j });
                }
            }
        }
        Ok(())
    }

    pub fn identity_hypercube(num_bits: usize) -> Self {
        let codes = (0..1usize << num_bits)
            .map(|v| BitState::from_bools(&(0..num_bits).map(|b| v >> b & 1 == 1).collect::<Vec<_>>()))
            .collect();
        Assignment { num_bits, codes }
    }
}

/// The distinct per-edge differences induced by an assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffFamily {
    /// Sorted distinct XOR masks of undirected edges.
    Undirected(Vec<BitState>),
    /// Sorted distinct (add, delete) mask pairs of directed edges.
    Directed(Vec<(BitState, BitState)>),
}

impl DiffFamily {
    pub fn len(&self) -> usize {
        match self {
            DiffFamily::Undirected(d) => d.len(),
            DiffFamily::Directed(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_assignment(graph: &Graph, assignment: &Assignment) -> Result<(), GraphError> {
    if assignment.codes.len() != graph.num_nodes() {
        return Err(GraphError::AssignmentSizeMismatch {
            found: assignment.codes.len(),
            expected: graph.num_nodes(),
        });
    }
    assignment.check_injective()
}

/// Per-edge differences: XOR masks for undirected graphs, (post∖pre, pre∖post)
/// pairs for directed ones.
pub fn diff_family(graph: &Graph, assignment: &Assignment) -> Result<DiffFamily, GraphError> {
    check_assignment(graph, assignment)?;
    if graph.is_directed() {
        let mut diffs: Vec<(BitState, BitState)> = graph
            .edges()
            .iter()
            .map(|&(u, v)| directed_diff(&assignment.codes[u], &assignment.codes[v]))
            .collect();
        diffs.sort();
        diffs.dedup();
        Ok(DiffFamily::Directed(diffs))
    } else {
        let mut diffs: Vec<BitState> = graph
            .edges()
            .iter()
            .map(|&(u, v)| assignment.codes[u].xor(&assignment.codes[v]))
            .collect();
        diffs.sort();
        diffs.dedup();
        Ok(DiffFamily::Undirected(diffs))
    }
}

/// The (add, delete) pair turning `from` into `to`.
pub fn directed_diff(from: &BitState, to: &BitState) -> (BitState, BitState) {
    (to.and_not(from), from.and_not(to))
}

/// A proper edge coloring, stored per edge in `graph.edges()` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub colors: Vec<usize>,
    pub num_colors: usize,
}

impl EdgeColoring {
    /// Verifies that edges sharing an endpoint never share a color.
    pub fn check_proper(&self, graph: &Graph) -> Result<(), GraphError> {
        let edges = graph.edges();
        for (i, &(a1, a2)) in edges.iter().enumerate() {
            for (j, &(b1, b2)) in edges.iter().enumerate().skip(i + 1) {
                let adjacent = a1 == b1 || a1 == b2 || a2 == b1 || a2 == b2;
                if adjacent && self.colors[i] == self.colors[j] {
                    return Err(GraphError::ImproperColoring { a: (a1, a2), b: (b1, b2) });
                }
            }
        }
        Ok(())
    }
}

/// Colors each edge by the rank of its XOR difference in the sorted family.
/// Injectivity of the assignment makes this proper: two edges at a shared
/// node have distinct other-endpoints, hence distinct differences.
pub fn coloring_from_diffs(graph: &Graph, assignment: &Assignment) -> Result<EdgeColoring, GraphError> {
    if graph.is_directed() {
        return Err(GraphError::DirectedUnsupported);
    }
    check_assignment(graph, assignment)?;
    let DiffFamily::Undirected(family) = diff_family(graph, assignment)? else { unreachable!() };
    let colors = graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let d = assignment.codes[u].xor(&assignment.codes[v]);
            family.binary_search(&d).expect("edge difference is in its own family")
        })
        .collect();
    Ok(EdgeColoring { colors, num_colors: family.len() })
}
