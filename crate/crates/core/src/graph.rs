//! The Grünbaum graph and the path searches that turn it into a dither sequence.
//!
//! A dither sequence is read off the graph in two passes. A Hamiltonian path
//! fixes a labeling (vertices are renumbered in visit order); a second
//! traversal that only uses the edges left over by the first one then lists
//! the relabeled vertices in a scrambled order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::interleaver::DitherSequence;
use crate::{Error, Result};

/// Undirected simple graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl SimpleGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range endpoints.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Structure(format!(
                    "edge ({u}, {v}) outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::Structure(format!("self-loop at vertex {u}")));
            }
            let key = (u.min(v), u.max(v));
            if !set.insert(key) {
                return Err(Error::Structure(format!("duplicate edge ({}, {})", key.0, key.1)));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            vertex_count,
            edges: set,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// One `u v` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the format written by [`SimpleGraph::to_edge_list`]. Blank lines and
    /// `#` comments are skipped; the vertex count is one past the largest index.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<usize> {
                parts
                    .next()
                    .ok_or_else(|| Error::Parse {
                        line: idx + 1,
                        msg: "expected `u v`".into(),
                    })?
                    .parse()
                    .map_err(|e| Error::Parse {
                        line: idx + 1,
                        msg: format!("{e}"),
                    })
            };
            let u = next()?;
            let v = next()?;
            edges.push((u, v));
        }
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(n, &edges)
    }
}

/// Edges of the Grünbaum graph. Labels follow the Hamiltonian path
/// 0-1-2-...-24, so the path edges are `(i, i + 1)`; the other 26 edges form
/// the residual graph traversed to produce the Gr25 dither sequence.
const GRUENBAUM_EDGES: [(usize, usize); 50] = [
    (0, 1), (0, 5), (0, 18), (0, 21), (1, 2), (1, 15), (1, 24), (2, 3), (2, 8), (2, 22),
    (3, 4), (3, 16), (3, 19), (4, 5), (4, 9), (4, 12), (5, 6), (5, 14), (6, 7), (6, 11),
    (6, 16), (7, 8), (7, 20), (7, 24), (8, 9), (8, 14), (9, 10), (9, 21), (10, 11), (10, 15),
    (10, 23), (11, 12), (11, 18), (12, 13), (12, 20), (13, 14), (13, 17), (13, 22), (14, 15),
    (15, 16), (16, 17), (17, 18), (17, 24), (18, 19), (19, 20), (19, 23), (20, 21), (21, 22),
    (22, 23), (23, 24),
];

/// The 25-vertex, 4-regular, girth-5 Grünbaum graph.
pub fn gruenbaum_graph() -> SimpleGraph {
    let g = SimpleGraph::new(25, &GRUENBAUM_EDGES).expect("embedded edge list is simple");
    debug_assert!({
        let r = validate_graph(&g);
        r.regular_degree == Some(4) && r.girth == Some(5) && r.edge_count == 50
    });
    g
}

/// Structural summary of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    /// degree -> number of vertices with that degree
    pub degree_histogram: BTreeMap<usize, usize>,
    /// `Some(d)` when every vertex has degree `d`.
    pub regular_degree: Option<usize>,
    /// Length of the shortest cycle, `None` for a forest.
    pub girth: Option<usize>,
}

/// Degree histogram plus exact girth (BFS from every vertex).
pub fn validate_graph(g: &SimpleGraph) -> PropertyReport {
    let mut degree_histogram = BTreeMap::new();
    for v in 0..g.vertex_count() {
        *degree_histogram.entry(g.degree(v)).or_insert(0) += 1;
    }
    let regular_degree = if degree_histogram.len() == 1 {
        degree_histogram.keys().next().copied()
    } else {
        None
    };
    PropertyReport {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        degree_histogram,
        regular_degree,
        girth: girth(g),
    }
}

fn girth(g: &SimpleGraph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// An ordered walk through adjacent vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPath {
    pub vertices: Vec<usize>,
}

impl VertexPath {
    /// Consecutive vertices are adjacent in `g`.
    pub fn is_walk_in(&self, g: &SimpleGraph) -> bool {
        self.vertices.iter().all(|&v| v < g.vertex_count())
            && self.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }

    /// A walk that visits every vertex of `g` exactly once.
    pub fn is_hamiltonian_in(&self, g: &SimpleGraph) -> bool {
        if self.vertices.len() != g.vertex_count() || !self.is_walk_in(g) {
            return false;
        }
        let mut seen = vec![false; g.vertex_count()];
        self.vertices.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// Edges used by the walk, normalized to `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

/// Depth-first backtracking over neighbors in ascending order. `visit` is
/// called for every Hamiltonian path found; returning `false` stops the search.
fn search_hamiltonian(g: &SimpleGraph, start: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    fn step(
        g: &SimpleGraph,
        path: &mut Vec<usize>,
        seen: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if path.len() == g.vertex_count() {
            return visit(path);
        }
        let last = *path.last().expect("path starts non-empty");
        for &w in g.neighbors(last) {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            path.push(w);
            let keep_going = step(g, path, seen, visit);
            path.pop();
            seen[w] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }

    if start >= g.vertex_count() {
        return;
    }
    let mut seen = vec![false; g.vertex_count()];
    seen[start] = true;
    let mut path = vec![start];
    step(g, &mut path, &mut seen, visit);
}

/// First Hamiltonian path from `start` in ascending-neighbor DFS order.
pub fn find_hamiltonian_path(g: &SimpleGraph, start: usize) -> Option<VertexPath> {
    let mut found = None;
    search_hamiltonian(g, start, &mut |p| {
        found = Some(p.to_vec());
        false
    });
    found.map(|vertices| VertexPath { vertices })
}

/// Every Hamiltonian path from `start`, in DFS discovery order.
pub fn all_hamiltonian_paths(g: &SimpleGraph, start: usize) -> Vec<VertexPath> {
    let mut out = Vec::new();
    search_hamiltonian(g, start, &mut |p| {
        out.push(VertexPath { vertices: p.to_vec() });
        true
    });
    out
}

/// The graph of edges not used by `ham`, with vertices relabeled by their
/// position along `ham`.
pub fn residual_graph(g: &SimpleGraph, ham: &VertexPath) -> Result<SimpleGraph> {
    if !ham.is_hamiltonian_in(g) {
        return Err(Error::Structure("path is not Hamiltonian in the host graph".into()));
    }
    let mut label = vec![0usize; g.vertex_count()];
    for (pos, &v) in ham.vertices.iter().enumerate() {
        label[v] = pos;
    }
    let used: BTreeSet<(usize, usize)> = ham.edges().collect();
    let rest: Vec<(usize, usize)> = g
        .edges()
        .filter(|e| !used.contains(e))
        .map(|(u, v)| (label[u], label[v]))
        .collect();
    SimpleGraph::new(g.vertex_count(), &rest)
}

/// Every traversal of the residual graph (all start vertices, ascending), as
/// relabeled vertex sequences.
pub fn residual_traversals(g: &SimpleGraph, ham: &VertexPath) -> Result<Vec<Vec<usize>>> {
    let residual = residual_graph(g, ham)?;
    Ok((0..residual.vertex_count())
        .flat_map(|s| all_hamiltonian_paths(&residual, s))
        .map(|p| p.vertices)
        .collect())
}

/// Relabels by `ham` and returns the first traversal of the residual graph,
/// trying start vertices in ascending order. `Ok(None)` when none exists.
pub fn derive_dither_sequence(g: &SimpleGraph, ham: &VertexPath) -> Result<Option<DitherSequence>> {
    let residual = residual_graph(g, ham)?;
    for start in 0..residual.vertex_count() {
        if let Some(path) = find_hamiltonian_path(&residual, start) {
            return DitherSequence::new(path.vertices).map(Some);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> SimpleGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        SimpleGraph::new(n, &edges).unwrap()
    }

    #[test]
    fn gruenbaum_properties() {
        let g = gruenbaum_graph();
        let r = validate_graph(&g);
        assert_eq!(r.vertex_count, 25);
        assert_eq!(r.edge_count, 50);
        assert_eq!(r.regular_degree, Some(4));
        assert_eq!(r.girth, Some(5));
    }

    #[test]
    fn triangle_and_path_girth() {
        let tri = SimpleGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let r = validate_graph(&tri);
        assert_eq!(r.girth, Some(3));
        assert_eq!(r.regular_degree, Some(2));
        assert_eq!(validate_graph(&path_graph(3)).girth, None);
    }

    #[test]
    fn malformed_graphs_rejected() {
        assert!(matches!(SimpleGraph::new(2, &[(1, 1)]), Err(Error::Structure(_))));
        assert!(matches!(
            SimpleGraph::new(2, &[(0, 1), (1, 0)]),
            Err(Error::Structure(_))
        ));
        assert!(SimpleGraph::new(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn hamiltonian_small_cases() {
        let p = find_hamiltonian_path(&path_graph(3), 0).unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2]);
        let star = SimpleGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(find_hamiltonian_path(&star, 1).is_none());
    }

    #[test]
    fn gruenbaum_hamiltonian_path_uses_24_edges() {
        let g = gruenbaum_graph();
        for start in 0..25 {
            if let Some(p) = find_hamiltonian_path(&g, start) {
                assert!(p.is_hamiltonian_in(&g));
                assert_eq!(p.edges().count(), 24);
                let residual = residual_graph(&g, &p).unwrap();
                assert_eq!(residual.edge_count(), 26);
                let degree_sum: usize = (0..25).map(|v| residual.degree(v)).sum();
                assert_eq!(degree_sum, 52);
            }
        }
    }

    #[test]
    fn labeling_path_is_identity() {
        let g = gruenbaum_graph();
        let p = find_hamiltonian_path(&g, 0).unwrap();
        assert_eq!(p.vertices, (0..25).collect::<Vec<_>>());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = gruenbaum_graph();
        let back = SimpleGraph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(back, g);
        assert!(SimpleGraph::from_edge_list("0 x\n").is_err());
    }

    #[test]
    fn residual_rejects_non_hamiltonian() {
        let g = gruenbaum_graph();
        let bad = VertexPath { vertices: vec![0, 1, 2] };
        assert!(residual_graph(&g, &bad).is_err());
    }
}
