//! Simple undirected graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency is kept both as sorted lists and as bitsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
    nbr: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        Graph::from_edges(j.n, &j.edges)
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> GraphJson {
        GraphJson { n: g.n, edges: g.edges().collect() }
    }
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        let mut nbr = vec![VertexSet::new(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param(format!("edge ({u}, {v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::param(format!("self-loop at vertex {u}")));
            }
            if !nbr[u].insert(v) {
                return Err(Error::param(format!("duplicate edge ({u}, {v})")));
            }
            nbr[v].insert(u);
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, m: edges.len(), adj, nbr })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_edges(n, &[]).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.nbr[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.nbr[u].contains(v)
    }

    /// `2m / n`, zero for the null graph.
    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            2.0 * self.m as f64 / self.n as f64
        }
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// The common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|v| self.nbr[v].is_disjoint(s))
    }

    /// Number of edges with both endpoints in `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        s.iter().map(|v| self.nbr[v].intersection_len(s)).sum::<usize>() / 2
    }

    /// `N(S)`: every vertex adjacent to some member of `s`.
    pub fn neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        for v in s {
            out.union_with(&self.nbr[v]);
        }
        out
    }

    /// The subgraph induced by `s`, relabelled to `0..|s|` in increasing id
    /// order, together with the map back to original ids.
    pub fn induced_subgraph(&self, s: &VertexSet) -> (Graph, Vec<usize>) {
        let map = s.to_vec();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in map.iter().enumerate() {
            for &u in &self.adj[v] {
                let j = index[u];
                if j != usize::MAX && j > i {
                    edges.push((i, j));
                }
            }
        }
        (Graph::from_edges(map.len(), &edges).unwrap(), map)
    }

    /// Checks that `colors` is a proper coloring.
    pub fn is_proper_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.n && self.edges().all(|(u, v)| colors[u] != colors[v])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen_is_cubic() {
        let g = Graph::petersen();
        assert_eq!(g.m(), 15);
        assert_eq!(g.regular_degree(), Some(3));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn induced_counts() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.induced_edge_count(&VertexSet::from_iter(4, [0, 1, 2])), 3);
        let (sub, map) = k4.induced_subgraph(&VertexSet::from_iter(4, [1, 3]));
        assert_eq!(sub.m(), 1);
        assert_eq!(map, vec![1, 3]);
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::cycle(5);
        let s = serde_json::to_string(&g).unwrap();
        let h: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, h);
    }
}
