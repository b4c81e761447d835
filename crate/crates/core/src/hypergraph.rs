//! r-uniform hypergraphs with co-degree queries.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "HypergraphJson", into = "HypergraphJson")]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: usize,
    r: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<HypergraphJson> for Hypergraph {
    type Error = Error;

    fn try_from(j: HypergraphJson) -> Result<Hypergraph> {
        Hypergraph::new(j.n, j.r, j.edges)
    }
}

impl From<Hypergraph> for HypergraphJson {
    fn from(h: Hypergraph) -> HypergraphJson {
        HypergraphJson { n: h.n, r: h.r, edges: h.edges }
    }
}

impl Hypergraph {
    /// Every edge must have exactly `r` distinct in-range vertices and no
    /// edge may repeat.
    pub fn new(n: usize, r: usize, edges: Vec<Vec<usize>>) -> Result<Hypergraph> {
        if r == 0 {
            return Err(Error::param("uniformity must be at least 1"));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.len() != r {
                return Err(Error::param(format!("edge {e:?} has size {} but r={r}", e.len())));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::param(format!("edge {e:?} repeats a vertex")));
            }
            if e.last().is_some_and(|&v| v >= n) {
                return Err(Error::param(format!("edge {e:?} out of range for n={n}")));
            }
            if !seen.insert(e.clone()) {
                return Err(Error::param(format!("duplicate edge {e:?}")));
            }
            out.push(e);
        }
        Ok(Hypergraph { n, r, edges: out })
    }

    pub fn from_graph(g: &Graph) -> Hypergraph {
        Hypergraph {
            n: g.n(),
            r: 2,
            edges: g.edges().map(|(u, v)| vec![u, v]).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|E| / |V|`.
    pub fn density(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.edges.len() as f64 / self.n as f64
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// `Δ_i`: the largest number of edges sharing a common `i`-set.
    pub fn max_codegree(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.r {
            return Err(Error::param(format!("co-degree index {i} outside 1..={}", self.r)));
        }
        if i == 1 {
            return Ok(self.degrees().into_iter().max().unwrap_or(0));
        }
        if i == self.r {
            return Ok(usize::from(!self.edges.is_empty()));
        }
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut buf = Vec::with_capacity(i);
        for e in &self.edges {
            for_each_subset(e, i, 0, &mut buf, &mut |t| {
                *counts.entry(t.to_vec()).or_default() += 1;
            });
        }
        Ok(counts.into_values().max().unwrap_or(0))
    }

    /// True if `s` contains no edge entirely.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        !self.edges.iter().any(|e| e.iter().all(|&v| s.contains(v)))
    }

    /// The sub-hypergraph on the same vertices keeping only the given edges.
    pub fn with_edges(&self, idx: &[usize]) -> Hypergraph {
        Hypergraph {
            n: self.n,
            r: self.r,
            edges: idx.iter().map(|&i| self.edges[i].clone()).collect(),
        }
    }

    /// Edges lying inside `s`.
    pub fn induced_edge_count(&self, s: &VertexSet) -> usize {
        self.edges.iter().filter(|e| e.iter().all(|&v| s.contains(v))).count()
    }
}

fn for_each_subset(items: &[usize], size: usize, start: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if buf.len() == size {
        f(buf);
        return;
    }
    let need = size - buf.len();
    for j in start..=items.len() - need {
        buf.push(items[j]);
        for_each_subset(items, size, j + 1, buf, f);
        buf.pop();
    }
}
