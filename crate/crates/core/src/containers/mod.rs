//! Fingerprints and containers for independent sets.

mod hyper;
mod regular;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::Graph;
use crate::vertex_set::VertexSet;

pub use hyper::{
    build_almost_regular_collection, build_hypergraph_collection, build_hypergraph_collection_filtered,
    check_codegree_conditions, AlmostRegularOptions, CodegreeCheck, CodegreeReport, HyperOptions,
};
pub use regular::{
    b_set, build_regular_collection, container_of, fallback_collection, fingerprint, fingerprint_fixed_points,
    RegularOptions,
};

/// Slack for comparing integer counts against real thresholds.
pub(crate) const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContainerParams {
    pub epsilon: f64,
    /// Average degree used in the thresholds.
    pub d: f64,
}

impl ContainerParams {
    pub fn new(epsilon: f64, d: f64) -> crate::Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(crate::Error::param(format!("epsilon {epsilon} outside (0, 1/2)")));
        }
        Ok(ContainerParams { epsilon, d })
    }

    pub fn for_graph(g: &Graph, epsilon: f64) -> crate::Result<Self> {
        Self::new(epsilon, g.average_degree())
    }

    /// `q = 1/(εd)`.
    pub fn q(&self) -> f64 {
        1.0 / (self.epsilon * self.d)
    }

    pub fn fingerprint_threshold(&self) -> f64 {
        self.epsilon * self.d
    }

    pub fn b_threshold(&self) -> f64 {
        (1.0 - self.epsilon) * self.d
    }

    /// True when `d ≤ 2/ε²`, below which the size bound is not useful.
    pub fn is_low_degree(&self) -> bool {
        self.d <= 2.0 / (self.epsilon * self.epsilon)
    }

    /// `(1/(2−ε) + q)·n`.
    pub fn container_bound(&self, n: usize) -> f64 {
        (1.0 / (2.0 - self.epsilon) + self.q()) * n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HypergraphContainerParams {
    pub p: f64,
    /// Co-degree constant.
    pub c: f64,
    pub r: usize,
    pub eps_edges: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContainerSource {
    RegularGraph,
    AlmostRegularGraph,
    Hypergraph,
    /// All ⌊n/2⌋-subsets, for low-degree graphs in analysis mode.
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CollectionParams {
    Graph(ContainerParams),
    Hypergraph(HypergraphContainerParams),
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainerCollection {
    pub n: usize,
    /// Distinct containers in canonical order.
    pub containers: Vec<VertexSet>,
    /// Each enumerated fingerprint with the index of its container.
    #[serde(skip)]
    pub fingerprints: Vec<(VertexSet, usize)>,
    pub params: CollectionParams,
    pub source: ContainerSource,
    pub fingerprint_cap: usize,
    pub max_fingerprint: usize,
    pub max_container: usize,
}

impl ContainerCollection {
    pub(crate) fn assemble(
        n: usize,
        pairs: Vec<(VertexSet, VertexSet)>,
        params: CollectionParams,
        source: ContainerSource,
        fingerprint_cap: usize,
    ) -> Self {
        let mut containers: Vec<VertexSet> = pairs.iter().map(|(_, c)| c.clone()).collect();
        containers.sort();
        containers.dedup();
        let mut fingerprints: Vec<(VertexSet, usize)> = pairs
            .into_iter()
            .map(|(f, c)| {
                let i = containers.binary_search(&c).unwrap();
                (f, i)
            })
            .collect();
        fingerprints.sort();
        let max_fingerprint = fingerprints.iter().map(|(f, _)| f.len()).max().unwrap_or(0);
        let max_container = containers.iter().map(VertexSet::len).max().unwrap_or(0);
        ContainerCollection {
            n,
            containers,
            fingerprints,
            params,
            source,
            fingerprint_cap,
            max_fingerprint,
            max_container,
        }
    }

    pub fn len(&self) -> usize {
        self.containers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.containers.is_empty()
    }

    /// Some container holding `s`, if any.
    pub fn covering(&self, s: &VertexSet) -> Option<&VertexSet> {
        self.containers.iter().find(|c| s.is_subset(c))
    }

    /// Drops containers strictly inside another one.
    pub fn maximal(&self) -> Vec<VertexSet> {
        maximal_sets(&self.containers)
    }

    pub fn report(&self, g: Option<&Graph>) -> CollectionReport {
        let mut sizes = BTreeMap::new();
        for c in &self.containers {
            *sizes.entry(c.len()).or_insert(0) += 1;
        }
        let sparsity = g.map(|g| {
            let mut h = BTreeMap::new();
            for c in &self.containers {
                *h.entry(container_sparsity(g, c)).or_insert(0) += 1;
            }
            h
        });
        CollectionReport {
            source: self.source,
            params: self.params.clone(),
            n: self.n,
            containers: self.containers.len(),
            fingerprints: self.fingerprints.len(),
            fingerprint_cap: self.fingerprint_cap,
            max_fingerprint: self.max_fingerprint,
            max_container: self.max_container,
            size_histogram: sizes,
            sparsity_histogram: sparsity,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CollectionReport {
    pub source: ContainerSource,
    pub params: CollectionParams,
    pub n: usize,
    pub containers: usize,
    pub fingerprints: usize,
    pub fingerprint_cap: usize,
    pub max_fingerprint: usize,
    pub max_container: usize,
    pub size_histogram: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparsity_histogram: Option<BTreeMap<usize, usize>>,
}

/// Result of a builder that may decline low-degree input.
#[derive(Clone, Debug)]
pub enum Built<T> {
    Collection(T),
    LowDegree { degree: f64, threshold: f64 },
}

impl<T> Built<T> {
    pub fn collection(self) -> Option<T> {
        match self {
            Built::Collection(c) => Some(c),
            Built::LowDegree { .. } => None,
        }
    }

    pub fn is_low_degree(&self) -> bool {
        matches!(self, Built::LowDegree { .. })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildMode {
    /// Decline with a low-degree flag below the degree threshold.
    #[default]
    Auto,
    /// Build containers regardless of degree.
    Forced,
    /// Like `Auto`, but return the ⌊n/2⌋-subset collection instead of the flag.
    Analysis,
}

/// Edges of `g` with both ends in `c`.
pub fn container_sparsity(g: &Graph, c: &VertexSet) -> usize {
    g.induced_edge_count(c)
}

pub fn maximal_sets(sets: &[VertexSet]) -> Vec<VertexSet> {
    let mut by_size: Vec<&VertexSet> = sets.iter().collect();
    by_size.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<VertexSet> = Vec::new();
    for s in by_size {
        if !kept.iter().any(|k| s.is_subset(k)) {
            kept.push(s.clone());
        }
    }
    kept.sort();
    kept
}
