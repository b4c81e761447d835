//! Partition containers: collections where any `k` independent sets split
//! into two groups, each group lying inside one container.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::containers::{
    build_almost_regular_collection, build_regular_collection, maximal_sets, AlmostRegularOptions, BuildMode, Built,
    CollectionReport, ContainerCollection, RegularOptions,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementPart {
    pub indices: Vec<usize>,
    pub union: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementResult {
    pub parts: Vec<RefinementPart>,
    /// Largest part union over the universe size.
    pub gamma: f64,
    /// Matching size, for matching-based refinements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching: Option<usize>,
}

impl RefinementResult {
    /// Builds parts from index groups, dropping empty groups.
    pub fn from_groups(universe: usize, subsets: &[VertexSet], groups: Vec<Vec<usize>>) -> Self {
        let parts: Vec<RefinementPart> = groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|indices| {
                let mut union = VertexSet::new(universe);
                for &i in &indices {
                    union.union_with(&subsets[i]);
                }
                RefinementPart { indices, union }
            })
            .collect();
        let max = parts.iter().map(|p| p.union.len()).max().unwrap_or(0);
        let gamma = if universe == 0 { 0.0 } else { max as f64 / universe as f64 };
        RefinementResult { parts, gamma, matching: None }
    }

    /// Each index in `0..k` appears in exactly one part.
    pub fn is_partition_of(&self, k: usize) -> bool {
        let mut seen = vec![false; k];
        for p in &self.parts {
            for &i in &p.indices {
                if i >= k || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VennSplit {
    /// Indices `i` with `w_i = 1`.
    pub a: Vec<usize>,
    /// Indices `i` with `w_i = 0`.
    pub b: Vec<usize>,
    /// The chosen membership vector, bit `i` set when `w_i = 1`.
    pub w: u64,
    /// `|∩_{i∈A} V_i|`, with the empty intersection being the universe.
    pub intersection_a: usize,
    pub union_b: usize,
}

/// Splits subsets by the most common membership pattern of the universe.
///
/// Ties go to the numerically smallest pattern.
pub fn venn_refinement(n: usize, subsets: &[VertexSet]) -> VennSplit {
    let k = subsets.len();
    assert!((1..=63).contains(&k), "venn refinement needs 1..=63 subsets");
    let mut freq: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    for v in 0..n {
        let w = subsets.iter().enumerate().fold(0u64, |w, (i, s)| w | (s.contains(v) as u64) << i);
        *freq.entry(w).or_default() += 1;
    }
    let w = freq
        .iter()
        .max_by(|x, y| x.1.cmp(y.1).then_with(|| y.0.cmp(x.0)))
        .map(|(&w, _)| w)
        .unwrap_or(0);
    let a: Vec<usize> = (0..k).filter(|&i| w >> i & 1 == 1).collect();
    let b: Vec<usize> = (0..k).filter(|&i| w >> i & 1 == 0).collect();
    let mut inter = VertexSet::full(n);
    for &i in &a {
        inter.intersect_with(&subsets[i]);
    }
    let mut union = VertexSet::new(n);
    for &i in &b {
        union.union_with(&subsets[i]);
    }
    VennSplit { a, b, w, intersection_a: inter.len(), union_b: union.len() }
}

/// A maximal matching taken greedily in the given edge order.
pub fn greedy_matching(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut used = vec![false; n];
    let mut m = Vec::new();
    for &(u, v) in edges {
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            m.push((u, v));
        }
    }
    m
}

/// Edges of `g` inside none of the subsets.
pub fn uncovered_edges(g: &Graph, subsets: &[VertexSet]) -> Vec<(usize, usize)> {
    g.edges()
        .filter(|&(u, v)| !subsets.iter().any(|s| s.contains(u) && s.contains(v)))
        .collect()
}

/// Two-part refinement from a matching of edges lying inside no subset.
///
/// Each matched edge `(e0, e1)` with `e0 < e1` gets the vector
/// `ξ_i = [e0 ∈ V_i]`; for the most common vector `w`, the part
/// `{i : w_i = 0}` misses every such `e0` and `{i : w_i = 1}` misses every
/// such `e1`. Empty parts are omitted.
pub fn matching_refinement(g: &Graph, subsets: &[VertexSet]) -> Result<RefinementResult> {
    let k = subsets.len();
    assert!((1..=63).contains(&k), "matching refinement needs 1..=63 subsets");
    let free = uncovered_edges(g, subsets);
    if free.is_empty() {
        return Err(Error::RefinementUnavailable);
    }
    let m = greedy_matching(g.n(), &free);
    let mut freq: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    for &(e0, _) in &m {
        let xi = subsets.iter().enumerate().fold(0u64, |w, (i, s)| w | (s.contains(e0) as u64) << i);
        *freq.entry(xi).or_default() += 1;
    }
    let w = freq
        .iter()
        .max_by(|x, y| x.1.cmp(y.1).then_with(|| y.0.cmp(x.0)))
        .map(|(&w, _)| w)
        .unwrap();
    let zeros: Vec<usize> = (0..k).filter(|&i| w >> i & 1 == 0).collect();
    let ones: Vec<usize> = (0..k).filter(|&i| w >> i & 1 == 1).collect();
    let mut r = RefinementResult::from_groups(g.n(), subsets, vec![zeros, ones]);
    r.matching = Some(m.len());
    Ok(r)
}

#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionSource {
    Regular,
    AlmostRegular,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionContainerCollection {
    pub n: usize,
    pub k: usize,
    /// Slack in the size ceiling `(1−ε)n`.
    pub epsilon: f64,
    /// Slack the construction is stated with, when it differs from `epsilon`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_stated: Option<f64>,
    pub ceiling: usize,
    pub source: PartitionSource,
    #[serde(skip)]
    pub containers: Vec<VertexSet>,
    #[serde(skip)]
    maximal: Vec<VertexSet>,
    pub base: CollectionReport,
}

#[derive(Clone, Copy, Debug)]
pub struct PartitionOptions {
    pub mode: BuildMode,
    /// Degree below which `Auto` returns the low-degree flag.
    pub min_degree: Option<f64>,
    pub max_containers: usize,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        PartitionOptions { mode: BuildMode::Auto, min_degree: None, max_containers: 1 << 22 }
    }
}

impl PartitionOptions {
    pub fn forced() -> Self {
        PartitionOptions { mode: BuildMode::Forced, ..Default::default() }
    }
}

/// `ε = 2^{−(k+2)}` for the regular construction.
pub fn regular_epsilon(k: usize) -> f64 {
    0.5f64.powi(k as i32 + 2)
}

/// `d₀ = k·2^{2k+3}`.
pub fn regular_min_degree(k: usize) -> f64 {
    k as f64 * 2f64.powi(2 * k as i32 + 3)
}

/// `ε″ = 1/(C·2^{k+2})` for the almost-regular construction.
pub fn almost_regular_epsilon(k: usize, c: f64) -> f64 {
    1.0 / (c * 2f64.powi(k as i32 + 2))
}

/// Unions of at most `k` base sets with size at most `ceiling`, deduplicated
/// and sorted. Built level by level so each distinct union is extended once.
pub fn bounded_unions(base: &[VertexSet], k: usize, ceiling: usize, limit: usize) -> Result<Vec<VertexSet>> {
    let mut base: Vec<VertexSet> = base.iter().filter(|c| c.len() <= ceiling).cloned().collect();
    base.sort();
    base.dedup();
    let mut all: HashSet<VertexSet> = base.iter().cloned().collect();
    let mut frontier: Vec<VertexSet> = base.clone();
    for _ in 1..k {
        let next: HashSet<VertexSet> = frontier
            .par_iter()
            .fold(HashSet::new, |mut acc, u| {
                for b in &base {
                    if !b.is_subset(u) && u.union_len(b) <= ceiling {
                        let w = u.union(b);
                        if !all.contains(&w) {
                            acc.insert(w);
                        }
                    }
                }
                acc
            })
            .reduce(HashSet::new, |mut a, b| {
                if a.len() < b.len() {
                    return b.into_iter().chain(a).collect();
                }
                a.extend(b);
                a
            });
        if next.is_empty() {
            break;
        }
        frontier = next.iter().cloned().collect();
        all.extend(next);
        if all.len() > limit {
            return Err(Error::too_large("partition container collection", all.len(), limit));
        }
    }
    let mut v: Vec<VertexSet> = all.into_iter().collect();
    v.sort();
    Ok(v)
}

impl PartitionContainerCollection {
    fn new(
        g: &Graph,
        k: usize,
        epsilon: f64,
        epsilon_stated: Option<f64>,
        source: PartitionSource,
        base: &ContainerCollection,
        limit: usize,
    ) -> Result<Self> {
        let n = g.n();
        let ceiling = ((1.0 - epsilon) * n as f64 + 1e-9).floor() as usize;
        let containers = bounded_unions(&base.containers, k, ceiling, limit)?;
        let maximal = maximal_sets(&containers);
        Ok(PartitionContainerCollection {
            n,
            k,
            epsilon,
            epsilon_stated,
            ceiling,
            source,
            containers,
            maximal,
            base: base.report(Some(g)),
        })
    }

    pub fn len(&self) -> usize {
        self.containers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.containers.is_empty()
    }

    /// Inclusion-maximal containers.
    pub fn maximal(&self) -> &[VertexSet] {
        &self.maximal
    }

    fn covered(&self, s: &VertexSet) -> Option<usize> {
        if s.is_empty() && !self.maximal.is_empty() {
            return Some(0);
        }
        self.maximal.iter().filter(|c| s.is_subset(c)).map(VertexSet::len).min()
    }

    /// A split `(A, B)` of the tuple such that each group's union lies in a
    /// container, preferring the split with the smallest larger container.
    pub fn find_split(&self, sets: &[VertexSet]) -> Option<(Vec<usize>, Vec<usize>, usize)> {
        let k = sets.len();
        let mut best: Option<(Vec<usize>, Vec<usize>, usize)> = None;
        for mask in 0u64..1 << k {
            // A and B are interchangeable.
            if k > 0 && mask >> (k - 1) & 1 == 1 {
                continue;
            }
            let mut ua = VertexSet::new(self.n);
            let mut ub = VertexSet::new(self.n);
            for (i, s) in sets.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    ua.union_with(s);
                } else {
                    ub.union_with(s);
                }
            }
            let (Some(ca), Some(cb)) = (self.covered(&ua), self.covered(&ub)) else {
                continue;
            };
            let worst = ca.max(cb);
            if best.as_ref().is_none_or(|b| worst < b.2) {
                let a = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
                let b = (0..k).filter(|&i| mask >> i & 1 == 0).collect();
                best = Some((a, b, worst));
            }
        }
        best
    }

    /// Largest over the tuples of the best split's container size divided by
    /// `n`; `None` if some tuple has no covered split.
    pub fn worst_split_gamma(&self, tuples: &[Vec<VertexSet>]) -> Option<f64> {
        let mut worst = 0usize;
        for t in tuples {
            worst = worst.max(self.find_split(t)?.2);
        }
        Some(worst as f64 / self.n.max(1) as f64)
    }
}

/// Partition containers for a `d`-regular graph: unions of at most `k`
/// containers built with `ε′ = 2^{−(k+1)}`, of size at most `(1−ε)n` with
/// `ε = 2^{−(k+2)}`.
pub fn build_partition_collection_regular(
    g: &Graph,
    k: usize,
    opts: PartitionOptions,
) -> Result<Built<PartitionContainerCollection>> {
    if k == 0 {
        return Err(Error::param("k must be positive"));
    }
    let d = match g.regular_degree() {
        Some(d) => d as f64,
        None => return Err(Error::NotRegular { min: g.min_degree(), max: g.max_degree() }),
    };
    let threshold = opts.min_degree.unwrap_or_else(|| regular_min_degree(k));
    if d == 0.0 || (d < threshold && opts.mode != BuildMode::Forced) {
        return Ok(Built::LowDegree { degree: d, threshold });
    }
    let eps_base = 0.5f64.powi(k as i32 + 1);
    let base = match build_regular_collection(g, eps_base, RegularOptions::forced())? {
        Built::Collection(c) => c,
        Built::LowDegree { degree, threshold } => return Ok(Built::LowDegree { degree, threshold }),
    };
    let coll = PartitionContainerCollection::new(
        g,
        k,
        regular_epsilon(k),
        None,
        PartitionSource::Regular,
        &base,
        opts.max_containers,
    )?;
    Ok(Built::Collection(coll))
}

/// Partition containers for a graph with maximum degree at most `C·d`.
///
/// Base containers have fewer than `εdn` induced edges with `ε = 1/(4k)`.
/// The size ceiling uses `1/(C·2^{k+3})`, half the stated slack, because
/// the greedy matching is only guaranteed half the size of the one the
/// stated slack assumes.
pub fn build_partition_collection_almost_regular(
    g: &Graph,
    k: usize,
    c: f64,
    opts: PartitionOptions,
) -> Result<Built<PartitionContainerCollection>> {
    if k == 0 {
        return Err(Error::param("k must be positive"));
    }
    let eps_base = 1.0 / (4.0 * k as f64);
    let base_opts = AlmostRegularOptions {
        mode: opts.mode,
        min_degree: Some(opts.min_degree.unwrap_or_else(|| regular_min_degree(k))),
        max_containers: opts.max_containers,
    };
    let base = match build_almost_regular_collection(g, eps_base, c, base_opts)? {
        Built::Collection(b) => b,
        Built::LowDegree { degree, threshold } => return Ok(Built::LowDegree { degree, threshold }),
    };
    let stated = almost_regular_epsilon(k, c);
    let coll = PartitionContainerCollection::new(
        g,
        k,
        stated / 2.0,
        Some(stated),
        PartitionSource::AlmostRegular,
        &base,
        opts.max_containers,
    )?;
    Ok(Built::Collection(coll))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, v.iter().copied())
    }

    #[test]
    fn venn_examples() {
        let s = venn_refinement(4, &[set(4, &[0, 1]), set(4, &[2, 3])]);
        assert_eq!((s.a.clone(), s.b.clone(), s.w), (vec![0], vec![1], 1));
        assert_eq!((s.intersection_a, s.union_b), (2, 2));

        let s = venn_refinement(3, &[VertexSet::full(3), VertexSet::full(3)]);
        assert_eq!((s.a, s.b, s.union_b), (vec![0, 1], vec![], 0));

        let s = venn_refinement(3, &[VertexSet::new(3)]);
        assert_eq!((s.a, s.b, s.intersection_a), (vec![], vec![0], 3));
    }

    #[test]
    fn matching_examples() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let r = matching_refinement(&g, &[set(4, &[0, 2]), set(4, &[1, 3])]).unwrap();
        assert_eq!(r.matching, Some(2));
        let unions: Vec<_> = r.parts.iter().map(|p| p.union.clone()).collect();
        assert_eq!(unions, vec![set(4, &[1, 3]), set(4, &[0, 2])]);
        assert!(r.is_partition_of(2));

        let r = matching_refinement(&g, &[VertexSet::new(4)]).unwrap();
        assert_eq!(r.parts.len(), 1);
        assert!(r.parts[0].union.is_empty());

        let k3 = Graph::complete(3);
        assert_eq!(matching_refinement(&k3, &[VertexSet::full(3)]), Err(Error::RefinementUnavailable));
    }

    #[test]
    fn theorem_constants() {
        assert_eq!(regular_epsilon(2), 1.0 / 16.0);
        assert_eq!(regular_min_degree(2), 256.0);
        assert_eq!(almost_regular_epsilon(2, 2.0), 1.0 / 32.0);
    }

    #[test]
    fn low_degree_flag() {
        let g = Graph::cycle(10);
        assert!(build_partition_collection_regular(&g, 2, PartitionOptions::default()).unwrap().is_low_degree());
    }

    #[test]
    fn almost_regular_ratio_error() {
        let mut edges = vec![];
        for i in 1..12 {
            edges.push((0, i));
        }
        edges.push((1, 2));
        let g = Graph::from_edges(12, &edges).unwrap();
        assert!(build_partition_collection_almost_regular(&g, 2, 2.0, PartitionOptions::forced()).is_err());
    }
}
