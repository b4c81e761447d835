//! k-coloring by counting covers with independent sets.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::containers::{BuildMode, Built};
use crate::error::{Error, Result};
use crate::extsum::{eval_disjoint, eval_k2, eval_k3, eval_naive, reduce_refinement, ExtSumInstance, Scalar};
use crate::graph::Graph;
use crate::partition::{build_partition_collection_almost_regular, regular_min_degree, PartitionOptions, RefinementResult};
use crate::vertex_set::VertexSet;

/// Default largest domain for an independent-set count table.
pub const COUNT_CEILING: usize = 30;
/// Default largest graph for the plain inclusion–exclusion count.
pub const BASELINE_CEILING: usize = 26;

/// `i(G[V′])` for every `V′` inside a domain, indexed by the local bit mask
/// over the domain's vertices in increasing id order.
#[derive(Clone, Debug)]
pub struct IsCountTable {
    pub domain: VertexSet,
    pub vertices: Vec<usize>,
    pub counts: Vec<u32>,
}

impl IsCountTable {
    /// Count for a subset given as a local mask.
    pub fn local(&self, mask: u64) -> u32 {
        self.counts[mask as usize]
    }

    pub fn get(&self, s: &VertexSet) -> u32 {
        assert!(s.is_subset(&self.domain), "set outside the table domain");
        let mask = self.vertices.iter().enumerate().filter(|(_, &v)| s.contains(v)).fold(0u64, |m, (j, _)| m | 1 << j);
        self.local(mask)
    }
}

/// Number of independent sets of every induced subgraph inside `domain`,
/// via `i(V′) = i(V′∖{v}) + i(V′∖N[v])` with `v` the lowest id in `V′`.
pub fn count_is_dp(g: &Graph, domain: &VertexSet, ceiling: usize) -> Result<IsCountTable> {
    let size = domain.len();
    if size > ceiling.min(32) {
        return Err(Error::too_large("count table domain", size, ceiling.min(32)));
    }
    let vertices = domain.to_vec();
    let closed: Vec<u64> = vertices
        .iter()
        .map(|&v| {
            vertices.iter().enumerate().filter(|(_, &u)| u == v || g.has_edge(u, v)).fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    let mut counts = vec![0u32; 1 << size];
    counts[0] = 1;
    for mask in 1u64..1 << size {
        let j = mask.trailing_zeros() as usize;
        counts[mask as usize] = counts[(mask & !(1 << j)) as usize] + counts[(mask & !closed[j]) as usize];
    }
    Ok(IsCountTable { domain: domain.clone(), vertices, counts })
}

/// `F(G) = Σ_{V′} (−1)^{n−|V′|} i(G[V′])^k`, the number of ordered
/// `k`-tuples of independent sets covering `V`.
pub fn inclusion_exclusion_f(g: &Graph, k: usize) -> Result<BigInt> {
    let n = g.n();
    if n > BASELINE_CEILING {
        return Err(Error::too_large("inclusion-exclusion graph", n, BASELINE_CEILING));
    }
    let table = count_is_dp(g, &g.vertices(), BASELINE_CEILING)?;
    let full = (1u64 << n) - 1;
    if n * (k + 1) < 126 {
        let s: i128 = (0..=full)
            .into_par_iter()
            .map(|m| {
                let t = (table.local(m) as i128).pow(k as u32);
                if (n - m.count_ones() as usize) % 2 == 1 {
                    -t
                } else {
                    t
                }
            })
            .sum();
        return Ok(BigInt::from(s));
    }
    Ok((0..=full)
        .into_par_iter()
        .map(|m| {
            let t = BigInt::from(table.local(m)).pow(k as u32);
            if (n - m.count_ones() as usize) % 2 == 1 {
                -t
            } else {
                t
            }
        })
        .reduce(BigInt::zero, |a, b| a + b))
}

/// The Extensions-Sum instance over `X = V` with `X_j = C_j` and
/// `f_j(α) = (−1)^{|α ∩ (C_j ∖ ∪_{i<j} C_i)|} · i(G[α ∩ C_j])`.
fn coloring_instance<T: Scalar>(containers: &[VertexSet], tables: &[&IsCountTable]) -> Result<ExtSumInstance<T>> {
    let n = containers[0].universe();
    let mut seen = VertexSet::new(n);
    let mut fresh_masks = Vec::with_capacity(containers.len());
    for (c, t) in containers.iter().zip(tables) {
        let fresh = c.difference(&seen);
        fresh_masks.push(t.vertices.iter().enumerate().filter(|(_, &v)| fresh.contains(v)).fold(0u64, |m, (j, _)| m | 1 << j));
        seen.union_with(c);
    }
    let subsets = tables.iter().map(|t| t.vertices.clone()).collect();
    ExtSumInstance::from_fn(n, subsets, |j, a| {
        let v = T::from(tables[j].local(a) as i64);
        if (a & fresh_masks[j]).count_ones() % 2 == 1 {
            -v
        } else {
            v
        }
    })
}

fn fits_i128(containers: &[VertexSet]) -> bool {
    let n = containers.first().map_or(0, VertexSet::universe);
    n + containers.iter().map(VertexSet::len).sum::<usize>() <= 125
}

fn signed(n: usize, v: BigInt) -> BigInt {
    if n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Evaluates the instance for `containers` grouped by `parts`.
fn eval_grouped<T: Scalar>(containers: &[VertexSet], tables: &[&IsCountTable], parts: Option<&[Vec<usize>]>) -> Result<T> {
    let n = containers[0].universe();
    let inst = coloring_instance::<T>(containers, tables)?;
    let inst = match parts {
        Some(p) => reduce_refinement(&inst, &RefinementResult::from_groups(n, containers, p.to_vec()), crate::extsum::TABLE_BITS_LIMIT)?,
        None => inst,
    };
    match inst.k() {
        1 => eval_disjoint(&inst),
        2 => eval_k2(&inst),
        3 => eval_k3(&inst),
        _ => eval_naive(&inst, crate::extsum::NAIVE_LIMIT),
    }
}

/// Chooses how to evaluate: identical containers are merged first; at most
/// three distinct ones go to the exact small-k evaluators, otherwise the
/// best two-part grouping within the table limit.
fn plan(containers: &[VertexSet]) -> Result<Option<Vec<Vec<usize>>>> {
    let k = containers.len();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for j in 0..k {
        match groups.iter_mut().find(|g| containers[g[0]] == containers[j]) {
            Some(g) => g.push(j),
            None => groups.push(vec![j]),
        }
    }
    if groups.len() <= 3 {
        return Ok((groups.len() < k).then_some(groups));
    }
    let g = groups.len();
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    for mask in 1u64..1 << (g - 1) {
        let mut parts = vec![Vec::new(), Vec::new()];
        let mut unions = [VertexSet::new(containers[0].universe()), VertexSet::new(containers[0].universe())];
        for (i, grp) in groups.iter().enumerate() {
            let side = (mask >> i & 1) as usize;
            parts[side].extend(grp.iter().copied());
            unions[side].union_with(&containers[grp[0]]);
        }
        let worst = unions[0].len().max(unions[1].len());
        if best.as_ref().is_none_or(|b| worst < b.0) {
            best = Some((worst, parts));
        }
    }
    let (worst, parts) = best.unwrap();
    if worst > crate::extsum::TABLE_BITS_LIMIT {
        if containers[0].universe() <= crate::extsum::NAIVE_LIMIT {
            return Ok(None);
        }
        return Err(Error::too_large("constrained count table", worst, crate::extsum::TABLE_BITS_LIMIT));
    }
    Ok(Some(parts))
}

/// `F̄(G, C_1..C_k) = Σ_{V′} (−1)^{n−|V′|} Π_j i(G[V′ ∩ C_j])`: the number of
/// ordered covers of `V` by independent sets `I_j ⊆ C_j`.
pub fn constrained_f(g: &Graph, containers: &[VertexSet]) -> Result<BigInt> {
    constrained_f_with(g, containers, COUNT_CEILING)
}

pub fn constrained_f_with(g: &Graph, containers: &[VertexSet], ceiling: usize) -> Result<BigInt> {
    if containers.is_empty() {
        return Ok(BigInt::from(u8::from(g.n() == 0)));
    }
    let mut union = VertexSet::new(g.n());
    for c in containers {
        union.union_with(c);
    }
    if union.len() != g.n() {
        return Ok(BigInt::zero());
    }
    let mut cache: HashMap<&VertexSet, IsCountTable> = HashMap::new();
    for c in containers {
        if !cache.contains_key(c) {
            cache.insert(c, count_is_dp(g, c, ceiling)?);
        }
    }
    let tables: Vec<&IsCountTable> = containers.iter().map(|c| &cache[c]).collect();
    let parts = plan(containers)?;
    let v = if fits_i128(containers) {
        BigInt::from(eval_grouped::<i128>(containers, &tables, parts.as_deref())?)
    } else {
        eval_grouped::<BigInt>(containers, &tables, parts.as_deref())?
    };
    Ok(signed(g.n(), v))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColoringMode {
    #[default]
    Auto,
    Baseline,
    Containers,
}

#[derive(Clone, Copy, Debug)]
pub struct ColoringConfig {
    pub mode: ColoringMode,
    /// Average degree from which `Auto` uses containers; defaults to `k·2^{2k+3}`.
    pub degree_threshold: Option<f64>,
    pub certificate: bool,
    pub max_containers: usize,
}

impl Default for ColoringConfig {
    fn default() -> Self {
        ColoringConfig { mode: ColoringMode::Auto, degree_threshold: None, certificate: false, max_containers: 1 << 22 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ColoringStats {
    pub path: String,
    pub partition_containers: usize,
    pub maximal_containers: usize,
    pub candidate_pairs: usize,
    pub pairs_tested: usize,
    pub largest_table_bits: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringOutcome {
    pub colorable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<usize>>,
    pub stats: ColoringStats,
}

/// Decides whether `g` has a proper `k`-coloring.
///
/// The container path enumerates pairs of partition containers `(C_a, C_b)`
/// with `C_a ∪ C_b = V`, gives `s` colors to `C_a` and `k−s` to `C_b`, and
/// tests `F̄ > 0` through a two-part reduction. Colors are interchangeable,
/// so only the split sizes `s` matter.
pub fn solve_kcoloring(g: &Graph, k: usize, config: &ColoringConfig) -> Result<ColoringOutcome> {
    let n = g.n();
    let mut stats = ColoringStats::default();
    if g.m() == 0 || k == 0 {
        stats.path = "trivial".into();
        let colorable = n == 0 || (k > 0);
        let certificate = (config.certificate && colorable).then(|| vec![0; n]);
        return Ok(ColoringOutcome { colorable, certificate, stats });
    }
    if k == 1 || k >= n {
        stats.path = "trivial".into();
        let colorable = k >= n;
        let certificate = (config.certificate && colorable).then(|| (0..n).collect());
        return Ok(ColoringOutcome { colorable, certificate, stats });
    }
    let threshold = config.degree_threshold.unwrap_or_else(|| regular_min_degree(k));
    let use_containers = match config.mode {
        ColoringMode::Baseline => false,
        ColoringMode::Containers => true,
        ColoringMode::Auto => g.average_degree() >= threshold,
    };
    if use_containers {
        if let Some(out) = containers_path(g, k, config, &mut stats)? {
            return Ok(out);
        }
    }
    stats.path = "baseline".into();
    stats.largest_table_bits = n;
    let colorable = inclusion_exclusion_f(g, k)? > BigInt::zero();
    let certificate = if config.certificate && colorable {
        Some(extract_certificate(g, vec![g.vertices(); k])?)
    } else {
        None
    };
    Ok(ColoringOutcome { colorable, certificate, stats })
}

fn containers_path(g: &Graph, k: usize, config: &ColoringConfig, stats: &mut ColoringStats) -> Result<Option<ColoringOutcome>> {
    let n = g.n();
    let ratio = (g.max_degree() as f64 / g.average_degree()).max(1.0);
    let mode = if config.mode == ColoringMode::Containers { BuildMode::Forced } else { BuildMode::Auto };
    let opts = PartitionOptions { mode, min_degree: config.degree_threshold, max_containers: config.max_containers };
    let coll = match build_partition_collection_almost_regular(g, k, ratio, opts)? {
        Built::Collection(c) => c,
        Built::LowDegree { .. } => return Ok(None),
    };
    stats.path = "containers".into();
    stats.partition_containers = coll.len();
    let maximal = coll.maximal().to_vec();
    stats.maximal_containers = maximal.len();

    let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..maximal.len() {
        for b in a + 1..maximal.len() {
            if maximal[a].union_len(&maximal[b]) == n {
                for s in 1..k {
                    candidates.push((a, b, s));
                }
            }
        }
    }
    candidates.sort_by_key(|&(a, b, s)| (maximal[a].len() + maximal[b].len(), a, b, s));
    stats.candidate_pairs = candidates.len();
    stats.largest_table_bits = maximal.iter().map(VertexSet::len).max().unwrap_or(0);

    let mut used: Vec<usize> = candidates.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    used.sort_unstable();
    used.dedup();
    let tables: HashMap<usize, IsCountTable> = used
        .par_iter()
        .map(|&i| count_is_dp(g, &maximal[i], COUNT_CEILING).map(|t| (i, t)))
        .collect::<Result<_>>()?;

    let assignment = |&(a, b, s): &(usize, usize, usize)| -> Vec<VertexSet> {
        (0..k).map(|j| if j < s { maximal[a].clone() } else { maximal[b].clone() }).collect()
    };
    let test = |cand: &(usize, usize, usize)| -> Result<bool> {
        let (a, b, s) = *cand;
        let cs = assignment(cand);
        let ts: Vec<&IsCountTable> = (0..k).map(|j| if j < s { &tables[&a] } else { &tables[&b] }).collect();
        let parts = vec![(0..s).collect::<Vec<_>>(), (s..k).collect()];
        let v = if fits_i128(&cs) {
            BigInt::from(eval_grouped::<i128>(&cs, &ts, Some(&parts))?)
        } else {
            eval_grouped::<BigInt>(&cs, &ts, Some(&parts))?
        };
        Ok(signed(n, v).is_positive())
    };

    const CHUNK: usize = 64;
    let mut winner = None;
    for chunk in candidates.chunks(CHUNK) {
        let results: Vec<bool> = chunk.par_iter().map(test).collect::<Result<_>>()?;
        stats.pairs_tested += chunk.len();
        if let Some(i) = results.iter().position(|&x| x) {
            winner = Some(chunk[i]);
            break;
        }
    }
    let certificate = match (config.certificate, winner) {
        (true, Some(w)) => Some(extract_certificate(g, assignment(&w))?),
        _ => None,
    };
    Ok(Some(ColoringOutcome { colorable: winner.is_some(), certificate, stats: stats.clone() }))
}

/// Fixes vertices one at a time to a color whose container keeps `F̄ > 0`.
fn extract_certificate(g: &Graph, mut containers: Vec<VertexSet>) -> Result<Vec<usize>> {
    let k = containers.len();
    let mut colors = vec![usize::MAX; g.n()];
    for v in 0..g.n() {
        for c in 0..k {
            if !containers[c].contains(v) {
                continue;
            }
            let mut trial = containers.clone();
            for (j, t) in trial.iter_mut().enumerate() {
                if j != c {
                    t.remove(v);
                }
            }
            if constrained_f(g, &trial)?.is_positive() {
                containers = trial;
                colors[v] = c;
                break;
            }
        }
        if colors[v] == usize::MAX {
            return Err(Error::Resource { stage: "certificate".into(), msg: format!("no color fits vertex {v}") });
        }
    }
    debug_assert!(g.is_proper_coloring(&colors));
    Ok(colors)
}
