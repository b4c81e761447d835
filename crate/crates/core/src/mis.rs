//! Maximum (weighted) independent set.

use rayon::prelude::*;
use serde::Serialize;

use crate::containers::{
    build_almost_regular_collection, build_regular_collection, AlmostRegularOptions, BuildMode, Built, RegularOptions,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

#[derive(Clone, Debug, Default, Serialize)]
pub struct MisStats {
    pub path: String,
    pub nodes: u64,
    pub containers: usize,
    pub largest_subproblem: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MisResult {
    pub best: VertexSet,
    pub size: usize,
    pub weight: u64,
    pub stats: MisStats,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MisMode {
    #[default]
    Auto,
    Base,
    Containers,
}

#[derive(Clone, Debug)]
pub struct MisParams {
    pub mode: MisMode,
    pub epsilon: f64,
    /// Vertex weights; unit weights when absent.
    pub weights: Option<Vec<u64>>,
    pub max_containers: usize,
}

impl Default for MisParams {
    fn default() -> Self {
        MisParams { mode: MisMode::Auto, epsilon: 0.25, weights: None, max_containers: 1 << 20 }
    }
}

struct Search<'a> {
    g: &'a Graph,
    w: &'a [u64],
    best: VertexSet,
    best_w: u64,
    nodes: u64,
}

impl Search<'_> {
    fn weight(&self, s: &VertexSet) -> u64 {
        s.iter().map(|v| self.w[v]).sum()
    }

    fn greedy(&mut self) {
        let mut active = VertexSet::full(self.g.n());
        let mut chosen = VertexSet::new(self.g.n());
        while let Some(v) = active.iter().min_by_key(|&v| (self.g.neighbor_set(v).intersection_len(&active), std::cmp::Reverse(self.w[v]), v)) {
            chosen.insert(v);
            active.remove(v);
            active.subtract(self.g.neighbor_set(v));
        }
        self.best_w = self.weight(&chosen);
        self.best = chosen;
    }

    fn run(&mut self, mut active: VertexSet, mut chosen: VertexSet, mut cur: u64) {
        self.nodes += 1;
        loop {
            let mut forced = None;
            for v in active.iter() {
                let nb = self.g.neighbor_set(v).intersection(&active);
                match nb.len() {
                    0 => {
                        forced = Some(v);
                        break;
                    }
                    1 if self.w[v] >= self.w[nb.first().unwrap()] => {
                        forced = Some(v);
                        break;
                    }
                    _ => {}
                }
            }
            let Some(v) = forced else { break };
            chosen.insert(v);
            cur += self.w[v];
            active.remove(v);
            active.subtract(self.g.neighbor_set(v));
        }
        if cur + self.weight(&active) <= self.best_w {
            if active.is_empty() && cur == self.best_w && chosen < self.best {
                self.best = chosen;
            }
            return;
        }
        let pivot = active
            .iter()
            .max_by_key(|&v| (self.g.neighbor_set(v).intersection_len(&active), std::cmp::Reverse(v)));
        let Some(v) = pivot else {
            if cur > self.best_w {
                self.best_w = cur;
                self.best = chosen;
            }
            return;
        };
        let mut inc_active = active.clone();
        inc_active.remove(v);
        inc_active.subtract(self.g.neighbor_set(v));
        let mut inc_chosen = chosen.clone();
        inc_chosen.insert(v);
        self.run(inc_active, inc_chosen, cur + self.w[v]);
        active.remove(v);
        self.run(active, chosen, cur);
    }
}

fn check_weights(g: &Graph, w: Option<&[u64]>) -> Result<Vec<u64>> {
    match w {
        None => Ok(vec![1; g.n()]),
        Some(w) if w.len() == g.n() => Ok(w.to_vec()),
        Some(w) => Err(Error::param(format!("{} weights for {} vertices", w.len(), g.n()))),
    }
}

/// Exact maximum independent set by branch and bound on a maximum-degree
/// vertex, seeded with a greedy solution.
pub fn mis_base(g: &Graph) -> MisResult {
    mis_base_weighted(g, &vec![1; g.n()]).expect("unit weights match")
}

pub fn mis_base_weighted(g: &Graph, weights: &[u64]) -> Result<MisResult> {
    let w = check_weights(g, Some(weights))?;
    let mut s = Search { g, w: &w, best: VertexSet::new(g.n()), best_w: 0, nodes: 0 };
    s.greedy();
    s.run(VertexSet::full(g.n()), VertexSet::new(g.n()), 0);
    Ok(MisResult {
        size: s.best.len(),
        weight: s.best_w,
        best: s.best,
        stats: MisStats { path: "base".into(), nodes: s.nodes, containers: 0, largest_subproblem: g.n() },
    })
}

fn better(a: &MisResult, b: &MisResult) -> bool {
    a.weight > b.weight || (a.weight == b.weight && a.best.to_vec() < b.best.to_vec())
}

/// Solves the problem inside every container and keeps the best answer.
///
/// Regular graphs use graph containers; other graphs use the almost-regular
/// construction with `C = Δ/d`. Low-degree inputs go straight to the base
/// solver unless the mode is `Containers`.
pub fn mis_containers(g: &Graph, params: &MisParams) -> Result<MisResult> {
    let w = check_weights(g, params.weights.as_deref())?;
    let base = || -> Result<MisResult> { mis_base_weighted(g, &w) };
    if params.mode == MisMode::Base || g.m() == 0 {
        return base();
    }
    let mode = if params.mode == MisMode::Containers { BuildMode::Forced } else { BuildMode::Auto };
    let built = if g.regular_degree().is_some() {
        build_regular_collection(g, params.epsilon, RegularOptions { mode, max_containers: params.max_containers, ..Default::default() })?
    } else {
        let c = (g.max_degree() as f64 / g.average_degree()).max(1.0);
        let opts = AlmostRegularOptions { mode, min_degree: None, max_containers: params.max_containers };
        build_almost_regular_collection(g, params.epsilon, c, opts)?
    };
    let coll = match built {
        Built::Collection(c) => c,
        Built::LowDegree { .. } => return base(),
    };
    let mut containers = coll.maximal();
    containers.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let largest = containers.first().map_or(0, VertexSet::len);
    let results: Vec<MisResult> = containers
        .par_iter()
        .map(|c| {
            let (sub, map) = g.induced_subgraph(c);
            let sw: Vec<u64> = map.iter().map(|&v| w[v]).collect();
            let r = mis_base_weighted(&sub, &sw)?;
            let best = VertexSet::from_iter(g.n(), r.best.iter().map(|i| map[i]));
            Ok(MisResult { size: best.len(), best, ..r })
        })
        .collect::<Result<_>>()?;
    let nodes = results.iter().map(|r| r.stats.nodes).sum();
    let mut best = results
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .unwrap_or_else(|| MisResult { best: VertexSet::new(g.n()), size: 0, weight: 0, stats: MisStats::default() });
    debug_assert!(g.is_independent(&best.best));
    best.stats = MisStats { path: "containers".into(), nodes, containers: containers.len(), largest_subproblem: largest };
    Ok(best)
}
