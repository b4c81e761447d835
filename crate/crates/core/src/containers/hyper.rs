use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use serde::Serialize;

use super::{BuildMode, Built, CollectionParams, ContainerCollection, ContainerSource, HypergraphContainerParams, TOL};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CodegreeCheck {
    pub i: usize,
    pub measured: usize,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CodegreeReport {
    pub checks: Vec<CodegreeCheck>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Compares `Δ_i(H)` with `C·p^{i−1}·|E|/|V|` for every `i` in `1..=r`.
pub fn check_codegree_conditions(h: &Hypergraph, params: &HypergraphContainerParams) -> CodegreeReport {
    let density = h.density();
    let checks: Vec<CodegreeCheck> = (1..=h.r())
        .map(|i| {
            let measured = h.max_codegree(i).unwrap();
            let bound = params.c * params.p.powi(i as i32 - 1) * density;
            CodegreeCheck { i, measured, bound, pass: density > 0.0 && measured as f64 <= bound + TOL }
        })
        .collect();
    let note = (density == 0.0).then(|| "hypergraph has zero edge density".to_string());
    CodegreeReport { pass: note.is_none() && checks.iter().all(|c| c.pass), checks, note }
}

#[derive(Clone, Copy, Debug)]
pub struct HyperOptions {
    /// Largest fingerprint; defaults to `⌊(r−1)·p·n⌋`.
    pub fingerprint_cap: Option<usize>,
    pub check_conditions: bool,
    /// Fail if any container is larger.
    pub size_ceiling: Option<usize>,
    pub max_containers: usize,
}

impl Default for HyperOptions {
    fn default() -> Self {
        HyperOptions { fingerprint_cap: None, check_conditions: true, size_ceiling: None, max_containers: 1 << 20 }
    }
}

struct Engine<'a> {
    h: &'a Hypergraph,
    tau: Vec<f64>,
    cap: usize,
    filter: &'a (dyn Fn(&VertexSet) -> bool + Sync),
    leaves: AtomicUsize,
    max_leaves: usize,
    overflow: AtomicBool,
}

struct Node {
    f: VertexSet,
    a: VertexSet,
    alive: Vec<u32>,
}

impl Engine<'_> {
    fn run(&self, node: Node, depth: usize) -> Vec<(VertexSet, VertexSet)> {
        if self.overflow.load(Ordering::Relaxed) {
            return Vec::new();
        }
        let cover = node.f.union(&node.a);
        if !(self.filter)(&cover) {
            return Vec::new();
        }
        let pick = if node.f.len() >= self.cap { None } else { self.pick(&node) };
        let Some(u) = pick else {
            if self.leaves.fetch_add(1, Ordering::Relaxed) >= self.max_leaves {
                self.overflow.store(true, Ordering::Relaxed);
            }
            return vec![(node.f, cover)];
        };
        let include = || self.run(self.include(&node, u), depth + 1);
        let exclude = || self.run(self.exclude(&node, u), depth + 1);
        let (mut l, r) = if depth < 12 { rayon::join(include, exclude) } else { (include(), exclude()) };
        l.extend(r);
        l
    }

    /// Vertex of largest degree among edges whose unresolved part has the
    /// smallest size `s` at which that degree reaches `τ_s`.
    fn pick(&self, node: &Node) -> Option<usize> {
        let r = self.h.r();
        let n = self.h.n();
        let mut deg = vec![vec![0u32; n]; r + 1];
        for &ei in &node.alive {
            let e = &self.h.edges()[ei as usize];
            let s = e.iter().filter(|&&v| !node.f.contains(v)).count();
            for &v in e {
                if !node.f.contains(v) {
                    deg[s][v] += 1;
                }
            }
        }
        for s in 2..=r {
            let (mut best, mut arg) = (0u32, usize::MAX);
            for (v, &d) in deg[s].iter().enumerate() {
                if d > best {
                    best = d;
                    arg = v;
                }
            }
            if arg != usize::MAX && best as f64 >= self.tau[s] - TOL {
                return Some(arg);
            }
        }
        None
    }

    fn include(&self, node: &Node, u: usize) -> Node {
        let mut f = node.f.clone();
        f.insert(u);
        let mut a = node.a.clone();
        a.remove(u);
        for &ei in &node.alive {
            let e = &self.h.edges()[ei as usize];
            let mut rest = e.iter().filter(|&&v| !f.contains(v));
            if let (Some(&w), None) = (rest.next(), rest.next()) {
                a.remove(w);
            }
        }
        let alive = self.surviving(&node.alive, &f, &a);
        Node { f, a, alive }
    }

    fn exclude(&self, node: &Node, u: usize) -> Node {
        let mut a = node.a.clone();
        a.remove(u);
        let alive = node
            .alive
            .iter()
            .copied()
            .filter(|&ei| !self.h.edges()[ei as usize].contains(&u))
            .collect();
        Node { f: node.f.clone(), a, alive }
    }

    fn surviving(&self, alive: &[u32], f: &VertexSet, a: &VertexSet) -> Vec<u32> {
        alive
            .iter()
            .copied()
            .filter(|&ei| self.h.edges()[ei as usize].iter().all(|&v| f.contains(v) || a.contains(v)))
            .collect()
    }
}

fn validate(h: &Hypergraph, params: &HypergraphContainerParams) -> Result<()> {
    if h.r() < 2 {
        return Err(Error::param("hypergraph containers need r ≥ 2"));
    }
    if params.r != h.r() {
        return Err(Error::param(format!("params are for r={} but hypergraph has r={}", params.r, h.r())));
    }
    if !(params.p > 0.0 && params.p < 1.0) {
        return Err(Error::param(format!("p = {} outside (0, 1)", params.p)));
    }
    if h.edge_count() == 0 {
        return Err(Error::param("hypergraph has no edges, so the co-degree conditions cannot hold"));
    }
    Ok(())
}

fn run_engine(
    h: &Hypergraph,
    params: &HypergraphContainerParams,
    opts: &HyperOptions,
    filter: &(dyn Fn(&VertexSet) -> bool + Sync),
    source: ContainerSource,
    params_out: CollectionParams,
) -> Result<ContainerCollection> {
    let n = h.n();
    let r = h.r();
    let density = h.density();
    let mut tau = vec![f64::INFINITY; r + 1];
    for (s, t) in tau.iter_mut().enumerate().skip(2) {
        *t = (params.eps_edges * r as f64 * density * params.p.powi((r - s) as i32)).max(1.0);
    }
    let cap = opts
        .fingerprint_cap
        .unwrap_or(((r - 1) as f64 * params.p * n as f64 + TOL).floor() as usize)
        .min(n);
    let engine = Engine {
        h,
        tau,
        cap,
        filter,
        leaves: AtomicUsize::new(0),
        max_leaves: opts.max_containers.saturating_mul(64),
        overflow: AtomicBool::new(false),
    };
    let root = Node {
        f: VertexSet::new(n),
        a: VertexSet::full(n),
        alive: (0..h.edge_count() as u32).collect(),
    };
    let pairs = engine.run(root, 0);
    if engine.overflow.load(Ordering::Relaxed) {
        return Err(Error::too_large("container search leaves", engine.leaves.load(Ordering::Relaxed), engine.max_leaves));
    }
    let coll = ContainerCollection::assemble(n, pairs, params_out, source, cap);
    if coll.len() > opts.max_containers {
        return Err(Error::too_large("container collection", coll.len(), opts.max_containers));
    }
    if let Some(ceiling) = opts.size_ceiling {
        if coll.max_container > ceiling {
            return Err(Error::Resource {
                stage: "containers".into(),
                msg: format!("container of size {} exceeds ceiling {ceiling}", coll.max_container),
            });
        }
    }
    Ok(coll)
}

/// Containers for the independent sets of an r-uniform hypergraph.
///
/// Search state is a fingerprint `F ⊆ I` and a set `A` of vertices still
/// allowed in `I`. The engine repeatedly picks a high-degree vertex of the
/// unresolved edges and branches on whether it lies in `I`; a vertex that
/// would complete an edge together with `F` leaves `A`. Every independent
/// set follows one branch path, so the leaves `F ∪ A` cover all of them.
pub fn build_hypergraph_collection(
    h: &Hypergraph,
    params: &HypergraphContainerParams,
    opts: HyperOptions,
) -> Result<ContainerCollection> {
    build_hypergraph_collection_filtered(h, params, opts, &|_| true)
}

/// As [`build_hypergraph_collection`], dropping every branch whose current
/// `F ∪ A` fails `keep`. `keep` must be monotone: if it rejects a set it
/// rejects all subsets. Independent sets outside every kept set are not covered.
pub fn build_hypergraph_collection_filtered(
    h: &Hypergraph,
    params: &HypergraphContainerParams,
    opts: HyperOptions,
    keep: &(dyn Fn(&VertexSet) -> bool + Sync),
) -> Result<ContainerCollection> {
    validate(h, params)?;
    if opts.check_conditions {
        let report = check_codegree_conditions(h, params);
        if let Some(c) = report.checks.iter().find(|c| !c.pass) {
            return Err(Error::Codegree { i: c.i, measured: c.measured, bound: c.bound });
        }
    }
    run_engine(h, params, &opts, keep, ContainerSource::Hypergraph, CollectionParams::Hypergraph(*params))
}

#[derive(Clone, Copy, Debug)]
pub struct AlmostRegularOptions {
    pub mode: BuildMode,
    /// Average degree below which `Auto` returns the low-degree flag.
    /// Defaults to `2/ε²`.
    pub min_degree: Option<f64>,
    pub max_containers: usize,
}

impl Default for AlmostRegularOptions {
    fn default() -> Self {
        AlmostRegularOptions { mode: BuildMode::Auto, min_degree: None, max_containers: 1 << 20 }
    }
}

impl AlmostRegularOptions {
    pub fn forced() -> Self {
        AlmostRegularOptions { mode: BuildMode::Forced, ..Default::default() }
    }
}

/// Containers with fewer than `εdn` induced edges for a graph whose maximum
/// degree is at most `C` times its average degree `d`.
///
/// Runs the hypergraph engine on the graph as a 2-uniform hypergraph with
/// co-degree constant `2C` and `p = 1/(Cd)`, for which the co-degree
/// conditions hold automatically. Each leaf has maximum degree below `εd`
/// inside its free part.
pub fn build_almost_regular_collection(
    g: &Graph,
    epsilon: f64,
    c: f64,
    opts: AlmostRegularOptions,
) -> Result<Built<ContainerCollection>> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::param(format!("epsilon {epsilon} outside (0, 1/2)")));
    }
    if c < 1.0 {
        return Err(Error::param(format!("degree ratio C = {c} must be at least 1")));
    }
    let d = g.average_degree();
    if g.max_degree() as f64 > c * d + TOL {
        return Err(Error::param(format!(
            "maximum degree {} exceeds C·d = {:.3}",
            g.max_degree(),
            c * d
        )));
    }
    let threshold = opts.min_degree.unwrap_or(2.0 / (epsilon * epsilon));
    if d == 0.0 || (d < threshold && opts.mode != BuildMode::Forced) {
        return Ok(Built::LowDegree { degree: d, threshold });
    }
    let h = Hypergraph::from_graph(g);
    let ch = 2.0 * c;
    let p = (2.0 / (ch * d)).min(0.5);
    let params = HypergraphContainerParams { p, c: ch, r: 2, eps_edges: epsilon };
    let tau = (epsilon * d).max(1.0);
    let opts = HyperOptions {
        fingerprint_cap: Some((g.n() as f64 / tau).floor() as usize),
        check_conditions: false,
        size_ceiling: None,
        max_containers: opts.max_containers,
    };
    let coll = run_engine(
        &h,
        &params,
        &opts,
        &|_| true,
        ContainerSource::AlmostRegularGraph,
        CollectionParams::Hypergraph(params),
    )?;
    Ok(Built::Collection(coll))
}
