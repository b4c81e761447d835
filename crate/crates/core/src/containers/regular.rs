use rayon::prelude::*;

use super::{BuildMode, Built, CollectionParams, ContainerCollection, ContainerParams, ContainerSource, TOL};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vertex_set::VertexSet;

#[derive(Clone, Copy, Debug)]
pub struct RegularOptions {
    pub mode: BuildMode,
    pub max_containers: usize,
    pub max_fingerprints: usize,
}

impl Default for RegularOptions {
    fn default() -> Self {
        RegularOptions { mode: BuildMode::Auto, max_containers: 1 << 20, max_fingerprints: 1 << 21 }
    }
}

impl RegularOptions {
    pub fn forced() -> Self {
        RegularOptions { mode: BuildMode::Forced, ..Default::default() }
    }
}

/// The fingerprint `f(I)`: scan `I` in id order and keep `v` when it has at
/// least `εd` neighbours outside `N(F)`.
pub fn fingerprint(g: &Graph, i: &VertexSet, params: &ContainerParams) -> Result<VertexSet> {
    if !g.is_independent(i) {
        return Err(Error::pre("fingerprint input is not an independent set"));
    }
    let thr = params.fingerprint_threshold() - TOL;
    let mut f = VertexSet::new(g.n());
    let mut nf = VertexSet::new(g.n());
    for v in i {
        if g.neighbor_set(v).difference_len(&nf) as f64 >= thr {
            f.insert(v);
            nf.union_with(g.neighbor_set(v));
        }
    }
    Ok(f)
}

/// `B(F)`: vertices outside `F ∪ N(F)` with at least `(1−ε)d` neighbours in `N(F)`.
pub fn b_set(g: &Graph, f: &VertexSet, params: &ContainerParams) -> VertexSet {
    let nf = g.neighborhood(f);
    let thr = params.b_threshold() - TOL;
    let mut b = VertexSet::new(g.n());
    for v in 0..g.n() {
        if !f.contains(v) && !nf.contains(v) && g.neighbor_set(v).intersection_len(&nf) as f64 >= thr {
            b.insert(v);
        }
    }
    b
}

/// The container `g(F) = F ∪ B(F)`.
pub fn container_of(g: &Graph, f: &VertexSet, params: &ContainerParams) -> Result<VertexSet> {
    if !g.is_independent(f) {
        return Err(Error::pre("fingerprint is not an independent set"));
    }
    Ok(f.union(&b_set(g, f, params)))
}

/// Every `F` with `f(F) = F`. These are exactly the possible fingerprints,
/// and the property is closed under taking prefixes in id order, so they
/// are enumerated by extending in increasing vertex order.
pub fn fingerprint_fixed_points(g: &Graph, params: &ContainerParams, limit: usize) -> Result<Vec<VertexSet>> {
    let n = g.n();
    let thr = params.fingerprint_threshold() - TOL;
    let roots: Vec<Result<Vec<VertexSet>>> = (0..n)
        .into_par_iter()
        .filter(|&v| g.degree(v) as f64 >= thr)
        .map(|v| {
            let mut out = Vec::new();
            let f = VertexSet::from_iter(n, [v]);
            let nf = g.neighbor_set(v).clone();
            extend(g, thr, f, nf, v, &mut out, limit)?;
            Ok(out)
        })
        .collect();
    let mut all = vec![VertexSet::new(n)];
    for r in roots {
        all.extend(r?);
        if all.len() > limit {
            return Err(Error::too_large("fingerprint enumeration", all.len(), limit));
        }
    }
    Ok(all)
}

fn extend(
    g: &Graph,
    thr: f64,
    f: VertexSet,
    nf: VertexSet,
    last: usize,
    out: &mut Vec<VertexSet>,
    limit: usize,
) -> Result<()> {
    for v in last + 1..g.n() {
        if nf.contains(v) || (g.neighbor_set(v).difference_len(&nf) as f64) < thr {
            continue;
        }
        let mut f2 = f.clone();
        f2.insert(v);
        let nf2 = nf.union(g.neighbor_set(v));
        extend(g, thr, f2, nf2, v, out, limit)?;
    }
    out.push(f);
    if out.len() > limit {
        return Err(Error::too_large("fingerprint enumeration", out.len(), limit));
    }
    Ok(())
}

/// Containers for a `d`-regular graph.
///
/// In `Auto` mode a graph with `d ≤ 2/ε²` gets the low-degree flag; `Analysis`
/// returns the ⌊n/2⌋-subset collection there instead; `Forced` always builds.
pub fn build_regular_collection(g: &Graph, epsilon: f64, opts: RegularOptions) -> Result<Built<ContainerCollection>> {
    let d = match g.regular_degree() {
        Some(d) => d,
        None => return Err(Error::NotRegular { min: g.min_degree(), max: g.max_degree() }),
    };
    let params = ContainerParams::new(epsilon, d as f64)?;
    let threshold = 2.0 / (epsilon * epsilon);
    if d == 0 || (params.is_low_degree() && opts.mode != BuildMode::Forced) {
        if opts.mode == BuildMode::Analysis {
            return Ok(Built::Collection(fallback_collection(g.n(), params, opts.max_containers)?));
        }
        return Ok(Built::LowDegree { degree: d as f64, threshold });
    }
    let n = g.n();
    let fps = fingerprint_fixed_points(g, &params, opts.max_fingerprints)?;
    let pairs: Vec<(VertexSet, VertexSet)> = fps
        .into_par_iter()
        .map(|f| {
            let c = f.union(&b_set(g, &f, &params));
            (f, c)
        })
        .collect();
    let cap = (params.q() * n as f64 + TOL).floor().min(n as f64) as usize;
    let coll = ContainerCollection::assemble(n, pairs, CollectionParams::Graph(params), ContainerSource::RegularGraph, cap);
    if coll.len() > opts.max_containers {
        return Err(Error::too_large("container collection", coll.len(), opts.max_containers));
    }
    let bound = params.container_bound(n);
    if coll.max_container as f64 > bound + TOL {
        return Err(Error::Resource {
            stage: "containers".into(),
            msg: format!("container of size {} exceeds bound {bound:.3}", coll.max_container),
        });
    }
    if coll.max_fingerprint > cap {
        return Err(Error::Resource {
            stage: "containers".into(),
            msg: format!("fingerprint of size {} exceeds cap {cap}", coll.max_fingerprint),
        });
    }
    Ok(Built::Collection(coll))
}

/// All ⌊n/2⌋-subsets of `0..n`.
pub fn fallback_collection(n: usize, params: ContainerParams, limit: usize) -> Result<ContainerCollection> {
    let half = n / 2;
    let count = binomial(n, half);
    if count > limit as f64 {
        return Err(Error::too_large("fallback collection", count.min(usize::MAX as f64) as usize, limit));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = Vec::with_capacity(half);
    fn rec(start: usize, n: usize, half: usize, cur: &mut Vec<usize>, out: &mut Vec<(VertexSet, VertexSet)>) {
        if cur.len() == half {
            out.push((VertexSet::new(n), VertexSet::from_iter(n, cur.iter().copied())));
            return;
        }
        for v in start..=n - (half - cur.len()) {
            cur.push(v);
            rec(v + 1, n, half, cur, out);
            cur.pop();
        }
    }
    rec(0, n, half, &mut cur, &mut out);
    let mut coll = ContainerCollection::assemble(n, Vec::new(), CollectionParams::Graph(params), ContainerSource::Fallback, 0);
    coll.containers = out.into_iter().map(|(_, c)| c).collect();
    coll.containers.sort();
    coll.max_container = half;
    Ok(coll)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
