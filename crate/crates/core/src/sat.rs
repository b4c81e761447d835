//! Dense k-SAT through containers of the literal hypergraph.

use rayon::prelude::*;
use serde::Serialize;

use crate::cnf::{Clause, CnfFormula, Lit};
use crate::containers::{build_hypergraph_collection_filtered, HyperOptions, HypergraphContainerParams, TOL};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

/// `H_φ` on the `2n` literals, with `x_i ↦ 2i` and `x̄_i ↦ 2i+1`. Clause
/// `ℓ_1 ∨ … ∨ ℓ_k` becomes the edge `{ℓ̄_1, …, ℓ̄_k}`; repeated clauses give
/// one edge.
#[derive(Clone, Debug, Serialize)]
pub struct LiteralHypergraph {
    pub num_vars: usize,
    pub hypergraph: Hypergraph,
    /// Index of the first clause producing each edge.
    pub clause_of_edge: Vec<usize>,
    pub duplicate_clauses: usize,
}

impl LiteralHypergraph {
    pub fn k(&self) -> usize {
        self.hypergraph.r()
    }

    /// `I_α`: the literals made true by `α`.
    pub fn assignment_set(&self, alpha: &[bool]) -> VertexSet {
        assert_eq!(alpha.len(), self.num_vars);
        VertexSet::from_iter(2 * self.num_vars, alpha.iter().enumerate().map(|(i, &b)| Lit::new(i, !b).code()))
    }
}

pub fn build_literal_hypergraph(phi: &CnfFormula) -> Result<LiteralHypergraph> {
    let k = phi.k();
    if k == 0 {
        return Err(Error::param("formula has no clauses"));
    }
    if !phi.is_uniform(k) {
        return Err(Error::param(format!("mixed clause widths; every clause must have exactly {k} literals")));
    }
    let mut seen = std::collections::HashMap::new();
    let mut edges = Vec::new();
    let mut clause_of_edge = Vec::new();
    for (ci, c) in phi.clauses().iter().enumerate() {
        let mut e: Vec<usize> = c.iter().map(|l| l.negate().code()).collect();
        e.sort_unstable();
        if seen.insert(e.clone(), ci).is_none() {
            edges.push(e);
            clause_of_edge.push(ci);
        }
    }
    let duplicate_clauses = phi.clauses().len() - edges.len();
    Ok(LiteralHypergraph {
        num_vars: phi.num_vars(),
        hypergraph: Hypergraph::new(2 * phi.num_vars(), k, edges)?,
        clause_of_edge,
        duplicate_clauses,
    })
}

/// `φ[V′]`, after eager unit propagation.
#[derive(Clone, Debug)]
pub struct Restriction {
    /// `None` when the restriction is a contradiction.
    pub formula: Option<CnfFormula>,
    pub fixed: Vec<Option<bool>>,
    pub kept: usize,
    /// Variables with both literals kept, before propagation.
    pub unassigned: usize,
    /// Variables still occurring in the simplified formula.
    pub free_after: usize,
}

impl Restriction {
    pub fn is_contradiction(&self) -> bool {
        self.formula.is_none()
    }

    /// `|V′| ≤ (1−δ)·2n ⇒ unassigned ≤ (1−2δ)n`, which in integers reads
    /// `unassigned ≤ |V′| − n`.
    pub fn size_bound_holds(&self) -> bool {
        let n = self.fixed.len();
        self.is_contradiction() || (self.kept >= n && self.unassigned <= self.kept - n)
    }

    /// Completes a model of the restricted formula with the fixed values.
    pub fn lift(&self, model: &[bool]) -> Vec<bool> {
        self.fixed.iter().zip(model).map(|(f, &m)| f.unwrap_or(m)).collect()
    }
}

/// Assigns `x ← v` everywhere; `None` on an empty clause.
fn assign(clauses: &[Clause], lit: Lit) -> Option<Vec<Clause>> {
    let mut out = Vec::with_capacity(clauses.len());
    for c in clauses {
        if c.contains(&lit) {
            continue;
        }
        let rest: Clause = c.iter().copied().filter(|&l| l != lit.negate()).collect();
        if rest.is_empty() {
            return None;
        }
        out.push(rest);
    }
    Some(out)
}

fn propagate(mut clauses: Vec<Clause>, values: &mut [Option<bool>]) -> Option<Vec<Clause>> {
    while let Some(unit) = clauses.iter().find(|c| c.len() == 1).map(|c| c[0]) {
        values[unit.var()] = Some(!unit.is_negated());
        clauses = assign(&clauses, unit)?;
    }
    Some(clauses)
}

/// A missing `x_i` forces `x_i = 0`, a missing `x̄_i` forces `x_i = 1`, and a
/// variable with both literals missing makes the result a contradiction.
pub fn restrict_formula(phi: &CnfFormula, kept: &VertexSet) -> Restriction {
    let n = phi.num_vars();
    assert_eq!(kept.universe(), 2 * n, "kept set must range over the 2n literals");
    let mut fixed = vec![None; n];
    let mut contradiction = false;
    let mut unassigned = 0;
    for (i, f) in fixed.iter_mut().enumerate() {
        match (kept.contains(Lit::pos(i).code()), kept.contains(Lit::neg(i).code())) {
            (true, true) => unassigned += 1,
            (false, true) => *f = Some(false),
            (true, false) => *f = Some(true),
            (false, false) => contradiction = true,
        }
    }
    let mut out = Restriction { formula: None, fixed, kept: kept.len(), unassigned, free_after: 0 };
    if contradiction {
        return out;
    }
    let mut clauses = Vec::new();
    for c in phi.clauses() {
        if c.iter().any(|l| out.fixed[l.var()].is_some_and(|v| v != l.is_negated())) {
            continue;
        }
        let rest: Clause = c.iter().copied().filter(|l| out.fixed[l.var()].is_none()).collect();
        if rest.is_empty() {
            return out;
        }
        clauses.push(rest);
    }
    let Some(clauses) = propagate(clauses, &mut out.fixed) else { return out };
    let mut vars: Vec<usize> = clauses.iter().flatten().map(|l| l.var()).collect();
    vars.sort_unstable();
    vars.dedup();
    out.free_after = vars.len();
    out.formula = Some(CnfFormula::new(n, clauses).expect("simplified clauses stay valid"));
    out
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StructureParams {
    /// Edges moved per extraction step, and the density target.
    pub d: usize,
    /// Spread constant.
    pub c: f64,
    /// Co-degree decay exponent.
    pub epsilon: f64,
    /// Fraction `ρ`: success needs `|E′| ≥ (ρ/2)·D·|V|`.
    pub removal_fraction: f64,
}

impl StructureParams {
    pub fn new(d: usize, c: f64, epsilon: f64) -> Self {
        StructureParams { d, c, epsilon, removal_fraction: 0.5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureStatus {
    Found,
    /// Dense enough and spread out, but `Δ₂(E′) > C·D^{1−ε}`.
    CodegreeFails,
    Absent,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub status: StructureStatus,
    /// Edge indices of `E′` in the literal hypergraph.
    #[serde(skip)]
    pub edges: Vec<usize>,
    pub edge_count: usize,
    pub iterations: usize,
    pub retired: usize,
    pub required_edges: f64,
    pub max_degree: usize,
    pub degree_bound: usize,
    pub max_codegree: usize,
    pub codegree_bound: f64,
    /// Largest residual degree when the extraction stopped.
    pub residual_max_degree: usize,
}

/// Greedy extraction: while some vertex outside `R` has `D` edges in
/// `H[V∖R]` not yet taken, move `D` of them to `E′` and retire the vertex
/// together with every vertex whose `E′`-degree exceeds `rD`.
pub fn extract_structure(h: &LiteralHypergraph, params: &StructureParams) -> Result<StructureReport> {
    extract_hypergraph_structure(&h.hypergraph, params)
}

/// [`extract_structure`] for an arbitrary uniform hypergraph.
pub fn extract_hypergraph_structure(hg: &Hypergraph, params: &StructureParams) -> Result<StructureReport> {
    if params.d == 0 {
        return Err(Error::param("D must be positive"));
    }
    if !(params.removal_fraction > 0.0 && params.removal_fraction <= 1.0) {
        return Err(Error::param(format!("removal fraction {} outside (0, 1]", params.removal_fraction)));
    }
    let (n, r, d) = (hg.n(), hg.r(), params.d);
    let mut retired = vec![false; n];
    let mut taken = vec![false; hg.edge_count()];
    let mut edeg = vec![0usize; n];
    let mut chosen = Vec::new();
    let mut iterations = 0;
    let residual_max_degree = loop {
        let mut deg = vec![0usize; n];
        for (ei, e) in hg.edges().iter().enumerate() {
            if !taken[ei] && e.iter().all(|&v| !retired[v]) {
                for &v in e {
                    deg[v] += 1;
                }
            }
        }
        let (v, best) = deg.iter().copied().enumerate().fold((usize::MAX, 0), |acc, (v, x)| if x > acc.1 { (v, x) } else { acc });
        if best < d {
            break best;
        }
        iterations += 1;
        let picked: Vec<usize> = hg
            .edges()
            .iter()
            .enumerate()
            .filter(|(ei, e)| !taken[*ei] && e.contains(&v) && e.iter().all(|&u| !retired[u]))
            .map(|(ei, _)| ei)
            .take(d)
            .collect();
        for ei in picked {
            taken[ei] = true;
            chosen.push(ei);
            for &u in &hg.edges()[ei] {
                edeg[u] += 1;
            }
        }
        retired[v] = true;
        for u in 0..n {
            if edeg[u] > r * d {
                retired[u] = true;
            }
        }
    };
    chosen.sort_unstable();
    let required_edges = params.removal_fraction / 2.0 * d as f64 * n as f64;
    let sub = hg.with_edges(&chosen);
    let max_degree = edeg.iter().copied().max().unwrap_or(0);
    debug_assert!(max_degree <= (r + 1) * d);
    let max_codegree = if r >= 2 { sub.max_codegree(2)? } else { 0 };
    let codegree_bound = params.c * (d as f64).powf(1.0 - params.epsilon);
    let status = if chosen.is_empty() || (chosen.len() as f64) < required_edges - TOL {
        StructureStatus::Absent
    } else if max_codegree as f64 > codegree_bound + TOL {
        StructureStatus::CodegreeFails
    } else {
        StructureStatus::Found
    };
    Ok(StructureReport {
        status,
        edge_count: chosen.len(),
        edges: chosen,
        iterations,
        retired: retired.iter().filter(|&&x| x).count(),
        required_edges,
        max_degree,
        degree_bound: (r + 1) * d,
        max_codegree,
        codegree_bound,
        residual_max_degree,
    })
}

fn dpll_rec(clauses: Vec<Clause>, values: &mut Vec<Option<bool>>, nodes: &mut u64) -> bool {
    *nodes += 1;
    let Some(mut clauses) = propagate(clauses, values) else { return false };
    loop {
        let n = values.len();
        let mut pos = vec![false; n];
        let mut neg = vec![false; n];
        for l in clauses.iter().flatten() {
            if l.is_negated() {
                neg[l.var()] = true;
            } else {
                pos[l.var()] = true;
            }
        }
        let Some(pure) = (0..n).find(|&v| pos[v] != neg[v]) else { break };
        let lit = Lit::new(pure, neg[pure]);
        values[pure] = Some(!lit.is_negated());
        clauses = assign(&clauses, lit).expect("pure literals cannot conflict");
    }
    let Some(shortest) = clauses.iter().map(Vec::len).min() else { return true };
    let mut score = vec![0usize; values.len()];
    for c in clauses.iter().filter(|c| c.len() == shortest) {
        for l in c {
            score[l.var()] += 1;
        }
    }
    let var = (0..score.len()).max_by_key(|&v| (score[v], std::cmp::Reverse(v))).unwrap();
    for value in [true, false] {
        let lit = Lit::new(var, !value);
        if let Some(next) = assign(&clauses, lit) {
            let mut trial = values.clone();
            trial[var] = Some(value);
            if dpll_rec(next, &mut trial, nodes) {
                *values = trial;
                return true;
            }
        }
    }
    false
}

/// DPLL with unit propagation and pure literals. Returns a model, with
/// unconstrained variables set to false, and the number of search nodes.
pub fn dpll_counted(phi: &CnfFormula) -> (Option<Vec<bool>>, u64) {
    let mut values = vec![None; phi.num_vars()];
    let mut nodes = 0;
    if dpll_rec(phi.clauses().to_vec(), &mut values, &mut nodes) {
        let model: Vec<bool> = values.into_iter().map(|v| v.unwrap_or(false)).collect();
        debug_assert!(phi.evaluate(&model));
        (Some(model), nodes)
    } else {
        (None, nodes)
    }
}

pub fn dpll(phi: &CnfFormula) -> Option<Vec<bool>> {
    dpll_counted(phi).0
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SatMode {
    #[default]
    Auto,
    Dpll,
    Containers,
}

#[derive(Clone, Copy, Debug)]
pub struct SatConfig {
    pub mode: SatMode,
    /// Edge-fraction constant of the container search thresholds.
    pub container_eps: f64,
    pub max_containers: usize,
}

impl Default for SatConfig {
    fn default() -> Self {
        SatConfig { mode: SatMode::Auto, container_eps: 0.5, max_containers: 1 << 20 }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SatStats {
    pub containers: usize,
    pub restrictions_solved: usize,
    pub contradictions: usize,
    pub largest_subproblem: usize,
    pub largest_container: usize,
    pub size_check_failures: usize,
    pub dpll_nodes: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SatOutcome {
    pub satisfiable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<Vec<bool>>,
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureReport>,
    pub stats: SatStats,
}

/// Decides `φ`. When `φ` contains a structure, containers of `(V(H_φ), E′)`
/// are built with `p = D^{−ε/r}` and DPLL runs on the whole formula
/// restricted to each container. Otherwise DPLL runs on `φ` directly.
///
/// In `Containers` mode the container path is taken whenever the formula
/// has clauses of width at least 2, using all of `H_φ` if no structure was
/// extracted.
pub fn solve_ksat_dense(phi: &CnfFormula, params: &StructureParams, config: &SatConfig) -> Result<SatOutcome> {
    let k = phi.k();
    if k > 0 && !phi.is_uniform(k) {
        return Err(Error::param(format!("mixed clause widths; every clause must have exactly {k} literals")));
    }
    let direct = |structure: Option<StructureReport>| {
        let (model, nodes) = dpll_counted(phi);
        SatOutcome {
            satisfiable: model.is_some(),
            model,
            path: "dpll".into(),
            structure,
            stats: SatStats { largest_subproblem: phi.num_vars(), dpll_nodes: nodes, ..Default::default() },
        }
    };
    if config.mode == SatMode::Dpll || k < 2 {
        return Ok(direct(None));
    }
    let lh = build_literal_hypergraph(phi)?;
    let report = extract_structure(&lh, params)?;
    let edges = match (report.status, config.mode) {
        (StructureStatus::Found, _) => report.edges.clone(),
        (_, SatMode::Containers) if !report.edges.is_empty() => report.edges.clone(),
        (_, SatMode::Containers) => (0..lh.hypergraph.edge_count()).collect(),
        _ => return Ok(direct(Some(report))),
    };
    if params.d < 2 || params.epsilon <= 0.0 {
        return Err(Error::param("container path needs D ≥ 2 and ε > 0"));
    }
    let sub = lh.hypergraph.with_edges(&edges);
    let hp = HypergraphContainerParams {
        p: (params.d as f64).powf(-params.epsilon / k as f64),
        c: params.c,
        r: k,
        eps_edges: config.container_eps,
    };
    let n = phi.num_vars();
    let opts = HyperOptions { check_conditions: false, max_containers: config.max_containers, ..Default::default() };
    let keep = |s: &VertexSet| (0..n).all(|i| s.contains(2 * i) || s.contains(2 * i + 1));
    let coll = build_hypergraph_collection_filtered(&sub, &hp, opts, &keep)?;

    let mut stats = SatStats { containers: coll.len(), largest_container: coll.max_container, ..Default::default() };
    let restrictions: Vec<Restriction> = coll.containers.par_iter().map(|c| restrict_formula(phi, c)).collect();
    for r in &restrictions {
        if !r.size_bound_holds() {
            stats.size_check_failures += 1;
        }
        if r.is_contradiction() {
            stats.contradictions += 1;
        } else {
            stats.largest_subproblem = stats.largest_subproblem.max(r.free_after);
        }
    }
    const CHUNK: usize = 64;
    let mut model = None;
    for (ci, chunk) in restrictions.chunks(CHUNK).enumerate() {
        let results: Vec<(Option<Vec<bool>>, u64)> = chunk
            .par_iter()
            .map(|r| match &r.formula {
                None => (None, 0),
                Some(f) => {
                    let (m, nodes) = dpll_counted(f);
                    (m.map(|m| r.lift(&m)), nodes)
                }
            })
            .collect();
        stats.restrictions_solved += chunk.iter().filter(|r| !r.is_contradiction()).count();
        stats.dpll_nodes += results.iter().map(|r| r.1).sum::<u64>();
        if let Some(m) = results.into_iter().find_map(|r| r.0) {
            debug_assert!(phi.evaluate(&m), "container {ci} gave a wrong model");
            model = Some(m);
            break;
        }
    }
    Ok(SatOutcome { satisfiable: model.is_some(), model, path: "containers".into(), structure: Some(report), stats })
}
