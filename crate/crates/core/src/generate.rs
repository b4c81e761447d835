//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{CnfFormula, Lit};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;
use crate::vertex_set::VertexSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform-ish simple `d`-regular graph from the pairing model.
///
/// Points are paired one random pair at a time, rejecting pairs that would
/// form a loop or a repeated edge; a stuck configuration restarts.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n * d % 2 == 1 {
        return Err(Error::param(format!("n*d = {} is odd", n * d)));
    }
    if d >= n && !(n == 0 && d == 0) {
        return Err(Error::param(format!("degree {d} must be below n={n}")));
    }
    let mut rng = rng(seed);
    if 2 * d > n - 1 {
        let comp = pairing(n, n - 1 - d, &mut rng);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !comp.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        return Graph::from_edges(n, &edges);
    }
    Ok(pairing(n, d, &mut rng))
}

fn pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Graph {
    'restart: loop {
        let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::with_capacity(n * d / 2);
        while !points.is_empty() {
            let mut tries = 0;
            loop {
                let i = rng.gen_range(0..points.len());
                let j = rng.gen_range(0..points.len());
                let (u, v) = (points[i], points[j]);
                if i != j && u != v && !adj[u][v] {
                    adj[u][v] = true;
                    adj[v][u] = true;
                    edges.push((u.min(v), u.max(v)));
                    let (a, b) = (i.max(j), i.min(j));
                    points.swap_remove(a);
                    points.swap_remove(b);
                    break;
                }
                tries += 1;
                if tries > 50 * points.len() + 100 {
                    let ok = points.iter().enumerate().any(|(a, &u)| {
                        points[a + 1..].iter().any(|&v| u != v && !adj[u][v])
                    });
                    if !ok {
                        continue 'restart;
                    }
                    tries = 0;
                }
            }
        }
        return Graph::from_edges(n, &edges).unwrap();
    }
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn random_clause(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Lit> {
    let vars = rand::seq::index::sample(rng, n, k);
    vars.iter().map(|v| Lit::new(v, rng.gen_bool(0.5))).collect()
}

/// `m` clauses, each on `k` distinct uniform variables with uniform signs.
pub fn random_kcnf(n: usize, m: usize, k: usize, seed: u64) -> Result<CnfFormula> {
    if k == 0 || k > n {
        return Err(Error::param(format!("clause width {k} invalid for {n} variables")));
    }
    let mut rng = rng(seed);
    let clauses = (0..m).map(|_| random_clause(n, k, &mut rng)).collect();
    CnfFormula::new(n, clauses)
}

/// Random k-CNF satisfied by a hidden assignment, which is also returned.
pub fn planted_kcnf(n: usize, m: usize, k: usize, seed: u64) -> Result<(CnfFormula, Vec<bool>)> {
    if k == 0 || k > n {
        return Err(Error::param(format!("clause width {k} invalid for {n} variables")));
    }
    let mut rng = rng(seed);
    let planted: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let c = random_clause(n, k, &mut rng);
        if c.iter().any(|l| l.eval(&planted)) {
            clauses.push(c);
        }
    }
    Ok((CnfFormula::new(n, clauses)?, planted))
}

/// A sparse random k-CNF on `n` variables plus a block of `block` fresh
/// variables carrying every k-clause over the block that has at least one
/// positive literal. The block is satisfiable on its own, so satisfiability
/// is that of the sparse part, yet the block holds most of the clauses.
pub fn planted_block_kcnf(n: usize, m: usize, k: usize, block: usize, seed: u64) -> Result<CnfFormula> {
    if block < k {
        return Err(Error::param(format!("block of {block} variables is narrower than k={k}")));
    }
    let base = random_kcnf(n, m, k, seed)?;
    let mut clauses = base.clauses().to_vec();
    let mut vars = Vec::with_capacity(k);
    fn rec(start: usize, end: usize, k: usize, vars: &mut Vec<usize>, out: &mut Vec<Vec<Lit>>) {
        if vars.len() == k {
            for signs in 0u32..(1 << k) - 1 {
                out.push(vars.iter().enumerate().map(|(i, &v)| Lit::new(v, signs >> i & 1 == 1)).collect());
            }
            return;
        }
        for v in start..end {
            vars.push(v);
            rec(v + 1, end, k, vars, out);
            vars.pop();
        }
    }
    rec(n, n + block, k, &mut vars, &mut clauses);
    CnfFormula::new(n + block, clauses)
}

/// Scans the vertices in random order and keeps each with probability
/// `keep` when none of its neighbours is already kept.
pub fn random_independent_set<R: Rng>(g: &Graph, keep: f64, rng: &mut R) -> VertexSet {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    let mut s = VertexSet::new(g.n());
    for v in order {
        if s.is_disjoint(g.neighbor_set(v)) && rng.gen_bool(keep) {
            s.insert(v);
        }
    }
    s
}

/// `m` distinct uniformly random `r`-subsets of `0..n` (fewer if `m`
/// exceeds the number available).
pub fn random_hypergraph(n: usize, r: usize, m: usize, seed: u64) -> Result<Hypergraph> {
    if r == 0 || r > n {
        return Err(Error::param(format!("uniformity {r} invalid for n={n}")));
    }
    let mut rng = rng(seed);
    let mut all = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut all);
    all.shuffle(&mut rng);
    all.truncate(m);
    all.sort();
    Hypergraph::new(n, r, all)
}
