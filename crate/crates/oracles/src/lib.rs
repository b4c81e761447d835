//! Brute-force reference answers on small instances.
//!
//! Everything here works on plain edge lists and `u64` vertex masks so the
//! oracles share no code with the solvers they check.

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<u64> {
    assert!(n <= 64);
    let mut adj = vec![0u64; n];
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

pub fn is_independent(adj: &[u64], mask: u64) -> bool {
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        if adj[v] & mask != 0 {
            return false;
        }
        m &= m - 1;
    }
    true
}

/// Every independent set, as masks.
pub fn independent_sets(n: usize, edges: &[(usize, usize)]) -> Vec<u64> {
    let adj = adjacency(n, edges);
    let mut out = Vec::new();
    fn rec(v: usize, n: usize, adj: &[u64], cur: u64, out: &mut Vec<u64>) {
        if v == n {
            out.push(cur);
            return;
        }
        rec(v + 1, n, adj, cur, out);
        if adj[v] & cur == 0 {
            rec(v + 1, n, adj, cur | 1 << v, out);
        }
    }
    rec(0, n, &adj, 0, &mut out);
    out
}

pub fn max_independent_set(n: usize, edges: &[(usize, usize)]) -> usize {
    independent_sets(n, edges).into_iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
}

/// Largest total weight of an independent set.
pub fn max_weight_independent_set(n: usize, edges: &[(usize, usize)], weights: &[i64]) -> i64 {
    independent_sets(n, edges)
        .into_iter()
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).map(|v| weights[v]).sum())
        .max()
        .unwrap_or(0)
}

/// Number of ordered `k`-tuples of independent sets `(I_1, .., I_k)` with
/// `I_j ⊆ allowed[j]` whose union is all of `0..n`.
pub fn constrained_ordered_covers(n: usize, edges: &[(usize, usize)], allowed: &[u64]) -> u128 {
    assert!(n <= 20);
    let sets = independent_sets(n, edges);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut cnt = vec![0u128; 1 << n];
    cnt[0] = 1;
    for &a in allowed {
        let mut next = vec![0u128; 1 << n];
        for (u, &c) in cnt.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &s in &sets {
                if s & !a == 0 {
                    next[u | s as usize] += c;
                }
            }
        }
        cnt = next;
    }
    cnt[full as usize]
}

pub fn ordered_covers(n: usize, edges: &[(usize, usize)], k: usize) -> u128 {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    constrained_ordered_covers(n, edges, &vec![full; k])
}

/// A proper `k`-coloring found by backtracking, if one exists.
pub fn k_coloring(n: usize, edges: &[(usize, usize)], k: usize) -> Option<Vec<usize>> {
    let adj = adjacency(n, edges);
    let mut colors = vec![usize::MAX; n];
    fn rec(v: usize, n: usize, k: usize, adj: &[u64], colors: &mut [usize], used: usize) -> bool {
        if v == n {
            return true;
        }
        // Symmetry: a new vertex may open at most one fresh color.
        for c in 0..k.min(used + 1) {
            let clash = (0..v).any(|u| adj[v] >> u & 1 == 1 && colors[u] == c);
            if !clash {
                colors[v] = c;
                if rec(v + 1, n, k, adj, colors, used.max(c + 1)) {
                    return true;
                }
            }
        }
        colors[v] = usize::MAX;
        false
    }
    rec(0, n, k, &adj, &mut colors, 0).then_some(colors)
}

fn clause_true(clause: &[i64], a: u64) -> bool {
    clause.iter().any(|&l| {
        let v = l.unsigned_abs() as usize - 1;
        (a >> v & 1 == 1) == (l > 0)
    })
}

/// Number of satisfying assignments, by truth table. Clauses use signed
/// 1-indexed DIMACS literals.
pub fn count_models(num_vars: usize, clauses: &[Vec<i64>]) -> u64 {
    assert!(num_vars <= 26);
    (0..1u64 << num_vars).filter(|&a| clauses.iter().all(|c| clause_true(c, a))).count() as u64
}

/// Every satisfying assignment as a bit mask (bit `i` is variable `i+1`).
pub fn models(num_vars: usize, clauses: &[Vec<i64>]) -> Vec<u64> {
    assert!(num_vars <= 26);
    (0..1u64 << num_vars).filter(|&a| clauses.iter().all(|c| clause_true(c, a))).collect()
}

pub fn satisfiable(num_vars: usize, clauses: &[Vec<i64>]) -> bool {
    assert!(num_vars <= 26);
    (0..1u64 << num_vars).any(|a| clauses.iter().all(|c| clause_true(c, a)))
}

fn subsets_of_size(n: usize, k: usize) -> Vec<u64> {
    (0..1u64 << n).filter(|m| m.count_ones() as usize == k).collect()
}

/// `k`-sets whose every `r`-subset is an edge, counted over all of `0..n`.
pub fn count_hypercliques(n: usize, r: usize, edges: &[Vec<usize>], k: usize) -> u64 {
    assert!(n <= 20);
    let edge_masks: std::collections::HashSet<u64> =
        edges.iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    subsets_of_size(n, k)
        .into_iter()
        .filter(|&s| {
            (0..1u64 << n)
                .filter(|&t| t & !s == 0 && t.count_ones() as usize == r)
                .all(|t| edge_masks.contains(&t))
        })
        .count() as u64
}

/// `Δ_i` by enumerating every `i`-subset of the vertex set.
pub fn max_codegree(n: usize, edges: &[Vec<usize>], i: usize) -> usize {
    assert!(n <= 20);
    let edge_masks: Vec<u64> = edges.iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    subsets_of_size(n, i)
        .into_iter()
        .map(|t| edge_masks.iter().filter(|&&e| e & t == t).count())
        .max()
        .unwrap_or(0)
}

/// Independent sets of a hypergraph: masks containing no edge.
pub fn hypergraph_independent_sets(n: usize, edges: &[Vec<usize>]) -> Vec<u64> {
    assert!(n <= 22);
    let edge_masks: Vec<u64> = edges.iter().map(|e| e.iter().fold(0u64, |m, &v| m | 1 << v)).collect();
    (0..1u64 << n).filter(|&s| edge_masks.iter().all(|&e| e & s != e)).collect()
}
