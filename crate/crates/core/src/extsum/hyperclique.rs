use std::collections::HashSet;

use super::{ExtSumInstance, Scalar};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Encodes `k`-hyperclique counting as Extensions-Sum.
///
/// Block `i` holds `⌈log₂ n⌉` variables read as a vertex id. For every
/// `r`-set `I` of blocks the table on `∪_{i∈I} Y_i` is 1 exactly when the
/// decoded ids form an edge. Codes `≥ n` decode to nothing and get 0, so the
/// sum is `k!` times the number of `k`-cliques.
pub fn hyperclique_to_extsum<T: Scalar>(h: &Hypergraph, k: usize) -> Result<ExtSumInstance<T>> {
    let (n, r) = (h.n(), h.r());
    if r < 2 {
        return Err(Error::param("hyperclique reduction needs r ≥ 2"));
    }
    if k <= r {
        return Err(Error::param(format!("clique size {k} must exceed uniformity {r}")));
    }
    if n == 0 {
        return Err(Error::param("hypergraph has no vertices"));
    }
    let b = usize::BITS as usize - (n - 1).leading_zeros() as usize;
    if k * b > 64 {
        return Err(Error::too_large("reduction variables", k * b, 64));
    }
    let edges: HashSet<&[usize]> = h.edges().iter().map(Vec::as_slice).collect();
    let mut groups = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, r, cur, out);
            cur.pop();
        }
    }
    rec(0, k, r, &mut cur, &mut groups);
    let subsets: Vec<Vec<usize>> = groups.iter().map(|g| g.iter().flat_map(|&i| i * b..(i + 1) * b).collect()).collect();
    let code_mask = (1u64 << b) - 1;
    let mut verts = Vec::with_capacity(r);
    ExtSumInstance::from_fn(k * b, subsets, |_, a| {
        verts.clear();
        for j in 0..r {
            let v = (a >> (j * b) & code_mask) as usize;
            if v >= n {
                return T::zero();
            }
            verts.push(v);
        }
        verts.sort_unstable();
        if edges.contains(verts.as_slice()) {
            T::one()
        } else {
            T::zero()
        }
    })
}
