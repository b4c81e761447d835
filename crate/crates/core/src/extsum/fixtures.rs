//! Subset collections with and without small refinements.

/// All `k`-subsets of `0..2k` as masks.
pub fn all_half_subsets(k: usize) -> Vec<u64> {
    let n = 2 * k;
    (0..1u64 << n).filter(|m| m.count_ones() as usize == k).collect()
}

/// Searches every assignment of `subsets` to at most `parts` groups for one
/// where each group's union has at most `max_union` elements. Returns the
/// group of each subset.
pub fn find_refinement(subsets: &[u64], parts: usize, max_union: usize) -> Option<Vec<usize>> {
    fn rec(i: usize, subsets: &[u64], parts: usize, max_union: usize, unions: &mut Vec<u64>, groups: &mut Vec<usize>) -> bool {
        if i == subsets.len() {
            return true;
        }
        // Groups are interchangeable, so a subset may open only the next new one.
        let open = (unions.len() + 1).min(parts);
        for g in 0..open {
            let opened = g == unions.len();
            if opened {
                unions.push(0);
            }
            let before = unions[g];
            let after = before | subsets[i];
            if after.count_ones() as usize <= max_union {
                unions[g] = after;
                groups.push(g);
                if rec(i + 1, subsets, parts, max_union, unions, groups) {
                    return true;
                }
                groups.pop();
                unions[g] = before;
            }
            if opened {
                unions.pop();
            }
        }
        false
    }
    let mut unions = Vec::new();
    let mut groups = Vec::new();
    rec(0, subsets, parts, max_union, &mut unions, &mut groups).then_some(groups)
}

/// `⌊log₂ K⌋ + 1`.
pub fn log_parts(count: usize) -> usize {
    assert!(count > 0);
    (usize::BITS - count.leading_zeros()) as usize
}

/// For `k = ⌊log₂ K⌋ + 1` points `x_1..x_k` of `0..n` such that no subset
/// contains all of them, puts each subset in the first part `i` with
/// `x_i` outside it. Each part's union then misses its `x_i`. The points are
/// found by exhaustive search over `[n]^k`.
pub fn log_refinement(n: usize, subsets: &[u64]) -> Option<(Vec<usize>, Vec<usize>)> {
    let k = log_parts(subsets.len());
    let mut xs = vec![0usize; k];
    loop {
        let pts = xs.iter().fold(0u64, |m, &x| m | 1 << x);
        if subsets.iter().all(|&s| pts & !s != 0) {
            let groups = subsets
                .iter()
                .map(|&s| xs.iter().position(|&x| s >> x & 1 == 0).unwrap())
                .collect();
            return Some((xs, groups));
        }
        let mut i = 0;
        loop {
            if i == k {
                return None;
            }
            xs[i] += 1;
            if xs[i] < n {
                break;
            }
            xs[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_subsets_have_no_k_refinement() {
        for k in 2..=3 {
            let subs = all_half_subsets(k);
            assert_eq!(subs.len(), if k == 2 { 6 } else { 20 });
            assert!(find_refinement(&subs, k, 2 * k - 1).is_none());
            assert!(find_refinement(&subs, k + 1, 2 * k - 1).is_some());
        }
    }

    #[test]
    fn log_refinement_parts_miss_a_point() {
        let subs = [0b0011u64, 0b0110, 0b1100];
        let (xs, groups) = log_refinement(4, &subs).unwrap();
        assert_eq!(xs.len(), 2);
        for (s, &g) in subs.iter().zip(&groups) {
            assert_eq!(s >> xs[g] & 1, 0);
        }
    }
}
