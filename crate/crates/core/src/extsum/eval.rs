use rayon::prelude::*;

use super::{pdep, pext, ExtSumInstance, Scalar};
use crate::error::{Error, Result};
use crate::partition::RefinementResult;

fn full_mask(universe: usize) -> u64 {
    if universe == 64 {
        u64::MAX
    } else {
        (1u64 << universe) - 1
    }
}

/// Positions, in the local coordinates of `subset`, of the variables in `global`.
fn local_mask(subset: &[usize], global: u64) -> u64 {
    subset
        .iter()
        .enumerate()
        .filter(|(_, &v)| global >> v & 1 == 1)
        .fold(0, |m, (j, _)| m | 1 << j)
}

/// Direct summation over all `2^|X|` assignments.
pub fn eval_naive<T: Scalar>(inst: &ExtSumInstance<T>, limit: usize) -> Result<T> {
    if inst.universe() > limit {
        return Err(Error::too_large("naive evaluation universe", inst.universe(), limit));
    }
    let masks: Vec<u64> = (0..inst.k()).map(|i| inst.mask(i)).collect();
    let tables = inst.tables();
    let total = (0..1u64 << inst.universe())
        .into_par_iter()
        .fold(T::zero, |mut acc, alpha| {
            let mut prod = T::one();
            for (t, &m) in tables.iter().zip(&masks) {
                let x = &t[pext(alpha, m) as usize];
                if x.is_zero() {
                    return acc;
                }
                prod = prod * x;
            }
            acc += &prod;
            acc
        })
        .reduce(T::zero, |mut a, b| {
            a += &b;
            a
        });
    Ok(total)
}

/// `2^{|X∖∪X_i|} · Π_i Σ f_i` for pairwise disjoint subsets.
pub fn eval_disjoint<T: Scalar>(inst: &ExtSumInstance<T>) -> Result<T> {
    let mut seen = 0u64;
    for i in 0..inst.k() {
        let m = inst.mask(i);
        if seen & m != 0 {
            return Err(Error::pre("subsets are not pairwise disjoint"));
        }
        seen |= m;
    }
    let mut prod = T::one();
    for t in inst.tables() {
        let mut s = T::zero();
        for x in t {
            s += x;
        }
        prod = prod * &s;
    }
    Ok(prod.shl(inst.universe() - seen.count_ones() as usize))
}

/// Sums `table` over the local positions outside `keep`, indexed by the
/// packed value of the positions inside it.
fn project<T: Scalar>(table: &[T], keep: u64) -> Vec<T> {
    let mut out = vec![T::zero(); 1 << keep.count_ones()];
    for (t, x) in table.iter().enumerate() {
        out[pext(t as u64, keep) as usize] += x;
    }
    out
}

/// Two subsets: group each table by its assignment of `X_1 ∩ X_2`, which
/// leaves a disjoint instance per group. Also returns the number of table
/// entries visited, which is `2^|X_1| + 2^|X_2|`.
pub fn eval_k2_counted<T: Scalar>(inst: &ExtSumInstance<T>) -> Result<(T, u64)> {
    if inst.k() != 2 {
        return Err(Error::param(format!("eval_k2 needs exactly 2 subsets, got {}", inst.k())));
    }
    let (m1, m2) = (inst.mask(0), inst.mask(1));
    let cap = m1 & m2;
    let s = inst.subsets();
    let t = inst.tables();
    let (g1, g2) = rayon::join(
        || project(&t[0], local_mask(&s[0], cap)),
        || project(&t[1], local_mask(&s[1], cap)),
    );
    let iterations = (t[0].len() + t[1].len()) as u64;
    let mut total = T::zero();
    for (a, b) in g1.iter().zip(&g2) {
        if !a.is_zero() && !b.is_zero() {
            total += &(a.clone() * b);
        }
    }
    let rest = inst.universe() - (m1 | m2).count_ones() as usize;
    Ok((total.shl(rest), iterations))
}

pub fn eval_k2<T: Scalar>(inst: &ExtSumInstance<T>) -> Result<T> {
    eval_k2_counted(inst).map(|(v, _)| v)
}

/// Three subsets: for each assignment of `X_1 ∩ X_2 ∩ X_3`, aggregate each
/// table over its private variables into a matrix indexed by its two
/// pairwise overlaps, then sum weighted triangles with a matrix product.
pub fn eval_k3<T: Scalar>(inst: &ExtSumInstance<T>) -> Result<T> {
    if inst.k() != 3 {
        return Err(Error::param(format!("eval_k3 needs exactly 3 subsets, got {}", inst.k())));
    }
    let s = inst.subsets();
    let t = inst.tables();
    let (m1, m2, m3) = (inst.mask(0), inst.mask(1), inst.mask(2));
    let c = m1 & m2 & m3;
    let y12 = m1 & m2 & !c;
    let y13 = m1 & m3 & !c;
    let y23 = m2 & m3 & !c;
    let (b12, b13, b23) = (y12.count_ones(), y13.count_ones(), y23.count_ones());
    let bc = c.count_ones();

    // Table i becomes W_i[β][x][y] for its two overlap axes (x, y).
    let weights = |i: usize, gx: u64, gy: u64, bx: u32, by: u32| -> Vec<T> {
        let (lc, lx, ly) = (local_mask(&s[i], c), local_mask(&s[i], gx), local_mask(&s[i], gy));
        let mut w = vec![T::zero(); 1 << (bc + bx + by)];
        for (a, v) in t[i].iter().enumerate() {
            let a = a as u64;
            let idx = (pext(a, lc) << (bx + by)) | (pext(a, lx) << by) | pext(a, ly);
            w[idx as usize] += v;
        }
        w
    };
    let w1 = weights(0, y12, y13, b12, b13);
    let w2 = weights(1, y12, y23, b12, b23);
    let w3 = weights(2, y13, y23, b13, b23);
    let (n12, n13, n23) = (1usize << b12, 1usize << b13, 1usize << b23);

    let total = (0..1usize << bc)
        .into_par_iter()
        .map(|beta| {
            let w1 = &w1[beta * n12 * n13..(beta + 1) * n12 * n13];
            let w2 = &w2[beta * n12 * n23..(beta + 1) * n12 * n23];
            let w3 = &w3[beta * n13 * n23..(beta + 1) * n13 * n23];
            let mut sum = T::zero();
            for a13 in 0..n13 {
                // Row a13 of W1ᵀ·W2.
                let mut row = vec![T::zero(); n23];
                for a12 in 0..n12 {
                    let x = &w1[a12 * n13 + a13];
                    if x.is_zero() {
                        continue;
                    }
                    for (a23, r) in row.iter_mut().enumerate() {
                        let y = &w2[a12 * n23 + a23];
                        if !y.is_zero() {
                            *r += &(x.clone() * y);
                        }
                    }
                }
                for (a23, r) in row.into_iter().enumerate() {
                    let z = &w3[a13 * n23 + a23];
                    if !r.is_zero() && !z.is_zero() {
                        sum += &(r * z);
                    }
                }
            }
            sum
        })
        .reduce(T::zero, |mut a, b| {
            a += &b;
            a
        });
    let rest = inst.universe() - (m1 | m2 | m3).count_ones() as usize;
    Ok(total.shl(rest))
}

/// Merges each part of `refinement` into one subset whose table is the
/// pointwise product of its members' extensions. The sum is unchanged.
pub fn reduce_refinement<T: Scalar>(
    inst: &ExtSumInstance<T>,
    refinement: &RefinementResult,
    table_bits_limit: usize,
) -> Result<ExtSumInstance<T>> {
    if !refinement.is_partition_of(inst.k()) {
        return Err(Error::pre("refinement does not partition the subsets"));
    }
    let universe_mask = full_mask(inst.universe());
    let mut subsets = Vec::with_capacity(refinement.parts.len());
    let mut tables = Vec::with_capacity(refinement.parts.len());
    for part in &refinement.parts {
        let u = part.indices.iter().fold(0u64, |m, &i| m | inst.mask(i)) & universe_mask;
        let bits = u.count_ones() as usize;
        if bits > table_bits_limit {
            return Err(Error::too_large("merged table variables", bits, table_bits_limit));
        }
        let members: Vec<(u64, &Vec<T>)> = part.indices.iter().map(|&i| (inst.mask(i), &inst.tables()[i])).collect();
        let table: Vec<T> = (0..1u64 << bits)
            .into_par_iter()
            .map(|a| {
                let alpha = pdep(a, u);
                let mut prod = T::one();
                for (m, t) in &members {
                    let x = &t[pext(alpha, *m) as usize];
                    if x.is_zero() {
                        return T::zero();
                    }
                    prod = prod * x;
                }
                prod
            })
            .collect();
        subsets.push((0..64).filter(|&v| u >> v & 1 == 1).collect());
        tables.push(table);
    }
    ExtSumInstance::new(inst.universe(), subsets, tables)
}
