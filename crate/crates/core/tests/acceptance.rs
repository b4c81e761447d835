//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hcm::coloring::{constrained_f, inclusion_exclusion_f, solve_kcoloring, ColoringConfig, ColoringMode};
use hcm::containers::{build_regular_collection, container_of, fingerprint, ContainerParams, RegularOptions};
use hcm::extsum::fixtures::{all_half_subsets, find_refinement, log_parts, log_refinement};
use hcm::extsum::{
    eval_disjoint, eval_k2, eval_k2_counted, eval_k3, eval_naive, hyperclique_to_extsum, reduce_refinement,
    ExtSumInstance, NAIVE_LIMIT, TABLE_BITS_LIMIT,
};
use hcm::generate::{gnp, planted_block_kcnf, planted_kcnf, random_hypergraph, random_kcnf, random_regular_graph, rng};
use hcm::mis::{mis_base, mis_containers, MisMode, MisParams};
use hcm::partition::{
    build_partition_collection_regular, greedy_matching, matching_refinement, uncovered_edges, venn_refinement,
    PartitionOptions, RefinementResult,
};
use hcm::sat::{
    build_literal_hypergraph, dpll, extract_structure, restrict_formula, solve_ksat_dense, SatConfig, SatMode,
    StructureParams, StructureStatus,
};
use hcm::{Graph, Hypergraph, VertexSet};
use hcm_oracles as oracle;
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn edges(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().collect()
}

fn mask(s: &VertexSet) -> u64 {
    s.as_mask().expect("universe fits in one word")
}

fn within(t: Instant, limit: Duration) -> Outcome {
    let e = t.elapsed();
    if e > limit {
        Err(format!("took {e:.1?}, limit {limit:?}"))
    } else {
        Ok(format!("{e:.1?}"))
    }
}

fn regular_family() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for i in 0..100u64 {
        let d = [3usize, 4, 6][(i % 3) as usize];
        let mut n = 8 + (i / 3 % 13) as usize;
        if n * d % 2 == 1 {
            n = if n == 20 { 19 } else { n + 1 };
        }
        out.push((format!("{d}-regular n={n} seed={i}"), random_regular_graph(n, d, i).unwrap()));
    }
    for n in [4, 6, 9] {
        out.push((format!("K{n}"), Graph::complete(n)));
    }
    for n in [5, 8, 12, 17] {
        out.push((format!("C{n}"), Graph::cycle(n)));
    }
    out.push(("Petersen".into(), Graph::petersen()));
    out
}

fn epsilon_for(i: usize) -> f64 {
    [0.1, 0.25, 0.4][i % 3]
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut sets = 0usize;
    for (i, (name, g)) in regular_family().iter().enumerate() {
        let eps = epsilon_for(i);
        let coll = build_regular_collection(g, eps, RegularOptions::forced()).unwrap().collection().unwrap();
        let params = ContainerParams::for_graph(g, eps).unwrap();
        let n = g.n() as f64;
        let containers: Vec<u64> = coll.containers.iter().map(mask).collect();
        for is in oracle::independent_sets(g.n(), &edges(g)) {
            sets += 1;
            ensure!(containers.iter().any(|&c| is & !c == 0), "{name}: independent set {is:b} not covered");
            let s = VertexSet::from_mask(g.n(), is);
            let f = fingerprint(g, &s, &params).unwrap();
            ensure!(f.is_subset(&s), "{name}: fingerprint not inside its set");
            let c = container_of(g, &f, &params).unwrap();
            ensure!(s.is_subset(&c), "{name}: g(f(I)) misses part of I");
        }
        for (f, _) in &coll.fingerprints {
            ensure!(f.len() as f64 <= n * params.q() + TOL, "{name}: fingerprint of size {} > n/(εd)", f.len());
        }
        for c in &coll.containers {
            ensure!(c.len() as f64 <= params.container_bound(g.n()) + TOL, "{name}: container of size {} too large", c.len());
        }
    }
    within(t, Duration::from_secs(120)).map(|e| format!("{} graphs, {sets} independent sets covered ({e})", regular_family().len()))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    for (i, (name, g)) in regular_family().iter().enumerate() {
        let eps = epsilon_for(i);
        let coll = build_regular_collection(g, eps, RegularOptions::forced()).unwrap().collection().unwrap();
        let bound = eps * g.average_degree() * g.n() as f64;
        let adj = oracle::adjacency(g.n(), &edges(g));
        for c in &coll.containers {
            let m = mask(c);
            let inside: u32 = (0..g.n()).filter(|&v| m >> v & 1 == 1).map(|v| (adj[v] & m).count_ones()).sum::<u32>() / 2;
            ensure!(inside as f64 <= bound + TOL, "{name}: container spans {inside} edges > εdn = {bound}");
            checked += 1;
        }
    }
    within(t, Duration::from_secs(120)).map(|e| format!("{checked} containers within εdn ({e})"))
}

fn maximal_independent_sets(n: usize, e: &[(usize, usize)]) -> Vec<u64> {
    let adj = oracle::adjacency(n, e);
    oracle::independent_sets(n, e)
        .into_iter()
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 1 || adj[v] & s != 0))
        .collect()
}

fn split_covered(tuple: &[u64], containers: &[u64]) -> bool {
    let k = tuple.len();
    (0u64..1 << (k - 1)).any(|m| {
        let (mut a, mut b) = (0u64, 0u64);
        for (i, &s) in tuple.iter().enumerate() {
            if m >> i & 1 == 1 {
                a |= s;
            } else {
                b |= s;
            }
        }
        containers.iter().any(|&c| a & !c == 0) && containers.iter().any(|&c| b & !c == 0)
    })
}

fn multisets(m: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..m {
            cur.push(i);
            if !rec(i, m, k, cur, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(0, m, k, &mut Vec::new(), f)
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut graphs = vec![("C16".to_string(), Graph::cycle(16))];
    for n in [10, 12, 14, 16, 18] {
        for seed in 0..2u64 {
            graphs.push((format!("4-regular n={n} seed={seed}"), random_regular_graph(n, 4, 100 + seed).unwrap()));
        }
    }
    let mut r = rng(3);
    let (mut sampled, mut exhaustive) = (0usize, 0usize);
    for (name, g) in &graphs {
        let e = edges(g);
        let all = oracle::independent_sets(g.n(), &e);
        let maximal = maximal_independent_sets(g.n(), &e);
        for k in 2..=3 {
            let coll = build_partition_collection_regular(g, k, PartitionOptions::forced()).unwrap().collection().unwrap();
            let containers: Vec<u64> = coll.maximal().iter().map(mask).collect();
            for c in &coll.containers {
                ensure!(c.len() <= coll.ceiling, "{name} k={k}: partition container above the ceiling");
            }
            for _ in 0..10_000 {
                let tuple: Vec<u64> = (0..k).map(|_| *all.choose(&mut r).unwrap()).collect();
                ensure!(split_covered(&tuple, &containers), "{name} k={k}: tuple {tuple:?} has no covered split");
                sampled += 1;
            }
            if g.n() <= 12 {
                let mut bad = None;
                multisets(maximal.len(), k, &mut |idx| {
                    let tuple: Vec<u64> = idx.iter().map(|&i| maximal[i]).collect();
                    exhaustive += 1;
                    if split_covered(&tuple, &containers) {
                        true
                    } else {
                        bad = Some(tuple);
                        false
                    }
                });
                if let Some(tuple) = bad {
                    return Err(format!("{name} k={k}: maximal tuple {tuple:?} has no covered split"));
                }
            }
        }
    }
    within(t, Duration::from_secs(300))
        .map(|e| format!("{} instances, {sampled} sampled and {exhaustive} exhaustive tuples ({e})", graphs.len() * 2))
}

fn random_family(r: &mut impl Rng, n: usize, k: usize) -> Vec<VertexSet> {
    (0..k)
        .map(|_| {
            let p: f64 = r.gen_range(0.05..0.95);
            VertexSet::from_iter(n, (0..n).filter(|_| r.gen_bool(p)))
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut r = rng(4);
    let mut matchings = 0;
    for _ in 0..1000 {
        let n = r.gen_range(1..=40usize);
        let k = r.gen_range(1..=5usize);
        let fam = random_family(&mut r, n, k);
        let v = venn_refinement(n, &fam);
        let masks: Vec<u64> = fam.iter().map(mask).collect();
        let inter = v.a.iter().fold(if n == 64 { u64::MAX } else { (1u64 << n) - 1 }, |m, &i| m & masks[i]);
        let union = v.b.iter().fold(0u64, |m, &i| m | masks[i]);
        ensure!(inter.count_ones() as usize == v.intersection_a && union.count_ones() as usize == v.union_b, "venn counts disagree");
        ensure!(v.intersection_a << k >= n, "|∩A| = {} < n/2^k for n={n} k={k}", v.intersection_a);
        ensure!(v.union_b << k <= ((1 << k) - 1) * n, "|∪B| = {} > (1−2^−k)n for n={n} k={k}", v.union_b);

        let g = gnp(n, r.gen_range(0.05..0.5), r.gen());
        let free = uncovered_edges(&g, &fam);
        if free.is_empty() {
            continue;
        }
        let m = greedy_matching(n, &free);
        let mut deg = vec![0usize; n];
        for &(a, b) in &free {
            deg[a] += 1;
            deg[b] += 1;
        }
        let delta = deg.into_iter().max().unwrap();
        ensure!(2 * delta * m.len() >= free.len(), "matching {} < |E′|/(2Δ) with |E′|={} Δ={delta}", m.len(), free.len());
        let refinement = matching_refinement(&g, &fam).unwrap();
        ensure!(refinement.is_partition_of(k), "matching refinement is not a partition");
        let msize = refinement.matching.unwrap();
        ensure!(msize == m.len(), "refinement used a different matching");
        for p in &refinement.parts {
            ensure!((n - p.union.len()) << k >= msize, "part union {} > n − 2^−k|M| (n={n} k={k} |M|={msize})", p.union.len());
        }
        matchings += 1;
    }
    within(t, Duration::from_secs(120)).map(|e| format!("1000 venn splits, {matchings} matching refinements ({e})"))
}

fn brute_extsum(universe: usize, subsets: &[Vec<usize>], tables: &[Vec<i64>]) -> i128 {
    let mut total = 0i128;
    for alpha in 0u64..1 << universe {
        let mut prod = 1i128;
        for (s, t) in subsets.iter().zip(tables) {
            let local = s.iter().enumerate().fold(0usize, |m, (j, &x)| m | ((alpha >> x & 1) as usize) << j);
            prod *= t[local] as i128;
            if prod == 0 {
                break;
            }
        }
        total += prod;
    }
    total
}

fn random_subset(r: &mut impl Rng, pool: &[usize], max: usize) -> Vec<usize> {
    let mut p = pool.to_vec();
    p.shuffle(r);
    let size = r.gen_range(0..=max.min(p.len()));
    let mut s = p[..size].to_vec();
    s.sort_unstable();
    s
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut r = rng(5);
    let mut iterations_checked = 0;
    for i in 0..500 {
        let kind = i % 5;
        let universe = r.gen_range(1..=18usize);
        let all: Vec<usize> = (0..universe).collect();
        let subsets: Vec<Vec<usize>> = match kind {
            0 => {
                let mut p = all.clone();
                p.shuffle(&mut r);
                let k = r.gen_range(1..=4usize);
                let mut out = vec![Vec::new(); k];
                for v in p {
                    if r.gen_bool(0.8) {
                        out[r.gen_range(0..k)].push(v);
                    }
                }
                out.iter_mut().for_each(|s| s.sort_unstable());
                out
            }
            1 => (0..2).map(|_| random_subset(&mut r, &all, 10)).collect(),
            2 => (0..3).map(|_| random_subset(&mut r, &all, 9)).collect(),
            _ => (0..r.gen_range(2..=5)).map(|_| random_subset(&mut r, &all, 7)).collect(),
        };
        let tables: Vec<Vec<i64>> = subsets.iter().map(|s| (0..1usize << s.len()).map(|_| r.gen_range(-9..=9)).collect()).collect();
        let big: Vec<Vec<BigInt>> = tables.iter().map(|t| t.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let inst = ExtSumInstance::new(universe, subsets.clone(), big).unwrap();
        let want = BigInt::from(brute_extsum(universe, &subsets, &tables));
        let naive = eval_naive(&inst, NAIVE_LIMIT).unwrap();
        ensure!(naive == want, "instance {i}: eval_naive {naive} ≠ brute force {want}");
        let got = match kind {
            0 => eval_disjoint(&inst).unwrap(),
            1 => {
                let (v, it) = eval_k2_counted(&inst).unwrap();
                let bound = (1u64 << subsets[0].len()) + (1u64 << subsets[1].len());
                ensure!(it <= bound, "instance {i}: k2 used {it} iterations > {bound}");
                iterations_checked += 1;
                v
            }
            2 => eval_k3(&inst).unwrap(),
            3 => {
                let k = subsets.len();
                let parts = r.gen_range(1..=k);
                let mut groups = vec![Vec::new(); parts];
                for j in 0..k {
                    groups[r.gen_range(0..parts)].push(j);
                }
                let sets: Vec<VertexSet> = subsets.iter().map(|s| VertexSet::from_iter(universe, s.iter().copied())).collect();
                let red = reduce_refinement(&inst, &RefinementResult::from_groups(universe, &sets, groups), TABLE_BITS_LIMIT).unwrap();
                eval_naive(&red, NAIVE_LIMIT).unwrap()
            }
            _ => {
                let k = subsets.len();
                let split = r.gen_range(1..k);
                let groups = vec![(0..split).collect(), (split..k).collect()];
                let sets: Vec<VertexSet> = subsets.iter().map(|s| VertexSet::from_iter(universe, s.iter().copied())).collect();
                let red = reduce_refinement(&inst, &RefinementResult::from_groups(universe, &sets, groups), TABLE_BITS_LIMIT).unwrap();
                eval_k2(&red).unwrap()
            }
        };
        ensure!(got == want, "instance {i} (kind {kind}): evaluator gave {got}, expected {want}");
    }
    within(t, Duration::from_secs(180)).map(|e| format!("500 instances exact, {iterations_checked} k2 counters in bound ({e})"))
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    for k in 2..=3 {
        let subsets = all_half_subsets(k);
        ensure!(find_refinement(&subsets, k, 2 * k - 1).is_none(), "k={k}: found a refinement with every part ≠ X");
        ensure!(find_refinement(&subsets, k, 2 * k).is_some(), "k={k}: trivial refinement missing");
    }
    let mut collections = 0usize;
    let mut check = |n: usize, subs: &[u64]| -> Result<(), String> {
        let k = log_parts(subs.len());
        let (xs, groups) = log_refinement(n, subs).ok_or_else(|| format!("no refinement for {subs:?} over {n}"))?;
        if xs.len() != k || groups.len() != subs.len() {
            return Err("malformed refinement".into());
        }
        let mut unions = vec![0u64; k];
        for (s, &g) in subs.iter().zip(&groups) {
            unions[g] |= s;
        }
        for (u, &x) in unions.iter().zip(&xs) {
            if u >> x & 1 == 1 || u.count_ones() as usize > n - 1 {
                return Err(format!("part misses no element for {subs:?}"));
            }
        }
        collections += 1;
        Ok(())
    };
    for n in 1..=5usize {
        let half: Vec<u64> = (0..1u64 << n).filter(|m| 2 * m.count_ones() as usize <= n).collect();
        for kk in 1..=7usize.min(half.len()) {
            let mut idx: Vec<usize> = (0..kk).collect();
            loop {
                let subs: Vec<u64> = idx.iter().map(|&i| half[i]).collect();
                check(n, &subs)?;
                let mut i = kk;
                while i > 0 && idx[i - 1] == half.len() - kk + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..kk {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
    }
    let mut r = rng(6);
    for n in 6..=10usize {
        let half: Vec<u64> = (0..1u64 << n).filter(|m| 2 * m.count_ones() as usize <= n).collect();
        for _ in 0..2000 {
            let kk = r.gen_range(1..=7);
            let subs: Vec<u64> = (0..kk).map(|_| *half.choose(&mut r).unwrap()).collect();
            check(n, &subs)?;
        }
    }
    within(t, Duration::from_secs(120)).map(|e| format!("no refinement for k=2,3; {collections} collections refined ({e})"))
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let mut r = rng(7);
    for i in 0..90u64 {
        let n = 1 + (i % 12) as usize;
        let g = gnp(n, r.gen_range(0.1..0.8), i);
        let k = 1 + (i % 3) as usize;
        let want = BigInt::from(oracle::ordered_covers(n, &edges(&g), k));
        let f = inclusion_exclusion_f(&g, k).unwrap();
        ensure!(f == want, "F(G) = {f} ≠ {want} (n={n}, k={k}, seed {i})");
        let full = constrained_f(&g, &vec![VertexSet::full(n); k]).unwrap();
        ensure!(full == f, "constrained F with full containers {full} ≠ F(G) {f}");
        let cs: Vec<VertexSet> = (0..k).map(|_| VertexSet::from_iter(n, (0..n).filter(|_| r.gen_bool(0.7)))).collect();
        let allowed: Vec<u64> = cs.iter().map(mask).collect();
        let want = BigInt::from(oracle::constrained_ordered_covers(n, &edges(&g), &allowed));
        let got = constrained_f(&g, &cs).unwrap();
        ensure!(got == want, "constrained F = {got} ≠ {want} (n={n}, k={k}, seed {i})");
    }
    let (mut yes, mut no) = (0, 0);
    for i in 0..200u64 {
        let n = 4 + (i % 11) as usize;
        let g = if i % 4 == 3 && n >= 6 {
            random_regular_graph(n, if n % 2 == 0 { 5 } else { 4 }, i).unwrap()
        } else {
            gnp(n, [0.25, 0.45, 0.65][(i % 3) as usize], 1000 + i)
        };
        let k = 2 + (i % 3) as usize;
        let want = oracle::k_coloring(n, &edges(&g), k).is_some();
        if want {
            yes += 1;
        } else {
            no += 1;
        }
        for mode in [ColoringMode::Baseline, ColoringMode::Containers] {
            let cfg = ColoringConfig { mode, certificate: true, ..Default::default() };
            let out = solve_kcoloring(&g, k, &cfg).unwrap();
            ensure!(out.colorable == want, "instance {i} ({mode:?}, n={n}, k={k}): decided {} expected {want}", out.colorable);
            if let Some(c) = &out.certificate {
                ensure!(g.is_proper_coloring(c) && c.iter().all(|&x| x < k), "instance {i}: bad certificate");
            }
        }
    }
    within(t, Duration::from_secs(600)).map(|e| format!("90 counts exact; 200 decisions ({yes} yes, {no} no) on both paths ({e})"))
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    for i in 0..200u64 {
        let n = 6 + (i % 19) as usize;
        let g = match i % 4 {
            0 => random_regular_graph(n - n % 2, [3, 4, 5][(i / 4 % 3) as usize], i).unwrap(),
            _ => gnp(n, [0.1, 0.2, 0.35, 0.5, 0.7][(i % 5) as usize], i),
        };
        let want = oracle::max_independent_set(g.n(), &edges(&g));
        let base = mis_containers(&g, &MisParams { mode: MisMode::Base, ..Default::default() }).unwrap();
        let cont = mis_containers(&g, &MisParams { mode: MisMode::Containers, ..Default::default() }).unwrap();
        ensure!(base.size == want && cont.size == want, "graph {i}: base {} containers {} oracle {want}", base.size, cont.size);
        ensure!(g.is_independent(&base.best) && g.is_independent(&cont.best), "graph {i}: returned set not independent");
        ensure!(mis_base(&g).size == want, "graph {i}: mis_base disagrees");
    }
    let mut worst: f64 = 0.0;
    for (n, d) in [(16, 8), (20, 8), (24, 8), (20, 10), (24, 12)] {
        for seed in 0..4u64 {
            let g = random_regular_graph(n, d, 800 + seed).unwrap();
            let eps = 0.25;
            let r = mis_containers(&g, &MisParams { mode: MisMode::Containers, epsilon: eps, ..Default::default() }).unwrap();
            let frac = r.stats.largest_subproblem as f64 / n as f64;
            ensure!(frac <= 0.5 + eps + TOL, "{d}-regular n={n}: largest subproblem {} > (1/2+ε)n", r.stats.largest_subproblem);
            worst = worst.max(frac);
        }
    }
    within(t, Duration::from_secs(300)).map(|e| format!("200 graphs exact; worst subproblem fraction {worst:.3} ≤ 0.75 ({e})"))
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let params = StructureParams::new(10, 4.0, 0.3);
    let mut restrictions = 0usize;
    let mut found = 0;
    for i in 0..300u64 {
        let n = 6 + (i % 13) as usize;
        let density = [1.0, 2.0, 4.26, 6.0, 10.0, n as f64 * 0.5, (n * n) as f64 / n as f64][(i / 13 % 7) as usize];
        let m = ((density * n as f64).round() as usize).min(n * n).max(1);
        let phi = if i % 5 == 4 { planted_kcnf(n, m, 3, i).unwrap().0 } else { random_kcnf(n, m, 3, i).unwrap() };
        let want = dpll(&phi).is_some();
        if n <= 16 {
            let dimacs: Vec<Vec<i64>> = phi.clauses().iter().map(|c| c.iter().map(|l| l.to_dimacs()).collect()).collect();
            ensure!(oracle::satisfiable(n, &dimacs) == want, "formula {i}: dpll disagrees with the truth table");
        }
        for mode in [SatMode::Auto, SatMode::Containers] {
            let out = solve_ksat_dense(&phi, &params, &SatConfig { mode, ..Default::default() }).unwrap();
            ensure!(out.satisfiable == want, "formula {i} ({mode:?}, n={n}, m={m}): got {} expected {want}", out.satisfiable);
            if let Some(model) = &out.model {
                ensure!(phi.evaluate(model), "formula {i}: model does not satisfy φ");
            }
            ensure!(out.stats.size_check_failures == 0, "formula {i}: restriction size arithmetic failed");
            restrictions += out.stats.containers;
            if out.structure.as_ref().is_some_and(|s| s.status == StructureStatus::Found) {
                found += 1;
            }
        }
        let mut r = rng(i);
        for _ in 0..5 {
            let kept = VertexSet::from_iter(2 * n, (0..2 * n).filter(|_| r.gen_bool(0.8)));
            let res = restrict_formula(&phi, &kept);
            restrictions += 1;
            if !res.is_contradiction() {
                let both = (0..n).filter(|&v| kept.contains(2 * v) && kept.contains(2 * v + 1)).count();
                ensure!(both == res.unassigned && 2 * n - kept.len() + both == n, "restriction counts inconsistent");
                ensure!(res.unassigned + n <= kept.len(), "unassigned {} > |V′| − n", res.unassigned);
                if let Some(m) = dpll(res.formula.as_ref().unwrap()) {
                    ensure!(phi.evaluate(&res.lift(&m)), "restricted model does not satisfy φ");
                }
            }
        }
    }
    let block = planted_block_kcnf(60, 60, 3, 8, 9).unwrap();
    let report = extract_structure(&build_literal_hypergraph(&block).unwrap(), &params).unwrap();
    ensure!(report.status == StructureStatus::Absent, "planted block gave {:?}", report.status);
    ensure!(report.residual_max_degree < params.d, "extraction stopped early");
    let dense = random_kcnf(30, 900, 3, 1).unwrap();
    let report = extract_structure(&build_literal_hypergraph(&dense).unwrap(), &params).unwrap();
    ensure!(report.status != StructureStatus::Absent, "dense random formula has no structure");
    ensure!(report.max_degree <= report.degree_bound, "Δ₁(E′) above (r+1)D");
    within(t, Duration::from_secs(600))
        .map(|e| format!("300 formulas agree ({found} runs with structure), {restrictions} restrictions in bound, block absent ({e})"))
}

fn criterion_10() -> Outcome {
    let t = Instant::now();
    let mut r = rng(10);
    let mut cases = 0;
    for i in 0..60u64 {
        let rr = 2 + (i % 2) as usize;
        let n = r.gen_range(rr..=10usize);
        let k = r.gen_range(rr + 1..=4usize.max(rr + 1));
        let total = (0..rr).fold(1usize, |a, j| a * (n - j) / (j + 1));
        let m = r.gen_range(0..=total);
        let h: Hypergraph = if rr == 2 {
            let g = gnp(n, m as f64 / total.max(1) as f64, i);
            Hypergraph::from_graph(&g)
        } else {
            random_hypergraph(n, rr, m, i).unwrap()
        };
        let want = oracle::count_hypercliques(n, rr, h.edges(), k) as u128;
        let fact: u128 = (1..=k as u128).product();
        let inst = hyperclique_to_extsum::<BigInt>(&h, k).unwrap();
        let got = eval_naive(&inst, NAIVE_LIMIT).unwrap();
        ensure!(got == BigInt::from(want * fact), "n={n} r={rr} k={k}: eval {got} ≠ {k}!·{want}");
        cases += 1;
    }
    within(t, Duration::from_secs(120)).map(|e| format!("{cases} reductions exact ({e})"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 container coverage and size bounds", criterion_1),
        ("2 container sparsity", criterion_2),
        ("3 partition-cover", criterion_3),
        ("4 refinement bounds", criterion_4),
        ("5 extensions-sum evaluators", criterion_5),
        ("6 refinement fixtures", criterion_6),
        ("7 coloring exactness", criterion_7),
        ("8 independent set exactness", criterion_8),
        ("9 dense k-SAT exactness", criterion_9),
        ("10 hyperclique reduction", criterion_10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
