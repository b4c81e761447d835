use hcm::generate::{random_kcnf, rng};
use hcm::sat::{
    build_literal_hypergraph, dpll, dpll_counted, extract_hypergraph_structure, extract_structure, restrict_formula,
    solve_ksat_dense, SatConfig, SatMode, StructureParams, StructureStatus,
};
use hcm::{CnfFormula, Hypergraph, VertexSet};
use hcm_oracles as oracle;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn dimacs(phi: &CnfFormula) -> Vec<Vec<i64>> {
    phi.clauses().iter().map(|c| c.iter().map(|l| l.to_dimacs()).collect()).collect()
}

fn bits(n: usize, a: u64) -> Vec<bool> {
    (0..n).map(|i| a >> i & 1 == 1).collect()
}

fn complete_hypergraph(n: usize, r: usize) -> Hypergraph {
    let edges = (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    Hypergraph::new(n, r, edges).unwrap()
}

#[test]
fn literal_hypergraph_rejects_bad_formulas() {
    let mixed = CnfFormula::from_dimacs_clauses(3, &[vec![1, 2], vec![1, 2, 3]]).unwrap();
    assert!(build_literal_hypergraph(&mixed).is_err());
    let empty = CnfFormula::from_dimacs_clauses(3, &[]).unwrap();
    assert!(build_literal_hypergraph(&empty).is_err());
    let dup = CnfFormula::from_dimacs_clauses(3, &[vec![1, -2], vec![-2, 1]]).unwrap();
    let h = build_literal_hypergraph(&dup).unwrap();
    assert_eq!((h.hypergraph.edge_count(), h.duplicate_clauses), (1, 1));
    assert_eq!(h.hypergraph.edges()[0], vec![1, 2]);
}

#[test]
fn dpll_edge_cases() {
    let empty = CnfFormula::from_dimacs_clauses(2, &[]).unwrap();
    assert_eq!(dpll(&empty), Some(vec![false, false]));
    let unsat = CnfFormula::from_dimacs_clauses(1, &[vec![1], vec![-1]]).unwrap();
    assert_eq!(dpll(&unsat), None);
    let (_, nodes) = dpll_counted(&unsat);
    assert!(nodes >= 1);
}

#[test]
fn structure_on_complete_hypergraph() {
    let h = complete_hypergraph(10, 3);
    let params = StructureParams::new(6, 10.0, 0.2);
    let rep = extract_hypergraph_structure(&h, &params).unwrap();
    assert_eq!(rep.status, StructureStatus::Found);
    assert!(rep.residual_max_degree < 6);
    assert!(extract_hypergraph_structure(&h, &StructureParams::new(0, 1.0, 0.2)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn models_give_independent_literal_sets(n in 3usize..10, m in 1usize..30, k in 2usize..4, seed in any::<u64>()) {
        let phi = random_kcnf(n, m, k, seed).unwrap();
        let h = build_literal_hypergraph(&phi).unwrap();
        let models = oracle::models(n, &dimacs(&phi));
        for a in 0u64..1 << n {
            let alpha = bits(n, a);
            let s = h.assignment_set(&alpha);
            prop_assert_eq!(s.len(), n);
            prop_assert_eq!(h.hypergraph.is_independent(&s), models.contains(&a));
        }
    }

    #[test]
    fn restriction_is_sound_and_complete(n in 2usize..9, m in 1usize..25, k in 2usize..4, kept in any::<u64>(), seed in any::<u64>()) {
        prop_assume!(k <= n);
        let phi = random_kcnf(n, m, k, seed).unwrap();
        let kept = VertexSet::from_mask(2 * n, kept & ((1 << (2 * n)) - 1));
        let h = build_literal_hypergraph(&phi).unwrap();
        let r = restrict_formula(&phi, &kept);
        let inside: Vec<u64> = oracle::models(n, &dimacs(&phi))
            .into_iter()
            .filter(|&a| h.assignment_set(&bits(n, a)).is_subset(&kept))
            .collect();
        match &r.formula {
            None => prop_assert!(inside.is_empty()),
            Some(f) => {
                prop_assert!(f.num_vars() == n);
                let sub = oracle::models(n, &dimacs(f));
                for &a in &inside {
                    let alpha = bits(n, a);
                    prop_assert!(r.fixed.iter().zip(&alpha).all(|(f, &x)| f.is_none_or(|v| v == x)));
                    prop_assert!(f.evaluate(&alpha));
                }
                for &a in &sub {
                    let lifted = r.lift(&bits(n, a));
                    prop_assert!(phi.evaluate(&lifted));
                    prop_assert!(h.assignment_set(&lifted).is_subset(&kept));
                }
                prop_assert_eq!(sub.is_empty(), inside.is_empty());
            }
        }
        let both = (0..n).filter(|&i| kept.contains(2 * i) && kept.contains(2 * i + 1)).count();
        prop_assert_eq!(r.unassigned, both);
    }

    #[test]
    fn dpll_matches_truth_table(n in 1usize..13, m in 0usize..60, k in 1usize..4, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let phi = random_kcnf(n, m, k, seed).unwrap();
        let want = oracle::satisfiable(n, &dimacs(&phi));
        match dpll(&phi) {
            Some(model) => {
                prop_assert!(want);
                prop_assert!(phi.evaluate(&model));
            }
            None => prop_assert!(!want),
        }
    }

    #[test]
    fn extraction_degree_certificate(n in 3usize..12, m in 1usize..80, k in 2usize..4, d in 1usize..6, seed in any::<u64>()) {
        let phi = random_kcnf(n, m, k, seed).unwrap();
        let h = build_literal_hypergraph(&phi).unwrap();
        let rep = extract_structure(&h, &StructureParams::new(d, 2.0, 0.3)).unwrap();
        let mut deg = vec![0usize; 2 * n];
        for &ei in &rep.edges {
            for &v in &h.hypergraph.edges()[ei] {
                deg[v] += 1;
            }
        }
        let max = deg.iter().copied().max().unwrap_or(0);
        prop_assert_eq!(max, rep.max_degree);
        prop_assert!(max <= (k + 1) * d);
        prop_assert_eq!(rep.degree_bound, (k + 1) * d);
        prop_assert!(rep.residual_max_degree < d);
        prop_assert_eq!(rep.edge_count, rep.edges.len());
        if rep.status == StructureStatus::Found {
            prop_assert!(rep.edge_count as f64 >= rep.required_edges - 1e-9);
            prop_assert!(rep.max_codegree as f64 <= rep.codegree_bound + 1e-9);
        }

        // Removing at most a quarter of the vertices costs at most (r+1)D edges each.
        let mut r = rng(seed);
        let mut verts: Vec<usize> = (0..2 * n).collect();
        verts.shuffle(&mut r);
        let removed: Vec<usize> = verts[..2 * n / 4].to_vec();
        let left = rep.edges.iter().filter(|&&ei| h.hypergraph.edges()[ei].iter().all(|v| !removed.contains(v))).count();
        prop_assert!(left + removed.len() * (k + 1) * d >= rep.edge_count);
    }

    #[test]
    fn solver_modes_agree(n in 2usize..12, m in 1usize..70, k in 2usize..4, d in 2usize..8, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let phi = random_kcnf(n, m, k, seed).unwrap();
        let want = oracle::satisfiable(n, &dimacs(&phi));
        let params = StructureParams::new(d, 3.0, 0.3);
        for mode in [SatMode::Auto, SatMode::Dpll, SatMode::Containers] {
            let out = solve_ksat_dense(&phi, &params, &SatConfig { mode, ..Default::default() }).unwrap();
            prop_assert_eq!(out.satisfiable, want);
            if let Some(model) = &out.model {
                prop_assert!(phi.evaluate(model));
            }
            prop_assert_eq!(out.model.is_some(), want);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dense_hypergraphs_contain_structures(n in 6usize..14, r in 2usize..4, keep in 0.7f64..1.0, eps in 0.1f64..0.5, seed in any::<u64>()) {
        let full = complete_hypergraph(n, r);
        let mut g = rng(seed);
        let mut idx: Vec<usize> = (0..full.edge_count()).collect();
        idx.shuffle(&mut g);
        idx.truncate(((full.edge_count() as f64) * keep) as usize);
        idx.sort();
        let h = full.with_edges(&idx);
        let mut degrees = h.degrees();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let top: usize = degrees[..(eps * n as f64).floor() as usize].iter().sum();
        let spare = h.edge_count().saturating_sub(top);
        prop_assume!(spare > n);
        // Largest D with D·|V| below the edges that survive any removal of ε|V| vertices.
        let d = (spare - 1) / n;
        let mut params = StructureParams::new(d, 1e9, 0.0);
        params.removal_fraction = eps;
        let rep = extract_hypergraph_structure(&h, &params).unwrap();
        prop_assert_ne!(rep.status, StructureStatus::Absent);
        prop_assert!(rep.edge_count as f64 >= eps / 2.0 * d as f64 * n as f64);
    }
}
