use bmoforge::filtration::corpus::{corpus, random_process, random_space, ProcessFamily};
use bmoforge::filtration::modulus::{rho_grid_with, subtree_stop_values, Method};
use bmoforge::filtration::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Literal definition: every pair S <= T of enumerated stopping times, both
// conventions for V_{S-} on each atom where S stops.
fn rho_by_pairs(space: &FiniteFilteredSpace, v: &AdaptedProcess, s: usize, t: usize) -> f64 {
    let times = enumerate_stopping_times(space, s, t).unwrap();
    let depth = space.depth();
    let mut best: f64 = 0.0;
    for big_s in &times {
        for big_t in times.iter().filter(|tt| tt.dominates(space, big_s)) {
            for node in big_s.stop_nodes(space) {
                let block = space.descendants(node, depth);
                let mut grid = 0.0;
                let mut intra = 0.0;
                for leaf in block {
                    let w = space.cond_prob(node, NodeId::new(depth, leaf));
                    let vt = v.value(big_t.stop_node(space, leaf));
                    grid += w * (vt - v.left_limit(space, node)).abs();
                    intra += w * (vt - v.value(node)).abs();
                }
                best = best.max(grid);
                if node.level < t {
                    best = best.max(intra);
                }
            }
        }
    }
    best
}

fn arb_case(max_depth: usize) -> impl Strategy<Value = (FiniteFilteredSpace, AdaptedProcess)> {
    (any::<u64>(), 1..=max_depth, 0..ProcessFamily::ALL.len()).prop_map(|(seed, depth, fam)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = random_space(&mut rng, depth);
        let v = random_process(&mut rng, &space, ProcessFamily::ALL[fam]);
        (space, v)
    })
}

#[test]
fn fair_walk_window_matches_pair_oracle() {
    let space = FiniteFilteredSpace::uniform(2, 2).unwrap();
    let v = AdaptedProcess::from_increments(&space, 0.0, &[1.0, -1.0]).unwrap();
    assert!((rho_by_pairs(&space, &v, 0, 2) - 1.0).abs() < 1e-15);
    assert!((rho_exact(&space, &v, 0, 2).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn deterministic_linear_matches_pair_oracle() {
    let space = FiniteFilteredSpace::uniform(2, 2).unwrap();
    let v = AdaptedProcess::deterministic(&space, |k| k as f64);
    assert_eq!(rho_by_pairs(&space, &v, 0, 2), 2.0);
}

#[test]
fn pair_oracle_agrees_on_corpus() {
    for case in corpus(11, 40, 3) {
        let d = case.space.depth();
        for s in 0..=d {
            for t in s..=d {
                let exact = rho_exact(&case.space, &case.process, s, t).unwrap();
                let oracle = rho_by_pairs(&case.space, &case.process, s, t);
                assert!(
                    (exact - oracle).abs() <= 1e-12 * (1.0 + oracle),
                    "case {} window [{s},{t}]: {exact} vs {oracle}",
                    case.id
                );
            }
        }
    }
}

#[test]
fn kappa_equals_max_path_jump() {
    for case in corpus(5, 60, 4) {
        let grid = rho_grid(&case.space, &case.process).unwrap();
        assert_eq!(grid.kappa, grid.max_jump);
        let diag = (1..=case.space.depth()).map(|j| grid.rho[j][j]).fold(0.0, f64::max);
        assert!((diag - grid.kappa).abs() < 1e-15);
    }
}

#[test]
fn depth_five_window_is_feasible() {
    let space = FiniteFilteredSpace::uniform(5, 2).unwrap();
    let v = AdaptedProcess::from_increments(&space, 0.0, &[1.0, -1.0]).unwrap();
    let count = stopping_time_count(&space, 0, 5).unwrap();
    assert_eq!(count, 458_330.0);
    let vals = subtree_stop_values(&space, &v, NodeId::ROOT, 5, 0.0);
    assert_eq!(vals.len(), 458_330);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tower_property((space, v) in arb_case(4)) {
        let d = space.depth();
        let leaves = v.level(d).to_vec();
        for s in 0..=d {
            let direct = space.cond_expectation(&leaves, s).unwrap();
            for r in 0..=s {
                let lifted = space.lift(&direct, s).unwrap();
                let nested = space.cond_expectation(&lifted, r).unwrap();
                let outer = space.cond_expectation(&leaves, r).unwrap();
                for (a, b) in nested.iter().zip(&outer) {
                    prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
                }
            }
            // backward averaging by transition probabilities reaches the same values
            let mut back = leaves.clone();
            for level in (s + 1..=d).rev() {
                back = space.average_children(&back, level).unwrap();
            }
            for (a, b) in back.iter().zip(&direct) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn enumeration_matches_optimal_stopping((space, v) in arb_case(4)) {
        let a = rho_grid(&space, &v).unwrap();
        let b = rho_grid_with(&space, &v, Method::OptimalStopping, 0).unwrap();
        for (ra, rb) in a.rho.iter().flatten().zip(b.rho.iter().flatten()) {
            prop_assert!((ra - rb).abs() <= 1e-12 * (1.0 + rb));
        }
    }

    #[test]
    fn grid_matches_windowwise((space, v) in arb_case(4)) {
        let grid = rho_grid(&space, &v).unwrap();
        let d = space.depth();
        for s in 0..=d {
            for t in s..=d {
                let direct = rho_exact(&space, &v, s, t).unwrap();
                prop_assert!((grid.rho[s][t] - direct).abs() <= 1e-12 * (1.0 + direct));
            }
        }
    }

    #[test]
    fn monotone_and_triangle((space, v) in arb_case(4)) {
        let rho = rho_grid(&space, &v).unwrap().rho;
        let d = space.depth();
        let tol = |x: f64| 1e-9 * x + 1e-12;
        for s in 0..=d {
            for t in s..=d {
                for u in s..=t {
                    for w in u..=t {
                        prop_assert!(rho[u][w] <= rho[s][t] + tol(rho[s][t]));
                    }
                    let sum = rho[s][u] + rho[u][t];
                    prop_assert!(rho[s][t] <= sum + tol(sum));
                }
            }
        }
    }

    #[test]
    fn kappa_below_rho((space, v) in arb_case(4)) {
        let k = kappa_exact(&space, &v);
        let r = rho_exact(&space, &v, 0, space.depth()).unwrap();
        prop_assert!(k <= r + 1e-12);
    }

    #[test]
    fn maximal_process_is_nondecreasing((space, v) in arb_case(4)) {
        prop_assert!(maximal_process(&space, &v).is_nondecreasing(&space));
    }

    #[test]
    fn json_roundtrip((space, v) in arb_case(3)) {
        let s: FiniteFilteredSpace = serde_json::from_str(&serde_json::to_string(&space).unwrap()).unwrap();
        let p: AdaptedProcess = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!(s, space);
        prop_assert_eq!(p, v);
    }
}
