mod common;

use common::{brute_force, random_instance};
use mobclinic::experiments::{
    cluster_degradation, cluster_locations, clustered_instance, coverage_curve, default_percentiles,
    generate_line_instance, generate_synthetic, kernel_table, tradeoff_sweep, SyntheticConfig,
};
use mobclinic::model::objective;
use mobclinic::solvers::{clientcover_solve, solve, Algorithm, SolveParams};
use mobclinic::Distance;

#[test]
fn curve_is_monotone_and_ends_at_the_full_radius() {
    let inst = generate_synthetic(&SyntheticConfig::new(11, 400, 50, 80)).unwrap();
    let sol = solve(&inst, Algorithm::MostActive, &SolveParams::new(6)).unwrap();
    let f = sol.facility_indices(&inst).unwrap();
    let ps = default_percentiles();
    assert_eq!(ps.len(), 21);
    let curve = coverage_curve(&inst, &f, &ps).unwrap();
    for w in curve.windows(2) {
        assert!(w[0].1 <= w[1].1);
    }
    assert_eq!(curve.last().unwrap().1, objective(&inst, &f, 1.0).unwrap());
    assert_eq!(curve[0].1, objective(&inst, &f, 0.8).unwrap());
}

#[test]
fn sweep_is_monotone_in_k_for_clientcover() {
    for seed in 0..40 {
        let (inst, _) = random_instance(seed);
        let recs = tradeoff_sweep(&inst, &[Algorithm::ClientCover], 1..=5, &[1.0, 0.75], &SolveParams::new(1));
        assert_eq!(recs.len(), 10);
        for r in &recs {
            // only floor(q n) = 0 may fail
            if let Some(e) = &r.error {
                assert!(r.q < 1.0 && inst.num_clients() < 2, "seed {seed}: {e}");
            }
        }
        for w in recs.windows(2) {
            if w[0].q == w[1].q && w[0].error.is_none() {
                assert!(w[1].error.is_none(), "seed {seed}: {:?}", w[1].error);
                let (a, b) = (w[0].objective_km.unwrap(), w[1].objective_km.unwrap());
                assert!(b <= a, "seed {seed}: {a} -> {b}");
            }
        }
    }
}

#[test]
fn most_active_kernels_never_move() {
    let inst = generate_synthetic(&SyntheticConfig::new(2, 500, 60, 90)).unwrap();
    let recs = tradeoff_sweep(&inst, &[Algorithm::MostActive], 1..=12, &[1.0], &SolveParams::new(1));
    let rows = kernel_table(&recs);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.displacement == 0));
}

#[test]
fn line_instances_match_brute_force() {
    for seed in 0..30 {
        let gamma = 2 + (seed as usize % 4);
        for k in 1..=gamma {
            let line = generate_line_instance(seed, gamma, k).unwrap();
            let sol = clientcover_solve(&line.instance, &SolveParams::new(k)).unwrap();
            let (opt, _) = brute_force(&line.instance, k, (1, 1));
            assert_eq!(sol.radius_km, Some(opt), "seed {seed} gamma {gamma} k {k}");
            if k == gamma {
                assert_eq!(opt, 0.0);
            }
        }
    }
}

#[test]
fn line_positions_agree_with_the_metric() {
    let line = generate_line_instance(9, 5, 2).unwrap();
    let inst = &line.instance;
    for a in 0..inst.num_locations() {
        for b in 0..inst.num_locations() {
            assert_eq!(inst.dist(a, b), (line.positions[a] - line.positions[b]).abs());
        }
    }
}

#[test]
fn zero_radius_clustering_is_identity() {
    for seed in 0..30 {
        let (inst, k) = random_instance(seed);
        let c = cluster_locations(&inst, 0.0);
        let clustered = clustered_instance(&inst, &c).unwrap();
        let p = SolveParams::new(k);
        let raw = clientcover_solve(&inst, &p).unwrap();
        let rows = cluster_degradation(&inst, &[0.0], &p).unwrap();
        assert_eq!(rows[0].clustered_objective_km, raw.radius_km, "seed {seed}");
        assert_eq!(rows[0].objective_km, raw.radius_km, "seed {seed}");
        assert_eq!(clientcover_solve(&clustered, &p).unwrap().radius_km, raw.radius_km);
    }
}

#[test]
fn clustering_shrinks_with_radius() {
    let inst = generate_synthetic(&SyntheticConfig::new(4, 300, 80, 60)).unwrap();
    let mut last = usize::MAX;
    for r in [0.0, 0.2, 0.5, 1.0, 3.0] {
        let c = cluster_locations(&inst, r);
        assert!(c.centers.len() <= last);
        last = c.centers.len();
        for (&l, &center) in &c.mapping {
            assert!(inst.dist(l, center) <= r + 1e-9);
        }
    }
}
