//! Experiment harness: coverage curves, budget sweeps, kernel tables,
//! location clustering and instance generators.

mod cluster;
mod synthetic;

use std::collections::{BTreeMap, HashSet};
use std::hash::Hash;
use std::time::Instant;

use crate::model::{coverage_target, nearest_services, Instance, ModelError};
use crate::solvers::{solve, Algorithm, SolveParams};

pub use cluster::{cluster_degradation, cluster_locations, clustered_instance, ClusterRow, Clustering};
pub use synthetic::{generate_line_instance, generate_synthetic, BoundingBox, LineInstance, SyntheticConfig};

/// Percentiles 0.80, 0.81, ..., 1.00.
pub fn default_percentiles() -> Vec<f64> {
    (80..=100).map(|i| i as f64 / 100.0).collect()
}

/// For each `p`, the radius around `facilities` that serves `floor(p n)`
/// clients.
pub fn coverage_curve(instance: &Instance, facilities: &[usize], ps: &[f64]) -> Result<Vec<(f64, f64)>, ModelError> {
    if facilities.is_empty() {
        return Err(ModelError::EmptyFacilities);
    }
    let mut d: Vec<f64> = nearest_services(instance, facilities).iter().map(|s| s.distance).collect();
    d.sort_by(f64::total_cmp);
    ps.iter()
        .map(|&p| Ok((p, d[coverage_target(p, d.len())? - 1])))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub algorithm: String,
    pub k: usize,
    pub q: f64,
    /// `None` when the solver failed or found nothing feasible.
    pub objective_km: Option<f64>,
    pub runtime_ms: u128,
    pub facilities: Vec<String>,
    /// Facilities opened, counting capacitated copies.
    pub opened: usize,
    pub error: Option<String>,
}

/// One record per (algorithm, k, q). `base` supplies every other solver
/// setting. Failures are recorded and the sweep carries on.
pub fn tradeoff_sweep(
    instance: &Instance,
    algorithms: &[Algorithm],
    ks: impl IntoIterator<Item = usize> + Clone,
    qs: &[f64],
    base: &SolveParams,
) -> Vec<ExperimentRecord> {
    let mut out = Vec::new();
    for &algorithm in algorithms {
        for &q in qs {
            for k in ks.clone() {
                let mut params = base.clone();
                params.k = k;
                params.q = q;
                let start = Instant::now();
                let result = solve(instance, algorithm, &params);
                let runtime_ms = start.elapsed().as_millis();
                let record = match result {
                    Ok(sol) => ExperimentRecord {
                        algorithm: algorithm.name().to_owned(),
                        k,
                        q,
                        objective_km: sol.radius_km,
                        runtime_ms,
                        opened: sol.opened(),
                        facilities: sol.facilities,
                        error: (!sol.feasible).then(|| "infeasible".to_owned()),
                    },
                    Err(e) => ExperimentRecord {
                        algorithm: algorithm.name().to_owned(),
                        k,
                        q,
                        objective_km: None,
                        runtime_ms,
                        facilities: Vec::new(),
                        opened: 0,
                        error: Some(e.to_string()),
                    },
                };
                out.push(record);
            }
        }
    }
    out
}

/// Facilities of `prev` missing from `next`.
pub fn kernel_displacement<T: Eq + Hash>(prev: &[T], next: &[T]) -> usize {
    let next: HashSet<&T> = next.iter().collect();
    prev.iter().collect::<HashSet<&T>>().iter().filter(|f| !next.contains(*f)).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow {
    pub algorithm: String,
    pub q: f64,
    /// The step `k - 1 -> k`.
    pub k: usize,
    pub displacement: usize,
}

/// Displacement between consecutive budgets, for every algorithm and `q` in
/// `records` where both budgets produced facilities.
pub fn kernel_table(records: &[ExperimentRecord]) -> Vec<KernelRow> {
    let mut by_run: BTreeMap<(String, u64), BTreeMap<usize, &ExperimentRecord>> = BTreeMap::new();
    for r in records {
        by_run
            .entry((r.algorithm.clone(), r.q.to_bits()))
            .or_default()
            .insert(r.k, r);
    }
    let mut rows = Vec::new();
    for ((algorithm, q), runs) in by_run {
        for (&k, next) in &runs {
            let Some(prev) = k.checked_sub(1).and_then(|p| runs.get(&p)) else {
                continue;
            };
            if prev.facilities.is_empty() || next.facilities.is_empty() {
                continue;
            }
            rows.push(KernelRow {
                algorithm: algorithm.clone(),
                q: f64::from_bits(q),
                k,
                displacement: kernel_displacement(&prev.facilities, &next.facilities),
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Client, DistanceMatrix, InstanceData, Location, LocationKind, Metric};
    use crate::solvers::CoverSolver;

    /// Four clients at distances 1, 2, 3, 4 from the single site `s`.
    fn spokes() -> Instance {
        let pos: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 4.0];
        let ids = ["s", "l1", "l2", "l3", "l4"];
        Instance::new(InstanceData {
            locations: ids.iter().enumerate().map(|(i, id)| Location::indexed(*id, LocationKind::Activity, i)).collect(),
            clients: (1..=4).map(|i| Client::new(format!("p{i}"), None, [format!("l{i}")])).collect(),
            sites: vec!["s".into()],
            metric: Metric::matrix(DistanceMatrix::from_fn(5, |i, j| (pos[i] - pos[j]).abs())),
        })
        .unwrap()
    }

    #[test]
    fn curve_order_statistics() {
        let inst = spokes();
        let s = inst.location_index("s").unwrap();
        assert_eq!(coverage_curve(&inst, &[s], &[0.5, 1.0]).unwrap(), vec![(0.5, 2.0), (1.0, 4.0)]);
        let full = crate::model::objective(&inst, &[s], 1.0).unwrap();
        assert_eq!(coverage_curve(&inst, &[s], &[1.0]).unwrap()[0].1, full);
    }

    #[test]
    fn curve_nondecreasing() {
        let inst = spokes();
        let c = coverage_curve(&inst, &[0], &default_percentiles()).unwrap();
        assert_eq!(c.len(), 21);
        assert!(c.windows(2).all(|w| w[0].1 <= w[1].1));
        assert_eq!(c[0].0, 0.8);
        assert_eq!(c[20].0, 1.0);
    }

    #[test]
    fn displacement() {
        assert_eq!(kernel_displacement(&["a", "b"], &["a", "c", "d"]), 1);
        assert_eq!(kernel_displacement(&["a"], &["a", "c"]), 0);
        assert_eq!(kernel_displacement::<&str>(&[], &["a"]), 0);
    }

    #[test]
    fn sweep_counts_and_errors() {
        let inst = spokes();
        let base = SolveParams::new(1).with_cover_solver(CoverSolver::Greedy);
        let recs = tradeoff_sweep(&inst, &Algorithm::ALL, 1..=3, &[1.0], &base);
        assert_eq!(recs.len(), 12);
        // No homes, so homecenters fails on every budget and the sweep goes on.
        let hc: Vec<_> = recs.iter().filter(|r| r.algorithm == "homecenters").collect();
        assert!(hc.iter().all(|r| r.error.is_some() && r.objective_km.is_none()));
        let cc: Vec<_> = recs.iter().filter(|r| r.algorithm == "clientcover").collect();
        assert!(cc.iter().all(|r| r.objective_km == Some(4.0)));
    }

    #[test]
    fn kernel_rows() {
        let inst = spokes();
        let recs = tradeoff_sweep(&inst, &[Algorithm::MostActive], 1..=3, &[1.0], &SolveParams::new(1));
        let rows = kernel_table(&recs);
        assert_eq!(rows.iter().map(|r| r.k).collect::<Vec<_>>(), vec![2, 3]);
        assert!(rows.iter().all(|r| r.displacement == 0));
    }
}
