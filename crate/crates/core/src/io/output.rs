use std::path::Path;

use serde_json::{json, Map, Value};

use super::IoError;
use crate::experiments::{ClusterRow, ExperimentRecord, KernelRow};
use crate::model::Solution;

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// Deterministic JSON: keys sorted, distances rounded to 6 decimals. An
/// infeasible solution has `"feasible": false` and no radius.
pub fn solution_json(solution: &Solution) -> String {
    let mut doc = Map::new();
    doc.insert("algorithm".into(), json!(solution.algorithm));
    doc.insert("k".into(), json!(solution.k));
    doc.insert("q".into(), json!(solution.q));
    doc.insert("feasible".into(), json!(solution.feasible));
    doc.insert("facilities".into(), json!(solution.facilities));
    doc.insert("covered_count".into(), json!(solution.covered.len()));
    if let Some(r) = solution.radius_km.filter(|_| solution.feasible) {
        doc.insert("radius_km".into(), json!(round6(r)));
    }
    let per_client: Vec<Value> = solution
        .per_client
        .iter()
        .map(|c| {
            json!({
                "client": c.client,
                "distance_km": round6(c.distance_km),
                "facility": c.facility,
                "nearest_facility": c.nearest_facility,
            })
        })
        .collect();
    doc.insert("per_client".into(), Value::Array(per_client));
    if let Some(a) = &solution.assignment {
        doc.insert("assignment".into(), json!(a));
    }
    if let Some(c) = solution.capacity {
        doc.insert("capacity".into(), json!(c));
    }
    if let Some(c) = &solution.copies {
        doc.insert("copies".into(), json!(c));
    }
    if let Some(r) = solution.search_radius {
        doc.insert("search_radius_km".into(), json!(round6(r)));
    }
    if let Some(a) = solution.alpha {
        doc.insert("alpha".into(), json!(round6(a)));
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize");
    text.push('\n');
    text
}

pub fn write_solution(solution: &Solution, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, solution_json(solution)).map_err(|e| IoError::io(path, e))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{:.6}", v)).unwrap_or_default()
}

fn render<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV fields are UTF-8")
}

fn save(path: &Path, text: String) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|e| IoError::io(path, e))
}

/// `algorithm,k,q,objective_km,runtime_ms,num_facilities`; failed cells
/// leave the objective empty.
pub fn sweep_csv(records: &[ExperimentRecord]) -> String {
    render(
        &["algorithm", "k", "q", "objective_km", "runtime_ms", "num_facilities"],
        records.iter().map(|r| {
            vec![
                r.algorithm.clone(),
                r.k.to_string(),
                r.q.to_string(),
                opt(r.objective_km),
                r.runtime_ms.to_string(),
                r.opened.to_string(),
            ]
        }),
    )
}

/// `algorithm,q,k_prev,k,displacement`.
pub fn kernel_csv(rows: &[KernelRow]) -> String {
    render(
        &["algorithm", "q", "k_prev", "k", "displacement"],
        rows.iter().map(|r| {
            vec![
                r.algorithm.clone(),
                r.q.to_string(),
                (r.k - 1).to_string(),
                r.k.to_string(),
                r.displacement.to_string(),
            ]
        }),
    )
}

/// One point of a coverage curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub algorithm: String,
    pub k: usize,
    pub p: f64,
    pub radius_km: f64,
}

/// `algorithm,k,p,radius_km`.
pub fn curve_csv(rows: &[CurveRow]) -> String {
    render(
        &["algorithm", "k", "p", "radius_km"],
        rows.iter().map(|r| {
            vec![
                r.algorithm.clone(),
                r.k.to_string(),
                r.p.to_string(),
                format!("{:.6}", r.radius_km),
            ]
        }),
    )
}

/// `radius_km,centers,clustered_objective_km,objective_km,num_facilities`.
pub fn cluster_csv(rows: &[ClusterRow]) -> String {
    render(
        &["radius_km", "centers", "clustered_objective_km", "objective_km", "num_facilities"],
        rows.iter().map(|r| {
            vec![
                r.radius.to_string(),
                r.centers.to_string(),
                opt(r.clustered_objective_km),
                opt(r.objective_km),
                r.facilities.len().to_string(),
            ]
        }),
    )
}

pub fn write_sweep_csv(records: &[ExperimentRecord], path: &Path) -> Result<(), IoError> {
    save(path, sweep_csv(records))
}

pub fn write_kernel_csv(rows: &[KernelRow], path: &Path) -> Result<(), IoError> {
    save(path, kernel_csv(rows))
}

pub fn write_curve_csv(rows: &[CurveRow], path: &Path) -> Result<(), IoError> {
    save(path, curve_csv(rows))
}

pub fn write_cluster_csv(rows: &[ClusterRow], path: &Path) -> Result<(), IoError> {
    save(path, cluster_csv(rows))
}
