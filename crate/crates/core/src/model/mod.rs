//! Locations, clients, metrics and the instance/solution types shared by
//! every solver.

mod instance;
mod location;
mod metric;
mod solution;

use thiserror::Error;

pub use instance::{validate, Instance, InstanceData, Violation};
pub use location::{Client, Location, LocationKind, Position};
pub use metric::{haversine_km, DistanceMatrix, GeoPoint, Metric, EARTH_RADIUS_KM};
pub use solution::{
    client_distance, coverage_target, kth_smallest, nearest_services, objective, ClientService, Service,
    Solution,
};

/// Distances between indexed locations.
pub trait Distance {
    fn dist(&self, a: usize, b: usize) -> f64;
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid instance: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("location {0} does not use the metric's position mode")]
    MixedMode(String),
    #[error("matrix index {index} out of range for a {size}x{size} matrix")]
    MatrixIndex { index: usize, size: usize },
    #[error("matrix row {row} has {len} entries, expected {expected}")]
    MatrixShape { row: usize, len: usize, expected: usize },
    #[error("facility set is empty")]
    EmptyFacilities,
    #[error("coverage fraction must lie in (0, 1], got {0}")]
    BadFraction(f64),
    #[error("coverage fraction {q} of {n} clients leaves nobody to serve")]
    NothingToCover { q: f64, n: usize },
    #[error("unknown location id {0}")]
    UnknownLocation(String),
    #[error("unknown client id {0}")]
    UnknownClient(String),
}
