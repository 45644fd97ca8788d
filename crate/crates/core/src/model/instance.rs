use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::location::{Client, Location, LocationKind, Position};
use super::metric::{GeoPoint, Metric};
use super::{Distance, ModelError};

const TRIANGLE_SAMPLES: usize = 1000;
const TRIANGLE_SEED: u64 = 0x5eed_7a1e;
const METRIC_TOLERANCE: f64 = 1e-9;

/// The raw, unchecked description of a problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceData {
    pub locations: Vec<Location>,
    pub clients: Vec<Client>,
    /// Locations where facilities may be opened.
    pub sites: Vec<String>,
    pub metric: Metric,
}

/// One broken instance invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoClients,
    NoSites,
    DuplicateLocation(String),
    DuplicateClient(String),
    EmptyVisited { client: String },
    UnknownVisited { client: String, location: String },
    UnknownHome { client: String, location: String },
    HomeNotResidential { client: String, location: String },
    UnknownSite(String),
    PositionMode(String),
    CoordinatesOutOfRange(String),
    MatrixIndexOutOfRange { location: String, index: usize },
    NotFinite { i: usize, j: usize },
    Negative { i: usize, j: usize },
    NonzeroDiagonal(usize),
    Asymmetry { i: usize, j: usize },
    Triangle { i: usize, j: usize, l: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NoClients => write!(f, "instance has no clients"),
            NoSites => write!(f, "instance has no facility sites"),
            DuplicateLocation(id) => write!(f, "duplicate location id {id}"),
            DuplicateClient(id) => write!(f, "duplicate client id {id}"),
            EmptyVisited { client } => write!(f, "empty S_p for client {client}"),
            UnknownVisited { client, location } => {
                write!(f, "client {client} visits unknown location {location}")
            }
            UnknownHome { client, location } => write!(f, "client {client} has unknown home {location}"),
            HomeNotResidential { client, location } => {
                write!(f, "home {location} of client {client} is not residential")
            }
            UnknownSite(id) => write!(f, "site {id} is not a known location"),
            PositionMode(id) => write!(f, "location {id} does not match the metric mode"),
            CoordinatesOutOfRange(id) => write!(f, "location {id} has coordinates out of range"),
            MatrixIndexOutOfRange { location, index } => {
                write!(f, "location {location} has matrix index {index} outside the matrix")
            }
            NotFinite { i, j } => write!(f, "metric entry ({i},{j}) is not finite"),
            Negative { i, j } => write!(f, "metric entry ({i},{j}) is negative"),
            NonzeroDiagonal(i) => write!(f, "metric entry ({i},{i}) is not zero"),
            Asymmetry { i, j } => write!(f, "metric asymmetry: d({i},{j}) != d({j},{i})"),
            Triangle { i, j, l } => write!(f, "metric triangle inequality fails for ({i},{j},{l})"),
        }
    }
}

/// Check every instance invariant, collecting all violations found.
pub fn validate(data: &InstanceData) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    if data.clients.is_empty() {
        out.push(Violation::NoClients);
    }
    if data.sites.is_empty() {
        out.push(Violation::NoSites);
    }

    let mut kinds: HashMap<&str, LocationKind> = HashMap::with_capacity(data.locations.len());
    for loc in &data.locations {
        if kinds.insert(loc.id.as_str(), loc.kind).is_some() {
            out.push(Violation::DuplicateLocation(loc.id.clone()));
        }
        if !data.metric.accepts(loc) {
            out.push(Violation::PositionMode(loc.id.clone()));
            continue;
        }
        match (&loc.position, &data.metric) {
            (Position::Geo { lat, lon }, _) => {
                let ok = lat.is_finite()
                    && lon.is_finite()
                    && (-90.0..=90.0).contains(lat)
                    && (-180.0..=180.0).contains(lon);
                if !ok {
                    out.push(Violation::CoordinatesOutOfRange(loc.id.clone()));
                }
            }
            (Position::Index(index), Metric::Matrix(m)) if *index >= m.size() => {
                out.push(Violation::MatrixIndexOutOfRange {
                    location: loc.id.clone(),
                    index: *index,
                });
            }
            _ => {}
        }
    }

    let mut client_ids = HashSet::with_capacity(data.clients.len());
    for client in &data.clients {
        if !client_ids.insert(client.id.as_str()) {
            out.push(Violation::DuplicateClient(client.id.clone()));
        }
        if client.visited.is_empty() {
            out.push(Violation::EmptyVisited {
                client: client.id.clone(),
            });
        }
        for loc in &client.visited {
            if !kinds.contains_key(loc.as_str()) {
                out.push(Violation::UnknownVisited {
                    client: client.id.clone(),
                    location: loc.clone(),
                });
            }
        }
        if let Some(home) = &client.home {
            match kinds.get(home.as_str()) {
                None => out.push(Violation::UnknownHome {
                    client: client.id.clone(),
                    location: home.clone(),
                }),
                Some(LocationKind::Activity) => out.push(Violation::HomeNotResidential {
                    client: client.id.clone(),
                    location: home.clone(),
                }),
                Some(LocationKind::Residential) => {}
            }
        }
    }

    for site in &data.sites {
        if !kinds.contains_key(site.as_str()) {
            out.push(Violation::UnknownSite(site.clone()));
        }
    }

    if let Metric::Matrix(m) = &data.metric {
        check_matrix(m, &mut out);
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn check_matrix(m: &super::DistanceMatrix, out: &mut Vec<Violation>) {
    let n = m.size();
    let mut broken = false;
    for i in 0..n {
        if m.get(i, i) != 0.0 {
            out.push(Violation::NonzeroDiagonal(i));
            broken = true;
        }
        for j in 0..n {
            let d = m.get(i, j);
            if !d.is_finite() {
                out.push(Violation::NotFinite { i, j });
                broken = true;
            } else if d < 0.0 {
                out.push(Violation::Negative { i, j });
                broken = true;
            }
            if j > i && m.get(i, j) != m.get(j, i) {
                out.push(Violation::Asymmetry { i, j });
                broken = true;
            }
        }
    }
    if broken || n < 3 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(TRIANGLE_SEED);
    for _ in 0..TRIANGLE_SAMPLES {
        let (i, j, l) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
        let direct = m.get(i, l);
        let via = m.get(i, j) + m.get(j, l);
        if direct > via + METRIC_TOLERANCE * via.max(1.0) {
            out.push(Violation::Triangle { i, j, l });
            return;
        }
    }
}

#[derive(Debug, Clone)]
enum Points {
    Geo { points: Vec<GeoPoint>, radius_km: f64 },
    Matrix { rows: Vec<usize> },
}

/// A validated instance with dense integer indices.
///
/// Locations, clients and sites are sorted by id, so index order is id order
/// and every tie broken by "smallest index" is broken by smallest id.
#[derive(Debug, Clone)]
pub struct Instance {
    data: InstanceData,
    location_index: HashMap<String, usize>,
    client_index: HashMap<String, usize>,
    points: Points,
    visited: Vec<Vec<usize>>,
    homes: Vec<Option<usize>>,
    sites: Vec<usize>,
    visited_locations: Vec<usize>,
    visitors: Vec<Vec<usize>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl Instance {
    /// Normalize (sort by id, deduplicate visited sets and sites) and
    /// validate.
    pub fn new(mut data: InstanceData) -> Result<Self, ModelError> {
        data.locations.sort_by(|a, b| a.id.cmp(&b.id));
        data.clients.sort_by(|a, b| a.id.cmp(&b.id));
        for client in &mut data.clients {
            client.visited.sort();
            client.visited.dedup();
        }
        data.sites.sort();
        data.sites.dedup();
        validate(&data).map_err(ModelError::Invalid)?;

        let location_index: HashMap<String, usize> = data
            .locations
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.clone(), i))
            .collect();
        let client_index = data
            .clients
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), i))
            .collect();
        let points = match &data.metric {
            Metric::Haversine { radius_km } => Points::Geo {
                points: data
                    .locations
                    .iter()
                    .map(|l| match l.position {
                        Position::Geo { lat, lon } => GeoPoint::from_degrees(lat, lon),
                        Position::Index(_) => unreachable!("validated position mode"),
                    })
                    .collect(),
                radius_km: *radius_km,
            },
            Metric::Matrix(_) => Points::Matrix {
                rows: data
                    .locations
                    .iter()
                    .map(|l| match l.position {
                        Position::Index(i) => i,
                        Position::Geo { .. } => unreachable!("validated position mode"),
                    })
                    .collect(),
            },
        };
        let visited: Vec<Vec<usize>> = data
            .clients
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.visited.iter().map(|id| location_index[id]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let homes = data
            .clients
            .iter()
            .map(|c| c.home.as_ref().map(|h| location_index[h]))
            .collect();
        let sites = data.sites.iter().map(|id| location_index[id]).collect();

        let mut visitors = vec![Vec::new(); data.locations.len()];
        for (c, locs) in visited.iter().enumerate() {
            for &l in locs {
                visitors[l].push(c);
            }
        }
        let visited_locations = visitors
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(|(l, _)| l)
            .collect();

        Ok(Instance {
            data,
            location_index,
            client_index,
            points,
            visited,
            homes,
            sites,
            visited_locations,
            visitors,
        })
    }

    pub fn data(&self) -> &InstanceData {
        &self.data
    }

    pub fn into_data(self) -> InstanceData {
        self.data
    }

    pub fn metric(&self) -> &Metric {
        &self.data.metric
    }

    pub fn num_locations(&self) -> usize {
        self.data.locations.len()
    }

    pub fn location(&self, idx: usize) -> &Location {
        &self.data.locations[idx]
    }

    pub fn location_id(&self, idx: usize) -> &str {
        &self.data.locations[idx].id
    }

    pub fn location_index(&self, id: &str) -> Option<usize> {
        self.location_index.get(id).copied()
    }

    pub fn num_clients(&self) -> usize {
        self.data.clients.len()
    }

    pub fn client(&self, idx: usize) -> &Client {
        &self.data.clients[idx]
    }

    pub fn client_id(&self, idx: usize) -> &str {
        &self.data.clients[idx].id
    }

    pub fn client_index(&self, id: &str) -> Option<usize> {
        self.client_index.get(id).copied()
    }

    /// Location indices visited by a client, ascending.
    pub fn visited(&self, client: usize) -> &[usize] {
        &self.visited[client]
    }

    pub fn home(&self, client: usize) -> Option<usize> {
        self.homes[client]
    }

    /// Facility site indices, ascending.
    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// Union of all visited sets, ascending.
    pub fn visited_locations(&self) -> &[usize] {
        &self.visited_locations
    }

    /// Clients whose visited set contains a location, ascending.
    pub fn visitors(&self, location: usize) -> &[usize] {
        &self.visitors[location]
    }

    /// Latitude in radians, in haversine mode.
    pub(crate) fn latitude(&self, location: usize) -> Option<f64> {
        match &self.points {
            Points::Geo { points, .. } => Some(points[location].lat()),
            Points::Matrix { .. } => None,
        }
    }

    pub(crate) fn sphere_radius(&self) -> Option<f64> {
        match &self.points {
            Points::Geo { radius_km, .. } => Some(*radius_km),
            Points::Matrix { .. } => None,
        }
    }

    /// Look up a set of location ids, failing on the first unknown one.
    pub fn resolve_locations<S: AsRef<str>>(&self, ids: &[S]) -> Result<Vec<usize>, ModelError> {
        ids.iter()
            .map(|id| {
                self.location_index(id.as_ref())
                    .ok_or_else(|| ModelError::UnknownLocation(id.as_ref().to_owned()))
            })
            .collect()
    }
}

impl Distance for Instance {
    #[inline]
    fn dist(&self, a: usize, b: usize) -> f64 {
        match (&self.points, &self.data.metric) {
            (Points::Geo { points, radius_km }, _) => points[a].distance(&points[b], *radius_km),
            (Points::Matrix { rows }, Metric::Matrix(m)) => m.get(rows[a], rows[b]),
            _ => unreachable!("points follow the metric mode"),
        }
    }
}
