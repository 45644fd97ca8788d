use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Distance, Instance, ModelError};

/// Guards `q * n` against representation error (0.29 * 100 is 28.999...).
const FRACTION_SLACK: f64 = 1e-9;

/// Number of clients that must be served: `floor(q * n)`.
pub fn coverage_target(q: f64, n: usize) -> Result<usize, ModelError> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(ModelError::BadFraction(q));
    }
    let m = ((q * n as f64) + FRACTION_SLACK).floor() as usize;
    if m == 0 {
        return Err(ModelError::NothingToCover { q, n });
    }
    Ok(m.min(n))
}

/// The `m`-th smallest value (1-based).
pub fn kth_smallest(values: &[f64], m: usize) -> f64 {
    assert!(m >= 1 && m <= values.len(), "order statistic {m} of {}", values.len());
    let mut v = values.to_vec();
    let (_, x, _) = v.select_nth_unstable_by(m - 1, f64::total_cmp);
    *x
}

/// `min` over visited locations and facilities of the distance between them.
pub fn client_distance(instance: &Instance, client: usize, facilities: &[usize]) -> Result<f64, ModelError> {
    if facilities.is_empty() {
        return Err(ModelError::EmptyFacilities);
    }
    let mut best = f64::INFINITY;
    for &j in instance.visited(client) {
        for &f in facilities {
            best = best.min(instance.dist(j, f));
        }
    }
    Ok(best)
}

/// How one client is served: distance in km and the serving facility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Service {
    pub distance: f64,
    pub facility: usize,
}

/// Nearest facility for every client, ties broken towards the smaller
/// facility index. `facilities` must be nonempty.
pub fn nearest_services(instance: &Instance, facilities: &[usize]) -> Vec<Service> {
    assert!(!facilities.is_empty(), "nearest_services needs at least one facility");
    let mut sorted = facilities.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    let mut per_location: Vec<Option<Service>> = vec![None; instance.num_locations()];
    for &l in instance.visited_locations() {
        let mut best = Service {
            distance: f64::INFINITY,
            facility: sorted[0],
        };
        for &f in &sorted {
            let d = instance.dist(l, f);
            if d < best.distance {
                best = Service { distance: d, facility: f };
            }
        }
        per_location[l] = Some(best);
    }
    (0..instance.num_clients())
        .map(|c| {
            instance
                .visited(c)
                .iter()
                .map(|&l| per_location[l].expect("visited location"))
                .min_by(|a, b| a.distance.total_cmp(&b.distance).then(a.facility.cmp(&b.facility)))
                .expect("visited sets are nonempty")
        })
        .collect()
}

/// Radius needed to serve `floor(q n)` clients from `facilities`; with
/// `q = 1` this is the largest client distance.
pub fn objective(instance: &Instance, facilities: &[usize], q: f64) -> Result<f64, ModelError> {
    if facilities.is_empty() {
        return Err(ModelError::EmptyFacilities);
    }
    let m = coverage_target(q, instance.num_clients())?;
    let d: Vec<f64> = nearest_services(instance, facilities).iter().map(|s| s.distance).collect();
    Ok(kth_smallest(&d, m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientService {
    pub client: String,
    /// Distance to the serving facility.
    pub distance_km: f64,
    /// Serving facility: the assigned one under capacity, else the nearest.
    pub facility: String,
    /// Nearest opened facility, ties to the smallest id.
    pub nearest_facility: String,
}

/// A facility placement and how it serves the clients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub algorithm: String,
    pub k: usize,
    pub q: f64,
    pub feasible: bool,
    /// Opened sites, sorted by id.
    pub facilities: Vec<String>,
    /// Largest service distance over covered clients; `None` when infeasible.
    pub radius_km: Option<f64>,
    /// One entry per client, in client id order. Under capacity the serving
    /// facility is the assigned one, otherwise the nearest.
    pub per_client: Vec<ClientService>,
    /// Clients counted as served, sorted by id.
    pub covered: Vec<String>,
    /// Client to facility, present only for capacitated solutions.
    pub assignment: Option<BTreeMap<String, String>>,
    pub capacity: Option<usize>,
    /// Copies opened per site when a site may host several capacitated
    /// facilities.
    pub copies: Option<BTreeMap<String, usize>>,
    /// Threshold radius at which a covering search stopped.
    pub search_radius: Option<f64>,
    /// Budget violation factor the covering search allowed.
    pub alpha: Option<f64>,
}

impl Solution {
    pub fn infeasible(algorithm: &str, k: usize, q: f64) -> Self {
        Solution {
            algorithm: algorithm.to_owned(),
            k,
            q,
            feasible: false,
            facilities: Vec::new(),
            radius_km: None,
            per_client: Vec::new(),
            covered: Vec::new(),
            assignment: None,
            capacity: None,
            copies: None,
            search_radius: None,
            alpha: None,
        }
    }

    /// Serve everyone by their nearest facility and count the `floor(q n)`
    /// closest clients (ties by client id) as covered.
    pub fn nearest(
        instance: &Instance,
        algorithm: &str,
        k: usize,
        q: f64,
        facilities: &[usize],
    ) -> Result<Self, ModelError> {
        if facilities.is_empty() {
            return Err(ModelError::EmptyFacilities);
        }
        let m = coverage_target(q, instance.num_clients())?;
        let services = nearest_services(instance, facilities);
        let mut order: Vec<usize> = (0..services.len()).collect();
        order.sort_by(|&a, &b| services[a].distance.total_cmp(&services[b].distance).then(a.cmp(&b)));
        let mut covered: Vec<usize> = order[..m].to_vec();
        covered.sort_unstable();
        Ok(Self::assemble(instance, algorithm, k, q, facilities, &services, &services, &covered))
    }

    /// Serve everyone by their nearest facility, with an explicit covered
    /// set.
    pub fn with_covered(
        instance: &Instance,
        algorithm: &str,
        k: usize,
        q: f64,
        facilities: &[usize],
        covered: &[usize],
    ) -> Result<Self, ModelError> {
        if facilities.is_empty() {
            return Err(ModelError::EmptyFacilities);
        }
        let services = nearest_services(instance, facilities);
        let mut covered = covered.to_vec();
        covered.sort_unstable();
        covered.dedup();
        Ok(Self::assemble(instance, algorithm, k, q, facilities, &services, &services, &covered))
    }

    /// Capacitated solution: assigned clients are covered and served by their
    /// assigned facility.
    #[allow(clippy::too_many_arguments)]
    pub fn with_assignment(
        instance: &Instance,
        algorithm: &str,
        k: usize,
        q: f64,
        facilities: &[usize],
        assignment: &[Option<usize>],
        capacity: usize,
        copies: Option<&BTreeMap<usize, usize>>,
    ) -> Result<Self, ModelError> {
        if facilities.is_empty() {
            return Err(ModelError::EmptyFacilities);
        }
        let nearest = nearest_services(instance, facilities);
        let mut services = nearest.clone();
        let mut covered = Vec::new();
        for (c, slot) in assignment.iter().enumerate() {
            if let Some(f) = *slot {
                let distance = instance
                    .visited(c)
                    .iter()
                    .map(|&l| instance.dist(l, f))
                    .fold(f64::INFINITY, f64::min);
                services[c] = Service { distance, facility: f };
                covered.push(c);
            }
        }
        let mut sol = Self::assemble(instance, algorithm, k, q, facilities, &services, &nearest, &covered);
        sol.capacity = Some(capacity);
        sol.assignment = Some(
            assignment
                .iter()
                .enumerate()
                .filter_map(|(c, f)| f.map(|f| (instance.client_id(c).to_owned(), instance.location_id(f).to_owned())))
                .collect(),
        );
        sol.copies = copies.map(|m| m.iter().map(|(&f, &n)| (instance.location_id(f).to_owned(), n)).collect());
        Ok(sol)
    }

    fn assemble(
        instance: &Instance,
        algorithm: &str,
        k: usize,
        q: f64,
        facilities: &[usize],
        services: &[Service],
        nearest: &[Service],
        covered: &[usize],
    ) -> Self {
        let mut fac: Vec<usize> = facilities.to_vec();
        fac.sort_unstable();
        fac.dedup();
        let radius = covered.iter().map(|&c| services[c].distance).fold(0.0, f64::max);
        Solution {
            algorithm: algorithm.to_owned(),
            k,
            q,
            feasible: true,
            facilities: fac.iter().map(|&f| instance.location_id(f).to_owned()).collect(),
            radius_km: if covered.is_empty() { None } else { Some(radius) },
            per_client: services
                .iter()
                .zip(nearest)
                .enumerate()
                .map(|(c, (s, n))| ClientService {
                    client: instance.client_id(c).to_owned(),
                    distance_km: s.distance,
                    facility: instance.location_id(s.facility).to_owned(),
                    nearest_facility: instance.location_id(n.facility).to_owned(),
                })
                .collect(),
            covered: covered.iter().map(|&c| instance.client_id(c).to_owned()).collect(),
            assignment: None,
            capacity: None,
            copies: None,
            search_radius: None,
            alpha: None,
        }
    }

    /// Number of facilities opened, counting copies.
    pub fn opened(&self) -> usize {
        match &self.copies {
            Some(c) => c.values().sum(),
            None => self.facilities.len(),
        }
    }

    /// Facility location indices.
    pub fn facility_indices(&self, instance: &Instance) -> Result<Vec<usize>, ModelError> {
        instance.resolve_locations(&self.facilities)
    }

    /// Re-derive every solution invariant from the instance alone and report
    /// what does not hold.
    pub fn check(&self, instance: &Instance) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();
        if !self.feasible {
            if self.radius_km.is_some() || !self.covered.is_empty() {
                problems.push("infeasible solution carries a radius or covered clients".to_owned());
            }
            return if problems.is_empty() { Ok(()) } else { Err(problems) };
        }
        let facilities = match instance.resolve_locations(&self.facilities) {
            Ok(f) => f,
            Err(e) => return Err(vec![e.to_string()]),
        };
        if facilities.is_empty() {
            problems.push("feasible solution without facilities".to_owned());
            return Err(problems);
        }
        if facilities.windows(2).any(|w| w[0] >= w[1]) {
            problems.push("facilities not sorted and unique".to_owned());
        }
        for (&f, id) in facilities.iter().zip(&self.facilities) {
            if instance.sites().binary_search(&f).is_err() {
                problems.push(format!("facility {id} is not a site"));
            }
        }
        if self.per_client.len() != instance.num_clients() {
            problems.push(format!(
                "{} per-client entries for {} clients",
                self.per_client.len(),
                instance.num_clients()
            ));
            return Err(problems);
        }
        let assigned = self.assignment.as_ref();
        for (c, entry) in self.per_client.iter().enumerate() {
            if entry.client != instance.client_id(c) {
                problems.push(format!("per-client entry {c} is for {}", entry.client));
                continue;
            }
            let to = |f: usize| instance.visited(c).iter().map(|&l| instance.dist(l, f)).fold(f64::INFINITY, f64::min);
            let nearest = client_distance(instance, c, &facilities).unwrap_or(f64::INFINITY);
            match instance.location_index(&entry.nearest_facility) {
                Some(f) if facilities.contains(&f) && to(f) == nearest => {}
                _ => problems.push(format!(
                    "client {} lists {} as nearest facility",
                    entry.client, entry.nearest_facility
                )),
            }
            match assigned.and_then(|a| a.get(&entry.client)) {
                Some(fid) => {
                    if &entry.facility != fid {
                        problems.push(format!("client {} served by {} but assigned {fid}", entry.client, entry.facility));
                    }
                    match instance.location_index(fid) {
                        Some(f) if to(f) == entry.distance_km => {}
                        _ => problems.push(format!("client {} distance to {fid} is wrong", entry.client)),
                    }
                }
                None => {
                    if entry.distance_km != nearest || entry.facility != entry.nearest_facility {
                        problems.push(format!(
                            "client {} distance {} differs from nearest {nearest}",
                            entry.client, entry.distance_km
                        ));
                    }
                }
            }
        }
        let mut radius = None;
        for id in &self.covered {
            match instance.client_index(id) {
                Some(c) => {
                    let d = self.per_client[c].distance_km;
                    radius = Some(radius.map_or(d, |r: f64| r.max(d)));
                }
                None => problems.push(format!("covered client {id} unknown")),
            }
        }
        if radius != self.radius_km {
            problems.push(format!("radius {:?} but covered maximum is {radius:?}", self.radius_km));
        }
        if let Some(assignment) = assigned {
            let capacity = self.capacity.unwrap_or(usize::MAX);
            let mut load: BTreeMap<&str, usize> = BTreeMap::new();
            for id in &self.covered {
                if !assignment.contains_key(id) {
                    problems.push(format!("covered client {id} has no assignment"));
                }
            }
            for (client, fid) in assignment {
                *load.entry(fid.as_str()).or_default() += 1;
                if !self.facilities.contains(fid) {
                    problems.push(format!("client {client} assigned to unopened {fid}"));
                }
            }
            for (fid, n) in load {
                let copies = self.copies.as_ref().and_then(|c| c.get(fid)).copied().unwrap_or(1);
                if n > capacity.saturating_mul(copies) {
                    problems.push(format!("facility {fid} serves {n} clients, capacity {capacity} x {copies}"));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }
}
