use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;

use crate::covering::{greedy_cover, CoverInstance, Neighbors};
use crate::model::{objective, Client, Instance, ModelError};
use crate::solvers::{clientcover_solve, SolveError, SolveParams};

/// Visited locations grouped around greedily chosen centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub radius: f64,
    /// Centers in the order greedy picked them.
    pub centers: Vec<usize>,
    /// Visited location to its center.
    pub mapping: BTreeMap<usize, usize>,
}

/// Greedy set cover of the visited locations by balls of radius `r` around
/// visited locations. Each location joins the first picked center whose
/// ball contains it.
pub fn cluster_locations(instance: &Instance, r: f64) -> Clustering {
    let visited = instance.visited_locations();
    let mut slot = vec![usize::MAX; instance.num_locations()];
    for (j, &l) in visited.iter().enumerate() {
        slot[l] = j;
    }
    let near = Neighbors::new(instance, visited);
    let sets: Vec<FixedBitSet> = visited
        .iter()
        .map(|&c| {
            let mut bits = FixedBitSet::with_capacity(visited.len());
            near.for_each_within(c, r, |l| bits.insert(slot[l]));
            bits
        })
        .collect();
    let ci = CoverInstance::from_bitsets(visited.len(), sets, visited.to_vec(), r);
    let cover = greedy_cover(&ci);

    let mut mapping = BTreeMap::new();
    let centers: Vec<usize> = cover.chosen.iter().map(|&s| visited[s]).collect();
    for &s in &cover.chosen {
        for j in ci.set(s).ones() {
            mapping.entry(visited[j]).or_insert(visited[s]);
        }
    }
    Clustering { radius: r, centers, mapping }
}

/// The instance with every visited location replaced by its center. Sites
/// and homes are unchanged.
pub fn clustered_instance(instance: &Instance, clustering: &Clustering) -> Result<Instance, ModelError> {
    let mut data = instance.data().clone();
    data.clients = (0..instance.num_clients())
        .map(|c| {
            let client = instance.client(c);
            let visited = instance
                .visited(c)
                .iter()
                .map(|l| instance.location_id(*clustering.mapping.get(l).unwrap_or(l)));
            Client::new(client.id.clone(), client.home.as_deref(), visited)
        })
        .collect();
    Instance::new(data)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterRow {
    pub radius: f64,
    pub centers: usize,
    /// ClientCover objective measured on the clustered instance.
    pub clustered_objective_km: Option<f64>,
    /// The same facilities measured on the original instance.
    pub objective_km: Option<f64>,
    pub facilities: Vec<String>,
}

/// ClientCover on the clustered instance for each radius, with the chosen
/// facilities evaluated against the real visits.
pub fn cluster_degradation(
    instance: &Instance,
    radii: &[f64],
    params: &SolveParams,
) -> Result<Vec<ClusterRow>, SolveError> {
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let clustering = cluster_locations(instance, r);
        let clustered = clustered_instance(instance, &clustering)?;
        let sol = clientcover_solve(&clustered, params)?;
        let objective_km = if sol.feasible {
            Some(objective(instance, &instance.resolve_locations(&sol.facilities)?, params.q)?)
        } else {
            None
        };
        rows.push(ClusterRow {
            radius: r,
            centers: clustering.centers.len(),
            clustered_objective_km: sol.radius_km,
            objective_km,
            facilities: sol.facilities,
        });
    }
    Ok(rows)
}
