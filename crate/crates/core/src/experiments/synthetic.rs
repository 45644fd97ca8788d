use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use crate::model::{Client, DistanceMatrix, Instance, InstanceData, Location, LocationKind, Metric, ModelError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
}

impl BoundingBox {
    /// Roughly Charlottesville, Virginia.
    pub const CHARLOTTESVILLE: BoundingBox = BoundingBox {
        lat_min: 38.005,
        lat_max: 38.060,
        lon_min: -78.525,
        lon_max: -78.460,
    };
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub clients: usize,
    pub activity: usize,
    pub residential: usize,
    /// Activity visits per client, before removing repeats.
    pub min_visits: usize,
    pub max_visits: usize,
    pub bbox: BoundingBox,
}

impl SyntheticConfig {
    pub fn new(seed: u64, clients: usize, activity: usize, residential: usize) -> Self {
        SyntheticConfig {
            seed,
            clients,
            activity,
            residential,
            min_visits: 1,
            max_visits: 5,
            bbox: BoundingBox::CHARLOTTESVILLE,
        }
    }

    /// Charlottesville-sized: 33156 clients, 5660 activity and 10038
    /// residential locations.
    pub fn charlottesville(seed: u64) -> Self {
        Self::new(seed, 33156, 5660, 10038)
    }
}

fn padded(prefix: char, i: usize, count: usize) -> String {
    let width = count.to_string().len();
    format!("{prefix}{i:0width$}")
}

/// Seeded random instance: uniform locations in the box, activity
/// popularity following Zipf with exponent 1, one uniform home per client.
/// Each client visits its home plus activity locations drawn by popularity.
/// Every activity location is a site.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<Instance, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let b = config.bbox;
    let point = |rng: &mut ChaCha8Rng| {
        (
            rng.random_range(b.lat_min..=b.lat_max),
            rng.random_range(b.lon_min..=b.lon_max),
        )
    };

    let mut locations = Vec::with_capacity(config.activity + config.residential);
    for i in 1..=config.activity {
        let (lat, lon) = point(&mut rng);
        locations.push(Location::geo(padded('A', i, config.activity), LocationKind::Activity, lat, lon));
    }
    for i in 1..=config.residential {
        let (lat, lon) = point(&mut rng);
        locations.push(Location::geo(padded('R', i, config.residential), LocationKind::Residential, lat, lon));
    }

    // Popularity rank to activity location, so popular places are spread
    // around the box rather than following id order.
    let mut by_rank: Vec<usize> = (0..config.activity).collect();
    by_rank.shuffle(&mut rng);
    let zipf = (config.activity > 0)
        .then(|| Zipf::new(config.activity as f64, 1.0).expect("valid Zipf parameters"));

    let mut clients = Vec::with_capacity(config.clients);
    for i in 1..=config.clients {
        let home = (config.residential > 0)
            .then(|| locations[config.activity + rng.random_range(0..config.residential)].id.clone());
        let mut visited: Vec<String> = home.iter().cloned().collect();
        if let Some(z) = &zipf {
            let visits = rng.random_range(config.min_visits..=config.max_visits.max(config.min_visits));
            for _ in 0..visits {
                let rank = z.sample(&mut rng) as usize - 1;
                visited.push(locations[by_rank[rank]].id.clone());
            }
        }
        if visited.is_empty() {
            let a = rng.random_range(0..config.activity.max(1));
            visited.push(locations[a].id.clone());
        }
        clients.push(Client::new(padded('P', i, config.clients), home.as_deref(), visited));
    }

    let sites = locations
        .iter()
        .filter(|l| l.kind == LocationKind::Activity)
        .map(|l| l.id.clone())
        .collect();
    Instance::new(InstanceData {
        locations,
        clients,
        sites,
        metric: Metric::haversine(),
    })
}

/// Clients as colour classes of points on a line, with k carried along.
#[derive(Debug, Clone)]
pub struct LineInstance {
    pub instance: Instance,
    pub k: usize,
    /// Position of each location, by location index.
    pub positions: Vec<f64>,
}

/// Colour class `c` gets one to three points in `[100c, 100c + 10)`; each
/// client visits exactly its class. Midpoints between neighbouring points
/// are added as extra locations, and every location is a site.
pub fn generate_line_instance(seed: u64, gamma: usize, k: usize) -> Result<LineInstance, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<(f64, String)> = Vec::new();
    let mut clients = Vec::with_capacity(gamma);
    for c in 0..gamma {
        let count = rng.random_range(1..=3);
        let mut ids = Vec::with_capacity(count);
        for j in 0..count {
            let x = 100.0 * c as f64 + rng.random_range(0.0..10.0);
            let id = format!("c{c}_{j}");
            points.push((x, id.clone()));
            ids.push(id);
        }
        clients.push(Client::new(format!("p{c}"), None, ids));
    }
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mids: Vec<(f64, String)> = points
        .windows(2)
        .enumerate()
        .map(|(i, w)| ((w[0].0 + w[1].0) / 2.0, format!("m{i}")))
        .collect();
    points.extend(mids);

    let positions: Vec<f64> = points.iter().map(|p| p.0).collect();
    let locations: Vec<Location> = points
        .iter()
        .enumerate()
        .map(|(i, (_, id))| Location::indexed(id.clone(), LocationKind::Activity, i))
        .collect();
    let sites = locations.iter().map(|l| l.id.clone()).collect();
    let matrix = DistanceMatrix::from_fn(positions.len(), |i, j| (positions[i] - positions[j]).abs());
    let instance = Instance::new(InstanceData {
        locations,
        clients,
        sites,
        metric: Metric::matrix(matrix),
    })?;
    let positions = (0..instance.num_locations())
        .map(|l| match instance.location(l).position {
            crate::model::Position::Index(i) => positions[i],
            crate::model::Position::Geo { .. } => unreachable!("line instances use a matrix"),
        })
        .collect();
    Ok(LineInstance { instance, k, positions })
}
