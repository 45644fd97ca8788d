//! Brute-force oracles and random instance families shared by the
//! integration tests.
#![allow(dead_code)]

use mobclinic::model::{Client, DistanceMatrix, InstanceData, Location, LocationKind, Metric};
use mobclinic::{Distance, Instance};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coverage fractions as exact ratios so `floor(q n)` needs no float care.
pub const FRACTIONS: [(usize, usize); 4] = [(1, 2), (3, 4), (19, 20), (1, 1)];

pub fn frac(q: (usize, usize)) -> f64 {
    q.0 as f64 / q.1 as f64
}

/// `floor(q n)` by integer arithmetic.
pub fn floor_qn(q: (usize, usize), n: usize) -> usize {
    q.0 * n / q.1
}

/// Service distance of each client to the facility set, computed from the
/// raw metric.
pub fn distances(inst: &Instance, facilities: &[usize]) -> Vec<f64> {
    (0..inst.num_clients())
        .map(|c| {
            let mut best = f64::INFINITY;
            for &l in inst.visited(c) {
                for &f in facilities {
                    let d = inst.dist(l, f);
                    if d < best {
                        best = d;
                    }
                }
            }
            best
        })
        .collect()
}

/// The m-th smallest value (1-based).
pub fn mth(mut v: Vec<f64>, m: usize) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[m - 1]
}

/// All `r`-subsets of `items` in lexicographic order.
pub fn subsets(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, r.min(items.len()), 0, &mut Vec::new(), &mut out);
    out
}

/// Optimal MobileVaccClinic radius over every placement of `min(k, |sites|)`
/// facilities.
pub fn brute_force(inst: &Instance, k: usize, q: (usize, usize)) -> (f64, Vec<usize>) {
    let m = floor_qn(q, inst.num_clients());
    let mut best = (f64::INFINITY, Vec::new());
    for f in subsets(inst.sites(), k) {
        let r = mth(distances(inst, &f), m);
        if r < best.0 {
            best = (r, f);
        }
    }
    best
}

/// Largest number of clients that can be assigned to `facilities` within
/// radius `r`, at most `cap` per facility (augmenting paths).
pub fn capacitated_matching(inst: &Instance, facilities: &[usize], r: f64, cap: usize) -> usize {
    let n = inst.num_clients();
    let slots: Vec<usize> = facilities.iter().flat_map(|&f| std::iter::repeat_n(f, cap)).collect();
    let reach = |c: usize, f: usize| inst.visited(c).iter().any(|&l| inst.dist(l, f) <= r);
    let mut owner: Vec<Option<usize>> = vec![None; slots.len()];
    fn augment(
        c: usize,
        slots: &[usize],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
        reach: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        for s in 0..slots.len() {
            if seen[s] || !reach(c, slots[s]) {
                continue;
            }
            seen[s] = true;
            if owner[s].is_none() || augment(owner[s].unwrap(), slots, owner, seen, reach) {
                owner[s] = Some(c);
                return true;
            }
        }
        false
    }
    let mut matched = 0;
    for c in 0..n {
        let mut seen = vec![false; slots.len()];
        if augment(c, &slots, &mut owner, &mut seen, &reach) {
            matched += 1;
        }
    }
    matched
}

/// Optimal capacitated radius with at most `k` single-copy facilities, or
/// `None` when no placement serves `floor(q n)` clients.
pub fn brute_force_capacitated(inst: &Instance, k: usize, cap: usize, q: (usize, usize)) -> Option<f64> {
    let need = floor_qn(q, inst.num_clients());
    let mut radii: Vec<f64> = vec![0.0];
    for &s in inst.sites() {
        for &l in inst.visited_locations() {
            radii.push(inst.dist(s, l));
        }
    }
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();
    let mut best: Option<f64> = None;
    for f in subsets(inst.sites(), k) {
        for &r in &radii {
            if best.is_some_and(|b| r >= b) {
                break;
            }
            if capacitated_matching(inst, &f, r, cap) >= need {
                best = Some(r);
                break;
            }
        }
    }
    best
}

/// Random small instance: 3-10 points on a 7x7 integer grid (so distances
/// tie often), 1-8 sites, 1-8 clients visiting 1-3 points each, k in 1..=3.
/// Every third instance gives clients residential homes.
pub fn random_instance(seed: u64) -> (Instance, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let with_homes = seed.is_multiple_of(3);
    let num_activity = rng.random_range(3..=10);
    let n = rng.random_range(1..=8);
    let num_homes = if with_homes { rng.random_range(1..=3) } else { 0 };
    let total = num_activity + num_homes;
    let coords: Vec<(f64, f64)> = (0..total)
        .map(|_| (rng.random_range(0..7) as f64, rng.random_range(0..7) as f64))
        .collect();
    let locations: Vec<Location> = (0..total)
        .map(|i| {
            if i < num_activity {
                Location::indexed(format!("a{i}"), LocationKind::Activity, i)
            } else {
                Location::indexed(format!("h{}", i - num_activity), LocationKind::Residential, i)
            }
        })
        .collect();
    let num_sites = rng.random_range(1..=num_activity.min(8));
    let sites: Vec<String> = sample(&mut rng, num_activity, num_sites)
        .into_iter()
        .map(|i| format!("a{i}"))
        .collect();
    let clients: Vec<Client> = (0..n)
        .map(|c| {
            let visits = rng.random_range(1..=3usize.min(num_activity));
            let mut v: Vec<String> = sample(&mut rng, num_activity, visits)
                .into_iter()
                .map(|i| format!("a{i}"))
                .collect();
            let home = with_homes.then(|| format!("h{}", rng.random_range(0..num_homes)));
            if let Some(h) = &home {
                if v.len() == 3 {
                    v.pop();
                }
                v.push(h.clone());
            }
            Client::new(format!("p{c}"), home.as_deref(), v)
        })
        .collect();
    let matrix = DistanceMatrix::from_fn(total, |i, j| {
        (coords[i].0 - coords[j].0).hypot(coords[i].1 - coords[j].1)
    });
    let k = rng.random_range(1..=3);
    let inst = Instance::new(InstanceData {
        locations,
        clients,
        sites,
        metric: Metric::matrix(matrix),
    })
    .expect("random instance is valid");
    (inst, k)
}

/// Random set system: universe 1-12, 1-10 sets, each element of a set with
/// probability 0.3; elements left out of every set make full covers
/// infeasible.
pub fn random_sets(seed: u64) -> (usize, Vec<Vec<usize>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe = rng.random_range(1..=12);
    let num_sets = rng.random_range(1..=10);
    let sets = (0..num_sets)
        .map(|_| (0..universe).filter(|_| rng.random_bool(0.3)).collect())
        .collect();
    (universe, sets)
}

/// Smallest number of sets from `sets` whose union satisfies `ok`, by
/// trying every subset.
pub fn min_cover_size(universe: usize, sets: &[Vec<usize>], ok: impl Fn(&[bool]) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for mask in 0u32..(1 << sets.len()) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|b| size >= b) {
            continue;
        }
        let mut covered = vec![false; universe];
        for (i, s) in sets.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for &e in s {
                    covered[e] = true;
                }
            }
        }
        if ok(&covered) {
            best = Some(size);
        }
    }
    best
}

pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}
