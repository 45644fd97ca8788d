use std::collections::HashMap;

use crate::ksupplier::{exact_supplier, hs_approx, SupplierInstance};
use crate::model::{objective, Distance, Instance, Solution};

use super::{Algorithm, SolveError, SolveParams, SupplierMode};

/// Greedy maximum coverage over visited locations: `u` locations, each
/// chosen to reach the most clients not yet reached, ties to the smallest
/// id. Returned in selection order.
pub fn select_public_locations(instance: &Instance, u: usize) -> Vec<usize> {
    let candidates = instance.visited_locations();
    let mut reached = vec![false; instance.num_clients()];
    let mut taken = vec![false; instance.num_locations()];
    let mut chosen = Vec::with_capacity(u.min(candidates.len()));
    while chosen.len() < u.min(candidates.len()) {
        let mut best: Option<(usize, usize)> = None;
        for &l in candidates {
            if taken[l] {
                continue;
            }
            let gain = instance.visitors(l).iter().filter(|&&c| !reached[c]).count();
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, l));
            }
        }
        let (_, l) = best.expect("an untaken candidate remains");
        taken[l] = true;
        for &c in instance.visitors(l) {
            reached[c] = true;
        }
        chosen.push(l);
    }
    chosen
}

/// Distances among the public locations and from them to every site,
/// indexed as `[U..., sites...]`.
struct Table<'a> {
    instance: &'a Instance,
    public: Vec<usize>,
    sites: &'a [usize],
    uu: Vec<f64>,
    us: Vec<f64>,
}

impl<'a> Table<'a> {
    fn new(instance: &'a Instance, public: Vec<usize>) -> Self {
        let sites = instance.sites();
        let u = public.len();
        let mut uu = vec![0.0; u * u];
        let mut us = vec![0.0; u * sites.len()];
        for (i, &a) in public.iter().enumerate() {
            for (j, &b) in public.iter().enumerate() {
                uu[i * u + j] = instance.dist(a, b);
            }
            for (j, &s) in sites.iter().enumerate() {
                us[i * sites.len() + j] = instance.dist(a, s);
            }
        }
        Table { instance, public, sites, uu, us }
    }

    fn location(&self, i: usize) -> usize {
        let u = self.public.len();
        if i < u {
            self.public[i]
        } else {
            self.sites[i - u]
        }
    }
}

impl Distance for Table<'_> {
    fn dist(&self, a: usize, b: usize) -> f64 {
        let u = self.public.len();
        let m = self.sites.len();
        match (a < u, b < u) {
            (true, true) => self.uu[a * u + b],
            (true, false) => self.us[a * m + (b - u)],
            (false, true) => self.us[b * m + (a - u)],
            (false, false) => self.instance.dist(self.location(a), self.location(b)),
        }
    }
}

/// Enumerate hitting sets of the public locations, run k-supplier on each,
/// and keep the placement with the best objective.
///
/// Clients visiting no public location are outliers of the enumeration but
/// are still measured by their true distance. With `q = 1` every other
/// client must be hit and only minimal hitting sets are tried; with `q < 1`
/// a hitting set must reach `min(floor(q n), in-scope clients)` clients.
pub fn fpt_solve(instance: &Instance, params: &SolveParams) -> Result<Solution, SolveError> {
    let target = params.check(instance)?;
    params.uncapacitated_only(Algorithm::Fpt)?;
    let u_eff = params.u.min(instance.visited_locations().len());
    if u_eff > params.max_fpt_u {
        return Err(SolveError::Usage(format!(
            "fpt would enumerate 2^{u_eff} subsets; the limit is u <= {}",
            params.max_fpt_u
        )));
    }
    if params.u == 0 {
        return Err(SolveError::Usage("u must be at least 1".into()));
    }

    let mut public = select_public_locations(instance, u_eff);
    public.sort_unstable();
    let u = public.len();
    let full = (1u32 << u) - 1;

    // Clients grouped by which public locations they visit.
    let slot: HashMap<usize, u32> = public.iter().enumerate().map(|(i, &l)| (l, i as u32)).collect();
    let mut within = vec![0u32; 1 << u];
    let mut in_scope = 0usize;
    for c in 0..instance.num_clients() {
        let mask = instance
            .visited(c)
            .iter()
            .filter_map(|l| slot.get(l))
            .fold(0u32, |m, &i| m | (1 << i));
        if mask != 0 {
            within[mask as usize] += 1;
            in_scope += 1;
        }
    }
    // Subset sums: within[S] = clients whose mask lies inside S.
    for bit in 0..u {
        for s in 0..(1usize << u) {
            if s & (1 << bit) != 0 {
                within[s] += within[s ^ (1 << bit)];
            }
        }
    }
    let hits = |a: u32| in_scope - within[(full & !a) as usize] as usize;

    let exhaustive = params.q >= 1.0;
    let required = if exhaustive { in_scope } else { target.min(in_scope) };

    let table = Table::new(instance, public.clone());
    let sites: Vec<usize> = (u..u + instance.sites().len()).collect();
    let mut seen: HashMap<Vec<usize>, f64> = HashMap::new();
    let mut best: Option<(f64, Vec<usize>)> = None;

    for a in 1..=full {
        if hits(a) < required {
            continue;
        }
        if exhaustive && (0..u).any(|i| a & (1 << i) != 0 && hits(a & !(1 << i)) >= required) {
            continue;
        }
        let points: Vec<usize> = (0..u).filter(|&i| a & (1 << i) != 0).collect();
        let si = SupplierInstance::new(&points, &sites, params.k, &table)?;
        let found = match params.supplier {
            SupplierMode::Approx => hs_approx(&si)?,
            SupplierMode::Exact => exact_supplier(&si)?,
        };
        let mut facilities: Vec<usize> = found.facilities.iter().map(|&i| table.location(i)).collect();
        facilities.sort_unstable();
        if seen.contains_key(&facilities) {
            continue;
        }
        let value = objective(instance, &facilities, params.q)?;
        seen.insert(facilities.clone(), value);
        let better = match &best {
            None => true,
            Some((v, f)) => value < *v || (value == *v && ids(instance, &facilities) < ids(instance, f)),
        };
        if better {
            best = Some((value, facilities));
        }
    }

    match best {
        Some((_, facilities)) => Ok(Solution::nearest(
            instance,
            Algorithm::Fpt.name(),
            params.k,
            params.q,
            &facilities,
        )?),
        None => Ok(Solution::infeasible(Algorithm::Fpt.name(), params.k, params.q)),
    }
}

fn ids<'a>(instance: &'a Instance, facilities: &[usize]) -> Vec<&'a str> {
    facilities.iter().map(|&f| instance.location_id(f)).collect()
}
