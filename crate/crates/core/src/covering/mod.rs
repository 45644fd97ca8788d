//! Set-cover machinery for the fixed-radius problem.
//!
//! At radius `R` each site `j` covers the clients `p` with `d(S_p, j) <= R`.
//! Choosing few sites that together cover the demanded clients is a set cover
//! problem, solved here greedily (plain, partial, capacitated, grouped) or
//! exactly by branch and bound.

mod exact;
mod flow;
mod greedy;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::model::{Distance, Instance};

pub use exact::{exact_cover, exact_cover_within, DEFAULT_NODE_BUDGET, WORK_PER_NODE};
pub use flow::max_assignment;
pub use greedy::{
    greedy, greedy_capacitated_cover, greedy_cover, greedy_group_cover, greedy_partial_cover, harmonic,
};

#[derive(Debug, Error, PartialEq)]
pub enum CoverError {
    #[error("branch and bound exhausted its budget of {0} nodes")]
    BudgetExhausted(u64),
    #[error("invalid group constraints: {0}")]
    Groups(String),
    #[error("coverage target {target} must lie in 1..={universe}")]
    Target { target: usize, universe: usize },
    #[error("capacity must be at least 1")]
    ZeroCapacity,
    #[error("exact covering supports single-copy sites only")]
    MultiCopyExact,
}

/// The derived set-cover instance: one set per site over client indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverInstance {
    radius: f64,
    universe: usize,
    sets: Vec<FixedBitSet>,
    labels: Vec<usize>,
}

impl CoverInstance {
    /// Sets given as element lists; labels are the set positions.
    pub fn from_sets(universe: usize, sets: &[Vec<usize>]) -> Self {
        let sets = sets
            .iter()
            .map(|members| {
                let mut bits = FixedBitSet::with_capacity(universe);
                for &e in members {
                    bits.insert(e);
                }
                bits
            })
            .collect::<Vec<_>>();
        let labels = (0..sets.len()).collect();
        CoverInstance {
            radius: 0.0,
            universe,
            sets,
            labels,
        }
    }

    pub fn from_bitsets(universe: usize, sets: Vec<FixedBitSet>, labels: Vec<usize>, radius: f64) -> Self {
        assert_eq!(sets.len(), labels.len());
        assert!(sets.iter().all(|s| s.len() == universe));
        CoverInstance {
            radius,
            universe,
            sets,
            labels,
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    pub fn set(&self, i: usize) -> &FixedBitSet {
        &self.sets[i]
    }

    /// What set `i` stands for; a site's location index for instances built
    /// by [`build_cover`].
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn members(&self, i: usize) -> Vec<usize> {
        self.sets[i].ones().collect()
    }

    /// Union of all sets.
    pub fn coverable(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.universe);
        for s in &self.sets {
            all.union_with(s);
        }
        all
    }
}

/// Demographic classes with a minimum number of covered members each.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupConstraints {
    groups: Vec<Group>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub label: String,
    pub members: Vec<usize>,
    pub requirement: usize,
}

impl GroupConstraints {
    pub fn new(groups: Vec<Group>, universe: usize) -> Result<Self, CoverError> {
        if groups.is_empty() {
            return Err(CoverError::Groups("at least one group is required".into()));
        }
        let mut out = Vec::with_capacity(groups.len());
        for mut g in groups {
            g.members.sort_unstable();
            g.members.dedup();
            if let Some(&bad) = g.members.iter().find(|&&m| m >= universe) {
                return Err(CoverError::Groups(format!("group {} has unknown member {bad}", g.label)));
            }
            if g.requirement > g.members.len() {
                return Err(CoverError::Groups(format!(
                    "group {} requires {} of {} members",
                    g.label,
                    g.requirement,
                    g.members.len()
                )));
            }
            out.push(g);
        }
        Ok(GroupConstraints { groups: out })
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn total_requirement(&self) -> usize {
        self.groups.iter().map(|g| g.requirement).sum()
    }
}

/// Whether a capacitated site may be opened more than once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SiteCopies {
    #[default]
    Single,
    Multiple,
}

/// What a cover must achieve.
#[derive(Debug, Clone, PartialEq)]
pub enum Demand {
    Full,
    Partial { target: usize },
    Capacitated { capacity: usize, target: usize, copies: SiteCopies },
    Grouped(GroupConstraints),
}

impl Demand {
    pub(crate) fn check(&self, universe: usize) -> Result<(), CoverError> {
        match self {
            Demand::Partial { target } | Demand::Capacitated { target, .. }
                if *target == 0 || *target > universe =>
            {
                Err(CoverError::Target {
                    target: *target,
                    universe,
                })
            }
            Demand::Capacitated { capacity: 0, .. } => Err(CoverError::ZeroCapacity),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverResult {
    /// Chosen set indices in selection order; a set repeats when it was
    /// opened several times.
    pub chosen: Vec<usize>,
    /// Covered elements, ascending.
    pub covered: Vec<usize>,
    pub feasible: bool,
    /// Element to serving set, for capacitated covers.
    pub assignment: Option<Vec<Option<usize>>>,
    /// Unmet requirement per group, for grouped covers.
    pub shortfalls: Vec<usize>,
}

impl CoverResult {
    pub fn size(&self) -> usize {
        self.chosen.len()
    }

    /// Distinct chosen sets, ascending.
    pub fn chosen_sorted(&self) -> Vec<usize> {
        let mut v = self.chosen.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Times each distinct set was chosen, ascending by set.
    pub fn copies(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for s in self.chosen_sorted() {
            out.push((s, self.chosen.iter().filter(|&&c| c == s).count()));
        }
        out
    }

    /// Verify that the result meets `demand` on `ci`, independently of how
    /// it was produced.
    pub fn satisfies(&self, ci: &CoverInstance, demand: &Demand) -> bool {
        let mut union = FixedBitSet::with_capacity(ci.universe_size());
        for &s in &self.chosen {
            union.union_with(ci.set(s));
        }
        match demand {
            Demand::Full => union.count_ones(..) == ci.universe_size(),
            Demand::Partial { target } => union.count_ones(..) >= *target,
            Demand::Grouped(gc) => gc
                .groups()
                .iter()
                .all(|g| g.members.iter().filter(|&&m| union.contains(m)).count() >= g.requirement),
            Demand::Capacitated { capacity, target, .. } => {
                let Some(assignment) = &self.assignment else {
                    return false;
                };
                let mut load = vec![0usize; ci.num_sets()];
                let mut served = 0;
                for (e, slot) in assignment.iter().enumerate() {
                    if let Some(s) = *slot {
                        if !ci.set(s).contains(e) || !self.chosen.contains(&s) {
                            return false;
                        }
                        load[s] += 1;
                        served += 1;
                    }
                }
                let copies = self.copies();
                served >= *target
                    && copies.iter().all(|&(s, n)| load[s] <= capacity * n)
                    && load.iter().enumerate().all(|(s, &l)| l == 0 || self.chosen.contains(&s))
            }
        }
    }
}

/// Visited locations sorted by latitude, for pruning radius queries in
/// haversine mode.
struct NearIndex {
    by_lat: Vec<(f64, usize)>,
    radius_km: f64,
}

impl NearIndex {
    fn new(instance: &Instance, locations: &[usize]) -> Option<Self> {
        let radius_km = instance.sphere_radius()?;
        let mut by_lat: Vec<(f64, usize)> = locations
            .iter()
            .map(|&l| (instance.latitude(l).expect("haversine mode"), l))
            .collect();
        by_lat.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Some(NearIndex { by_lat, radius_km })
    }

    /// Locations whose latitude could put them within `r` of `center`.
    fn band(&self, instance: &Instance, center: usize, r: f64) -> &[(f64, usize)] {
        // Great-circle distance is at least the meridional arc.
        let half = r / self.radius_km * (1.0 + 1e-9) + 1e-12;
        let lat = instance.latitude(center).expect("haversine mode");
        let from = self.by_lat.partition_point(|&(x, _)| x < lat - half);
        let to = self.by_lat.partition_point(|&(x, _)| x <= lat + half);
        &self.by_lat[from..to]
    }
}

/// Calls `f` for every location of `candidates` within `r` of `center`.
pub(crate) struct Neighbors<'a> {
    instance: &'a Instance,
    candidates: &'a [usize],
    index: Option<NearIndex>,
}

impl<'a> Neighbors<'a> {
    pub(crate) fn new(instance: &'a Instance, candidates: &'a [usize]) -> Self {
        Neighbors {
            instance,
            candidates,
            index: NearIndex::new(instance, candidates),
        }
    }

    pub(crate) fn for_each_within(&self, center: usize, r: f64, mut f: impl FnMut(usize)) {
        match &self.index {
            Some(index) => {
                for &(_, l) in index.band(self.instance, center, r) {
                    if self.instance.dist(l, center) <= r {
                        f(l);
                    }
                }
            }
            None => {
                for &l in self.candidates {
                    if self.instance.dist(l, center) <= r {
                        f(l);
                    }
                }
            }
        }
    }
}

/// Locations visited by more clients than this get a precomputed bitset.
const DENSE_VISITORS: usize = 64;

/// The covering instance at radius `r`: set `i` holds the clients within `r`
/// of site `instance.sites()[i]` through some visited location.
pub fn build_cover(instance: &Instance, r: f64) -> CoverInstance {
    let n = instance.num_clients();
    let visited = instance.visited_locations();
    let near = Neighbors::new(instance, visited);
    let dense: Vec<Option<FixedBitSet>> = (0..instance.num_locations())
        .map(|l| {
            let v = instance.visitors(l);
            (v.len() > DENSE_VISITORS).then(|| {
                let mut b = FixedBitSet::with_capacity(n);
                for &c in v {
                    b.insert(c);
                }
                b
            })
        })
        .collect();

    let sets = instance
        .sites()
        .iter()
        .map(|&site| {
            let mut bits = FixedBitSet::with_capacity(n);
            near.for_each_within(site, r, |l| match &dense[l] {
                Some(b) => bits.union_with(b),
                None => {
                    for &c in instance.visitors(l) {
                        bits.insert(c);
                    }
                }
            });
            bits
        })
        .collect();
    CoverInstance::from_bitsets(n, sets, instance.sites().to_vec(), r)
}
