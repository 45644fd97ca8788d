//! Minimum-cardinality covers by branch and bound.
//!
//! Full covers branch on the uncovered element contained in the fewest
//! allowed sets. The other demands branch on including or excluding the set
//! of largest marginal value. Both prune with the lower bound "fewest sets
//! whose marginal values could add up to the remaining demand", which for a
//! full cover is at least `ceil(remaining / largest set)`.

use fixedbitset::FixedBitSet;

use super::flow::max_assignment;
use super::greedy::greedy;
use super::{CoverError, CoverInstance, CoverResult, Demand, SiteCopies};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Each node may use this many 64-bit word operations on average; the
/// total work allowed is `node_budget * WORK_PER_NODE`. Keeps the budget
/// meaningful when a single node scans thousands of large sets.
pub const WORK_PER_NODE: u64 = 4096;

/// A provably minimum cover for `demand`, or an infeasible result when none
/// exists.
pub fn exact_cover(ci: &CoverInstance, demand: &Demand, node_budget: u64) -> Result<CoverResult, CoverError> {
    match exact_cover_within(ci, demand, node_budget, usize::MAX)? {
        Some(r) => Ok(r),
        None => {
            let mut r = greedy(ci, demand, None)?;
            r.feasible = false;
            Ok(r)
        }
    }
}

/// A minimum cover for `demand` if one of at most `max_size` sets exists,
/// `None` if provably none does.
pub fn exact_cover_within(
    ci: &CoverInstance,
    demand: &Demand,
    node_budget: u64,
    max_size: usize,
) -> Result<Option<CoverResult>, CoverError> {
    demand.check(ci.universe_size())?;
    if let Demand::Capacitated { copies: SiteCopies::Multiple, .. } = demand {
        return Err(CoverError::MultiCopyExact);
    }

    let incumbent = greedy(ci, demand, None)?;
    let capacitated = matches!(demand, Demand::Capacitated { .. });
    if !incumbent.feasible && !capacitated {
        // Greedy reaches every coverable element; nothing can do better.
        return Ok(None);
    }

    let mut search = Search {
        ci,
        demand,
        budget: node_budget,
        nodes: 0,
        work_budget: node_budget.saturating_mul(WORK_PER_NODE),
        work: 0,
        words: ci.universe_size().div_ceil(64).max(1) as u64,
        containing: containing(ci),
        best: None,
        bound: max_size.saturating_add(1),
    };
    if incumbent.feasible && incumbent.size() <= max_size {
        search.bound = incumbent.size();
        search.best = Some(incumbent.chosen_sorted());
    }

    let universe = ci.universe_size();
    let mut forbidden = FixedBitSet::with_capacity(ci.num_sets());
    let mut chosen = Vec::new();
    match demand {
        Demand::Full => {
            let covered = FixedBitSet::with_capacity(universe);
            search.full(&covered, 0, &mut chosen, &mut forbidden)?;
        }
        _ => {
            if capacitated {
                let all: Vec<usize> = (0..ci.num_sets()).collect();
                let (capacity, target) = capacity_target(demand);
                if max_assignment(ci, &all, capacity).iter().flatten().count() < target {
                    return Ok(None);
                }
            }
            search.by_sets(&mut chosen, &mut forbidden)?;
        }
    }

    let Some(mut best) = search.best else {
        return Ok(None);
    };
    best.sort_unstable();
    Ok(Some(finish(ci, demand, best)))
}

fn capacity_target(demand: &Demand) -> (usize, usize) {
    match demand {
        Demand::Capacitated { capacity, target, .. } => (*capacity, *target),
        _ => unreachable!("capacitated demand"),
    }
}

fn finish(ci: &CoverInstance, demand: &Demand, chosen: Vec<usize>) -> CoverResult {
    let mut union = FixedBitSet::with_capacity(ci.universe_size());
    for &s in &chosen {
        union.union_with(ci.set(s));
    }
    match demand {
        Demand::Capacitated { capacity, .. } => {
            let assignment = max_assignment(ci, &chosen, *capacity);
            CoverResult {
                covered: assignment.iter().enumerate().filter(|(_, a)| a.is_some()).map(|(e, _)| e).collect(),
                chosen,
                feasible: true,
                assignment: Some(assignment),
                shortfalls: Vec::new(),
            }
        }
        Demand::Grouped(gc) => CoverResult {
            covered: union.ones().collect(),
            chosen,
            feasible: true,
            assignment: None,
            shortfalls: vec![0; gc.groups().len()],
        },
        _ => CoverResult {
            covered: union.ones().collect(),
            chosen,
            feasible: true,
            assignment: None,
            shortfalls: Vec::new(),
        },
    }
}

/// Sets containing each element.
fn containing(ci: &CoverInstance) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); ci.universe_size()];
    for s in 0..ci.num_sets() {
        for e in ci.set(s).ones() {
            out[e].push(s);
        }
    }
    out
}

struct Search<'a> {
    ci: &'a CoverInstance,
    demand: &'a Demand,
    budget: u64,
    nodes: u64,
    work_budget: u64,
    work: u64,
    /// Words per bitset.
    words: u64,
    containing: Vec<Vec<usize>>,
    best: Option<Vec<usize>>,
    /// Only covers with fewer sets than this are still of interest.
    bound: usize,
}

/// Fewest values from `gains` (any order) summing to at least `need`.
fn sets_needed(mut gains: Vec<usize>, need: usize) -> Option<usize> {
    if need == 0 {
        return Some(0);
    }
    gains.sort_unstable_by(|a, b| b.cmp(a));
    let mut acc = 0;
    for (i, g) in gains.into_iter().enumerate() {
        acc += g;
        if acc >= need {
            return Some(i + 1);
        }
    }
    None
}

impl Search<'_> {
    fn visit(&mut self) -> Result<(), CoverError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CoverError::BudgetExhausted(self.budget));
        }
        Ok(())
    }

    fn charge(&mut self, work: u64) -> Result<(), CoverError> {
        self.work = self.work.saturating_add(work);
        if self.work > self.work_budget {
            return Err(CoverError::BudgetExhausted(self.budget));
        }
        Ok(())
    }

    fn allowed_vec(&mut self, chosen: &[usize], forbidden: &FixedBitSet) -> Result<Vec<usize>, CoverError> {
        self.charge(self.ci.num_sets() as u64 * (1 + self.words))?;
        Ok(self.allowed(chosen, forbidden).collect())
    }

    fn record(&mut self, chosen: &[usize]) {
        if chosen.len() < self.bound {
            self.bound = chosen.len();
            self.best = Some(chosen.to_vec());
        }
    }

    fn allowed(&self, chosen: &[usize], forbidden: &FixedBitSet) -> impl Iterator<Item = usize> + '_ {
        let chosen = chosen.to_vec();
        let forbidden = forbidden.clone();
        (0..self.ci.num_sets()).filter(move |s| !forbidden.contains(*s) && !chosen.contains(s))
    }

    fn full(
        &mut self,
        covered: &FixedBitSet,
        count: usize,
        chosen: &mut Vec<usize>,
        forbidden: &mut FixedBitSet,
    ) -> Result<(), CoverError> {
        self.visit()?;
        let universe = self.ci.universe_size();
        if count == universe {
            self.record(chosen);
            return Ok(());
        }
        if chosen.len() + 1 >= self.bound {
            return Ok(());
        }
        let allowed = self.allowed_vec(chosen, forbidden)?;
        let gains: Vec<usize> = allowed.iter().map(|&s| self.ci.set(s).difference_count(covered)).collect();
        match sets_needed(gains.clone(), universe - count) {
            Some(m) if chosen.len() + m < self.bound => {}
            _ => return Ok(()),
        }

        // Uncovered element with the fewest allowed sets.
        let mut usable = FixedBitSet::with_capacity(self.ci.num_sets());
        for &s in &allowed {
            usable.insert(s);
        }
        let mut pick: Option<(usize, usize)> = None;
        let mut scanned = 0u64;
        for e in (0..universe).filter(|&e| !covered.contains(e)) {
            scanned += self.containing[e].len() as u64;
            let n = self.containing[e].iter().filter(|&&s| usable.contains(s)).count();
            if n == 0 {
                return Ok(());
            }
            if pick.is_none_or(|(_, best)| n < best) {
                pick = Some((e, n));
            }
        }
        self.charge(scanned + universe as u64)?;
        let (e, _) = pick.expect("some element is uncovered");
        let mut branches: Vec<(usize, usize)> = allowed
            .iter()
            .zip(&gains)
            .filter(|(&s, _)| self.ci.set(s).contains(e))
            .map(|(&s, &g)| (s, g))
            .collect();
        branches.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let mut excluded = Vec::new();
        let mut result = Ok(());
        for (s, g) in branches {
            let mut next = covered.clone();
            next.union_with(self.ci.set(s));
            chosen.push(s);
            result = self.full(&next, count + g, chosen, forbidden);
            chosen.pop();
            if result.is_err() {
                break;
            }
            // Later branches cover `e` without `s`.
            forbidden.insert(s);
            excluded.push(s);
        }
        for s in excluded {
            forbidden.set(s, false);
        }
        result
    }

    /// Remaining demand and per-set marginal values for the set-branching
    /// demands.
    fn state(&self, chosen: &[usize], candidates: &[usize]) -> (usize, Vec<usize>) {
        let ci = self.ci;
        let mut union = FixedBitSet::with_capacity(ci.universe_size());
        for &s in chosen {
            union.union_with(ci.set(s));
        }
        match self.demand {
            Demand::Partial { target } => {
                let have = union.count_ones(..);
                let gains = candidates.iter().map(|&s| ci.set(s).difference_count(&union)).collect();
                (target.saturating_sub(have), gains)
            }
            Demand::Grouped(gc) => {
                let deficits: Vec<usize> = gc
                    .groups()
                    .iter()
                    .map(|g| g.requirement.saturating_sub(g.members.iter().filter(|&&m| union.contains(m)).count()))
                    .collect();
                let gains = candidates
                    .iter()
                    .map(|&s| {
                        gc.groups()
                            .iter()
                            .zip(&deficits)
                            .map(|(g, &d)| {
                                g.members
                                    .iter()
                                    .filter(|&&m| ci.set(s).contains(m) && !union.contains(m))
                                    .count()
                                    .min(d)
                            })
                            .sum()
                    })
                    .collect();
                (deficits.iter().sum(), gains)
            }
            Demand::Capacitated { capacity, target, .. } => {
                let served = if chosen.is_empty() {
                    0
                } else {
                    max_assignment(ci, chosen, *capacity).iter().flatten().count()
                };
                let gains = candidates
                    .iter()
                    .map(|&s| ci.set(s).count_ones(..).min(*capacity))
                    .collect();
                (target.saturating_sub(served), gains)
            }
            Demand::Full => unreachable!("full covers branch on elements"),
        }
    }

    fn by_sets(&mut self, chosen: &mut Vec<usize>, forbidden: &mut FixedBitSet) -> Result<(), CoverError> {
        self.visit()?;
        let allowed = self.allowed_vec(chosen, forbidden)?;
        let state_work = match self.demand {
            Demand::Grouped(gc) => gc.groups().iter().map(|g| g.members.len() as u64).sum::<u64>() * allowed.len() as u64,
            Demand::Capacitated { .. } => {
                chosen.iter().map(|&s| self.ci.set(s).count_ones(..) as u64).sum::<u64>() * (1 + chosen.len() as u64)
            }
            _ => 0,
        };
        self.charge(state_work)?;
        let (remaining, gains) = self.state(chosen, &allowed);
        if remaining == 0 {
            self.record(chosen);
            return Ok(());
        }
        if chosen.len() + 1 >= self.bound {
            return Ok(());
        }
        match sets_needed(gains.clone(), remaining) {
            Some(m) if chosen.len() + m < self.bound => {}
            _ => return Ok(()),
        }
        let Some((s, _)) = allowed
            .iter()
            .zip(&gains)
            .filter(|(_, &g)| g > 0)
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&s, &g)| (s, g))
        else {
            return Ok(());
        };

        chosen.push(s);
        let include = self.by_sets(chosen, forbidden);
        chosen.pop();
        include?;

        forbidden.insert(s);
        let exclude = self.by_sets(chosen, forbidden);
        forbidden.set(s, false);
        exclude
    }
}
