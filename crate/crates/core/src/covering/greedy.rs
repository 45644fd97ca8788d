use std::cmp::Reverse;
use std::collections::BinaryHeap;

use fixedbitset::FixedBitSet;

use super::{CoverError, CoverInstance, CoverResult, Demand, GroupConstraints, SiteCopies};

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// A greedy selection rule. Keys must never increase as the state advances,
/// which lets [`run`] re-evaluate lazily.
trait Rule {
    type Key: Ord + Copy;

    /// Current value of set `s`, or `None` if it adds nothing.
    fn key(&self, s: usize) -> Option<Self::Key>;
    fn take(&mut self, s: usize);
    fn done(&self) -> bool;
    fn reusable(&self) -> bool {
        false
    }
}

/// Repeatedly take the set with the largest key, ties to the smallest index,
/// until the rule is satisfied, nothing adds value, or `limit` sets are
/// taken.
fn run<R: Rule>(rule: &mut R, num_sets: usize, limit: Option<usize>) -> Vec<usize> {
    let mut heap: BinaryHeap<(R::Key, Reverse<usize>)> =
        (0..num_sets).filter_map(|s| rule.key(s).map(|k| (k, Reverse(s)))).collect();
    let mut chosen = Vec::new();
    while !rule.done() && limit.is_none_or(|l| chosen.len() < l) {
        let Some((_, Reverse(s))) = heap.pop() else {
            break;
        };
        let Some(fresh) = rule.key(s) else {
            continue;
        };
        if heap.peek().is_some_and(|top| (fresh, Reverse(s)) < *top) {
            heap.push((fresh, Reverse(s)));
            continue;
        }
        rule.take(s);
        chosen.push(s);
        if rule.reusable() {
            if let Some(k) = rule.key(s) {
                heap.push((k, Reverse(s)));
            }
        }
    }
    chosen
}

struct Coverage<'a> {
    ci: &'a CoverInstance,
    covered: FixedBitSet,
    count: usize,
    target: usize,
}

impl<'a> Coverage<'a> {
    fn new(ci: &'a CoverInstance, target: usize) -> Self {
        Coverage {
            ci,
            covered: FixedBitSet::with_capacity(ci.universe_size()),
            count: 0,
            target,
        }
    }
}

impl Rule for Coverage<'_> {
    type Key = usize;

    fn key(&self, s: usize) -> Option<usize> {
        let gain = self.ci.set(s).difference_count(&self.covered);
        (gain > 0).then_some(gain)
    }

    fn take(&mut self, s: usize) {
        self.count += self.ci.set(s).difference_count(&self.covered);
        self.covered.union_with(self.ci.set(s));
    }

    fn done(&self) -> bool {
        self.count >= self.target
    }
}

struct Capacitated<'a> {
    ci: &'a CoverInstance,
    covered: FixedBitSet,
    count: usize,
    target: usize,
    capacity: usize,
    copies: SiteCopies,
    assignment: Vec<Option<usize>>,
}

impl Rule for Capacitated<'_> {
    type Key = usize;

    fn key(&self, s: usize) -> Option<usize> {
        let gain = self.ci.set(s).difference_count(&self.covered).min(self.capacity);
        (gain > 0).then_some(gain)
    }

    fn take(&mut self, s: usize) {
        let fresh: Vec<usize> = self
            .ci
            .set(s)
            .ones()
            .filter(|&e| !self.covered.contains(e))
            .take(self.capacity)
            .collect();
        for e in fresh {
            self.covered.insert(e);
            self.assignment[e] = Some(s);
            self.count += 1;
        }
    }

    fn done(&self) -> bool {
        self.count >= self.target
    }

    fn reusable(&self) -> bool {
        self.copies == SiteCopies::Multiple
    }
}

struct Grouped<'a> {
    ci: &'a CoverInstance,
    covered: FixedBitSet,
    /// Groups each element belongs to.
    memberships: Vec<Vec<usize>>,
    deficits: Vec<usize>,
}

impl<'a> Grouped<'a> {
    fn new(ci: &'a CoverInstance, gc: &GroupConstraints) -> Self {
        let mut memberships = vec![Vec::new(); ci.universe_size()];
        for (t, g) in gc.groups().iter().enumerate() {
            for &m in &g.members {
                memberships[m].push(t);
            }
        }
        Grouped {
            ci,
            covered: FixedBitSet::with_capacity(ci.universe_size()),
            memberships,
            deficits: gc.groups().iter().map(|g| g.requirement).collect(),
        }
    }

    /// (deficit-weighted gain, new elements) of set `s`.
    fn gains(&self, s: usize) -> (usize, usize) {
        let mut per_group = vec![0usize; self.deficits.len()];
        let mut fresh = 0;
        for e in self.ci.set(s).ones().filter(|&e| !self.covered.contains(e)) {
            fresh += 1;
            for &t in &self.memberships[e] {
                per_group[t] += 1;
            }
        }
        let weighted = per_group.iter().zip(&self.deficits).map(|(&n, &d)| n.min(d)).sum();
        (weighted, fresh)
    }
}

impl Rule for Grouped<'_> {
    type Key = (usize, usize);

    fn key(&self, s: usize) -> Option<(usize, usize)> {
        let g = self.gains(s);
        (g.0 > 0).then_some(g)
    }

    fn take(&mut self, s: usize) {
        let fresh: Vec<usize> = self.ci.set(s).ones().filter(|&e| !self.covered.contains(e)).collect();
        for e in fresh {
            self.covered.insert(e);
            for &t in &self.memberships[e] {
                self.deficits[t] = self.deficits[t].saturating_sub(1);
            }
        }
    }

    fn done(&self) -> bool {
        self.deficits.iter().all(|&d| d == 0)
    }
}

/// Greedy cover of the whole universe. When some element lies in no set the
/// result is infeasible and covers every coverable element.
pub fn greedy_cover(ci: &CoverInstance) -> CoverResult {
    greedy(ci, &Demand::Full, None).expect("full demand is always well-formed")
}

/// Greedy until at least `target` elements are covered.
pub fn greedy_partial_cover(ci: &CoverInstance, target: usize) -> Result<CoverResult, CoverError> {
    greedy(ci, &Demand::Partial { target }, None)
}

/// Greedy with at most `capacity` elements served per opened set.
pub fn greedy_capacitated_cover(
    ci: &CoverInstance,
    capacity: usize,
    target: usize,
    copies: SiteCopies,
) -> Result<CoverResult, CoverError> {
    greedy(ci, &Demand::Capacitated { capacity, target, copies }, None)
}

/// Greedy on the deficit-weighted gain until every group requirement holds.
pub fn greedy_group_cover(ci: &CoverInstance, gc: &GroupConstraints) -> Result<CoverResult, CoverError> {
    greedy(ci, &Demand::Grouped(gc.clone()), None)
}

/// Greedy for any demand, stopping after `limit` sets. `feasible` reports
/// whether the demand was met within the limit.
pub fn greedy(ci: &CoverInstance, demand: &Demand, limit: Option<usize>) -> Result<CoverResult, CoverError> {
    demand.check(ci.universe_size())?;
    let n = ci.universe_size();
    Ok(match demand {
        Demand::Full | Demand::Partial { .. } => {
            let target = match demand {
                Demand::Partial { target } => *target,
                _ => n,
            };
            let mut rule = Coverage::new(ci, target);
            let chosen = run(&mut rule, ci.num_sets(), limit);
            CoverResult {
                feasible: rule.done(),
                covered: rule.covered.ones().collect(),
                chosen,
                assignment: None,
                shortfalls: Vec::new(),
            }
        }
        Demand::Capacitated { capacity, target, copies } => {
            let mut rule = Capacitated {
                ci,
                covered: FixedBitSet::with_capacity(n),
                count: 0,
                target: *target,
                capacity: *capacity,
                copies: *copies,
                assignment: vec![None; n],
            };
            let chosen = run(&mut rule, ci.num_sets(), limit);
            CoverResult {
                feasible: rule.done(),
                covered: rule.covered.ones().collect(),
                chosen,
                assignment: Some(rule.assignment),
                shortfalls: Vec::new(),
            }
        }
        Demand::Grouped(gc) => {
            let mut rule = Grouped::new(ci, gc);
            let chosen = run(&mut rule, ci.num_sets(), limit);
            CoverResult {
                feasible: rule.done(),
                covered: rule.covered.ones().collect(),
                chosen,
                assignment: None,
                shortfalls: rule.deficits,
            }
        }
    })
}
