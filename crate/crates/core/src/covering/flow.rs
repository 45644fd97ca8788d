use super::CoverInstance;

/// Largest assignment of elements to the given sets with at most `capacity`
/// elements per set, by augmenting paths. Elements are tried in ascending
/// order and sets in the order given.
pub fn max_assignment(ci: &CoverInstance, sets: &[usize], capacity: usize) -> Vec<Option<usize>> {
    let n = ci.universe_size();
    let mut options: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (slot, &s) in sets.iter().enumerate() {
        for e in ci.set(s).ones() {
            options[e].push(slot);
        }
    }
    let mut state = Matching {
        options: &options,
        capacity,
        owner: vec![None; n],
        members: vec![Vec::new(); sets.len()],
        seen: vec![false; sets.len()],
    };
    for e in 0..n {
        if options[e].is_empty() {
            continue;
        }
        state.seen.iter_mut().for_each(|v| *v = false);
        state.augment(e);
    }
    state.owner.into_iter().map(|o| o.map(|slot| sets[slot])).collect()
}

struct Matching<'a> {
    options: &'a [Vec<usize>],
    capacity: usize,
    owner: Vec<Option<usize>>,
    members: Vec<Vec<usize>>,
    seen: Vec<bool>,
}

impl Matching<'_> {
    fn augment(&mut self, e: usize) -> bool {
        for i in 0..self.options[e].len() {
            let slot = self.options[e][i];
            if self.seen[slot] {
                continue;
            }
            self.seen[slot] = true;
            if self.members[slot].len() < self.capacity {
                self.place(e, slot);
                return true;
            }
            for j in 0..self.members[slot].len() {
                let other = self.members[slot][j];
                if self.augment(other) {
                    // `other` moved elsewhere; take its place.
                    self.members[slot].retain(|&m| m != other);
                    self.place(e, slot);
                    return true;
                }
            }
        }
        false
    }

    fn place(&mut self, e: usize, slot: usize) {
        self.owner[e] = Some(slot);
        self.members[slot].push(e);
    }
}
