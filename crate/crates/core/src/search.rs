//! Threshold search over a finite set of candidate radii.
//!
//! Both the k-supplier threshold method and the covering search look for the
//! smallest candidate radius at which some probe succeeds. Candidate sets can
//! hold ~10^8 pairwise distances, so they are streamed rather than stored:
//! small sets are materialized and binary searched directly, large ones are
//! first narrowed with a deterministic hash sample.
//!
//! The probe need not be monotone. The search keeps the invariant that the
//! lower bracket was probed and failed while the upper bracket was probed and
//! succeeded; on return the two are adjacent candidates. So if every radius
//! at or above some candidate succeeds, the returned radius is at most that
//! candidate, and the candidate just below it is a recorded failure.

use crate::model::Distance;

const MATERIALIZE_CAP: usize = 1 << 21;
const SAMPLE_SIZE: usize = 1 << 16;

/// A finite multiset of candidate values that can be scanned repeatedly.
pub trait Candidates {
    /// Number of values visited by a full scan, duplicates included.
    fn total(&self) -> usize;

    /// Visit every value with a key unique among this set's values.
    fn scan(&self, visit: &mut dyn FnMut(u64, f64));
}

impl Candidates for [f64] {
    fn total(&self) -> usize {
        self.len()
    }

    fn scan(&self, visit: &mut dyn FnMut(u64, f64)) {
        for (i, &v) in self.iter().enumerate() {
            visit(i as u64, v);
        }
    }
}

/// All distances between two index lists, plus a few extra values.
pub struct PairDistances<'a, D: Distance + ?Sized> {
    pub rows: &'a [usize],
    pub cols: &'a [usize],
    pub metric: &'a D,
    pub extra: Vec<f64>,
}

impl<D: Distance + ?Sized> Candidates for PairDistances<'_, D> {
    fn total(&self) -> usize {
        self.rows.len() * self.cols.len() + self.extra.len()
    }

    fn scan(&self, visit: &mut dyn FnMut(u64, f64)) {
        let width = self.cols.len() as u64;
        for (r, &a) in self.rows.iter().enumerate() {
            let base = r as u64 * width;
            for (c, &b) in self.cols.iter().enumerate() {
                visit(base + c as u64, self.metric.dist(a, b));
            }
        }
        let offset = self.rows.len() as u64 * width;
        for (i, &v) in self.extra.iter().enumerate() {
            visit(offset + i as u64, v);
        }
    }
}

/// Sorted, deduplicated copy of every candidate.
pub fn sorted_candidates<C: Candidates + ?Sized>(cands: &C) -> Vec<f64> {
    let mut v = Vec::with_capacity(cands.total());
    cands.scan(&mut |_, x| v.push(x));
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Outcome of a successful threshold search.
#[derive(Debug, Clone)]
pub struct Threshold<T> {
    /// Smallest candidate found to succeed.
    pub radius: f64,
    /// What the probe returned there.
    pub witness: T,
    /// The next smaller candidate, which was probed and failed; `None` when
    /// `radius` is the smallest candidate.
    pub below: Option<f64>,
    pub probes: usize,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn inside(x: f64, lo: Option<f64>, hi: Option<f64>) -> bool {
    lo.is_none_or(|l| x > l) && hi.is_none_or(|h| x < h)
}

/// Find the smallest candidate at which `probe` returns `Some`.
///
/// Returns `Ok(None)` when the probe fails on the largest candidate.
pub fn smallest_feasible<C, T, E, P>(cands: &C, mut probe: P) -> Result<Option<Threshold<T>>, E>
where
    C: Candidates + ?Sized,
    P: FnMut(f64) -> Result<Option<T>, E>,
{
    let mut lo: Option<f64> = None;
    let mut hi: Option<(f64, T)> = None;
    let mut probes = 0usize;
    let mut estimate = cands.total();

    loop {
        let hi_val = hi.as_ref().map(|(h, _)| *h);
        let stride = (estimate / SAMPLE_SIZE).max(1) as u64;
        let mut count = 0usize;
        let mut all: Option<Vec<f64>> = Some(Vec::new());
        let mut sample = Vec::new();
        cands.scan(&mut |key, x| {
            if !inside(x, lo, hi_val) {
                return;
            }
            count += 1;
            if let Some(v) = all.as_mut() {
                if v.len() < MATERIALIZE_CAP {
                    v.push(x);
                } else {
                    all = None;
                }
            }
            if stride > 1 && splitmix(key).is_multiple_of(stride) {
                sample.push(x);
            }
        });

        let (mut list, last_round) = match all {
            Some(v) => (v, true),
            None => (sample, false),
        };
        list.sort_by(f64::total_cmp);
        list.dedup();

        // lower/upper positions: -1 and len stand for the current brackets.
        let (mut l, mut h) = (-1isize, list.len() as isize);
        while h - l > 1 {
            let mid = (l + h) / 2;
            let r = list[mid as usize];
            probes += 1;
            match probe(r)? {
                Some(w) => {
                    h = mid;
                    hi = Some((r, w));
                }
                None => l = mid,
            }
        }
        if l >= 0 {
            lo = Some(list[l as usize]);
        }

        if last_round {
            return Ok(hi.map(|(radius, witness)| Threshold {
                radius,
                witness,
                below: lo,
                probes,
            }));
        }
        estimate = if list.is_empty() { count } else { count / list.len() * 2 };
    }
}
