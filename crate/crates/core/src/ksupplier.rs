//! k-supplier: open at most `k` of the sites so every demand point is close
//! to one of them.
//!
//! [`hs_approx`] is the threshold 3-approximation of Hochbaum and Shmoys;
//! [`exact_supplier`] enumerates subsets and serves as a test oracle.

use thiserror::Error;

use crate::model::Distance;
use crate::search::{smallest_feasible, PairDistances};

/// Largest number of site subsets [`exact_supplier`] will enumerate.
pub const EXACT_SUBSET_LIMIT: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum SupplierError {
    #[error("k-supplier instance has no demand points")]
    NoPoints,
    #[error("k-supplier instance has no sites")]
    NoSites,
    #[error("k-supplier budget must be at least 1")]
    ZeroBudget,
    #[error("exact k-supplier would enumerate {subsets} subsets (limit {EXACT_SUBSET_LIMIT}); shrink the instance")]
    TooLarge { subsets: u128 },
    #[error("threshold search found no feasible radius")]
    NoThreshold,
}

/// Demand points and candidate sites, as location indices into `metric`.
#[derive(Clone)]
pub struct SupplierInstance<'a, D: Distance + ?Sized> {
    points: Vec<usize>,
    sites: Vec<usize>,
    k: usize,
    metric: &'a D,
}

impl<D: Distance + ?Sized> std::fmt::Debug for SupplierInstance<'_, D> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SupplierInstance")
            .field("points", &self.points)
            .field("sites", &self.sites)
            .field("k", &self.k)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupplierSolution {
    /// Opened sites, ascending.
    pub facilities: Vec<usize>,
    /// Largest point-to-nearest-facility distance.
    pub radius: f64,
}

impl<'a, D: Distance + ?Sized> SupplierInstance<'a, D> {
    pub fn new(points: &[usize], sites: &[usize], k: usize, metric: &'a D) -> Result<Self, SupplierError> {
        let mut points = points.to_vec();
        points.sort_unstable();
        points.dedup();
        let mut sites = sites.to_vec();
        sites.sort_unstable();
        sites.dedup();
        if points.is_empty() {
            return Err(SupplierError::NoPoints);
        }
        if sites.is_empty() {
            return Err(SupplierError::NoSites);
        }
        if k == 0 {
            return Err(SupplierError::ZeroBudget);
        }
        Ok(SupplierInstance { points, sites, k, metric })
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Largest distance from a point to its nearest facility.
    pub fn radius_of(&self, facilities: &[usize]) -> f64 {
        self.points
            .iter()
            .map(|&x| facilities.iter().map(|&f| self.metric.dist(x, f)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    }

    /// One round of the threshold method at radius `r`.
    fn threshold(&self, r: f64) -> Option<Vec<usize>> {
        let d = self.metric;
        let mut picked: Vec<usize> = Vec::with_capacity(self.k + 1);
        for &x in &self.points {
            if picked.iter().all(|&p| d.dist(x, p) > 2.0 * r) {
                picked.push(x);
                if picked.len() > self.k {
                    return None;
                }
            }
        }
        let mut opened = Vec::with_capacity(picked.len());
        for &p in &picked {
            opened.push(*self.sites.iter().find(|&&s| d.dist(p, s) <= r)?);
        }
        opened.sort_unstable();
        opened.dedup();
        let served = self
            .points
            .iter()
            .all(|&x| opened.iter().any(|&f| d.dist(x, f) <= 3.0 * r));
        served.then_some(opened)
    }
}

/// Threshold 3-approximation. Returns the facilities opened at the smallest
/// candidate radius where the threshold round succeeds; the reported radius
/// is the distance those facilities actually achieve.
pub fn hs_approx<D: Distance + ?Sized>(si: &SupplierInstance<'_, D>) -> Result<SupplierSolution, SupplierError> {
    let cands = PairDistances {
        rows: &si.points,
        cols: &si.sites,
        metric: si.metric,
        extra: Vec::new(),
    };
    let found = smallest_feasible::<_, _, SupplierError, _>(&cands, |r| Ok(si.threshold(r)))?
        .ok_or(SupplierError::NoThreshold)?;
    let facilities = found.witness;
    Ok(SupplierSolution {
        radius: si.radius_of(&facilities),
        facilities,
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > EXACT_SUBSET_LIMIT * 1000 {
            return acc;
        }
    }
    acc
}

/// Exhaustive search over all `min(k, |sites|)`-subsets in lexicographic
/// order; the first subset attaining the optimum wins.
pub fn exact_supplier<D: Distance + ?Sized>(si: &SupplierInstance<'_, D>) -> Result<SupplierSolution, SupplierError> {
    let m = si.sites.len();
    let k = si.k.min(m);
    let subsets = binomial(m, k);
    if subsets > EXACT_SUBSET_LIMIT {
        return Err(SupplierError::TooLarge { subsets });
    }
    let table: Vec<Vec<f64>> = si
        .points
        .iter()
        .map(|&x| si.sites.iter().map(|&s| si.metric.dist(x, s)).collect())
        .collect();

    let mut combo: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        let radius = table
            .iter()
            .map(|row| combo.iter().map(|&c| row[c]).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        if best.as_ref().is_none_or(|(b, _)| radius < *b) {
            best = Some((radius, combo.clone()));
        }
        // Next combination in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| combo[i] < m - k + i) else {
            break;
        };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
    let (radius, combo) = best.expect("at least one subset");
    Ok(SupplierSolution {
        facilities: combo.into_iter().map(|c| si.sites[c]).collect(),
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    struct Line(Vec<f64>);

    impl Distance for Line {
        fn dist(&self, a: usize, b: usize) -> f64 {
            (self.0[a] - self.0[b]).abs()
        }
    }

    // a=0, b=2, c=4, d=6
    const A: usize = 0;
    const C: usize = 2;
    const D: usize = 3;

    fn line() -> Line {
        Line(vec![0.0, 2.0, 4.0, 6.0])
    }

    #[test]
    fn single_point_single_site() {
        let m = line();
        let si = SupplierInstance::new(&[A], &[A], 1, &m).unwrap();
        let sol = hs_approx(&si).unwrap();
        assert_eq!(sol, SupplierSolution { facilities: vec![A], radius: 0.0 });
    }

    #[test]
    fn one_facility_on_the_line() {
        let m = line();
        let si = SupplierInstance::new(&[A, D], &[A, C], 1, &m).unwrap();
        let exact = exact_supplier(&si).unwrap();
        assert_eq!(exact, SupplierSolution { facilities: vec![C], radius: 4.0 });
        let approx = hs_approx(&si).unwrap();
        assert!(approx.radius >= 4.0 && approx.radius <= 12.0, "{approx:?}");
    }

    #[test]
    fn two_facilities_on_the_line() {
        let m = line();
        let si = SupplierInstance::new(&[A, D], &[A, C], 2, &m).unwrap();
        assert_eq!(hs_approx(&si).unwrap(), SupplierSolution { facilities: vec![A, C], radius: 2.0 });
        assert_eq!(exact_supplier(&si).unwrap().radius, 2.0);
    }

    #[test]
    fn every_point_its_own_site() {
        let m = line();
        let all = [0, 1, 2, 3];
        let si = SupplierInstance::new(&all, &all, 4, &m).unwrap();
        assert_eq!(exact_supplier(&si).unwrap().radius, 0.0);
        assert_eq!(hs_approx(&si).unwrap().radius, 0.0);
    }

    #[test]
    fn forced_choice() {
        let m = line();
        let si = SupplierInstance::new(&[A], &[C], 1, &m).unwrap();
        assert_eq!(exact_supplier(&si).unwrap(), SupplierSolution { facilities: vec![C], radius: 4.0 });
    }

    #[test]
    fn invalid_instances() {
        let m = line();
        assert_eq!(SupplierInstance::new(&[], &[A], 1, &m).unwrap_err(), SupplierError::NoPoints);
        assert_eq!(SupplierInstance::new(&[A], &[], 1, &m).unwrap_err(), SupplierError::NoSites);
        assert_eq!(SupplierInstance::new(&[A], &[A], 0, &m).unwrap_err(), SupplierError::ZeroBudget);
    }

    #[test]
    fn exact_guard() {
        let m = Line((0..60).map(f64::from).collect());
        let all: Vec<usize> = (0..60).collect();
        let si = SupplierInstance::new(&all, &all, 10, &m).unwrap();
        assert!(matches!(exact_supplier(&si), Err(SupplierError::TooLarge { .. })));
    }

    proptest! {
        #[test]
        fn approx_within_three_of_exact(
            pos in prop::collection::vec(0u32..50, 2..9),
            split in any::<u64>(),
            k in 1usize..4,
        ) {
            let m = Line(pos.iter().map(|&p| f64::from(p)).collect());
            let n = pos.len();
            let points: Vec<usize> = (0..n).filter(|i| split >> i & 1 == 1).collect();
            let sites: Vec<usize> = (0..n).filter(|i| split >> (i + 16) & 1 == 1).collect();
            prop_assume!(!points.is_empty() && !sites.is_empty());
            let si = SupplierInstance::new(&points, &sites, k, &m).unwrap();
            let exact = exact_supplier(&si).unwrap();
            let approx = hs_approx(&si).unwrap();
            prop_assert!(approx.facilities.len() <= k);
            prop_assert!(exact.radius <= approx.radius);
            prop_assert!(approx.radius <= 3.0 * exact.radius);
            prop_assert_eq!(approx.radius, si.radius_of(&approx.facilities));
            let candidates: Vec<f64> = points.iter().flat_map(|&x| sites.iter().map(move |&s| (x, s)))
                .map(|(x, s)| m.dist(x, s)).collect();
            prop_assert!(candidates.contains(&approx.radius));
            prop_assert_eq!(hs_approx(&si).unwrap(), approx);
        }
    }
}
