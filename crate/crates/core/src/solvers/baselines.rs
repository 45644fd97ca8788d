use crate::ksupplier::{hs_approx, SupplierInstance};
use crate::model::{Instance, Solution};

use super::{Algorithm, SolveError, SolveParams};

/// Open the `k` sites visited by the most clients, ties to the smallest id.
pub fn most_active(instance: &Instance, params: &SolveParams) -> Result<Solution, SolveError> {
    params.check(instance)?;
    params.uncapacitated_only(Algorithm::MostActive)?;
    let mut ranked: Vec<usize> = instance.sites().to_vec();
    ranked.sort_by_key(|&s| (std::cmp::Reverse(instance.visitors(s).len()), s));
    ranked.truncate(params.k);
    Ok(Solution::nearest(instance, Algorithm::MostActive.name(), params.k, params.q, &ranked)?)
}

/// k-supplier on client homes, reported under the mobility objective. The
/// home radius goes into `search_radius`.
pub fn home_centers(instance: &Instance, params: &SolveParams) -> Result<Solution, SolveError> {
    params.check(instance)?;
    params.uncapacitated_only(Algorithm::HomeCenters)?;
    let mut homes = Vec::with_capacity(instance.num_clients());
    for c in 0..instance.num_clients() {
        match instance.home(c) {
            Some(h) => homes.push(h),
            None => {
                return Err(SolveError::Usage(format!(
                    "homecenters needs a home for every client; {} has none",
                    instance.client_id(c)
                )))
            }
        }
    }
    let si = SupplierInstance::new(&homes, instance.sites(), params.k, instance)?;
    let found = hs_approx(&si)?;
    let mut sol = Solution::nearest(instance, Algorithm::HomeCenters.name(), params.k, params.q, &found.facilities)?;
    sol.search_radius = Some(found.radius);
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::{line, toy};
    use super::*;
    use crate::ksupplier::exact_supplier;
    use crate::model::Client;

    fn abab() -> Instance {
        line(
            &["a", "b"],
            &[0.0, 1.0],
            vec![
                Client::new("p1", None, ["a"]),
                Client::new("p2", None, ["a"]),
                Client::new("p3", None, ["b"]),
            ],
            &["a", "b"],
        )
    }

    #[test]
    fn most_active_ranks_by_visitors() {
        let inst = abab();
        let one = most_active(&inst, &SolveParams::new(1)).unwrap();
        assert_eq!(one.facilities, vec!["a"]);
        let two = most_active(&inst, &SolveParams::new(2)).unwrap();
        assert_eq!(two.facilities, vec!["a", "b"]);
        assert_eq!(most_active(&inst, &SolveParams::new(5)).unwrap().facilities, vec!["a", "b"]);
        assert_eq!(two.radius_km, Some(0.0));
    }

    #[test]
    fn most_active_ties_to_smallest_id() {
        let inst = line(
            &["a", "b"],
            &[0.0, 1.0],
            vec![Client::new("p1", None, ["b"]), Client::new("p2", None, ["a"])],
            &["a", "b"],
        );
        assert_eq!(most_active(&inst, &SolveParams::new(1)).unwrap().facilities, vec!["a"]);
    }

    #[test]
    fn home_centers_toy_line() {
        // Homes at a (0) and d (6); sites a (0) and c (4).
        let inst = line(
            &["a", "b", "c", "d", "ha", "hd"],
            &[0.0, 2.0, 4.0, 6.0, 0.0, 6.0],
            vec![
                Client::new("p1", Some("ha"), ["a", "b"]),
                Client::new("p2", Some("hd"), ["d"]),
            ],
            &["a", "c"],
        );
        let homes = [inst.location_index("ha").unwrap(), inst.location_index("hd").unwrap()];
        let si = SupplierInstance::new(&homes, inst.sites(), 1, &inst).unwrap();
        let opt = exact_supplier(&si).unwrap().radius;
        assert_eq!(opt, 4.0);
        let sol = home_centers(&inst, &SolveParams::new(1)).unwrap();
        let home_radius = sol.search_radius.unwrap();
        assert!(opt <= home_radius && home_radius <= 3.0 * opt);
        assert!(sol.check(&inst).is_ok());
    }

    #[test]
    fn home_centers_coinciding_homes() {
        let inst = line(
            &["a", "ha"],
            &[0.0, 0.0],
            vec![Client::new("p1", Some("ha"), ["a"]), Client::new("p2", Some("ha"), ["a"])],
            &["a"],
        );
        let sol = home_centers(&inst, &SolveParams::new(1)).unwrap();
        assert_eq!(sol.facilities, vec!["a"]);
        assert_eq!(sol.search_radius, Some(0.0));
    }

    #[test]
    fn home_centers_needs_homes() {
        assert!(matches!(home_centers(&toy(), &SolveParams::new(1)), Err(SolveError::Usage(_))));
    }

    #[test]
    fn capacity_rejected() {
        let p = SolveParams::new(1).with_capacity(3);
        assert!(matches!(most_active(&toy(), &p), Err(SolveError::Usage(_))));
    }
}
