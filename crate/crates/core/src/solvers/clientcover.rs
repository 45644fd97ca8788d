use std::collections::BTreeMap;

use crate::covering::{
    build_cover, exact_cover_within, greedy, harmonic, CoverError, CoverResult, Demand, SiteCopies,
};
use crate::model::{Instance, Solution};
use crate::search::{smallest_feasible, PairDistances};

use super::{Algorithm, CoverSolver, SolveError, SolveParams};

/// Every site-to-visited-location distance, plus 0.
pub fn candidate_radii(instance: &Instance) -> PairDistances<'_, Instance> {
    PairDistances {
        rows: instance.sites(),
        cols: instance.visited_locations(),
        metric: instance,
        extra: vec![0.0],
    }
}

/// Outcome of the radius search, with enough detail to audit it.
#[derive(Debug, Clone)]
pub struct CoverSearch {
    pub solution: Solution,
    pub demand: Demand,
    /// Smallest candidate radius that admitted a small enough cover.
    pub radius: Option<f64>,
    /// Next smaller candidate; probed, and no small enough cover was found.
    pub below: Option<f64>,
    /// Allowed budget factor: 1 for exact covers.
    pub alpha: f64,
    /// Largest number of facilities a probe could accept.
    pub limit: usize,
    pub cover: Option<CoverResult>,
    /// The exact search ran out of nodes and was redone greedily.
    pub fell_back: bool,
    pub probes: usize,
}

fn greedy_alpha(demand: &Demand, n: usize) -> f64 {
    match demand {
        Demand::Full => harmonic(n),
        Demand::Partial { target } => harmonic(*target),
        Demand::Capacitated { .. } => (n as f64).ln() + 1.0,
        Demand::Grouped(gc) => harmonic(gc.total_requirement()),
    }
}

/// Binary search over the candidate radii for the smallest one whose
/// covering instance has a cover within the allowed budget.
pub fn clientcover_search(instance: &Instance, params: &SolveParams) -> Result<CoverSearch, SolveError> {
    let demand = params.demand(instance)?;
    let multi_copy = matches!(demand, Demand::Capacitated { copies: SiteCopies::Multiple, .. });
    let exact = params.cover_solver == CoverSolver::Exact && !multi_copy;
    if exact {
        match search(instance, params, &demand, true) {
            Err(SolveError::Cover(CoverError::BudgetExhausted(_))) => {}
            other => return other,
        }
    }
    let mut out = search(instance, params, &demand, false)?;
    out.fell_back = params.cover_solver == CoverSolver::Exact;
    Ok(out)
}

fn search(instance: &Instance, params: &SolveParams, demand: &Demand, exact: bool) -> Result<CoverSearch, SolveError> {
    let n = instance.num_clients();
    let alpha = if exact { 1.0 } else { greedy_alpha(demand, n) };
    let limit = ((alpha * params.k as f64).floor() as usize).max(params.k);
    let cands = candidate_radii(instance);
    let found = smallest_feasible(&cands, |r| -> Result<Option<CoverResult>, CoverError> {
        let ci = build_cover(instance, r);
        let g = greedy(&ci, demand, Some(limit))?;
        if g.feasible || !exact {
            return Ok(g.feasible.then_some(g));
        }
        exact_cover_within(&ci, demand, params.node_budget, limit)
    })?;

    let name = Algorithm::ClientCover.name();
    let Some(found) = found else {
        let mut solution = Solution::infeasible(name, params.k, params.q);
        solution.alpha = Some(alpha);
        return Ok(CoverSearch {
            solution,
            demand: demand.clone(),
            radius: None,
            below: None,
            alpha,
            limit,
            cover: None,
            fell_back: false,
            probes: 0,
        });
    };

    let cover = found.witness;
    let ci_labels = |s: usize| instance.sites()[s];
    let facilities: Vec<usize> = cover.chosen_sorted().into_iter().map(ci_labels).collect();
    let mut solution = match demand {
        Demand::Capacitated { capacity, copies, .. } => {
            let assignment: Vec<Option<usize>> = cover
                .assignment
                .as_ref()
                .expect("capacitated covers carry an assignment")
                .iter()
                .map(|a| a.map(ci_labels))
                .collect();
            let counts: Option<BTreeMap<usize, usize>> = (*copies == SiteCopies::Multiple)
                .then(|| cover.copies().into_iter().map(|(s, c)| (ci_labels(s), c)).collect());
            Solution::with_assignment(
                instance,
                name,
                params.k,
                params.q,
                &facilities,
                &assignment,
                *capacity,
                counts.as_ref(),
            )?
        }
        Demand::Grouped(_) => Solution::with_covered(instance, name, params.k, params.q, &facilities, &cover.covered)?,
        _ => Solution::nearest(instance, name, params.k, params.q, &facilities)?,
    };
    solution.search_radius = Some(found.radius);
    solution.alpha = Some(alpha);
    Ok(CoverSearch {
        solution,
        demand: demand.clone(),
        radius: Some(found.radius),
        below: found.below,
        alpha,
        limit,
        cover: Some(cover),
        fell_back: false,
        probes: found.probes,
    })
}

pub fn clientcover_solve(instance: &Instance, params: &SolveParams) -> Result<Solution, SolveError> {
    Ok(clientcover_search(instance, params)?.solution)
}
