//! Top-level placement algorithms.

mod baselines;
mod clientcover;
mod fpt;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::covering::{CoverError, Demand, Group, GroupConstraints, SiteCopies, DEFAULT_NODE_BUDGET};
use crate::ksupplier::SupplierError;
use crate::model::{coverage_target, Instance, ModelError, Solution};

pub use baselines::{home_centers, most_active};
pub use clientcover::{candidate_radii, clientcover_search, clientcover_solve, CoverSearch};
pub use fpt::{fpt_solve, select_public_locations};

pub const DEFAULT_U: usize = 15;
pub const DEFAULT_MAX_FPT_U: usize = 25;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Supplier(#[from] SupplierError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoverSolver {
    /// Branch and bound, rerunning the search greedily if a probe runs out
    /// of nodes.
    #[default]
    Exact,
    Greedy,
}

impl FromStr for CoverSolver {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(CoverSolver::Exact),
            "greedy" => Ok(CoverSolver::Greedy),
            _ => Err(format!("unknown cover solver {s:?} (expected exact or greedy)")),
        }
    }
}

/// k-supplier routine used inside FPT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SupplierMode {
    #[default]
    Approx,
    Exact,
}

/// A fairness group given by client ids.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub label: String,
    pub requirement: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SolveParams {
    pub k: usize,
    pub q: f64,
    pub capacity: Option<usize>,
    pub copies: SiteCopies,
    pub groups: Option<Vec<GroupSpec>>,
    pub u: usize,
    pub max_fpt_u: usize,
    pub cover_solver: CoverSolver,
    pub node_budget: u64,
    pub supplier: SupplierMode,
}

impl SolveParams {
    pub fn new(k: usize) -> Self {
        SolveParams {
            k,
            q: 1.0,
            capacity: None,
            copies: SiteCopies::Single,
            groups: None,
            u: DEFAULT_U,
            max_fpt_u: DEFAULT_MAX_FPT_U,
            cover_solver: CoverSolver::Exact,
            node_budget: DEFAULT_NODE_BUDGET,
            supplier: SupplierMode::Approx,
        }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }

    pub fn with_capacity(mut self, capacity: usize) -> Self {
        self.capacity = Some(capacity);
        self
    }

    pub fn with_groups(mut self, groups: Vec<GroupSpec>) -> Self {
        self.groups = Some(groups);
        self
    }

    pub fn with_u(mut self, u: usize) -> Self {
        self.u = u;
        self
    }

    pub fn with_cover_solver(mut self, solver: CoverSolver) -> Self {
        self.cover_solver = solver;
        self
    }

    /// Checks shared by every algorithm; returns `floor(q n)`.
    pub(crate) fn check(&self, instance: &Instance) -> Result<usize, SolveError> {
        if self.k == 0 {
            return Err(SolveError::Usage("k must be at least 1".into()));
        }
        if self.capacity == Some(0) {
            return Err(SolveError::Usage("capacity must be at least 1".into()));
        }
        if self.groups.is_some() && (self.capacity.is_some() || self.q < 1.0) {
            return Err(SolveError::Usage(
                "groups cannot be combined with a capacity or q < 1".into(),
            ));
        }
        Ok(coverage_target(self.q, instance.num_clients())?)
    }

    /// Rejects capacity and groups for algorithms that ignore them.
    pub(crate) fn uncapacitated_only(&self, algorithm: Algorithm) -> Result<(), SolveError> {
        if self.capacity.is_some() || self.groups.is_some() {
            return Err(SolveError::Usage(format!(
                "{algorithm} supports neither capacities nor groups; use clientcover"
            )));
        }
        Ok(())
    }

    /// The cover demand these parameters ask for.
    pub(crate) fn demand(&self, instance: &Instance) -> Result<Demand, SolveError> {
        let target = self.check(instance)?;
        let n = instance.num_clients();
        if let Some(specs) = &self.groups {
            let mut groups = Vec::with_capacity(specs.len());
            for g in specs {
                let mut members = Vec::with_capacity(g.members.len());
                for id in &g.members {
                    members.push(
                        instance
                            .client_index(id)
                            .ok_or_else(|| ModelError::UnknownClient(id.clone()))?,
                    );
                }
                groups.push(Group {
                    label: g.label.clone(),
                    members,
                    requirement: g.requirement,
                });
            }
            return Ok(Demand::Grouped(GroupConstraints::new(groups, n)?));
        }
        Ok(match self.capacity {
            Some(capacity) => Demand::Capacitated {
                capacity,
                target,
                copies: self.copies,
            },
            None if target < n => Demand::Partial { target },
            None => Demand::Full,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Fpt,
    ClientCover,
    MostActive,
    HomeCenters,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Fpt,
        Algorithm::ClientCover,
        Algorithm::MostActive,
        Algorithm::HomeCenters,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fpt => "fpt",
            Algorithm::ClientCover => "clientcover",
            Algorithm::MostActive => "mostactive",
            Algorithm::HomeCenters => "homecenters",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected fpt, clientcover, mostactive or homecenters)"))
    }
}

pub fn solve(instance: &Instance, algorithm: Algorithm, params: &SolveParams) -> Result<Solution, SolveError> {
    match algorithm {
        Algorithm::Fpt => fpt_solve(instance, params),
        Algorithm::ClientCover => clientcover_solve(instance, params),
        Algorithm::MostActive => most_active(instance, params),
        Algorithm::HomeCenters => home_centers(instance, params),
    }
}
