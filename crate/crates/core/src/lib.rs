//! Facility placement for mobile clients.
//!
//! Each client is described by the set of locations they visit. A client is
//! served when any of those locations lies near an opened facility, and the
//! goal is to open at most `k` facilities minimizing the largest such
//! distance. The crate provides the k-supplier and set-cover machinery, the
//! four placement algorithms (`fpt`, `clientcover`, `mostactive`,
//! `homecenters`), the experiment harness and CSV/JSON I/O.

pub mod covering;
pub mod experiments;
pub mod io;
pub mod ksupplier;
pub mod model;
pub mod search;
pub mod solvers;

pub use model::{Distance, Instance, InstanceData, Solution};
