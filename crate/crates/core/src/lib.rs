//! Exact bi-objective vehicle routing with a route-compactness objective.
//!
//! Two objectives are minimized over partitions of the customers into
//! capacity- and duration-feasible routes:
//!
//! * `f1`: total travel time over all arcs;
//! * `f2`: compactness, the sum of distances between every pair of customers
//!   that share a route.
//!
//! [`routes`] enumerates every feasible customer subset with its Held-Karp
//! tour, [`solver`] solves scalarized subproblems exactly over that route
//! set, and [`moo`] sweeps them into a Pareto front. [`oracle`] recomputes
//! the same answers by brute force for verification.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod model;
pub mod moo;
pub mod oracle;
pub mod routes;
pub mod set;
pub mod solver;

pub use model::{evaluate, EvalError, FrontPoint, Instance, ParetoFront, RawInstance, Route, Solution, ValidationError};
pub use moo::{epsilon_sweep, filter_nondominated, payoff_table, weighted_sum_sweep, EpsilonGrid, PayoffTable, SweepReport};
pub use routes::{enumerate_feasible_routes, held_karp, FeasibleRoute, Tour};
pub use set::CustomerSet;
pub use solver::{check_solution, solve, solve_with, SolveOutcome, SolveStatus, SubproblemSpec, Weights};
