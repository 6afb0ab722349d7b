//! Domain types: instances, routes, solutions and Pareto fronts.
//!
//! Node `0` is the depot; customers are `1..=n`. All quantities are
//! non-negative integers so objective values compare exactly.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::set::CustomerSet;

/// Largest customer count an [`Instance`] may carry.
///
/// Route enumeration keeps a table over every customer subset, so this is
/// a memory bound rather than a bitmask-width bound.
pub const MAX_CUSTOMERS: usize = 20;

/// Unvalidated instance data, as read from a document.
///
/// Signed integers so that negative entries surface as validation errors
/// instead of parse failures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub name: String,
    pub n_customers: i64,
    pub capacity: i64,
    pub time_limit: i64,
    pub fleet_size: i64,
    pub unload_time: i64,
    pub demand: Vec<i64>,
    pub service_time: Vec<i64>,
    pub travel_time: Vec<Vec<i64>>,
    pub distance: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("n_customers must be at least 1")]
    NoCustomers,
    #[error("n_customers = {0} exceeds the supported maximum of {MAX_CUSTOMERS}")]
    TooManyCustomers(i64),
    #[error("fleet_size must be at least 1")]
    EmptyFleet,
    #[error("{field}: expected length {expected}, found {found}")]
    Length {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{field}: negative value {value}")]
    Negative { field: &'static str, value: i64 },
    #[error("{matrix} matrix has non-zero diagonal at node {node}")]
    Diagonal { matrix: &'static str, node: usize },
    #[error("distance matrix not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("demand of customer {customer} must be at least 1")]
    ZeroDemand { customer: usize },
    #[error("demand {demand} of customer {customer} exceeds capacity {capacity}")]
    DemandExceedsCapacity {
        customer: usize,
        demand: u64,
        capacity: u64,
    },
    #[error("singleton route infeasible for customer {customer} (duration {duration} > time limit {time_limit})")]
    SingletonInfeasible {
        customer: usize,
        duration: u64,
        time_limit: u64,
    },
}

/// A validated problem instance. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    name: String,
    n: usize,
    capacity: u64,
    time_limit: u64,
    fleet_size: usize,
    unload_time: u64,
    // index 0 is the depot and holds 0
    demand: Vec<u64>,
    service_time: Vec<u64>,
    // row-major (n+1)x(n+1)
    travel_time: Vec<u64>,
    distance: Vec<u64>,
}

fn non_negative(field: &'static str, value: i64) -> Result<u64, ValidationError> {
    u64::try_from(value).map_err(|_| ValidationError::Negative { field, value })
}

fn check_len(field: &'static str, expected: usize, found: usize) -> Result<(), ValidationError> {
    if expected == found {
        Ok(())
    } else {
        Err(ValidationError::Length {
            field,
            expected,
            found,
        })
    }
}

fn flatten_matrix(field: &'static str, rows: &[Vec<i64>], dim: usize) -> Result<Vec<u64>, ValidationError> {
    check_len(field, dim, rows.len())?;
    let mut flat = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        check_len(field, dim, row.len())?;
        for &v in row {
            flat.push(non_negative(field, v)?);
        }
        if flat[i * dim + i] != 0 {
            return Err(ValidationError::Diagonal {
                matrix: field,
                node: i,
            });
        }
    }
    Ok(flat)
}

impl Instance {
    pub fn new(raw: RawInstance) -> Result<Self, ValidationError> {
        if raw.n_customers < 1 {
            return Err(ValidationError::NoCustomers);
        }
        if raw.n_customers > MAX_CUSTOMERS as i64 {
            return Err(ValidationError::TooManyCustomers(raw.n_customers));
        }
        let n = raw.n_customers as usize;
        let capacity = non_negative("capacity", raw.capacity)?;
        let time_limit = non_negative("time_limit", raw.time_limit)?;
        let unload_time = non_negative("unload_time", raw.unload_time)?;
        if raw.fleet_size < 1 {
            return Err(ValidationError::EmptyFleet);
        }
        let fleet_size = raw.fleet_size as usize;

        check_len("demand", n, raw.demand.len())?;
        check_len("service_time", n, raw.service_time.len())?;
        let mut demand = vec![0];
        for &d in &raw.demand {
            demand.push(non_negative("demand", d)?);
        }
        let mut service_time = vec![0];
        for &s in &raw.service_time {
            service_time.push(non_negative("service_time", s)?);
        }

        let dim = n + 1;
        let travel_time = flatten_matrix("travel_time", &raw.travel_time, dim)?;
        let distance = flatten_matrix("distance", &raw.distance, dim)?;
        for i in 0..dim {
            for j in i + 1..dim {
                if distance[i * dim + j] != distance[j * dim + i] {
                    return Err(ValidationError::Asymmetric { i, j });
                }
            }
        }

        for customer in 1..=n {
            if demand[customer] == 0 {
                return Err(ValidationError::ZeroDemand { customer });
            }
            if demand[customer] > capacity {
                return Err(ValidationError::DemandExceedsCapacity {
                    customer,
                    demand: demand[customer],
                    capacity,
                });
            }
            let duration = travel_time[customer]
                + service_time[customer]
                + travel_time[customer * dim]
                + unload_time;
            if duration > time_limit {
                return Err(ValidationError::SingletonInfeasible {
                    customer,
                    duration,
                    time_limit,
                });
            }
        }

        Ok(Instance {
            name: raw.name,
            n,
            capacity,
            time_limit,
            fleet_size,
            unload_time,
            demand,
            service_time,
            travel_time,
            distance,
        })
    }

    /// Inverse of [`Instance::new`].
    pub fn to_raw(&self) -> RawInstance {
        let dim = self.n + 1;
        let rows = |m: &[u64]| -> Vec<Vec<i64>> {
            m.chunks(dim)
                .map(|row| row.iter().map(|&v| v as i64).collect())
                .collect()
        };
        RawInstance {
            name: self.name.clone(),
            n_customers: self.n as i64,
            capacity: self.capacity as i64,
            time_limit: self.time_limit as i64,
            fleet_size: self.fleet_size as i64,
            unload_time: self.unload_time as i64,
            demand: self.demand[1..].iter().map(|&v| v as i64).collect(),
            service_time: self.service_time[1..].iter().map(|&v| v as i64).collect(),
            travel_time: rows(&self.travel_time),
            distance: rows(&self.distance),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_customers(&self) -> usize {
        self.n
    }

    pub fn customers(&self) -> CustomerSet {
        CustomerSet::full(self.n)
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn time_limit(&self) -> u64 {
        self.time_limit
    }

    pub fn fleet_size(&self) -> usize {
        self.fleet_size
    }

    pub fn unload_time(&self) -> u64 {
        self.unload_time
    }

    /// Demand of node `i` (0 for the depot).
    pub fn demand(&self, i: usize) -> u64 {
        self.demand[i]
    }

    /// Service time of node `i` (0 for the depot).
    pub fn service_time(&self, i: usize) -> u64 {
        self.service_time[i]
    }

    pub fn travel_time(&self, i: usize, j: usize) -> u64 {
        self.travel_time[i * (self.n + 1) + j]
    }

    pub fn distance(&self, i: usize, j: usize) -> u64 {
        self.distance[i * (self.n + 1) + j]
    }
}

/// Cumulative state after serving one customer: the constructive witness for
/// the load (`u`) and time (`v`) ordering variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Visit {
    pub customer: usize,
    /// Load on board after collecting at this customer.
    pub load: u64,
    /// Elapsed time when leaving this customer (service included).
    pub time: u64,
}

/// One vehicle tour from the depot through `sequence` and back.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Route {
    pub sequence: Vec<usize>,
    /// Depot-to-depot arc times only.
    pub travel_time: u64,
    /// `travel_time` plus service times plus the unload time.
    pub duration: u64,
    pub load: u64,
    /// Sum of pairwise distances over unordered customer pairs on the route.
    pub compactness: u64,
    pub schedule: Vec<Visit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("node {customer} is not a customer of this instance")]
    InvalidCustomer { customer: usize },
    #[error("customer {customer} covered {count} times")]
    Coverage { customer: usize, count: usize },
}

impl Route {
    /// Computes all route measures for `sequence` without judging
    /// feasibility. Depot ids inside the sequence are accepted and charged
    /// as depot passes; anything above `n` is rejected.
    pub fn measure(instance: &Instance, sequence: Vec<usize>) -> Result<Route, EvalError> {
        if let Some(&customer) = sequence.iter().find(|&&c| c > instance.n_customers()) {
            return Err(EvalError::InvalidCustomer { customer });
        }
        let mut schedule = Vec::with_capacity(sequence.len());
        let mut prev = 0;
        let (mut load, mut time, mut travel) = (0u64, 0u64, 0u64);
        for &c in &sequence {
            let arc = instance.travel_time(prev, c);
            travel += arc;
            load += instance.demand(c);
            time += arc + instance.service_time(c);
            schedule.push(Visit {
                customer: c,
                load,
                time,
            });
            prev = c;
        }
        let back = instance.travel_time(prev, 0);
        travel += back;
        let duration = time + back + instance.unload_time();
        Ok(Route {
            compactness: pair_distance_sum(instance, &sequence),
            sequence,
            travel_time: travel,
            duration,
            load,
            schedule,
        })
    }

    pub fn members(&self) -> CustomerSet {
        self.sequence.iter().copied().filter(|&c| c != 0).collect()
    }
}

fn pair_distance_sum(instance: &Instance, sequence: &[usize]) -> u64 {
    let mut sum = 0;
    for (p, &a) in sequence.iter().enumerate() {
        for &b in &sequence[p + 1..] {
            if a != 0 && b != 0 {
                sum += instance.distance(a, b);
            }
        }
    }
    sum
}

/// A set of routes with its objective vector: `f1` total travel time and
/// `f2` total compactness.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    pub routes: Vec<Route>,
    pub f1: u64,
    pub f2: u64,
}

impl Solution {
    pub fn objectives(&self) -> (u64, u64) {
        (self.f1, self.f2)
    }

    pub fn sequences(&self) -> Vec<Vec<usize>> {
        self.routes.iter().map(|r| r.sequence.clone()).collect()
    }

    /// Deterministic witness order used for every tie-break: route member
    /// sets (routes ordered by their smallest customer) compared as ascending
    /// id lists, then the visiting sequences.
    pub fn cmp_witness(&self, other: &Solution) -> Ordering {
        fn key(s: &Solution) -> Vec<(CustomerSet, &[usize])> {
            let mut routes: Vec<(CustomerSet, &[usize])> = s
                .routes
                .iter()
                .map(|r| (r.members(), r.sequence.as_slice()))
                .collect();
            routes.sort_by_key(|(m, _)| m.lowest());
            routes
        }
        let (a, b) = (key(self), key(other));
        for ((ma, _), (mb, _)) in a.iter().zip(&b) {
            match ma.cmp_as_sorted_list(*mb) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        a.len()
            .cmp(&b.len())
            .then_with(|| a.iter().map(|r| r.1).cmp(b.iter().map(|r| r.1)))
    }
}

/// Builds a [`Solution`] from ordered customer sequences.
///
/// Empty sequences are dropped. Every customer must be covered exactly once;
/// capacity, duration and fleet limits are not judged here.
pub fn evaluate(instance: &Instance, routes: &[Vec<usize>]) -> Result<Solution, EvalError> {
    let n = instance.n_customers();
    let mut counts = vec![0usize; n + 1];
    for &c in routes.iter().flatten() {
        if c == 0 || c > n {
            return Err(EvalError::InvalidCustomer { customer: c });
        }
        counts[c] += 1;
    }
    if let Some((customer, &count)) = counts.iter().enumerate().skip(1).find(|(_, &k)| k != 1) {
        return Err(EvalError::Coverage { customer, count });
    }
    let mut solution = Solution::default();
    for seq in routes.iter().filter(|s| !s.is_empty()) {
        let route = Route::measure(instance, seq.clone())?;
        solution.f1 += route.travel_time;
        solution.f2 += route.compactness;
        solution.routes.push(route);
    }
    Ok(solution)
}

/// One non-dominated objective vector and a solution attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontPoint {
    pub f1: u64,
    pub f2: u64,
    pub witness: Solution,
}

impl FrontPoint {
    pub fn new(witness: Solution) -> Self {
        FrontPoint {
            f1: witness.f1,
            f2: witness.f2,
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("front points {index} and {next} are not strictly ordered (f1 ascending, f2 descending)")]
pub struct FrontOrderError {
    pub index: usize,
    pub next: usize,
}

/// Mutually non-dominated points sorted by `f1` ascending (hence `f2`
/// strictly descending).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParetoFront {
    points: Vec<FrontPoint>,
}

impl ParetoFront {
    pub fn empty() -> Self {
        ParetoFront::default()
    }

    /// Wraps already-ordered points, rejecting any pair that is not strictly
    /// increasing in `f1` and strictly decreasing in `f2`.
    pub fn new(points: Vec<FrontPoint>) -> Result<Self, FrontOrderError> {
        for (index, w) in points.windows(2).enumerate() {
            if !(w[0].f1 < w[1].f1 && w[0].f2 > w[1].f2) {
                return Err(FrontOrderError {
                    index,
                    next: index + 1,
                });
            }
        }
        Ok(ParetoFront { points })
    }

    pub(crate) fn from_sorted(points: Vec<FrontPoint>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].f1 < w[1].f1 && w[0].f2 > w[1].f2));
        ParetoFront { points }
    }

    pub fn points(&self) -> &[FrontPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<FrontPoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> Vec<(u64, u64)> {
        self.points.iter().map(|p| (p.f1, p.f2)).collect()
    }
}
