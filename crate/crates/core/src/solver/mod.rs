//! Exact scalarized solver over the set-partitioning structure.
//!
//! A label-correcting dynamic program runs over the bitmask of served
//! customers. From each state it appends a feasible route containing the
//! lowest unserved customer, so every partition is generated exactly once,
//! with its routes ordered by their smallest customer. Each state keeps the
//! Pareto-minimal `(routes_used, f1, f2)` labels; equal labels collapse to
//! the one whose route list is lexicographically smallest.

pub mod check;

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::model::{evaluate, Instance, Solution};
use crate::routes::FeasibleRoute;
use crate::set::CustomerSet;

pub use check::{check_solution, ConstraintFamily, Verdict, Violation};

/// Normalized weights `w1 = w1_num / (w1_num + w2_num)`, `w2` likewise,
/// applied as `w1 * f1 / r1 + w2 * f2 / r2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weights {
    w1_num: u64,
    w2_num: u64,
    r1: u64,
    r2: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("weights must not both be zero")]
    ZeroWeights,
    #[error("normalization range r{index} must be at least 1")]
    ZeroRange { index: u8 },
    #[error("fleet cap must be at least 1")]
    ZeroFleetCap,
}

impl Weights {
    pub fn new(w1_num: u64, w2_num: u64, r1: u64, r2: u64) -> Result<Self, SpecError> {
        if w1_num == 0 && w2_num == 0 {
            return Err(SpecError::ZeroWeights);
        }
        if r1 == 0 {
            return Err(SpecError::ZeroRange { index: 1 });
        }
        if r2 == 0 {
            return Err(SpecError::ZeroRange { index: 2 });
        }
        Ok(Weights {
            w1_num,
            w2_num,
            r1,
            r2,
        })
    }

    /// `w1 = 1`, ranges 1.
    pub fn f1_only() -> Self {
        Weights {
            w1_num: 1,
            w2_num: 0,
            r1: 1,
            r2: 1,
        }
    }

    /// `w2 = 1`, ranges 1.
    pub fn f2_only() -> Self {
        Weights {
            w1_num: 0,
            w2_num: 1,
            r1: 1,
            r2: 1,
        }
    }

    /// `(w1_num, w2_num, r1, r2)`.
    pub fn parts(&self) -> (u64, u64, u64, u64) {
        (self.w1_num, self.w2_num, self.r1, self.r2)
    }

    /// The weighted objective scaled by `(w1_num + w2_num) * r1 * r2`, which
    /// preserves its order and keeps it integral.
    pub fn scaled_score(&self, f1: u64, f2: u64) -> u128 {
        self.w1_num as u128 * f1 as u128 * self.r2 as u128
            + self.w2_num as u128 * f2 as u128 * self.r1 as u128
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scalarization {
    /// Minimize the normalized weighted sum; ties go to smaller `f1`, then
    /// smaller `f2`.
    Weighted(Weights),
    /// Minimize `f1` then `f2` subject to `f2 <= epsilon`. This is the
    /// augmented epsilon-constraint objective `f1 - delta * slack / r2` in the
    /// limit of small `delta`, which with integer objectives is attained by
    /// every `delta < 1 / (r2 + 1)`.
    Epsilon { epsilon: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubproblemSpec {
    pub mode: Scalarization,
    /// Maximum number of non-empty routes.
    pub fleet_cap: usize,
}

impl SubproblemSpec {
    pub fn weighted(weights: Weights, fleet_cap: usize) -> Self {
        SubproblemSpec {
            mode: Scalarization::Weighted(weights),
            fleet_cap,
        }
    }

    pub fn epsilon(epsilon: u64, fleet_cap: usize) -> Self {
        SubproblemSpec {
            mode: Scalarization::Epsilon { epsilon },
            fleet_cap,
        }
    }

    /// Deterministic total order of candidate outcomes under this spec,
    /// ignoring the witness: the scalarized objective, then `f1`, `f2` and
    /// the number of routes.
    pub fn cmp_outcomes(&self, a: (u64, u64, usize), b: (u64, u64, usize)) -> Ordering {
        let primary = match self.mode {
            Scalarization::Weighted(w) => w.scaled_score(a.0, a.1).cmp(&w.scaled_score(b.0, b.1)),
            Scalarization::Epsilon { .. } => Ordering::Equal,
        };
        primary.then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    }

    /// Whether a solution with these values is admissible under the spec.
    pub fn admits(&self, f2: u64, routes_used: usize) -> bool {
        let within_eps = match self.mode {
            Scalarization::Epsilon { epsilon } => f2 <= epsilon,
            Scalarization::Weighted(_) => true,
        };
        within_eps && routes_used <= self.fleet_cap
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Labels created by route-append transitions, kept or not.
    pub labels_explored: u64,
    pub states_expanded: u64,
    pub elapsed_micros: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Present iff `status` is `Optimal`.
    pub solution: Option<Solution>,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn objectives(&self) -> Option<(u64, u64)> {
        self.solution.as_ref().map(Solution::objectives)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid subproblem: {0}")]
    Spec(#[from] SpecError),
    #[error("time budget of {budget_micros} us exhausted after {elapsed_micros} us")]
    BudgetExceeded { budget_micros: u64, elapsed_micros: u64 },
}

/// Monotonic time source. The core has no clock of its own.
pub trait Clock {
    fn now_micros(&self) -> u64;
}

/// A clock that never advances.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_micros(&self) -> u64 {
        0
    }
}

/// Per-solve wall-clock budget.
#[derive(Clone, Copy)]
pub struct Limits<'a> {
    pub clock: &'a dyn Clock,
    pub budget_micros: Option<u64>,
}

impl Default for Limits<'_> {
    fn default() -> Self {
        Limits {
            clock: &NoClock,
            budget_micros: None,
        }
    }
}

impl<'a> Limits<'a> {
    pub fn new(clock: &'a dyn Clock, budget_micros: Option<u64>) -> Self {
        Limits {
            clock,
            budget_micros,
        }
    }
}

const NO_PRED: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Label {
    routes_used: u32,
    f1: u64,
    f2: u64,
    pred_mask: u32,
    pred_label: u32,
    route: u32,
}

impl Label {
    fn key(&self) -> (u32, u64, u64) {
        (self.routes_used, self.f1, self.f2)
    }

    fn weakly_dominates(&self, other: &Label) -> bool {
        self.routes_used <= other.routes_used && self.f1 <= other.f1 && self.f2 <= other.f2
    }
}

struct LabelStore<'r> {
    labels: Vec<Vec<Label>>,
    routes: &'r [FeasibleRoute],
}

impl LabelStore<'_> {
    /// Route member sets along the path ending at `(mask, idx)`, in append order.
    fn path(&self, mut mask: u32, mut idx: u32) -> Vec<CustomerSet> {
        let mut out = Vec::new();
        while mask != 0 {
            let l = self.labels[mask as usize][idx as usize];
            out.push(self.routes[l.route as usize].members);
            mask = l.pred_mask;
            idx = l.pred_label;
        }
        out.reverse();
        out
    }

    fn candidate_path(&self, cand: &Label) -> Vec<CustomerSet> {
        let mut p = self.path(cand.pred_mask, cand.pred_label);
        p.push(self.routes[cand.route as usize].members);
        p
    }

    fn cmp_paths(a: &[CustomerSet], b: &[CustomerSet]) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            match x.cmp_as_sorted_list(*y) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        a.len().cmp(&b.len())
    }

    /// Inserts `cand` at state `mask`, keeping the label set Pareto-minimal.
    /// Returns whether the label was kept.
    fn insert(&mut self, mask: u32, cand: Label) -> bool {
        let slot = mask as usize;
        if let Some(i) = self.labels[slot].iter().position(|e| e.weakly_dominates(&cand)) {
            if self.labels[slot][i].key() != cand.key() {
                return false;
            }
            let ord = Self::cmp_paths(&self.candidate_path(&cand), &self.path(mask, i as u32));
            if ord == Ordering::Less {
                self.labels[slot][i] = cand;
                return true;
            }
            return false;
        }
        self.labels[slot].retain(|e| !cand.weakly_dominates(e));
        self.labels[slot].push(cand);
        true
    }
}

/// Feasible routes grouped by their smallest customer.
fn routes_by_lowest(n: usize, routes: &[FeasibleRoute]) -> Vec<Vec<u32>> {
    let mut by_low = vec![Vec::new(); n + 1];
    for (i, r) in routes.iter().enumerate() {
        if let Some(low) = r.members.lowest() {
            by_low[low].push(i as u32);
        }
    }
    by_low
}

/// Solves one scalarized subproblem without a time budget.
pub fn solve(
    instance: &Instance,
    routes: &[FeasibleRoute],
    spec: &SubproblemSpec,
) -> Result<SolveOutcome, SolveError> {
    solve_with(instance, routes, spec, &Limits::default())
}

/// Solves one scalarized subproblem exactly.
///
/// `routes` must be the output of
/// [`enumerate_feasible_routes`](crate::routes::enumerate_feasible_routes)
/// for `instance`.
pub fn solve_with(
    instance: &Instance,
    routes: &[FeasibleRoute],
    spec: &SubproblemSpec,
    limits: &Limits<'_>,
) -> Result<SolveOutcome, SolveError> {
    if spec.fleet_cap == 0 {
        return Err(SpecError::ZeroFleetCap.into());
    }
    let start = limits.clock.now_micros();
    let n = instance.n_customers();
    let full = instance.customers().bits();
    let by_low = routes_by_lowest(n, routes);
    let epsilon = match spec.mode {
        Scalarization::Epsilon { epsilon } => epsilon,
        Scalarization::Weighted(_) => u64::MAX,
    };
    let cap = spec.fleet_cap.min(n) as u32;

    let mut store = LabelStore {
        labels: vec![Vec::new(); 1usize << n],
        routes,
    };
    store.labels[0].push(Label {
        routes_used: 0,
        f1: 0,
        f2: 0,
        pred_mask: NO_PRED,
        pred_label: NO_PRED,
        route: NO_PRED,
    });
    let mut stats = SolveStats::default();

    for mask in 0..full {
        if store.labels[mask as usize].is_empty() {
            continue;
        }
        stats.states_expanded += 1;
        if stats.states_expanded % 256 == 0 {
            if let Some(budget) = limits.budget_micros {
                let elapsed = limits.clock.now_micros().saturating_sub(start);
                if elapsed > budget {
                    return Err(SolveError::BudgetExceeded {
                        budget_micros: budget,
                        elapsed_micros: elapsed,
                    });
                }
            }
        }
        let served = CustomerSet::from_bits(mask);
        let low = CustomerSet::from_bits(full)
            .difference(served)
            .lowest()
            .expect("state below full mask has an unserved customer");
        for li in 0..store.labels[mask as usize].len() {
            let lab = store.labels[mask as usize][li];
            if lab.routes_used >= cap {
                continue;
            }
            for &ri in &by_low[low] {
                let route = &routes[ri as usize];
                if !route.members.is_disjoint(served) {
                    continue;
                }
                let f2 = lab.f2 + route.compactness;
                if f2 > epsilon {
                    continue;
                }
                stats.labels_explored += 1;
                store.insert(
                    mask | route.members.bits(),
                    Label {
                        routes_used: lab.routes_used + 1,
                        f1: lab.f1 + route.best_travel_time,
                        f2,
                        pred_mask: mask,
                        pred_label: li as u32,
                        route: ri,
                    },
                );
            }
        }
    }

    let finals = &store.labels[full as usize];
    let mut best: Option<(usize, Vec<CustomerSet>)> = None;
    for (i, l) in finals.iter().enumerate() {
        let path = store.path(full, i as u32);
        let better = match &best {
            None => true,
            Some((b, bpath)) => {
                let bl = &finals[*b];
                let ord = spec.cmp_outcomes(
                    (l.f1, l.f2, l.routes_used as usize),
                    (bl.f1, bl.f2, bl.routes_used as usize),
                );
                ord == Ordering::Less
                    || (ord == Ordering::Equal && LabelStore::cmp_paths(&path, bpath) == Ordering::Less)
            }
        };
        if better {
            best = Some((i, path));
        }
    }
    stats.elapsed_micros = limits.clock.now_micros().saturating_sub(start);

    let Some((_, path)) = best else {
        return Ok(SolveOutcome {
            status: SolveStatus::Infeasible,
            solution: None,
            stats,
        });
    };
    let order_of = |members: CustomerSet| {
        let i = routes
            .binary_search_by(|r| r.members.cmp(&members))
            .expect("path routes come from the route list");
        routes[i].best_order.clone()
    };
    let sequences: Vec<Vec<usize>> = path.into_iter().map(order_of).collect();
    let solution = evaluate(instance, &sequences).expect("DP paths partition the customers");
    Ok(SolveOutcome {
        status: SolveStatus::Optimal,
        solution: Some(solution),
        stats,
    })
}

/// Number of partitions of all customers into at most `fleet_cap` feasible
/// routes, counted along the same canonical expansion [`solve`] uses.
pub fn count_partitions(instance: &Instance, routes: &[FeasibleRoute], fleet_cap: usize) -> u64 {
    let n = instance.n_customers();
    let full = instance.customers().bits();
    let by_low = routes_by_lowest(n, routes);
    let cap = fleet_cap.min(n);
    // counts[mask][k]: paths reaching `mask` with k routes
    let mut counts = vec![vec![0u64; cap + 1]; 1usize << n];
    counts[0][0] = 1;
    for mask in 0..full {
        if counts[mask as usize].iter().all(|&c| c == 0) {
            continue;
        }
        let served = CustomerSet::from_bits(mask);
        let low = CustomerSet::from_bits(full).difference(served).lowest().unwrap();
        for &ri in &by_low[low] {
            let members = routes[ri as usize].members;
            if !members.is_disjoint(served) {
                continue;
            }
            let target = (mask | members.bits()) as usize;
            for k in 0..cap {
                let c = counts[mask as usize][k];
                counts[target][k + 1] += c;
            }
        }
    }
    counts[full as usize].iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::{tiny_raw, uniform_raw};
    use crate::model::RawInstance;
    use crate::routes::enumerate_feasible_routes;
    use alloc::vec;

    /// Two customers with d12 = 9, where serving both on one route saves
    /// travel: split f1 = 20, merged f1 = 15.
    pub(crate) fn threshold_raw() -> RawInstance {
        RawInstance {
            name: "threshold2".into(),
            n_customers: 2,
            capacity: 10,
            time_limit: 100,
            fleet_size: 2,
            unload_time: 0,
            demand: vec![1, 1],
            service_time: vec![0, 0],
            travel_time: vec![vec![0, 5, 5], vec![5, 0, 5], vec![5, 5, 0]],
            distance: vec![vec![0, 3, 3], vec![3, 0, 9], vec![3, 9, 0]],
        }
    }

    fn setup(raw: RawInstance) -> (Instance, Vec<FeasibleRoute>) {
        let inst = Instance::new(raw).unwrap();
        let routes = enumerate_feasible_routes(&inst);
        (inst, routes)
    }

    #[test]
    fn tiny_epsilon_zero() {
        let (inst, routes) = setup(tiny_raw());
        let out = solve(&inst, &routes, &SubproblemSpec::epsilon(0, 1)).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_eq!(out.objectives(), Some((10, 0)));
    }

    #[test]
    fn epsilon_threshold_at_pair_distance() {
        let (inst, routes) = setup(threshold_raw());
        let split = solve(&inst, &routes, &SubproblemSpec::epsilon(8, 2)).unwrap();
        assert_eq!(split.objectives(), Some((20, 0)));
        assert_eq!(split.solution.unwrap().routes.len(), 2);
        let merged = solve(&inst, &routes, &SubproblemSpec::epsilon(9, 2)).unwrap();
        assert_eq!(merged.objectives(), Some((15, 9)));
    }

    #[test]
    fn fleet_cap_binds() {
        let (inst, routes) = setup(threshold_raw());
        let out = solve(&inst, &routes, &SubproblemSpec::epsilon(8, 1)).unwrap();
        assert_eq!(out.status, SolveStatus::Infeasible);
        assert!(out.solution.is_none());
        let out = solve(&inst, &routes, &SubproblemSpec::weighted(Weights::f2_only(), 1)).unwrap();
        assert_eq!(out.objectives(), Some((15, 9)));
    }

    #[test]
    fn weighted_extremes_are_lexicographic() {
        let (inst, routes) = setup(threshold_raw());
        let f1 = solve(&inst, &routes, &SubproblemSpec::weighted(Weights::f1_only(), 2)).unwrap();
        assert_eq!(f1.objectives(), Some((15, 9)));
        let f2 = solve(&inst, &routes, &SubproblemSpec::weighted(Weights::f2_only(), 2)).unwrap();
        assert_eq!(f2.objectives(), Some((20, 0)));
    }

    #[test]
    fn ties_prefer_fewer_routes_then_smaller_witness() {
        // depot arcs 1, customer arcs 2, zero distances: every grouping
        // has (f1, f2) = (6, 0)
        let mut raw = uniform_raw(3, 2);
        for i in 0..=3 {
            for j in 0..=3 {
                raw.distance[i][j] = 0;
            }
            if i > 0 {
                raw.travel_time[0][i] = 1;
                raw.travel_time[i][0] = 1;
            }
        }
        let (inst, routes) = setup(raw);
        let out = solve(&inst, &routes, &SubproblemSpec::epsilon(u64::MAX, 3)).unwrap();
        let sol = out.solution.unwrap();
        assert_eq!(sol.objectives(), (6, 0));
        assert_eq!(sol.sequences(), vec![vec![1, 2, 3]]);
        let out = solve(&inst, &routes, &SubproblemSpec::epsilon(u64::MAX, 3)).unwrap();
        assert_eq!(out.objectives(), Some((6, 0)));
    }

    #[test]
    fn spec_validation() {
        assert_eq!(Weights::new(0, 0, 1, 1), Err(SpecError::ZeroWeights));
        assert_eq!(Weights::new(1, 0, 0, 1), Err(SpecError::ZeroRange { index: 1 }));
        let (inst, routes) = setup(tiny_raw());
        assert!(matches!(
            solve(&inst, &routes, &SubproblemSpec::epsilon(0, 0)),
            Err(SolveError::Spec(SpecError::ZeroFleetCap))
        ));
    }

    #[test]
    fn partition_count_unconstrained_is_bell() {
        for (n, bell) in [(1, 1), (2, 2), (3, 5), (4, 15), (5, 52), (6, 203)] {
            let (inst, routes) = setup(uniform_raw(n, 1));
            assert_eq!(count_partitions(&inst, &routes, n), bell, "n = {n}");
        }
        // at most 2 blocks of 4 elements: S(4,1) + S(4,2) = 1 + 7
        let (inst, routes) = setup(uniform_raw(4, 1));
        assert_eq!(count_partitions(&inst, &routes, 2), 8);
    }

    struct StepClock(core::cell::Cell<u64>);

    impl Clock for StepClock {
        fn now_micros(&self) -> u64 {
            let t = self.0.get();
            self.0.set(t + 1000);
            t
        }
    }

    #[test]
    fn budget_aborts() {
        let (inst, routes) = setup(uniform_raw(10, 1));
        let clock = StepClock(core::cell::Cell::new(0));
        let limits = Limits::new(&clock, Some(1));
        let err = solve_with(&inst, &routes, &SubproblemSpec::epsilon(u64::MAX, 10), &limits);
        assert!(matches!(err, Err(SolveError::BudgetExceeded { .. })));
    }
}
