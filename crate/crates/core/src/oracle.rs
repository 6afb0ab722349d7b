//! Brute-force ground truth.
//!
//! Enumerates every set partition of the customers as a restricted growth
//! string, prices each block by trying every visiting order, and tests
//! capacity and duration directly on the visiting walk. Nothing here goes
//! through the route table or the label-correcting solver.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::model::{evaluate, FrontPoint, Instance, ParetoFront, Solution};
use crate::moo::filter_nondominated;
use crate::solver::{Scalarization, SolveOutcome, SolveStats, SolveStatus, SubproblemSpec};

/// Default customer limit for exhaustive enumeration.
pub const DEFAULT_GUARD: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("oracle refuses {n} customers (guard is {guard})")]
pub struct GuardExceeded {
    pub n: usize,
    pub guard: usize,
}

#[derive(Clone, Debug)]
struct Block {
    feasible: bool,
    travel: u64,
    compactness: u64,
    order: Vec<usize>,
}

/// One feasible partition, blocks ordered by their smallest customer.
#[derive(Clone, Debug)]
struct Partition {
    f1: u64,
    f2: u64,
    /// Ascending member lists.
    members: Vec<Vec<usize>>,
    orders: Vec<Vec<usize>>,
}

impl Partition {
    fn cmp_witness(&self, other: &Partition) -> Ordering {
        self.members
            .cmp(&other.members)
            .then_with(|| self.orders.cmp(&other.orders))
    }

    fn blocks(&self) -> usize {
        self.members.len()
    }
}

/// Every feasible partition of an instance, priced exactly.
pub struct OracleTable<'a> {
    instance: &'a Instance,
    partitions: Vec<Partition>,
    enumerated: u64,
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn price_block(instance: &Instance, members: &[usize]) -> Block {
    let load: u64 = members.iter().map(|&c| instance.demand(c)).sum();
    let mut compactness = 0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            compactness += instance.distance(a, b);
        }
    }
    let mut perm = members.to_vec();
    let mut best_travel = u64::MAX;
    let mut best_order = perm.clone();
    let mut any_in_time = false;
    // ascending lexicographic order: the first strict minimum wins ties
    loop {
        let mut travel = 0;
        let mut clock = 0;
        let mut at = 0;
        for &c in &perm {
            travel += instance.travel_time(at, c);
            clock += instance.travel_time(at, c) + instance.service_time(c);
            at = c;
        }
        travel += instance.travel_time(at, 0);
        clock += instance.travel_time(at, 0) + instance.unload_time();
        any_in_time |= clock <= instance.time_limit();
        if travel < best_travel {
            best_travel = travel;
            best_order.copy_from_slice(&perm);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Block {
        feasible: load <= instance.capacity() && any_in_time,
        travel: best_travel,
        compactness,
        order: best_order,
    }
}

impl<'a> OracleTable<'a> {
    /// Enumerates all partitions. Refuses instances above `guard` customers.
    pub fn build(instance: &'a Instance, guard: usize) -> Result<Self, GuardExceeded> {
        let n = instance.n_customers();
        if n > guard {
            return Err(GuardExceeded { n, guard });
        }
        let mut memo: Vec<Option<Block>> = vec![None; 1 << n];
        let mut partitions = Vec::new();
        let mut enumerated = 0u64;

        // rgs[i] = block of customer i + 1
        let mut rgs = vec![0usize; n];
        let mut stack_max = vec![0usize; n];
        // iterative restricted-growth-string walk in lexicographic order
        loop {
            enumerated += 1;
            let blocks = stack_max[n - 1] + 1;
            let mut masks = vec![0usize; blocks];
            for (i, &b) in rgs.iter().enumerate() {
                masks[b] |= 1 << i;
            }
            let mut part = Partition {
                f1: 0,
                f2: 0,
                members: Vec::with_capacity(blocks),
                orders: Vec::with_capacity(blocks),
            };
            let mut feasible = true;
            for &m in &masks {
                let block = memo[m].get_or_insert_with(|| {
                    let members: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect();
                    price_block(instance, &members)
                });
                if !block.feasible {
                    feasible = false;
                    break;
                }
                part.f1 += block.travel;
                part.f2 += block.compactness;
                let mut sorted = block.order.clone();
                sorted.sort_unstable();
                part.members.push(sorted);
                part.orders.push(block.order.clone());
            }
            if feasible {
                partitions.push(part);
            }

            // advance: rightmost position that can still grow
            let mut i = n - 1;
            loop {
                if i == 0 {
                    return Ok(OracleTable {
                        instance,
                        partitions,
                        enumerated,
                    });
                }
                let prefix_max = stack_max[i - 1];
                if rgs[i] <= prefix_max {
                    rgs[i] += 1;
                    stack_max[i] = prefix_max.max(rgs[i]);
                    for j in i + 1..n {
                        rgs[j] = 0;
                        stack_max[j] = stack_max[i];
                    }
                    break;
                }
                i -= 1;
            }
        }
    }

    /// Number of set partitions visited, feasible or not.
    pub fn partitions_enumerated(&self) -> u64 {
        self.enumerated
    }

    /// Feasible partitions using at most `max_routes` routes.
    pub fn feasible_partitions(&self, max_routes: usize) -> usize {
        self.partitions.iter().filter(|p| p.blocks() <= max_routes).count()
    }

    fn to_solution(&self, p: &Partition) -> Solution {
        evaluate(self.instance, &p.orders).expect("oracle partitions cover every customer once")
    }

    /// The exact Pareto front over partitions within the fleet size.
    pub fn front(&self) -> ParetoFront {
        let cap = self.instance.fleet_size();
        let mut cands: Vec<&Partition> = self.partitions.iter().filter(|p| p.blocks() <= cap).collect();
        cands.sort_by(|a, b| (a.f1, a.f2).cmp(&(b.f1, b.f2)).then_with(|| a.cmp_witness(b)));
        let mut points = Vec::new();
        let mut best_f2 = u64::MAX;
        for p in cands {
            if p.f2 < best_f2 {
                best_f2 = p.f2;
                points.push(FrontPoint::new(self.to_solution(p)));
            }
        }
        let front = filter_nondominated(points.clone());
        debug_assert_eq!(front.len(), points.len());
        front
    }

    /// Exhaustive optimum of one scalarized subproblem, with the same
    /// tie-breaking as the solver: objective, `f1`, `f2`, route count, then
    /// the witness.
    pub fn scalarized(&self, spec: &SubproblemSpec) -> SolveOutcome {
        let eps = match spec.mode {
            Scalarization::Epsilon { epsilon } => epsilon,
            Scalarization::Weighted(_) => u64::MAX,
        };
        let score = |p: &Partition| -> u128 {
            match spec.mode {
                Scalarization::Weighted(w) => {
                    let (w1, w2, r1, r2) = w.parts();
                    w1 as u128 * p.f1 as u128 * r2 as u128 + w2 as u128 * p.f2 as u128 * r1 as u128
                }
                Scalarization::Epsilon { .. } => 0,
            }
        };
        let best = self
            .partitions
            .iter()
            .filter(|p| p.f2 <= eps && p.blocks() <= spec.fleet_cap)
            .min_by(|a, b| {
                (score(a), a.f1, a.f2, a.blocks())
                    .cmp(&(score(b), b.f1, b.f2, b.blocks()))
                    .then_with(|| a.cmp_witness(b))
            });
        SolveOutcome {
            status: if best.is_some() {
                SolveStatus::Optimal
            } else {
                SolveStatus::Infeasible
            },
            solution: best.map(|p| self.to_solution(p)),
            stats: SolveStats {
                labels_explored: self.enumerated,
                ..SolveStats::default()
            },
        }
    }
}

/// Exact Pareto front by exhaustive enumeration.
pub fn oracle_front(instance: &Instance, guard: usize) -> Result<ParetoFront, GuardExceeded> {
    Ok(OracleTable::build(instance, guard)?.front())
}

/// Exact optimum of one scalarized subproblem by exhaustive enumeration.
pub fn oracle_scalarized(
    instance: &Instance,
    spec: &SubproblemSpec,
    guard: usize,
) -> Result<SolveOutcome, GuardExceeded> {
    Ok(OracleTable::build(instance, guard)?.scalarized(spec))
}
