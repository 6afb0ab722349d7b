//! Feasible route enumeration backed by Held-Karp dynamic programming.
//!
//! The table is built backwards: `cost[S][f]` is the cheapest path that
//! starts at customer `f`, visits every customer of `S` and ends at the
//! depot. Scanning successors in ascending id order and replacing only on a
//! strict improvement yields the lexicographically smallest optimal order.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::Instance;
use crate::set::CustomerSet;

/// Cheapest depot-to-depot order over a customer subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    pub travel_time: u64,
    pub order: Vec<usize>,
}

/// A customer subset that one vehicle can serve within capacity and time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibleRoute {
    pub members: CustomerSet,
    pub best_travel_time: u64,
    pub best_order: Vec<usize>,
    pub load: u64,
    pub compactness: u64,
    /// `best_travel_time` plus service times plus the unload time.
    pub min_duration: u64,
}

const NONE: u8 = u8::MAX;

struct TourTable {
    ids: Vec<usize>,
    k: usize,
    cost: Vec<u64>,
    next: Vec<u8>,
    admitted: Vec<bool>,
}

impl TourTable {
    /// Fills the table for every local subset accepted by `admit`, which
    /// must be closed under taking subsets.
    fn build(instance: &Instance, ids: Vec<usize>, mut admit: impl FnMut(u32) -> bool) -> Self {
        let k = ids.len();
        let size = 1usize << k;
        let mut cost = vec![u64::MAX; size * k];
        let mut next = vec![NONE; size * k];
        let mut admitted = vec![false; size];
        admitted[0] = true;
        for mask in 1..size as u32 {
            if !admit(mask) {
                continue;
            }
            admitted[mask as usize] = true;
            let base = mask as usize * k;
            if mask.count_ones() == 1 {
                let f = mask.trailing_zeros() as usize;
                cost[base + f] = instance.travel_time(ids[f], 0);
                continue;
            }
            let mut firsts = mask;
            while firsts != 0 {
                let f = firsts.trailing_zeros() as usize;
                firsts &= firsts - 1;
                let rest = mask & !(1 << f);
                let rest_base = rest as usize * k;
                let mut best = u64::MAX;
                let mut best_next = NONE;
                let mut succ = rest;
                while succ != 0 {
                    let g = succ.trailing_zeros() as usize;
                    succ &= succ - 1;
                    let c = instance.travel_time(ids[f], ids[g]) + cost[rest_base + g];
                    if c < best {
                        best = c;
                        best_next = g as u8;
                    }
                }
                cost[base + f] = best;
                next[base + f] = best_next;
            }
        }
        TourTable {
            ids,
            k,
            cost,
            next,
            admitted,
        }
    }

    fn tour(&self, instance: &Instance, mask: u32) -> Tour {
        debug_assert!(mask != 0 && self.admitted[mask as usize]);
        let base = mask as usize * self.k;
        let mut best = u64::MAX;
        let mut first = 0;
        let mut firsts = mask;
        while firsts != 0 {
            let f = firsts.trailing_zeros() as usize;
            firsts &= firsts - 1;
            let c = instance.travel_time(0, self.ids[f]) + self.cost[base + f];
            if c < best {
                best = c;
                first = f;
            }
        }
        let mut order = Vec::with_capacity(mask.count_ones() as usize);
        let (mut cur, mut rest) = (first, mask);
        loop {
            order.push(self.ids[cur]);
            let nxt = self.next[rest as usize * self.k + cur];
            rest &= !(1 << cur);
            if nxt == NONE {
                break;
            }
            cur = nxt as usize;
        }
        Tour {
            travel_time: best,
            order,
        }
    }
}

/// Minimum depot-to-depot travel time over all orders of `members`, with the
/// lexicographically smallest optimal order.
///
/// Feasibility is not judged. `members` must be non-empty.
pub fn held_karp(instance: &Instance, members: CustomerSet) -> Tour {
    assert!(!members.is_empty(), "held_karp needs at least one customer");
    let table = TourTable::build(instance, members.to_vec(), |_| true);
    let full = (1u32 << members.len()) - 1;
    table.tour(instance, full)
}

/// Lower bound on the duration of any route over `members`: each member's
/// cheapest incoming arc, plus service and unload times.
fn cheapest_incoming(instance: &Instance) -> Vec<u64> {
    let n = instance.n_customers();
    let mut min_in = vec![0; n + 1];
    for (i, slot) in min_in.iter_mut().enumerate().skip(1) {
        *slot = (0..=n)
            .filter(|&j| j != i)
            .map(|j| instance.travel_time(j, i))
            .min()
            .unwrap_or(0);
    }
    min_in
}

fn pair_distance_sum(instance: &Instance, members: CustomerSet) -> u64 {
    let mut sum = 0;
    let mut rest = members;
    while let Some(a) = rest.lowest() {
        rest.remove(a);
        for b in rest {
            sum += instance.distance(a, b);
        }
    }
    sum
}

/// Every customer subset a single vehicle can serve, sorted by bitmask.
///
/// Subsets over capacity, or whose duration lower bound exceeds the time
/// limit, are never expanded; both tests are monotone under inclusion so no
/// feasible subset is lost.
pub fn enumerate_feasible_routes(instance: &Instance) -> Vec<FeasibleRoute> {
    let n = instance.n_customers();
    let min_in = cheapest_incoming(instance);
    let size = 1usize << n;
    // per-subset load and service+incoming bound, filled incrementally
    let mut load = vec![0u64; size];
    let mut bound = vec![0u64; size];
    let capacity = instance.capacity();
    let limit = instance.time_limit();
    let unload = instance.unload_time();

    let table = TourTable::build(instance, (1..=n).collect(), |mask| {
        let low = mask.trailing_zeros() as usize;
        let parent = (mask & (mask - 1)) as usize;
        let c = low + 1;
        let l = load[parent] + instance.demand(c);
        let b = bound[parent] + min_in[c] + instance.service_time(c);
        load[mask as usize] = l;
        bound[mask as usize] = b;
        l <= capacity && b + unload <= limit
    });

    let mut routes = Vec::new();
    for mask in 1..size as u32 {
        if !table.admitted[mask as usize] {
            continue;
        }
        let members = CustomerSet::from_bits(mask);
        let tour = table.tour(instance, mask);
        let service: u64 = members.iter().map(|c| instance.service_time(c)).sum();
        let min_duration = tour.travel_time + service + unload;
        if min_duration > limit {
            continue;
        }
        routes.push(FeasibleRoute {
            members,
            best_travel_time: tour.travel_time,
            best_order: tour.order,
            load: load[mask as usize],
            compactness: pair_distance_sum(instance, members),
            min_duration,
        });
    }
    routes
}
