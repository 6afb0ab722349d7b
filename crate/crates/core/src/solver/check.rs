//! Independent constraint checker.
//!
//! Recomputes everything from the route sequences and the instance matrices,
//! one constraint family at a time. It does not reuse the evaluator in
//! [`crate::model`], so a bookkeeping bug there shows up as a violation here.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::model::{Instance, Solution};

/// The constraint families of the routing model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintFamily {
    /// Each customer is entered and left exactly once.
    SingleVisit,
    /// At most `fleet_size` routes leave the depot.
    Fleet,
    /// Routes are depot-to-depot paths whose arcs account for the reported
    /// travel times.
    Flow,
    /// A cumulative-load ordering exists within capacity.
    Capacity,
    /// A cumulative-time ordering exists within the time limit.
    Duration,
    /// Same-route pairs account for the reported compactness.
    Comembership,
}

impl ConstraintFamily {
    pub const ALL: [ConstraintFamily; 6] = [
        ConstraintFamily::SingleVisit,
        ConstraintFamily::Fleet,
        ConstraintFamily::Flow,
        ConstraintFamily::Capacity,
        ConstraintFamily::Duration,
        ConstraintFamily::Comembership,
    ];

    /// Short label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            ConstraintFamily::SingleVisit => "Eq3-4",
            ConstraintFamily::Fleet => "Eq5",
            ConstraintFamily::Flow => "Eq6",
            ConstraintFamily::Capacity => "Eq7",
            ConstraintFamily::Duration => "Eq8-9",
            ConstraintFamily::Comembership => "Eq10",
        }
    }
}

impl fmt::Display for ConstraintFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub family: ConstraintFamily,
    pub route: Option<usize>,
    pub customer: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.family, self.message)
    }
}

/// Checker result; an empty violation list means the solution passes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Distinct families hit, in declaration order.
    pub fn families(&self) -> Vec<ConstraintFamily> {
        let mut fams: Vec<_> = self.violations.iter().map(|v| v.family).collect();
        fams.sort();
        fams.dedup();
        fams
    }

    fn push(&mut self, family: ConstraintFamily, route: Option<usize>, customer: Option<usize>, message: String) {
        self.violations.push(Violation {
            family,
            route,
            customer,
            message,
        });
    }
}

/// Checks a candidate solution against every constraint family. Never fails;
/// violations are reported as data.
pub fn check_solution(instance: &Instance, solution: &Solution) -> Verdict {
    use ConstraintFamily::*;

    let n = instance.n_customers();
    let mut verdict = Verdict::default();

    let mut visits = vec![0usize; n + 1];
    for route in &solution.routes {
        for &c in &route.sequence {
            if (1..=n).contains(&c) {
                visits[c] += 1;
            }
        }
    }
    for (c, &count) in visits.iter().enumerate().skip(1) {
        if count != 1 {
            verdict.push(SingleVisit, None, Some(c), format!("customer {c} visited {count} times"));
        }
    }

    if solution.routes.len() > instance.fleet_size() {
        verdict.push(
            Fleet,
            None,
            None,
            format!(
                "{} routes leave the depot but fleet_size is {}",
                solution.routes.len(),
                instance.fleet_size()
            ),
        );
    }

    let mut f1_total = 0u64;
    let mut f2_total = 0u64;
    for (r, route) in solution.routes.iter().enumerate() {
        let seq = &route.sequence;
        if seq.is_empty() {
            verdict.push(Flow, Some(r), None, format!("route {r} is empty"));
            continue;
        }
        if let Some(&bad) = seq.iter().find(|&&c| c > n) {
            verdict.push(Flow, Some(r), Some(bad), format!("route {r} visits unknown node {bad}"));
            continue;
        }
        if seq.contains(&0) {
            verdict.push(Flow, Some(r), Some(0), format!("route {r} passes through the depot mid-route"));
        }

        // walk the arcs depot -> seq -> depot building the u (load) and
        // v (time) witnesses
        let mut arcs = 0u64;
        let mut load = 0u64;
        let mut time = 0u64;
        let mut over_capacity = None;
        let mut prev = 0;
        for &c in seq {
            let t = instance.travel_time(prev, c);
            arcs += t;
            load += instance.demand(c);
            time += t + instance.service_time(c);
            if load > instance.capacity() && over_capacity.is_none() {
                over_capacity = Some(c);
            }
            prev = c;
        }
        let back = instance.travel_time(prev, 0);
        arcs += back;
        let duration = time + back + instance.unload_time();
        f1_total += arcs;

        if route.travel_time != arcs {
            verdict.push(
                Flow,
                Some(r),
                None,
                format!("route {r} reports travel time {} but its arcs sum to {arcs}", route.travel_time),
            );
        }
        if let Some(c) = over_capacity {
            verdict.push(
                Capacity,
                Some(r),
                Some(c),
                format!("route {r} load {load} exceeds capacity {} at customer {c}", instance.capacity()),
            );
        }
        if route.load != load {
            verdict.push(
                Capacity,
                Some(r),
                None,
                format!("route {r} reports load {} but demands sum to {load}", route.load),
            );
        }
        if duration > instance.time_limit() {
            verdict.push(
                Duration,
                Some(r),
                None,
                format!("route {r} duration {duration} exceeds time limit {}", instance.time_limit()),
            );
        }
        if route.duration != duration {
            verdict.push(
                Duration,
                Some(r),
                None,
                format!("route {r} reports duration {} but recomputes to {duration}", route.duration),
            );
        }

        let mut pairs = 0u64;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] != 0 && seq[j] != 0 {
                    pairs += instance.distance(seq[i], seq[j]);
                }
            }
        }
        f2_total += pairs;
        if route.compactness != pairs {
            verdict.push(
                Comembership,
                Some(r),
                None,
                format!("route {r} reports compactness {} but same-route pairs sum to {pairs}", route.compactness),
            );
        }
    }

    if solution.f1 != f1_total {
        verdict.push(Flow, None, None, format!("f1 = {} but route arcs sum to {f1_total}", solution.f1));
    }
    if solution.f2 != f2_total {
        verdict.push(
            Comembership,
            None,
            None,
            format!("f2 = {} but same-route pairs sum to {f2_total}", solution.f2),
        );
    }
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::uniform_raw;
    use crate::model::{evaluate, Route};
    use alloc::string::ToString;
    use alloc::vec;

    fn instance() -> Instance {
        let mut raw = uniform_raw(4, 2);
        raw.capacity = 2;
        raw.time_limit = 12;
        raw.fleet_size = 3;
        Instance::new(raw).unwrap()
    }

    /// Routes re-measured from sequences, objectives summed: consistent
    /// bookkeeping so only the structural constraint can fail.
    fn consistent(inst: &Instance, seqs: &[Vec<usize>]) -> Solution {
        let routes: Vec<Route> = seqs.iter().map(|s| Route::measure(inst, s.clone()).unwrap()).collect();
        Solution {
            f1: routes.iter().map(|r| r.travel_time).sum(),
            f2: routes.iter().map(|r| r.compactness).sum(),
            routes,
        }
    }

    #[test]
    fn valid_solution_passes() {
        let inst = instance();
        let sol = evaluate(&inst, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert!(check_solution(&inst, &sol).passed());
    }

    #[test]
    fn duplicate_customer() {
        let inst = instance();
        let sol = consistent(&inst, &[vec![1, 2], vec![3, 4], vec![3]]);
        let v = check_solution(&inst, &sol);
        assert_eq!(v.families(), vec![ConstraintFamily::SingleVisit]);
        assert_eq!(v.violations[0].to_string(), "Eq3-4: customer 3 visited 2 times");
    }

    #[test]
    fn too_many_routes() {
        let inst = instance();
        let sol = consistent(&inst, &[vec![1], vec![2], vec![3], vec![4]]);
        assert_eq!(check_solution(&inst, &sol).families(), vec![ConstraintFamily::Fleet]);
    }

    #[test]
    fn depot_inside_route_and_empty_route() {
        let inst = instance();
        let sol = consistent(&inst, &[vec![1, 0, 2], vec![3, 4]]);
        assert_eq!(check_solution(&inst, &sol).families(), vec![ConstraintFamily::Flow]);
        let sol = consistent(&inst, &[vec![1, 2], vec![3, 4], vec![]]);
        assert_eq!(check_solution(&inst, &sol).families(), vec![ConstraintFamily::Flow]);
    }

    #[test]
    fn tampered_travel_time() {
        let inst = instance();
        let mut sol = evaluate(&inst, &[vec![1, 2], vec![3, 4]]).unwrap();
        sol.routes[0].travel_time += 1;
        sol.f1 += 1;
        assert_eq!(check_solution(&inst, &sol).families(), vec![ConstraintFamily::Flow]);
    }

    #[test]
    fn over_capacity_and_over_time() {
        let inst = instance();
        // 3 customers: load 3 > 2, duration 8 <= 12
        let sol = consistent(&inst, &[vec![1, 2, 3], vec![4]]);
        let v = check_solution(&inst, &sol);
        assert_eq!(v.families(), vec![ConstraintFamily::Capacity]);
        assert_eq!(v.violations[0].customer, Some(3));

        let mut raw = uniform_raw(4, 2);
        raw.time_limit = 7;
        let inst = Instance::new(raw).unwrap();
        let sol = consistent(&inst, &[vec![1, 2, 3], vec![4]]);
        assert_eq!(check_solution(&inst, &sol).families(), vec![ConstraintFamily::Duration]);
    }

    #[test]
    fn wrong_compactness() {
        let inst = instance();
        let mut sol = evaluate(&inst, &[vec![1, 2], vec![3, 4]]).unwrap();
        sol.f2 -= 1;
        assert_eq!(check_solution(&inst, &sol).families(), vec![ConstraintFamily::Comembership]);
    }

    #[test]
    fn unknown_node_is_flow() {
        let inst = instance();
        let mut sol = evaluate(&inst, &[vec![1, 2], vec![3, 4]]).unwrap();
        sol.routes[1].sequence.push(9);
        let v = check_solution(&inst, &sol);
        assert!(v.families().contains(&ConstraintFamily::Flow));
    }
}
