//! Bi-objective drivers: payoff table, normalized weighted-sum sweep and the
//! augmented epsilon-constraint sweep with bypass.

use alloc::vec::Vec;
use thiserror::Error;

use crate::model::{FrontPoint, Instance, ParetoFront, Solution};
use crate::routes::FeasibleRoute;
use crate::solver::{solve_with, Limits, SolveError, SolveStatus, SubproblemSpec, Weights};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MooError {
    #[error("the instance has no feasible solution within the fleet size")]
    Infeasible,
    #[error("grid count must be at least 2, got {0}")]
    GridTooSmall(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Lexicographic anchors of the front and the objective ranges between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PayoffTable {
    /// Lexicographic minimum of (f1, f2).
    pub f1_min: FrontPoint,
    /// Lexicographic minimum of (f2, f1).
    pub f2_min: FrontPoint,
    pub r1: u64,
    pub r2: u64,
}

impl PayoffTable {
    /// `f2` at the f1-anchor: the top of the epsilon grid.
    pub fn f2_max(&self) -> u64 {
        self.f1_min.f2
    }
}

fn solve_optimal(
    instance: &Instance,
    routes: &[FeasibleRoute],
    spec: &SubproblemSpec,
    limits: &Limits<'_>,
) -> Result<Option<Solution>, SolveError> {
    let out = solve_with(instance, routes, spec, limits)?;
    Ok(match out.status {
        SolveStatus::Optimal => out.solution,
        SolveStatus::Infeasible => None,
    })
}

pub fn payoff_table(
    instance: &Instance,
    routes: &[FeasibleRoute],
    limits: &Limits<'_>,
) -> Result<PayoffTable, MooError> {
    let cap = instance.fleet_size();
    let f1_min = solve_optimal(instance, routes, &SubproblemSpec::epsilon(u64::MAX, cap), limits)?
        .ok_or(MooError::Infeasible)?;
    let f2_min = solve_optimal(instance, routes, &SubproblemSpec::weighted(Weights::f2_only(), cap), limits)?
        .ok_or(MooError::Infeasible)?;
    Ok(PayoffTable {
        r1: f2_min.f1 - f1_min.f1,
        r2: f1_min.f2 - f2_min.f2,
        f1_min: FrontPoint::new(f1_min),
        f2_min: FrontPoint::new(f2_min),
    })
}

/// The scalarization parameter of one grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridParameter {
    /// `w1 = num / den`, `w2 = 1 - w1`.
    Lambda { num: u64, den: u64 },
    /// Constraint `f2 <= bound`.
    Epsilon { bound: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunResult {
    Solved { f1: u64, f2: u64 },
    Infeasible,
    /// Skipped without a solver call.
    Bypassed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridRun {
    pub index: usize,
    pub parameter: GridParameter,
    pub result: RunResult,
    pub micros: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub front: ParetoFront,
    pub grid_points_requested: usize,
    pub solver_invocations: usize,
    pub bypassed: usize,
    /// Solved runs minus distinct objective vectors among them.
    pub duplicates_discarded: usize,
    /// One entry per grid point visited, in grid order.
    pub runs: Vec<GridRun>,
    /// Set when a solve ran out of budget; the front is then partial.
    pub aborted: Option<SolveError>,
}

impl SweepReport {
    /// Solved objective vectors in grid order.
    pub fn solved(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.runs.iter().filter_map(|r| match r.result {
            RunResult::Solved { f1, f2 } => Some((f1, f2)),
            _ => None,
        })
    }
}

fn finish(mut report: SweepReport, solutions: Vec<Solution>, anchors: &[&FrontPoint]) -> SweepReport {
    let raw = solutions.len();
    let mut points: Vec<FrontPoint> = solutions.into_iter().map(FrontPoint::new).collect();
    points.extend(anchors.iter().map(|&a| a.clone()));
    report.front = filter_nondominated(points);
    let mut objs: Vec<(u64, u64)> = report.solved().collect();
    objs.sort_unstable();
    objs.dedup();
    report.duplicates_discarded = raw - objs.len();
    report
}

/// Normalized weighted sum over `lambda = 0, 1/(q-1), ..., 1` with
/// objective `lambda * f1 / r1 + (1 - lambda) * f2 / r2`.
///
/// Only supported points of the front can come out of this sweep.
pub fn weighted_sum_sweep(
    instance: &Instance,
    routes: &[FeasibleRoute],
    table: &PayoffTable,
    q: usize,
    limits: &Limits<'_>,
) -> Result<SweepReport, MooError> {
    if q < 2 {
        return Err(MooError::GridTooSmall(q));
    }
    let cap = instance.fleet_size();
    let den = (q - 1) as u64;
    let mut report = SweepReport {
        grid_points_requested: q,
        ..SweepReport::default()
    };
    let mut solutions = Vec::new();
    // single-point front: one solve settles it
    let indices = if table.r1 == 0 && table.r2 == 0 { 0..1 } else { 0..q };
    for i in indices {
        let num = i as u64;
        let weights = Weights::new(num, den - num, table.r1.max(1), table.r2.max(1))
            .expect("grid weights are valid by construction");
        let t0 = limits.clock.now_micros();
        report.solver_invocations += 1;
        let result = match solve_optimal(instance, routes, &SubproblemSpec::weighted(weights, cap), limits) {
            Ok(Some(sol)) => {
                let r = RunResult::Solved { f1: sol.f1, f2: sol.f2 };
                solutions.push(sol);
                r
            }
            Ok(None) => RunResult::Infeasible,
            Err(e) => {
                report.aborted = Some(e);
                break;
            }
        };
        report.runs.push(GridRun {
            index: i,
            parameter: GridParameter::Lambda { num, den },
            result,
            micros: limits.clock.now_micros().saturating_sub(t0),
        });
    }
    Ok(finish(report, solutions, &[]))
}

/// How the epsilon bounds are laid out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EpsilonGrid {
    /// `q` bounds `floor(f2_max - i * r2 / q)` for `i = 0..q`.
    #[default]
    Uniform,
    /// Every integer bound from `f2_max` down to `f2*`, stopping once `q`
    /// distinct efficient points are found. With bypass each solve jumps
    /// straight to `f2 - 1`, so a front of `m <= q` points costs exactly `m`
    /// solver calls.
    Lattice,
}

/// Augmented epsilon-constraint sweep on `f2`.
///
/// Every solve is lexicographic (min `f1`, then `f2`) under `f2 <= bound`.
/// With `bypass`, after a solve returns `f2 = v` all later bounds `>= v`
/// are skipped: they would return the same solution.
///
/// The grid stops short of `f2*`, so both payoff-table anchors are merged
/// into the front as well.
pub fn epsilon_sweep(
    instance: &Instance,
    routes: &[FeasibleRoute],
    table: &PayoffTable,
    q: usize,
    grid: EpsilonGrid,
    bypass: bool,
    limits: &Limits<'_>,
) -> Result<SweepReport, MooError> {
    if q < 2 {
        return Err(MooError::GridTooSmall(q));
    }
    let cap = instance.fleet_size();
    let mut report = SweepReport::default();
    let mut solutions: Vec<Solution> = Vec::new();

    // Some(bound) -> solve; None -> stop
    let f2_max = table.f2_max();
    let f2_star = table.f2_min.f2;
    let mut index = 0;
    let mut bound = Some(f2_max);
    let mut last_v: Option<u64> = None;
    let mut distinct = 0usize;
    while let Some(eps) = bound {
        let t0 = limits.clock.now_micros();
        let skip = bypass && last_v.is_some_and(|v| eps >= v);
        let result = if skip {
            report.bypassed += 1;
            RunResult::Bypassed
        } else {
            report.solver_invocations += 1;
            match solve_optimal(instance, routes, &SubproblemSpec::epsilon(eps, cap), limits) {
                Ok(Some(sol)) => {
                    if last_v != Some(sol.f2) {
                        distinct += 1;
                    }
                    last_v = Some(sol.f2);
                    let r = RunResult::Solved { f1: sol.f1, f2: sol.f2 };
                    solutions.push(sol);
                    r
                }
                Ok(None) => RunResult::Infeasible,
                Err(e) => {
                    report.aborted = Some(e);
                    break;
                }
            }
        };
        report.runs.push(GridRun {
            index,
            parameter: GridParameter::Epsilon { bound: eps },
            result,
            micros: limits.clock.now_micros().saturating_sub(t0),
        });
        index += 1;

        if result == RunResult::Infeasible {
            // every tighter bound is infeasible as well
            if grid == EpsilonGrid::Uniform {
                report.bypassed += q - index;
            }
            break;
        }
        bound = match grid {
            EpsilonGrid::Uniform => (index < q).then(|| {
                let num = q as u128 * f2_max as u128 - index as u128 * table.r2 as u128;
                (num / q as u128) as u64
            }),
            EpsilonGrid::Lattice => {
                if distinct >= q || eps <= f2_star {
                    None
                } else if let (true, Some(v), RunResult::Solved { .. }) = (bypass, last_v, result) {
                    // bounds v..eps-1 are bypassed in one jump
                    report.bypassed += (eps - v) as usize;
                    v.checked_sub(1).filter(|&b| b >= f2_star)
                } else {
                    Some(eps - 1)
                }
            }
        };
    }
    report.grid_points_requested = match grid {
        EpsilonGrid::Uniform => q,
        EpsilonGrid::Lattice => report.solver_invocations + report.bypassed,
    };
    Ok(finish(report, solutions, &[&table.f1_min, &table.f2_min]))
}

/// Keeps the points no other point weakly dominates. Equal objective
/// vectors collapse to the smallest witness.
pub fn filter_nondominated(mut points: Vec<FrontPoint>) -> ParetoFront {
    points.sort_by(|a, b| {
        (a.f1, a.f2)
            .cmp(&(b.f1, b.f2))
            .then_with(|| a.witness.cmp_witness(&b.witness))
    });
    let mut kept: Vec<FrontPoint> = Vec::with_capacity(points.len());
    for p in points {
        match kept.last() {
            Some(last) if p.f2 >= last.f2 => {}
            _ => kept.push(p),
        }
    }
    ParetoFront::from_sorted(kept)
}

/// Whether `a` weakly dominates `b` and differs from it.
pub fn dominates(a: (u64, u64), b: (u64, u64)) -> bool {
    a.0 <= b.0 && a.1 <= b.1 && a != b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::tiny_raw;
    use crate::model::{Instance, RawInstance};
    use crate::routes::enumerate_feasible_routes;
    use alloc::vec;

    fn threshold_raw() -> RawInstance {
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

    fn pt(f1: u64, f2: u64) -> FrontPoint {
        FrontPoint { f1, f2, witness: Solution::default() }
    }

    #[test]
    fn filter_examples() {
        let f = filter_nondominated(vec![pt(10, 5), pt(9, 6), pt(10, 4)]);
        assert_eq!(f.objectives(), vec![(9, 6), (10, 4)]);
        let f = filter_nondominated(vec![pt(7, 7), pt(7, 7)]);
        assert_eq!(f.objectives(), vec![(7, 7)]);
        assert!(filter_nondominated(vec![]).is_empty());
    }

    #[test]
    fn tiny_payoff_is_degenerate() {
        let inst = Instance::new(tiny_raw()).unwrap();
        let routes = enumerate_feasible_routes(&inst);
        let t = payoff_table(&inst, &routes, &Limits::default()).unwrap();
        assert_eq!((t.f1_min.f1, t.f1_min.f2), (10, 0));
        assert_eq!((t.f2_min.f1, t.f2_min.f2), (10, 0));
        assert_eq!((t.r1, t.r2), (0, 0));
        let w = weighted_sum_sweep(&inst, &routes, &t, 2, &Limits::default()).unwrap();
        assert_eq!(w.front.objectives(), vec![(10, 0)]);
        assert_eq!(w.solver_invocations, 1);
    }

    #[test]
    fn threshold_payoff_and_sweeps() {
        let inst = Instance::new(threshold_raw()).unwrap();
        let routes = enumerate_feasible_routes(&inst);
        let lim = Limits::default();
        let t = payoff_table(&inst, &routes, &lim).unwrap();
        assert_eq!((t.f1_min.f1, t.f1_min.f2), (15, 9));
        assert_eq!((t.f2_min.f1, t.f2_min.f2), (20, 0));
        assert_eq!((t.r1, t.r2), (5, 9));

        let w = weighted_sum_sweep(&inst, &routes, &t, 2, &lim).unwrap();
        assert_eq!(w.front.objectives(), vec![(15, 9), (20, 0)]);

        for grid in [EpsilonGrid::Uniform, EpsilonGrid::Lattice] {
            for bypass in [true, false] {
                let e = epsilon_sweep(&inst, &routes, &t, 10, grid, bypass, &lim).unwrap();
                assert_eq!(e.front.objectives(), vec![(15, 9), (20, 0)], "{grid:?} {bypass}");
                if grid == EpsilonGrid::Uniform {
                    assert_eq!(e.solver_invocations + e.bypassed, 10);
                }
            }
        }
        let on = epsilon_sweep(&inst, &routes, &t, 10, EpsilonGrid::Uniform, true, &lim).unwrap();
        let off = epsilon_sweep(&inst, &routes, &t, 10, EpsilonGrid::Uniform, false, &lim).unwrap();
        assert!(on.solver_invocations < off.solver_invocations);
        // bounds 9, 8, 7, ... : the first solve returns f2 = 9, the rest return 0
        assert_eq!(on.solver_invocations, 2);
        let lat = epsilon_sweep(&inst, &routes, &t, 10, EpsilonGrid::Lattice, true, &lim).unwrap();
        assert_eq!((lat.solver_invocations, lat.bypassed), (2, 8));
        // stops as soon as q distinct points are in hand
        let lat = epsilon_sweep(&inst, &routes, &t, 2, EpsilonGrid::Lattice, true, &lim).unwrap();
        assert_eq!((lat.solver_invocations, lat.bypassed), (2, 0));
        let lat = epsilon_sweep(&inst, &routes, &t, 10, EpsilonGrid::Lattice, false, &lim).unwrap();
        assert_eq!((lat.solver_invocations, lat.bypassed), (10, 0));
    }

    #[test]
    fn uniform_grid_bounds() {
        let inst = Instance::new(threshold_raw()).unwrap();
        let routes = enumerate_feasible_routes(&inst);
        let t = payoff_table(&inst, &routes, &Limits::default()).unwrap();
        let e = epsilon_sweep(&inst, &routes, &t, 4, EpsilonGrid::Uniform, false, &Limits::default()).unwrap();
        let bounds: Vec<u64> = e
            .runs
            .iter()
            .map(|r| match r.parameter {
                GridParameter::Epsilon { bound } => bound,
                _ => unreachable!(),
            })
            .collect();
        // 9 - i * 9/4, floored
        assert_eq!(bounds, vec![9, 6, 4, 2]);
    }

    #[test]
    fn grid_too_small() {
        let inst = Instance::new(tiny_raw()).unwrap();
        let routes = enumerate_feasible_routes(&inst);
        let t = payoff_table(&inst, &routes, &Limits::default()).unwrap();
        assert_eq!(
            weighted_sum_sweep(&inst, &routes, &t, 1, &Limits::default()),
            Err(MooError::GridTooSmall(1))
        );
    }

    #[test]
    fn infeasible_fleet() {
        let mut raw = threshold_raw();
        raw.fleet_size = 1;
        raw.capacity = 1;
        let inst = Instance::new(raw).unwrap();
        let routes = enumerate_feasible_routes(&inst);
        assert_eq!(payoff_table(&inst, &routes, &Limits::default()), Err(MooError::Infeasible));
    }
}
