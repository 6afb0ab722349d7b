#![allow(dead_code)]

use compactvrp_core::{Instance, RawInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random instance on a 100x100 grid: rounded Euclidean distances, travel
/// times equal to distance plus a small asymmetric perturbation.
pub fn random_instance(seed: u64, n: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..=n)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    let dist = |a: usize, b: usize| {
        let (dx, dy) = (pts[a].0 - pts[b].0, pts[a].1 - pts[b].1);
        (dx * dx + dy * dy).sqrt().round() as i64
    };
    let mut travel = vec![vec![0i64; n + 1]; n + 1];
    let mut distance = vec![vec![0i64; n + 1]; n + 1];
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                distance[i][j] = dist(i, j);
                travel[i][j] = dist(i, j) + rng.gen_range(0..4);
            }
        }
    }
    let demand: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let service: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
    let unload = rng.gen_range(0..=5);
    let max_single = (1..=n)
        .map(|i| travel[0][i] + service[i - 1] + travel[i][0] + unload)
        .max()
        .unwrap();
    let max_demand = *demand.iter().max().unwrap();
    Instance::new(RawInstance {
        name: format!("rand-{seed}-{n}"),
        n_customers: n as i64,
        capacity: max_demand + rng.gen_range(0..=10),
        time_limit: max_single + rng.gen_range(0..=150),
        fleet_size: rng.gen_range((n / 2).max(1)..=n) as i64,
        unload_time: unload,
        demand,
        service_time: service,
        travel_time: travel,
        distance,
    })
    .unwrap()
}

/// Route cost of an explicit order, walked directly from the matrices.
pub fn order_travel(inst: &Instance, order: &[usize]) -> u64 {
    let mut at = 0;
    let mut total = 0;
    for &c in order {
        total += inst.travel_time(at, c);
        at = c;
    }
    total + inst.travel_time(at, 0)
}

/// All permutations of `items` (Heap's algorithm).
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k - 1 {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
        heap(k - 1, a, out);
    }
    let mut a = items.to_vec();
    let mut out = Vec::new();
    heap(a.len(), &mut a, &mut out);
    out
}

/// Minimum travel over all orders, lexicographically smallest argmin.
pub fn brute_force_tour(inst: &Instance, members: &[usize]) -> (u64, Vec<usize>) {
    permutations(members)
        .into_iter()
        .map(|p| (order_travel(inst, &p), p))
        .min()
        .unwrap()
}

/// Points on the lower-left convex hull of a front (supported points).
pub fn lower_hull(points: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut pts = points.to_vec();
    pts.sort();
    let mut hull: Vec<(u64, u64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as i128 - a.0 as i128) * (p.1 as i128 - a.1 as i128)
                - (b.1 as i128 - a.1 as i128) * (p.0 as i128 - a.0 as i128);
            // keep only strictly convex turns
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

/// Whether `p` lies on the lower convex hull (vertex or edge).
pub fn on_lower_hull(front: &[(u64, u64)], p: (u64, u64)) -> bool {
    let hull = lower_hull(front);
    if hull.contains(&p) {
        return true;
    }
    hull.windows(2).any(|w| {
        let (a, b) = (w[0], w[1]);
        a.0 <= p.0
            && p.0 <= b.0
            && (b.0 as i128 - a.0 as i128) * (p.1 as i128 - a.1 as i128)
                == (b.1 as i128 - a.1 as i128) * (p.0 as i128 - a.0 as i128)
    })
}
