//! Seeded synthetic instances.
//!
//! Customers are placed on a 100 x 100 square around a central depot.
//! Distances are rounded Euclidean (at least 1 off the diagonal), travel
//! times equal distances plus an optional random asymmetric surcharge.

use std::str::FromStr;

use compactvrp_core::{Instance, RawInstance, ValidationError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Uniform,
    Ring,
    Clustered,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Uniform => "uniform",
            Profile::Ring => "ring",
            Profile::Clustered => "clustered",
        }
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Profile::Uniform),
            "ring" => Ok(Profile::Ring),
            "clustered" => Ok(Profile::Clustered),
            other => Err(format!("unknown profile {other:?} (expected uniform, ring or clustered)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    pub seed: u64,
    pub n: usize,
    pub profile: Profile,
    /// Capacity as a fraction of total demand (never below the largest demand).
    pub cap_ratio: f64,
    /// Time limit as a multiple of the longest singleton route duration.
    pub time_ratio: f64,
    /// Largest random surcharge added to each travel time.
    pub asymmetry: u64,
    /// Defaults to `n`.
    pub fleet: Option<usize>,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 1,
            n: 9,
            profile: Profile::Clustered,
            cap_ratio: 0.4,
            time_ratio: 2.0,
            asymmetry: 0,
            fleet: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("time ratio {0} is below 1: singleton routes would be infeasible")]
    TimeRatio(f64),
    #[error("capacity ratio {0} must be positive")]
    CapRatio(f64),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

const DEPOT: (f64, f64) = (50.0, 50.0);
const UNLOAD: u64 = 5;

fn place(rng: &mut ChaCha8Rng, profile: Profile, n: usize) -> Vec<(f64, f64)> {
    match profile {
        Profile::Uniform => (0..n)
            .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
            .collect(),
        Profile::Ring => (0..n)
            .map(|_| loop {
                let p: (f64, f64) = (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
                let r2 = (p.0 - DEPOT.0).powi(2) + (p.1 - DEPOT.1).powi(2);
                if (900.0..=2025.0).contains(&r2) {
                    break p;
                }
            })
            .collect(),
        Profile::Clustered => {
            let k = if n >= 6 { 3 } else { 2 };
            let centers: Vec<(f64, f64)> = (0..k)
                .map(|_| (rng.gen_range(10.0..90.0), rng.gen_range(10.0..90.0)))
                .collect();
            (0..n)
                .map(|i| {
                    let c = centers[i % k];
                    (
                        (c.0 + rng.gen_range(-8.0..8.0)).clamp(0.0, 100.0),
                        (c.1 + rng.gen_range(-8.0..8.0)).clamp(0.0, 100.0),
                    )
                })
                .collect()
        }
    }
}

/// Builds the instance for `params`. Identical parameters give identical
/// instances.
pub fn generate(params: &GenParams) -> Result<Instance, GenError> {
    if params.time_ratio.is_nan() || params.time_ratio < 1.0 {
        return Err(GenError::TimeRatio(params.time_ratio));
    }
    if params.cap_ratio.is_nan() || params.cap_ratio <= 0.0 {
        return Err(GenError::CapRatio(params.cap_ratio));
    }
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut points = vec![DEPOT];
    points.extend(place(&mut rng, params.profile, n));

    let m = n + 1;
    let mut distance = vec![vec![0i64; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = ((points[i].0 - points[j].0).hypot(points[i].1 - points[j].1)).round() as i64;
            distance[i][j] = d.max(1);
            distance[j][i] = d.max(1);
        }
    }
    let mut travel = distance.clone();
    for (i, row) in travel.iter_mut().enumerate() {
        for (j, t) in row.iter_mut().enumerate() {
            if i != j && params.asymmetry > 0 {
                *t += rng.gen_range(0..=params.asymmetry) as i64;
            }
        }
    }
    let demand: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=5)).collect();
    let service: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();

    let total: i64 = demand.iter().sum();
    let max_demand = demand.iter().copied().max().unwrap_or(1);
    let mut capacity = ((total as f64 * params.cap_ratio).ceil() as i64).max(max_demand);
    let singleton = |c: usize| travel[0][c] + service[c - 1] + travel[c][0] + UNLOAD as i64;
    let longest = (1..=n).map(singleton).max().unwrap_or(0);
    let mut time_limit = (longest as f64 * params.time_ratio).ceil() as i64;

    if params.profile == Profile::Clustered && n >= 2 {
        // make the closest pair a feasible merge so the front has a trade-off
        let (a, b) = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .min_by_key(|&(i, j)| (distance[i][j], i, j))
            .expect("n >= 2");
        capacity = capacity.max(demand[a - 1] + demand[b - 1]);
        let pair = travel[0][a] + travel[a][b] + travel[b][0] + service[a - 1] + service[b - 1] + UNLOAD as i64;
        time_limit = time_limit.max(pair);
    }

    let raw = RawInstance {
        name: format!("{}-n{}-s{}", params.profile.name(), n, params.seed),
        n_customers: n as i64,
        capacity,
        time_limit,
        fleet_size: params.fleet.unwrap_or(n) as i64,
        unload_time: UNLOAD as i64,
        demand,
        service_time: service,
        travel_time: travel,
        distance,
    };
    Ok(Instance::new(raw)?)
}
