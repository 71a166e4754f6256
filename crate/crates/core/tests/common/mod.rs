#![allow(dead_code)]

use contentcast_core::{Catalog, ServiceRequest};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.0.next_u64() % (hi - lo + 1)
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn coin(&mut self) -> bool {
        self.0.next_u64() & 1 == 1
    }
}

pub struct Scenario {
    pub catalog: Catalog,
    pub requests: Vec<ServiceRequest>,
    pub horizon_s: f64,
}

/// Random catalog of up to 8 objects and up to 6 users in which every
/// object is requested by somebody. With `at_horizon` every request is
/// due at `T`, otherwise request times are uniform in `(0, T]`.
pub fn random_scenario(rng: &mut Rng, at_horizon: bool) -> Scenario {
    let l = rng.range(1, 8) as usize;
    let sizes: Vec<u64> = (0..l).map(|_| rng.range(1, 500)).collect();
    let catalog = Catalog::from_sizes(&sizes).unwrap();
    let k = rng.range(1, 6) as usize;
    let mut sets: Vec<Vec<u32>> = (0..k)
        .map(|_| (0..l as u32).filter(|_| rng.coin()).collect())
        .collect();
    for o in 0..l as u32 {
        if !sets.iter().any(|s| s.contains(&o)) {
            let u = rng.range(0, k as u64 - 1) as usize;
            sets[u].push(o);
        }
    }
    for s in &mut sets {
        if s.is_empty() {
            s.push(rng.range(0, l as u64 - 1) as u32);
        }
    }
    let horizon_s = rng.range(1, 20) as f64;
    let requests = sets
        .into_iter()
        .enumerate()
        .map(|(u, objects)| {
            let t = if at_horizon { horizon_s } else { horizon_s * (1.0 - rng.unit()) };
            ServiceRequest::new(u as u32, t, objects).unwrap()
        })
        .collect();
    Scenario { catalog, requests, horizon_s }
}
