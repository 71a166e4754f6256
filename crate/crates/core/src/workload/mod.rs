//! Zipf-popular catalogs and seeded request traces.
//!
//! Object id `i` has popularity rank `i + 1`, so id 0 is the most popular.
//!
//! Traces come from ChaCha8 (`rand_chacha::ChaCha8Rng`). Each user draws
//! from its own stream of the generator seeded with `TraceConfig::seed`:
//! stream number = user id. A user's requests therefore do not depend on
//! how many other users the trace has, and the first `K` users of a trace
//! with more users are the same as a `K`-user trace with the same seed.
//!
//! A uniform draw is `(next_u64 >> 11) × 2^-53` in `[0, 1)`. Per request the
//! generator first draws the request time `a + (T − a) × (1 − u)` in
//! `(a, T]`, where `a = earliest_request_s` (0 by default), then the objects
//! in order by inverse-CDF sampling without replacement.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::catalog::{Catalog, CatalogError, ContentObject, ServiceRequest};
use crate::num::stable_sum;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WorkloadError {
    #[error("Zipf distribution needs at least one item")]
    ZeroItems,
    #[error("Zipf exponent must be finite and non-negative, got {0}")]
    BadExponent(f64),
    #[error("{requested} objects per request exceed the {available} in the catalog")]
    TooFewObjects { requested: usize, available: usize },
    #[error("catalog has {catalog} objects but the Zipf law has {items}")]
    CatalogMismatch { catalog: usize, items: usize },
    #[error("invalid trace configuration: {0}")]
    BadConfig(&'static str),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Zipf law over `L` ranked items with exponent `s`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZipfParams {
    pub exponent_s: f64,
    pub n_items: usize,
}

impl ZipfParams {
    pub fn validate(&self) -> Result<(), WorkloadError> {
        if self.n_items == 0 {
            return Err(WorkloadError::ZeroItems);
        }
        if !(self.exponent_s.is_finite() && self.exponent_s >= 0.0) {
            return Err(WorkloadError::BadExponent(self.exponent_s));
        }
        Ok(())
    }
}

/// Shape of a generated trace.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceConfig {
    pub n_users: usize,
    pub horizon_s: f64,
    pub requests_per_user: usize,
    pub objects_per_request: usize,
    pub seed: u64,
    /// Request times are drawn from `(earliest_request_s, horizon_s]`.
    #[cfg_attr(feature = "serde", serde(default))]
    pub earliest_request_s: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            n_users: 1,
            horizon_s: 1.0,
            requests_per_user: 1,
            objects_per_request: 1,
            seed: 0,
            earliest_request_s: 0.0,
        }
    }
}

impl TraceConfig {
    pub fn validate(&self) -> Result<(), WorkloadError> {
        if self.n_users == 0 || self.n_users > u32::MAX as usize {
            return Err(WorkloadError::BadConfig("user count must lie in 1..=2^32-1"));
        }
        if !(self.horizon_s.is_finite() && self.horizon_s > 0.0) {
            return Err(WorkloadError::BadConfig("horizon must be positive"));
        }
        if !(self.earliest_request_s >= 0.0 && self.earliest_request_s < self.horizon_s) {
            return Err(WorkloadError::BadConfig("earliest request time must lie in [0, T)"));
        }
        if self.requests_per_user == 0 {
            return Err(WorkloadError::BadConfig("requests per user must be positive"));
        }
        if self.objects_per_request == 0 {
            return Err(WorkloadError::BadConfig("objects per request must be positive"));
        }
        Ok(())
    }
}

/// `p_i ∝ 1 / i^s` for ranks `i = 1..=L`, most popular first.
pub fn zipf_pmf(params: ZipfParams) -> Result<Vec<f64>, WorkloadError> {
    params.validate()?;
    let weights: Vec<f64> = (1..=params.n_items)
        .map(|i| 1.0 / libm::pow(i as f64, params.exponent_s))
        .collect();
    let total = stable_sum(weights.iter().copied());
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Catalog of `n_items` objects of `size_bits` bits each.
pub fn generate_catalog(n_items: usize, size_bits: u64) -> Result<Catalog, WorkloadError> {
    if n_items == 0 {
        return Err(WorkloadError::ZeroItems);
    }
    let objects = (0..n_items as u32).map(|id| ContentObject { id, size_bits }).collect();
    Ok(Catalog::new(objects)?)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Running cumulative weights for inverse-CDF sampling.
struct Sampler {
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl Sampler {
    fn new(pmf: Vec<f64>) -> Self {
        let mut acc = 0.0;
        let cdf = pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { pmf, cdf }
    }

    fn first(&self, u: f64) -> usize {
        let target = u * self.cdf[self.cdf.len() - 1];
        self.cdf.partition_point(|&c| c <= target).min(self.pmf.len() - 1)
    }

    /// Draw among the items not in `taken`.
    fn next(&self, u: f64, taken: &[usize]) -> usize {
        let remaining: f64 = self.cdf[self.cdf.len() - 1] - taken.iter().map(|&i| self.pmf[i]).sum::<f64>();
        let target = u * remaining;
        let mut acc = 0.0;
        let mut last = None;
        for (i, &p) in self.pmf.iter().enumerate() {
            if taken.contains(&i) {
                continue;
            }
            acc += p;
            last = Some(i);
            if acc > target {
                return i;
            }
        }
        last.expect("fewer objects per request than items")
    }
}

/// Seeded request trace; see the module docs for the generator contract.
///
/// Requests are ordered by user, then by draw order within the user.
pub fn generate_trace(
    catalog: &Catalog,
    params: ZipfParams,
    cfg: &TraceConfig,
) -> Result<Vec<ServiceRequest>, WorkloadError> {
    let pmf = zipf_pmf(params)?;
    cfg.validate()?;
    if catalog.len() != params.n_items {
        return Err(WorkloadError::CatalogMismatch { catalog: catalog.len(), items: params.n_items });
    }
    if cfg.objects_per_request > params.n_items {
        return Err(WorkloadError::TooFewObjects {
            requested: cfg.objects_per_request,
            available: params.n_items,
        });
    }
    let sampler = Sampler::new(pmf);
    let mut out = Vec::with_capacity(cfg.n_users * cfg.requests_per_user);
    let mut taken = Vec::with_capacity(cfg.objects_per_request);
    for user in 0..cfg.n_users as u32 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(u64::from(user));
        for _ in 0..cfg.requests_per_user {
            let a = cfg.earliest_request_s;
            let time = (a + (cfg.horizon_s - a) * (1.0 - uniform(&mut rng))).min(cfg.horizon_s);
            taken.clear();
            taken.push(sampler.first(uniform(&mut rng)));
            while taken.len() < cfg.objects_per_request {
                let u = uniform(&mut rng);
                taken.push(sampler.next(u, &taken));
            }
            let ids = taken.iter().map(|&i| i as u32).collect();
            out.push(ServiceRequest::new(user, time, ids)?);
        }
    }
    Ok(out)
}

/// Fraction of requested objects that are each catalog id.
///
/// Returns all zeros for an empty trace.
pub fn empirical_popularity(requests: &[ServiceRequest], n_items: usize) -> Vec<f64> {
    let mut counts = alloc::vec![0u64; n_items];
    for r in requests {
        for &o in r.object_ids() {
            if let Some(c) = counts.get_mut(o as usize) {
                *c += 1;
            }
        }
    }
    let total: u64 = counts.iter().sum();
    counts
        .into_iter()
        .map(|c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
        .collect()
}
