//! Contents, service requests and the content-rate metric.
//!
//! A catalog holds `L` content objects with dense ids `0..L`. A service
//! request is the set of objects one user needs by its request time; its
//! package size is the sum of the object sizes. Content rate is the number of
//! package bits delivered on time per unit of wireless resource `B × T`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

mod achievable;
mod diversity;
mod rate;

pub use achievable::check_achievable;
pub use diversity::{build_diversity_matrix, DiversityMatrix};
pub use rate::{
    bandwidth_lower_bound, bandwidth_upper_bound, content_rate, requested_lower_bound,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("catalog is empty")]
    EmptyCatalog,
    #[error("object {0} has zero size")]
    ZeroSize(u32),
    #[error("object id {0} appears more than once")]
    DuplicateId(u32),
    #[error("object ids must be dense in [0, {len}); found {id}")]
    SparseIds { id: u32, len: usize },
    #[error("request of user {user} references unknown object {object}")]
    UnknownObjectId { user: u32, object: u32 },
    #[error("request of user {0} has no objects")]
    EmptyRequest(u32),
    #[error("request of user {user} lists object {object} twice")]
    DuplicateObject { user: u32, object: u32 },
    #[error("request time {time} of user {user} is not a positive finite number")]
    BadRequestTime { user: u32, time: f64 },
    #[error("request time {time} of user {user} is after the horizon {horizon}")]
    RequestAfterHorizon { user: u32, time: f64, horizon: f64 },
    #[error("user ids must be dense; user {0} has no request")]
    MissingUser(u32),
    #[error("horizon must be positive, got {0}")]
    NonPositiveHorizon(f64),
    #[error("invalid wireless budget: {0}")]
    BadBudget(&'static str),
}

/// A named content object `x_l` of `|x_l|` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContentObject {
    pub id: u32,
    pub size_bits: u64,
}

/// Validated list of content objects, indexed by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    objects: Vec<ContentObject>,
}

impl Catalog {
    /// Accepts objects in any order; ids must cover `0..L` exactly once.
    pub fn new(mut objects: Vec<ContentObject>) -> Result<Self, CatalogError> {
        if objects.is_empty() {
            return Err(CatalogError::EmptyCatalog);
        }
        objects.sort_unstable_by_key(|o| o.id);
        let len = objects.len();
        for (i, o) in objects.iter().enumerate() {
            if o.size_bits == 0 {
                return Err(CatalogError::ZeroSize(o.id));
            }
            if i > 0 && objects[i - 1].id == o.id {
                return Err(CatalogError::DuplicateId(o.id));
            }
            if o.id as usize != i {
                return Err(CatalogError::SparseIds { id: o.id, len });
            }
        }
        Ok(Self { objects })
    }

    /// Catalog of the given sizes with ids `0..sizes.len()`.
    pub fn from_sizes(sizes: &[u64]) -> Result<Self, CatalogError> {
        Self::new(
            sizes
                .iter()
                .enumerate()
                .map(|(i, &size_bits)| ContentObject { id: i as u32, size_bits })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[ContentObject] {
        &self.objects
    }

    pub fn get(&self, id: u32) -> Option<&ContentObject> {
        self.objects.get(id as usize)
    }

    pub fn size_of(&self, id: u32) -> Option<u64> {
        self.get(id).map(|o| o.size_bits)
    }

    pub fn total_bits(&self) -> u64 {
        self.objects.iter().map(|o| o.size_bits).sum()
    }

    /// `|y_k|`: sum of the sizes of the requested objects.
    pub fn package_bits(&self, request: &ServiceRequest) -> Result<u64, CatalogError> {
        request
            .object_ids()
            .iter()
            .map(|&object| {
                self.size_of(object)
                    .ok_or(CatalogError::UnknownObjectId { user: request.user_id, object })
            })
            .sum()
    }
}

/// Demand `y_k(t_k)` of one user: a set of objects due at `t_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceRequest {
    pub user_id: u32,
    pub request_time_s: f64,
    object_ids: Vec<u32>,
}

impl ServiceRequest {
    /// Object ids are stored sorted; duplicates are rejected.
    pub fn new(user_id: u32, request_time_s: f64, mut object_ids: Vec<u32>) -> Result<Self, CatalogError> {
        if object_ids.is_empty() {
            return Err(CatalogError::EmptyRequest(user_id));
        }
        if !(request_time_s.is_finite() && request_time_s > 0.0) {
            return Err(CatalogError::BadRequestTime { user: user_id, time: request_time_s });
        }
        object_ids.sort_unstable();
        if let Some(w) = object_ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(CatalogError::DuplicateObject { user: user_id, object: w[0] });
        }
        Ok(Self { user_id, request_time_s, object_ids })
    }

    pub fn object_ids(&self) -> &[u32] {
        &self.object_ids
    }

    pub fn contains(&self, object: u32) -> bool {
        self.object_ids.binary_search(&object).is_ok()
    }
}

/// Number of users `K`, taken as one past the largest user id.
pub fn user_count(requests: &[ServiceRequest]) -> usize {
    requests.iter().map(|r| r.user_id as usize + 1).max().unwrap_or(0)
}

/// Checks that `requests` fit `catalog`, that every user in `0..K` has at
/// least one request and, when given, that no request is due after
/// `horizon_s`.
pub fn validate_requests(
    requests: &[ServiceRequest],
    catalog: &Catalog,
    horizon_s: Option<f64>,
) -> Result<(), CatalogError> {
    let mut present = alloc::vec![false; user_count(requests)];
    for r in requests {
        for &object in r.object_ids() {
            if catalog.get(object).is_none() {
                return Err(CatalogError::UnknownObjectId { user: r.user_id, object });
            }
        }
        if let Some(h) = horizon_s {
            if r.request_time_s > h {
                return Err(CatalogError::RequestAfterHorizon {
                    user: r.user_id,
                    time: r.request_time_s,
                    horizon: h,
                });
            }
        }
        present[r.user_id as usize] = true;
    }
    match present.iter().position(|p| !p) {
        Some(missing) => Err(CatalogError::MissingUser(missing as u32)),
        None => Ok(()),
    }
}

/// Shared wireless resource `B × T` at a fixed link rate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WirelessBudget {
    pub bandwidth_hz: f64,
    pub horizon_s: f64,
    pub link_rate_bps_per_hz: f64,
}

impl WirelessBudget {
    pub fn new(bandwidth_hz: f64, horizon_s: f64, link_rate_bps_per_hz: f64) -> Result<Self, CatalogError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(bandwidth_hz) {
            return Err(CatalogError::BadBudget("bandwidth must be positive"));
        }
        if !positive(horizon_s) {
            return Err(CatalogError::NonPositiveHorizon(horizon_s));
        }
        if !positive(link_rate_bps_per_hz) {
            return Err(CatalogError::BadBudget("link rate must be positive"));
        }
        Ok(Self { bandwidth_hz, horizon_s, link_rate_bps_per_hz })
    }

    /// Budget at the default link rate of 1 b/s/Hz.
    pub fn unit_rate(bandwidth_hz: f64, horizon_s: f64) -> Result<Self, CatalogError> {
        Self::new(bandwidth_hz, horizon_s, 1.0)
    }

    /// `B × T`, the denominator of the content rate.
    pub fn resource(&self) -> f64 {
        self.bandwidth_hz * self.horizon_s
    }
}

/// Per-user cache capacity `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CacheSpec {
    Finite(u64),
    Infinite,
}

impl CacheSpec {
    pub const NONE: CacheSpec = CacheSpec::Finite(0);

    pub fn capacity_bits(&self) -> Option<u64> {
        match self {
            CacheSpec::Finite(b) => Some(*b),
            CacheSpec::Infinite => None,
        }
    }

    pub fn holds(&self, bits: u64) -> bool {
        match self {
            CacheSpec::Finite(cap) => bits <= *cap,
            CacheSpec::Infinite => true,
        }
    }
}

impl core::fmt::Display for CacheSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CacheSpec::Finite(b) => write!(f, "{b}"),
            CacheSpec::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for CacheSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CacheSpec::Finite(b) => s.serialize_u64(*b),
            CacheSpec::Infinite => s.serialize_str("inf"),
        }
    }
}

// Accepts a non-negative integer or the string "inf".
#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for CacheSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl serde::de::Visitor<'_> for Visitor {
            type Value = CacheSpec;

            fn expecting(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<CacheSpec, E> {
                Ok(CacheSpec::Finite(v))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<CacheSpec, E> {
                u64::try_from(v)
                    .map(CacheSpec::Finite)
                    .map_err(|_| E::custom("cache size must be non-negative"))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<CacheSpec, E> {
                if v == "inf" {
                    Ok(CacheSpec::Infinite)
                } else {
                    Err(E::invalid_value(serde::de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(Visitor)
    }
}

/// Outcome of judging a delivery against the content-rate definition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ContentRateReport {
    /// `Σ |y_k|` over satisfied users.
    pub delivered_bits: u64,
    /// `delivered_bits / (B × T)`, in b/s/Hz.
    pub content_rate: f64,
    pub satisfied_users: BTreeSet<u32>,
    pub unsatisfied_users: BTreeSet<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::vec;

    #[test]
    fn catalog_validation() {
        assert_eq!(Catalog::new(vec![]), Err(CatalogError::EmptyCatalog));
        let o = |id, size_bits| ContentObject { id, size_bits };
        assert_eq!(Catalog::new(vec![o(0, 0)]), Err(CatalogError::ZeroSize(0)));
        assert_eq!(Catalog::new(vec![o(0, 1), o(0, 2)]), Err(CatalogError::DuplicateId(0)));
        assert_eq!(Catalog::new(vec![o(0, 1), o(2, 2)]), Err(CatalogError::SparseIds { id: 2, len: 2 }));
        let c = Catalog::new(vec![o(1, 5), o(0, 3)]).unwrap();
        assert_eq!(c.size_of(1), Some(5));
        assert_eq!(c.total_bits(), 8);
    }

    #[test]
    fn request_validation() {
        assert_eq!(ServiceRequest::new(0, 1.0, vec![]), Err(CatalogError::EmptyRequest(0)));
        assert_eq!(
            ServiceRequest::new(2, 1.0, vec![3, 1, 3]),
            Err(CatalogError::DuplicateObject { user: 2, object: 3 })
        );
        assert!(ServiceRequest::new(0, 0.0, vec![1]).is_err());
        assert!(ServiceRequest::new(0, f64::NAN, vec![1]).is_err());
        let r = ServiceRequest::new(0, 1.0, vec![4, 2]).unwrap();
        assert_eq!(r.object_ids(), &[2, 4]);
    }

    #[test]
    fn request_set_checks() {
        let cat = Catalog::from_sizes(&[10, 20]).unwrap();
        let r0 = ServiceRequest::new(0, 5.0, vec![0]).unwrap();
        let r2 = ServiceRequest::new(2, 5.0, vec![1]).unwrap();
        assert_eq!(validate_requests(&[r0.clone(), r2.clone()], &cat, None), Err(CatalogError::MissingUser(1)));
        let bad = ServiceRequest::new(0, 5.0, vec![7]).unwrap();
        assert_eq!(
            validate_requests(&[bad], &cat, None),
            Err(CatalogError::UnknownObjectId { user: 0, object: 7 })
        );
        assert!(matches!(
            validate_requests(core::slice::from_ref(&r0), &cat, Some(4.0)),
            Err(CatalogError::RequestAfterHorizon { .. })
        ));
        assert_eq!(validate_requests(&[r0], &cat, Some(5.0)), Ok(()));
    }

    #[test]
    fn budget_and_cache() {
        assert!(WirelessBudget::unit_rate(0.0, 1.0).is_err());
        assert_eq!(WirelessBudget::unit_rate(1.0, -1.0), Err(CatalogError::NonPositiveHorizon(-1.0)));
        assert!(CacheSpec::Finite(100) < CacheSpec::Infinite);
        assert!(CacheSpec::Infinite.holds(u64::MAX));
        assert!(!CacheSpec::NONE.holds(1));
    }
}
