use alloc::collections::BTreeSet;

use super::{Catalog, CatalogError, ContentRateReport, ServiceRequest, WirelessBudget};

/// Content rate of a set of satisfied requests: `Σ |y_k| / (B × T)`.
///
/// Every listed request counts as delivered; the user set of the report is
/// exactly the users appearing in `satisfied`.
pub fn content_rate(
    satisfied: &[ServiceRequest],
    catalog: &Catalog,
    budget: &WirelessBudget,
) -> Result<ContentRateReport, CatalogError> {
    let mut delivered_bits = 0u64;
    for r in satisfied {
        delivered_bits += catalog.package_bits(r)?;
    }
    Ok(ContentRateReport {
        delivered_bits,
        content_rate: delivered_bits as f64 / budget.resource(),
        satisfied_users: satisfied.iter().map(|r| r.user_id).collect(),
        unsatisfied_users: BTreeSet::new(),
    })
}

fn check_horizon(horizon_s: f64) -> Result<(), CatalogError> {
    if horizon_s.is_finite() && horizon_s > 0.0 {
        Ok(())
    } else {
        Err(CatalogError::NonPositiveHorizon(horizon_s))
    }
}

/// Bandwidth (Hz at 1 b/s/Hz) needed to broadcast the whole catalog once
/// within the horizon: `Σ_l |x_l| / T`.
pub fn bandwidth_lower_bound(catalog: &Catalog, horizon_s: f64) -> Result<f64, CatalogError> {
    check_horizon(horizon_s)?;
    Ok(catalog.total_bits() as f64 / horizon_s)
}

/// Like [`bandwidth_lower_bound`] but over the objects somebody requested.
pub fn requested_lower_bound(
    requests: &[ServiceRequest],
    catalog: &Catalog,
    horizon_s: f64,
) -> Result<f64, CatalogError> {
    check_horizon(horizon_s)?;
    let mut wanted = BTreeSet::new();
    for r in requests {
        for &object in r.object_ids() {
            catalog
                .get(object)
                .ok_or(CatalogError::UnknownObjectId { user: r.user_id, object })?;
            wanted.insert(object);
        }
    }
    let bits: u64 = wanted.iter().filter_map(|&o| catalog.size_of(o)).sum();
    Ok(bits as f64 / horizon_s)
}

/// Bandwidth needed to unicast every package separately: `Σ_k |y_k| / T`.
pub fn bandwidth_upper_bound(
    requests: &[ServiceRequest],
    catalog: &Catalog,
    horizon_s: f64,
) -> Result<f64, CatalogError> {
    check_horizon(horizon_s)?;
    let mut bits = 0u64;
    for r in requests {
        bits += catalog.package_bits(r)?;
    }
    Ok(bits as f64 / horizon_s)
}
