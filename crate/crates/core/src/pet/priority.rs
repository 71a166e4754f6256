use alloc::vec::Vec;

use super::{PetError, PriorityProfile};
use crate::num::stable_sum;

/// Maps popularities to priorities, most popular first in line.
///
/// Distinct popularity levels are ranked densely from most to least popular
/// and `ρ` is interpolated linearly over the rank, from `rho_floor` for the
/// most popular level to 1 for the least popular. Equal popularities share a
/// rank. A single level (uniform popularity) maps to 1.
pub fn assign_priorities(popularities: &[f64], rho_floor: f64) -> Result<PriorityProfile, PetError> {
    if !(rho_floor > 0.0 && rho_floor <= 1.0) {
        return Err(PetError::BadFloor(rho_floor));
    }
    if popularities.is_empty() {
        return Err(PetError::BadDistribution("empty"));
    }
    if popularities.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(PetError::BadDistribution("negative or non-finite popularity"));
    }
    if (stable_sum(popularities.iter().copied()) - 1.0).abs() > 1e-9 {
        return Err(PetError::BadDistribution("popularities do not sum to 1"));
    }

    let mut levels: Vec<f64> = popularities.to_vec();
    levels.sort_unstable_by(|a, b| b.total_cmp(a));
    levels.dedup();
    let top_rank = levels.len() - 1;

    let rhos = popularities
        .iter()
        .map(|p| {
            if top_rank == 0 {
                return 1.0;
            }
            let rank = levels.iter().position(|l| l == p).expect("level present");
            if rank == top_rank {
                1.0
            } else {
                rho_floor + (1.0 - rho_floor) * rank as f64 / top_rank as f64
            }
        })
        .collect();
    PriorityProfile::new(rhos)
}
