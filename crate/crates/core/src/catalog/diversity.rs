use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{validate_requests, Catalog, CatalogError, ServiceRequest, user_count};

/// `K × L` map of which user wants which object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiversityMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl DiversityMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, user: usize, object: usize) -> bool {
        self.bits[user * self.cols + object]
    }

    pub fn row(&self, user: usize) -> &[bool] {
        &self.bits[user * self.cols..(user + 1) * self.cols]
    }

    pub fn row_sum(&self, user: usize) -> usize {
        self.row(user).iter().filter(|b| **b).count()
    }

    /// Number of users interested in each object.
    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|l| (0..self.rows).filter(|&k| self.get(k, l)).count())
            .collect()
    }

    /// The object set each row stands for.
    pub fn request_sets(&self) -> Vec<BTreeSet<u32>> {
        (0..self.rows)
            .map(|k| {
                self.row(k)
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| **b)
                    .map(|(l, _)| l as u32)
                    .collect()
            })
            .collect()
    }

    /// Whether some object is wanted by two or more users.
    pub fn has_shared_object(&self) -> bool {
        self.column_sums().iter().any(|&c| c >= 2)
    }
}

/// Builds `Z` with `Z[k][l] = 1` iff some request of user `k` contains `l`.
pub fn build_diversity_matrix(
    requests: &[ServiceRequest],
    catalog: &Catalog,
) -> Result<DiversityMatrix, CatalogError> {
    validate_requests(requests, catalog, None)?;
    let rows = user_count(requests);
    let cols = catalog.len();
    let mut bits = vec![false; rows * cols];
    for r in requests {
        for &l in r.object_ids() {
            bits[r.user_id as usize * cols + l as usize] = true;
        }
    }
    Ok(DiversityMatrix { rows, cols, bits })
}
