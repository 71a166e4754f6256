//! Scenario files and content-rate reports.
//!
//! ```json
//! {
//!   "catalog": [{"id": 0, "size_bits": 100}],
//!   "requests": [{"user_id": 0, "t_s": 10.0, "objects": [0]}],
//!   "budget": {"bandwidth_hz": 10.0, "horizon_s": 10.0, "link_rate": 1.0},
//!   "cache_bits": "inf"
//! }
//! ```

use std::io::Write;
use std::path::Path;

use contentcast_core::catalog::CatalogError;
use contentcast_core::{
    CacheSpec, Catalog, ContentObject, ContentRateReport, ServiceRequest, SimReport, WirelessBudget,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::files;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestRecord {
    pub user_id: u32,
    pub t_s: f64,
    pub objects: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetRecord {
    pub bandwidth_hz: f64,
    pub horizon_s: f64,
    #[serde(default = "unit_rate")]
    pub link_rate: f64,
}

fn unit_rate() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub catalog: Vec<ContentObject>,
    pub requests: Vec<RequestRecord>,
    pub budget: BudgetRecord,
    pub cache_bits: CacheSpec,
}

/// Validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub catalog: Catalog,
    pub requests: Vec<ServiceRequest>,
    pub budget: WirelessBudget,
    pub cache: CacheSpec,
}

impl ScenarioFile {
    pub fn into_scenario(self) -> std::result::Result<Scenario, CatalogError> {
        let catalog = Catalog::new(self.catalog)?;
        let requests = self
            .requests
            .into_iter()
            .map(|r| ServiceRequest::new(r.user_id, r.t_s, r.objects))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let budget = WirelessBudget::new(self.budget.bandwidth_hz, self.budget.horizon_s, self.budget.link_rate)?;
        contentcast_core::catalog::validate_requests(&requests, &catalog, Some(budget.horizon_s))?;
        Ok(Scenario { catalog, requests, budget, cache: self.cache_bits })
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let file: ScenarioFile = files::read_json(path)?;
        file.into_scenario()
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            catalog: self.catalog.objects().to_vec(),
            requests: self
                .requests
                .iter()
                .map(|r| RequestRecord { user_id: r.user_id, t_s: r.request_time_s, objects: r.object_ids().to_vec() })
                .collect(),
            budget: BudgetRecord {
                bandwidth_hz: self.budget.bandwidth_hz,
                horizon_s: self.budget.horizon_s,
                link_rate: self.budget.link_rate_bps_per_hz,
            },
            cache_bits: self.cache,
        }
    }

    pub fn n_users(&self) -> usize {
        contentcast_core::catalog::user_count(&self.requests)
    }
}

/// Outcome of one scenario run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario_id: String,
    /// Total bandwidth `B` the content rate is normalized by.
    pub bandwidth_hz: f64,
    pub horizon_s: f64,
    pub cache_bits: CacheSpec,
    pub delivered_bits: u64,
    pub content_rate: f64,
    pub n_satisfied: usize,
    pub n_users: usize,
    pub satisfied_users: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimReport>,
}

impl ScenarioReport {
    pub fn from_rate(id: &str, scenario: &Scenario, rate: &ContentRateReport) -> Self {
        Self {
            scenario_id: id.to_string(),
            bandwidth_hz: scenario.budget.bandwidth_hz,
            horizon_s: scenario.budget.horizon_s,
            cache_bits: scenario.cache,
            delivered_bits: rate.delivered_bits,
            content_rate: rate.content_rate,
            n_satisfied: rate.satisfied_users.len(),
            n_users: scenario.n_users(),
            satisfied_users: rate.satisfied_users.iter().copied().collect(),
            simulation: None,
        }
    }

    pub fn from_sim(id: &str, scenario: &Scenario, bandwidth_hz: f64, sim: SimReport, satisfied: Vec<u32>) -> Self {
        Self {
            scenario_id: id.to_string(),
            bandwidth_hz,
            horizon_s: scenario.budget.horizon_s,
            cache_bits: scenario.cache,
            delivered_bits: sim.delivered_bits,
            content_rate: sim.content_rate,
            n_satisfied: sim.satisfied,
            n_users: sim.n_users,
            satisfied_users: satisfied,
            simulation: Some(sim),
        }
    }
}

pub const REPORT_COLUMNS: [&str; 8] =
    ["scenario_id", "B", "T", "M", "delivered_bits", "content_rate", "n_satisfied", "n_users"];

/// `,`-separated, `\n`-terminated, header first.
pub fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_report_csv<W: Write>(rows: &[ScenarioReport], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    let fail = |e: csv::Error| CliError::Invariant(e.to_string());
    out.write_record(REPORT_COLUMNS).map_err(fail)?;
    for r in rows {
        out.write_record([
            r.scenario_id.clone(),
            r.bandwidth_hz.to_string(),
            r.horizon_s.to_string(),
            r.cache_bits.to_string(),
            r.delivered_bits.to_string(),
            r.content_rate.to_string(),
            r.n_satisfied.to_string(),
            r.n_users.to_string(),
        ])
        .map_err(fail)?;
    }
    out.flush().map_err(|e| CliError::Invariant(e.to_string()))
}
