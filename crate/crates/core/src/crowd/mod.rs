//! Matching content-distribution tasks of a content provider (OCP) to the
//! service offers of network providers (NSPs).
//!
//! Each task goes to at most one offer and each offer serves at most one
//! task. An offer covers a task when it has at least the resources the task
//! needs, costs no more than the task budget, carries the task's object (or
//! any object), and provides every management tag the task prefers.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

mod exact;
mod greedy;
mod negotiate;

pub use exact::match_exact;
pub use greedy::match_greedy;
pub use negotiate::{negotiate, Message, Snapshot, WithdrawTarget};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrowdError {
    #[error("task {task_id}: {reason}")]
    InvalidTask { task_id: u32, reason: &'static str },
    #[error("offer {offer_id}: {reason}")]
    InvalidOffer { offer_id: u32, reason: &'static str },
    #[error("task id {0} appears more than once")]
    DuplicateTask(u32),
    #[error("offer id {0} appears more than once")]
    DuplicateOffer(u32),
    #[error("line {line}: {reason}")]
    MalformedMessage { line: usize, reason: &'static str },
    #[error("assignment is invalid: {0}")]
    InvalidAssignment(String),
}

/// One object-distribution subtask announced by the OCP.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaskProfile {
    pub task_id: u32,
    pub object_id: u32,
    pub resource_needed: f64,
    pub budget: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub preferred_mgmt: BTreeSet<String>,
}

/// Service level an NSP offers.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SlaOffer {
    pub offer_id: u32,
    pub nsp_id: u32,
    /// `None` serves any object.
    #[cfg_attr(feature = "serde", serde(default))]
    pub object_id: Option<u32>,
    pub resources: f64,
    pub expense: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub mgmt: BTreeSet<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssignedPair {
    pub task_id: u32,
    pub offer_id: u32,
}

/// One-to-one matching, pairs sorted by task id.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Assignment {
    pub pairs: Vec<AssignedPair>,
    pub total_expense: f64,
}

impl Assignment {
    pub fn coverage(&self) -> usize {
        self.pairs.len()
    }

    pub(crate) fn from_pairs(mut pairs: Vec<(usize, usize)>, tasks: &[TaskProfile], offers: &[SlaOffer]) -> Self {
        pairs.sort_by_key(|&(t, _)| tasks[t].task_id);
        Self {
            total_expense: pairs.iter().map(|&(_, o)| offers[o].expense).sum(),
            pairs: pairs
                .into_iter()
                .map(|(t, o)| AssignedPair { task_id: tasks[t].task_id, offer_id: offers[o].offer_id })
                .collect(),
        }
    }
}

impl TaskProfile {
    pub fn validate(&self) -> Result<(), CrowdError> {
        let err = |reason| Err(CrowdError::InvalidTask { task_id: self.task_id, reason });
        if !(self.resource_needed.is_finite() && self.resource_needed > 0.0) {
            return err("resource_needed must be positive");
        }
        if !(self.budget.is_finite() && self.budget >= 0.0) {
            return err("budget must be non-negative");
        }
        Ok(())
    }
}

impl SlaOffer {
    pub fn validate(&self) -> Result<(), CrowdError> {
        let err = |reason| Err(CrowdError::InvalidOffer { offer_id: self.offer_id, reason });
        if !(self.resources.is_finite() && self.resources > 0.0) {
            return err("resources must be positive");
        }
        if !(self.expense.is_finite() && self.expense >= 0.0) {
            return err("expense must be non-negative");
        }
        Ok(())
    }
}

/// Whether `offer` may serve `task`.
pub fn compatible(task: &TaskProfile, offer: &SlaOffer) -> bool {
    offer.resources >= task.resource_needed
        && offer.expense <= task.budget
        && offer.object_id.is_none_or(|o| o == task.object_id)
        && task.preferred_mgmt.is_subset(&offer.mgmt)
}

/// Checks field invariants and id uniqueness of a matching instance.
pub fn validate_instance(tasks: &[TaskProfile], offers: &[SlaOffer]) -> Result<(), CrowdError> {
    let mut seen = BTreeSet::new();
    for t in tasks {
        t.validate()?;
        if !seen.insert(t.task_id) {
            return Err(CrowdError::DuplicateTask(t.task_id));
        }
    }
    seen.clear();
    for o in offers {
        o.validate()?;
        if !seen.insert(o.offer_id) {
            return Err(CrowdError::DuplicateOffer(o.offer_id));
        }
    }
    Ok(())
}

/// Re-derives every constraint of `assignment` from the raw instance.
pub fn validate_assignment(
    tasks: &[TaskProfile],
    offers: &[SlaOffer],
    assignment: &Assignment,
) -> Result<(), CrowdError> {
    use alloc::format;
    let bad = |msg: String| Err(CrowdError::InvalidAssignment(msg));
    let (mut used_tasks, mut used_offers) = (BTreeSet::new(), BTreeSet::new());
    let mut total = 0.0;
    for p in &assignment.pairs {
        let Some(task) = tasks.iter().find(|t| t.task_id == p.task_id) else {
            return bad(format!("unknown task {}", p.task_id));
        };
        let Some(offer) = offers.iter().find(|o| o.offer_id == p.offer_id) else {
            return bad(format!("unknown offer {}", p.offer_id));
        };
        if !used_tasks.insert(p.task_id) {
            return bad(format!("task {} assigned twice", p.task_id));
        }
        if !used_offers.insert(p.offer_id) {
            return bad(format!("offer {} used twice", p.offer_id));
        }
        if !compatible(task, offer) {
            return bad(format!("offer {} does not cover task {}", p.offer_id, p.task_id));
        }
        total += offer.expense;
    }
    if (total - assignment.total_expense).abs() > 1e-9 * total.abs().max(1.0) {
        return bad(format!("total expense {} differs from {}", assignment.total_expense, total));
    }
    Ok(())
}
