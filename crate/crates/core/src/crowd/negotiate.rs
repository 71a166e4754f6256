use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{CrowdError, SlaOffer, TaskProfile};

/// What a withdrawal removes. Exactly one field is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WithdrawTarget {
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub task_id: Option<u32>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub offer_id: Option<u32>,
}

/// One record of a negotiation log.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum Message {
    Task(TaskProfile),
    Offer(SlaOffer),
    Withdraw(WithdrawTarget),
}

/// Current tasks and offers, each sorted by id.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Snapshot {
    pub tasks: Vec<TaskProfile>,
    pub offers: Vec<SlaOffer>,
}

/// Folds a negotiation log into the current tasks and offers.
///
/// A task or offer replaces any earlier one with the same id. A withdrawal
/// removes the named task or offer; withdrawing an unknown id does nothing.
/// Errors carry the 1-based position of the offending message.
pub fn negotiate(log: &[Message]) -> Result<Snapshot, CrowdError> {
    let mut tasks = BTreeMap::new();
    let mut offers = BTreeMap::new();
    for (i, msg) in log.iter().enumerate() {
        let malformed = |reason| CrowdError::MalformedMessage { line: i + 1, reason };
        match msg {
            Message::Task(t) => {
                t.validate().map_err(|_| malformed("task fields out of range"))?;
                tasks.insert(t.task_id, t.clone());
            }
            Message::Offer(o) => {
                o.validate().map_err(|_| malformed("offer fields out of range"))?;
                offers.insert(o.offer_id, o.clone());
            }
            Message::Withdraw(WithdrawTarget { task_id: Some(t), offer_id: None }) => {
                tasks.remove(t);
            }
            Message::Withdraw(WithdrawTarget { task_id: None, offer_id: Some(o) }) => {
                offers.remove(o);
            }
            Message::Withdraw(_) => return Err(malformed("withdraw needs exactly one of task_id, offer_id")),
        }
    }
    Ok(Snapshot { tasks: tasks.into_values().collect(), offers: offers.into_values().collect() })
}
