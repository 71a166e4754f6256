//! Crowdsourcing inputs and outputs.
//!
//! Tasks and offers are JSON arrays. A negotiation log is JSON Lines, one
//! [`Message`] per line; blank lines are skipped.

use std::path::Path;

use contentcast_core::crowd::{self, Assignment, CrowdError, Message, SlaOffer, Snapshot, TaskProfile};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::files;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchReport {
    pub solver: &'static str,
    pub coverage: usize,
    pub n_tasks: usize,
    #[serde(flatten)]
    pub assignment: Assignment,
}

pub fn solve(tasks: &[TaskProfile], offers: &[SlaOffer], solver: Solver) -> Result<MatchReport> {
    let (name, assignment) = match solver {
        Solver::Exact => ("exact", crowd::match_exact(tasks, offers)?),
        Solver::Greedy => ("greedy", crowd::match_greedy(tasks, offers)?),
    };
    crowd::validate_assignment(tasks, offers, &assignment).map_err(|e| CliError::Invariant(e.to_string()))?;
    Ok(MatchReport {
        solver: name,
        coverage: assignment.coverage(),
        n_tasks: tasks.len(),
        assignment,
    })
}

pub fn match_files(tasks: &Path, offers: &Path, solver: Solver) -> Result<MatchReport> {
    let tasks: Vec<TaskProfile> = files::read_json(tasks)?;
    let offers: Vec<SlaOffer> = files::read_json(offers)?;
    solve(&tasks, &offers, solver)
}

/// Parses a JSON Lines log. Error line numbers are physical lines of `text`.
pub fn parse_log(text: &str) -> Result<(Vec<Message>, Vec<usize>)> {
    let mut messages = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let msg: Message =
            serde_json::from_str(line).map_err(|e| CliError::config(format!("line {}: {e}", i + 1)))?;
        messages.push(msg);
        lines.push(i + 1);
    }
    Ok((messages, lines))
}

/// Folds the log at `path`; errors name the physical line.
pub fn negotiate_file(path: &Path) -> Result<Snapshot> {
    let text = files::read_text(path)?;
    let (messages, lines) = parse_log(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    crowd::negotiate(&messages).map_err(|e| match e {
        CrowdError::MalformedMessage { line, reason } => {
            CliError::config(format!("{}: line {}: {reason}", path.display(), lines[line - 1]))
        }
        other => other.into(),
    })
}
