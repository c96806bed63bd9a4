//! Report assembly: the attack × auth-mode matrix, the adjacency timeline,
//! and both renderings (JSON for machines, an aligned table for people).
//!
//! Rendering is deterministic: map-like data lives in ordered containers and
//! row/column order follows first appearance in the outcome list, so the same
//! runs always produce byte-identical report files.

use serde::{Deserialize, Serialize};

use crate::adversary::{AttackOutcome, Technique};
use crate::sim::TimelineEntry;
use crate::wire::RouterId;

/// A [`TimelineEntry`] tagged with the run it came from (matrix sweeps play
/// the same scenario many times).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTimelineEntry {
    pub run: String,
    pub time_us: u64,
    pub router: RouterId,
    pub neighbor: RouterId,
    pub state: String,
    pub cause: String,
}

impl RunTimelineEntry {
    pub fn new(run: &str, entry: &TimelineEntry) -> RunTimelineEntry {
        RunTimelineEntry {
            run: run.to_string(),
            time_us: entry.time_us,
            router: entry.router,
            neighbor: entry.neighbor,
            state: entry.state.clone(),
            cause: entry.cause.clone(),
        }
    }
}

/// Where one run's frames sit inside the concatenated capture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSlice {
    pub run: String,
    pub technique: Option<Technique>,
    pub capture_start: usize,
    pub capture_len: usize,
}

/// Everything a scenario run produced, minus the raw capture (which goes to
/// its own file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub seed: u64,
    pub duration_s: u64,
    /// Filled in by the caller once the capture has been written somewhere.
    pub capture_path: Option<String>,
    pub warnings: Vec<String>,
    pub runs: Vec<RunSlice>,
    pub outcomes: Vec<AttackOutcome>,
    pub adjacency_timeline: Vec<RunTimelineEntry>,
}

impl ScenarioReport {
    /// Machine rendering. Stable field and row order; trailing newline.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Auth-mode labels in first-appearance order.
    fn mode_columns(&self) -> Vec<String> {
        let mut modes = Vec::new();
        for outcome in &self.outcomes {
            if !modes.contains(&outcome.auth_mode) {
                modes.push(outcome.auth_mode.clone());
            }
        }
        modes
    }

    /// Techniques in first-appearance order.
    fn technique_rows(&self) -> Vec<Technique> {
        let mut techniques = Vec::new();
        for outcome in &self.outcomes {
            if !techniques.contains(&outcome.technique) {
                techniques.push(outcome.technique);
            }
        }
        techniques
    }

    fn cell(&self, technique: Technique, mode: &str) -> &'static str {
        match self
            .outcomes
            .iter()
            .find(|o| o.technique == technique && o.auth_mode == mode)
        {
            Some(o) if o.succeeded => "SUCCEEDED",
            Some(_) => "PREVENTED",
            None => "N-A",
        }
    }

    /// The attack × auth-mode matrix as an aligned text table.
    pub fn matrix_table(&self) -> String {
        let modes = self.mode_columns();
        let techniques = self.technique_rows();
        if modes.is_empty() || techniques.is_empty() {
            return String::from("(no attacks in scenario)\n");
        }
        let row_header = "attack";
        let first_width = techniques
            .iter()
            .map(|t| t.label().len())
            .chain([row_header.len()])
            .max()
            .unwrap_or(0);
        let widths: Vec<usize> = modes
            .iter()
            .map(|m| m.len().max("SUCCEEDED".len()))
            .collect();

        let mut out = String::new();
        out.push_str(&format!("{:<width$}", row_header, width = first_width));
        for (mode, w) in modes.iter().zip(&widths) {
            out.push_str(&format!(" | {:<width$}", mode, width = w));
        }
        out.push('\n');
        out.push_str(&"-".repeat(first_width));
        for w in &widths {
            out.push_str("-+-");
            out.push_str(&"-".repeat(*w));
        }
        out.push('\n');
        for technique in techniques {
            out.push_str(&format!("{:<width$}", technique.label(), width = first_width));
            for (mode, w) in modes.iter().zip(&widths) {
                out.push_str(&format!(" | {:<width$}", self.cell(technique, mode), width = w));
            }
            out.push('\n');
        }
        out
    }

    /// Human rendering: headline, warnings, matrix, per-outcome detail.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "scenario report (seed {}, duration {} s, {} run(s))\n",
            self.seed,
            self.duration_s,
            self.runs.len()
        ));
        if !self.warnings.is_empty() {
            out.push_str("warnings:\n");
            for warning in &self.warnings {
                out.push_str(&format!("  - {}\n", warning));
            }
        }
        out.push('\n');
        out.push_str(&self.matrix_table());
        if !self.outcomes.is_empty() {
            out.push('\n');
            out.push_str("details:\n");
            for outcome in &self.outcomes {
                out.push_str(&format!(
                    "  [{}] {}: {} — {}\n",
                    outcome.auth_mode,
                    outcome.technique.label(),
                    if outcome.succeeded { "SUCCEEDED" } else { "PREVENTED" },
                    outcome.detail
                ));
            }
        }
        out
    }
}
