//! Machine-checkable run reports.

use serde::Serialize;

/// Result of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: String,
    /// The law being checked, in plain words.
    pub property: String,
    pub measured: f64,
    pub threshold: f64,
    /// `<=` or `>=`: how `measured` relates to `threshold` on a pass.
    pub comparison: &'static str,
    pub status: CriterionStatus,
    pub pass: bool,
    pub detail: String,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionStatus {
    Pass,
    Fail,
    Skipped,
}

impl CriterionResult {
    pub fn evaluate(
        id: &str,
        property: &str,
        measured: f64,
        threshold: f64,
        comparison: &'static str,
        detail: String,
        runtime_ms: u128,
    ) -> Self {
        let pass = match comparison {
            "<=" => measured <= threshold,
            ">=" => measured >= threshold,
            other => panic!("unknown comparison {other}"),
        };
        CriterionResult {
            id: id.into(),
            property: property.into(),
            measured,
            threshold,
            comparison,
            status: if pass {
                CriterionStatus::Pass
            } else {
                CriterionStatus::Fail
            },
            pass,
            detail,
            runtime_ms,
        }
    }

    pub fn skipped(id: &str, property: &str, reason: String) -> Self {
        CriterionResult {
            id: id.into(),
            property: property.into(),
            measured: f64::NAN,
            threshold: f64::NAN,
            comparison: "<=",
            status: CriterionStatus::Skipped,
            pass: true,
            detail: reason,
            runtime_ms: 0,
        }
    }

    pub fn summary_line(&self) -> String {
        match self.status {
            CriterionStatus::Skipped => {
                format!("[acceptance] {:>3} {} — SKIPPED ({})", self.id, self.property, self.detail)
            }
            _ => format!(
                "[acceptance] {:>3} {} — {} (measured {:.6} {} {:.6}, {} ms)",
                self.id,
                self.property,
                if self.pass { "PASS" } else { "FAIL" },
                self.measured,
                self.comparison,
                self.threshold,
                self.runtime_ms
            ),
        }
    }
}

/// Whole-run report emitted as a single JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub wall_clock_ms: u128,
}

impl RunReport {
    pub fn new(command: String, config: serde_json::Value, seed: u64) -> Self {
        RunReport {
            command,
            config,
            seed,
            criteria: Vec::new(),
            passed: 0,
            failed: 0,
            skipped: 0,
            wall_clock_ms: 0,
        }
    }

    pub fn push(&mut self, result: CriterionResult) {
        match result.status {
            CriterionStatus::Pass => self.passed += 1,
            CriterionStatus::Fail => self.failed += 1,
            CriterionStatus::Skipped => self.skipped += 1,
        }
        self.criteria.push(result);
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}
