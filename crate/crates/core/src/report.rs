//! Check records shared between the library and the harness.

use serde::{Deserialize, Serialize};

/// Gate class of a check result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Probe of a known-approximate relation: the value is recorded and can
    /// never affect a run's exit status.
    Documented,
}

/// One named check with its measured value and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Leading block the comparison was evaluated on (matrix checks only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub status: CheckStatus,
}

impl CheckRecord {
    /// Gate `value` against `tolerance`.
    pub fn gated(
        name: impl Into<String>,
        block: Option<usize>,
        value: f64,
        tolerance: f64,
    ) -> Self {
        let status = if value.is_finite() && value <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        Self {
            name: name.into(),
            block,
            value,
            tolerance: Some(tolerance),
            status,
        }
    }

    /// Record a value without gating.
    pub fn documented(name: impl Into<String>, block: Option<usize>, value: f64) -> Self {
        Self {
            name: name.into(),
            block,
            value,
            tolerance: None,
            status: CheckStatus::Documented,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}
