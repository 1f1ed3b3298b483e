//! Parameter sweeps over a scenario template.
//!
//! A grid specification has the form `path.to.field=v1,v2,v3`; several
//! specifications form a cartesian product. Every grid point is validated
//! before anything runs, so a single malformed combination aborts the whole
//! sweep with a config error.

use serde::Serialize;
use serde_json::json;

use crate::runner::{run_scenario, RunError};
use crate::scenario::{parse_scenario, ConfigError, Scenario};
use tdho_core::report::CheckRecord;

#[derive(Debug, Clone)]
pub struct GridAxis {
    pub path: Vec<String>,
    pub values: Vec<toml::Value>,
}

/// Parse `path=v1,v2,...`.
pub fn parse_grid_spec(spec: &str) -> Result<GridAxis, ConfigError> {
    let config_err = |message: String| ConfigError {
        field: format!("--grid {spec}"),
        message,
    };
    let (path, values) = spec
        .split_once('=')
        .ok_or_else(|| config_err("expected `path=v1,v2,...`".to_string()))?;
    let path: Vec<String> = path
        .trim()
        .split('.')
        .map(|s| s.trim().to_string())
        .collect();
    if path.iter().any(|s| s.is_empty()) {
        return Err(config_err("empty path segment".to_string()));
    }
    let values = values
        .split(',')
        .map(|v| {
            let v = v.trim();
            if v.is_empty() {
                return Err(config_err("empty grid value".to_string()));
            }
            if let Ok(i) = v.parse::<i64>() {
                Ok(toml::Value::Integer(i))
            } else if let Ok(f) = v.parse::<f64>() {
                Ok(toml::Value::Float(f))
            } else {
                Ok(toml::Value::String(v.to_string()))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(config_err("grid must list at least one value".to_string()));
    }
    Ok(GridAxis { path, values })
}

fn apply_override(
    doc: &mut toml::Value,
    path: &[String],
    value: &toml::Value,
) -> Result<(), ConfigError> {
    let mut node = doc;
    for segment in &path[..path.len() - 1] {
        node = node
            .as_table_mut()
            .and_then(|t| t.get_mut(segment.as_str()))
            .ok_or_else(|| ConfigError {
                field: path.join("."),
                message: format!("path segment `{segment}` not found in the template"),
            })?;
    }
    let table = node.as_table_mut().ok_or_else(|| ConfigError {
        field: path.join("."),
        message: "path does not lead to a table".to_string(),
    })?;
    table.insert(path.last().unwrap().clone(), value.clone());
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRun {
    pub overrides: serde_json::Value,
    pub status: String,
    /// The gated check with the least margin.
    pub worst_gated: Option<CheckRecord>,
    /// Every check record of the run, for cross-run studies.
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub template: String,
    pub runs: Vec<SweepRun>,
    pub all_pass: bool,
}

pub enum SweepFailure {
    Config(ConfigError),
    Run(RunError),
}

/// Expand the grid, validate every scenario, then run them in order.
pub fn run_sweep(
    template_name: &str,
    template_text: &str,
    grid_specs: &[String],
) -> Result<SweepReport, SweepFailure> {
    if grid_specs.is_empty() {
        return Err(SweepFailure::Config(ConfigError {
            field: "--grid".to_string(),
            message: "sweep needs at least one grid specification".to_string(),
        }));
    }
    let axes = grid_specs
        .iter()
        .map(|s| parse_grid_spec(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(SweepFailure::Config)?;
    let template: toml::Value = toml::from_str(template_text).map_err(|e| {
        SweepFailure::Config(ConfigError {
            field: "<document>".to_string(),
            message: e.to_string(),
        })
    })?;

    // Cartesian product of the axes.
    let mut combos: Vec<Vec<usize>> = vec![vec![]];
    for axis in &axes {
        let mut next = Vec::with_capacity(combos.len() * axis.values.len());
        for combo in &combos {
            for i in 0..axis.values.len() {
                let mut c = combo.clone();
                c.push(i);
                next.push(c);
            }
        }
        combos = next;
    }

    // Validate everything before running anything.
    let mut prepared: Vec<(serde_json::Value, Scenario)> = Vec::with_capacity(combos.len());
    for combo in &combos {
        let mut doc = template.clone();
        let mut overrides = serde_json::Map::new();
        for (axis, &value_idx) in axes.iter().zip(combo.iter()) {
            let value = &axis.values[value_idx];
            apply_override(&mut doc, &axis.path, value).map_err(SweepFailure::Config)?;
            overrides.insert(axis.path.join("."), json!(value.to_string()));
        }
        let text = toml::to_string(&doc).map_err(|e| {
            SweepFailure::Config(ConfigError {
                field: "<template>".to_string(),
                message: e.to_string(),
            })
        })?;
        let scenario = parse_scenario(&text).map_err(SweepFailure::Config)?;
        prepared.push((serde_json::Value::Object(overrides), scenario));
    }

    let mut runs = Vec::with_capacity(prepared.len());
    let mut all_pass = true;
    for (overrides, scenario) in prepared {
        let outcome = run_scenario(&scenario).map_err(SweepFailure::Run)?;
        let worst_gated = outcome
            .report
            .checks
            .iter()
            .filter(|c| c.tolerance.is_some())
            .max_by(|a, b| {
                let margin =
                    |c: &CheckRecord| c.value / c.tolerance.unwrap().max(f64::MIN_POSITIVE);
                margin(a)
                    .partial_cmp(&margin(b))
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .cloned();
        all_pass &= outcome.report.passed();
        runs.push(SweepRun {
            overrides,
            status: outcome.report.status.clone(),
            worst_gated,
            checks: outcome.report.checks.clone(),
        });
    }

    Ok(SweepReport {
        schema_version: 1,
        template: template_name.to_string(),
        runs,
        all_pass,
    })
}
