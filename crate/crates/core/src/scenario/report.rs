//! Result artifacts: summary CSV, JSON report and net-load plot data.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use super::{ExperimentReport, SuiteResult, SummaryRow};
use crate::dataio::format_timestamp;
use crate::error::{Error, Result};

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// `scenario,load_mape_pct,pv_rmse`, one row per scenario.
pub fn results_csv(summary: &[SummaryRow]) -> String {
    let mut s = String::from("scenario,load_mape_pct,pv_rmse\n");
    for row in summary {
        writeln!(s, "{},{:.4},{:.4}", row.scenario_id, row.load_mape_pct, row.pv_rmse).unwrap();
    }
    s
}

/// Human-readable table with the same columns.
pub fn results_table(summary: &[SummaryRow]) -> String {
    let mut s = String::new();
    writeln!(s, "{:<10} {:>10} {:>10} {:>5}", "scenario", "MAPE %", "RMSE", "runs").unwrap();
    for row in summary {
        writeln!(
            s,
            "{:<10} {:>10.2} {:>10.2} {:>5}",
            row.scenario_id, row.load_mape_pct, row.pv_rmse, row.runs
        )
        .unwrap();
    }
    s
}

pub fn report_json(report: &ExperimentReport) -> Value {
    json!({
        "scenario": report.scenario_id.as_str(),
        "domain": report.domain.as_str(),
        "model_seed": report.model_seed,
        "noise_seed": report.noise_seed,
        "load_mape_pct": report.load_mape_pct,
        "load_mape_excluded": report.load_mape_excluded,
        "pv_rmse": report.pv_rmse,
        "net_points": report.net_series.len(),
        "attacked_columns": report.attacked_columns,
        "attacked_index_counts": report.attack_counts.iter().map(|c| json!({
            "model": c.model,
            "column": c.column,
            "partition": c.partition.as_str(),
            "count": c.count,
        })).collect::<Vec<_>>(),
    })
}

/// Full suite report; `config` echoes the effective configuration.
pub fn suite_json(result: &SuiteResult, config: Value) -> Value {
    json!({
        "config": config,
        "summary": result.summary.iter().map(|r| json!({
            "scenario": r.scenario_id.as_str(),
            "load_mape_pct": r.load_mape_pct,
            "pv_rmse": r.pv_rmse,
            "runs": r.runs,
        })).collect::<Vec<_>>(),
        "reports": result.reports.iter().map(report_json).collect::<Vec<_>>(),
    })
}

/// Plot data comparing a clean run with an attacked one over the shared
/// net-load window:
/// `timestamp,actual_net,forecast_net_clean,forecast_net_attacked,temp_clean,temp_attacked`.
pub fn plot_csv(clean: &ExperimentReport, attacked: &ExperimentReport) -> String {
    let mut s = String::from(
        "timestamp,actual_net,forecast_net_clean,forecast_net_attacked,temp_clean,temp_attacked\n",
    );
    let mut j = 0;
    for p in &attacked.net_series {
        while j < clean.net_series.len() && clean.net_series[j].timestamp < p.timestamp {
            j += 1;
        }
        let Some(c) = clean.net_series.get(j).filter(|c| c.timestamp == p.timestamp) else {
            continue;
        };
        writeln!(
            s,
            "{},{},{},{},{},{}",
            format_timestamp(p.timestamp),
            p.actual_net,
            c.forecast_net,
            p.forecast_net,
            p.temp_clean,
            p.temp_attacked
        )
        .unwrap();
    }
    s
}

pub fn write_results_csv(path: &Path, summary: &[SummaryRow]) -> Result<()> {
    write_file(path, &results_csv(summary))
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    let body = serde_json::to_string_pretty(value).expect("json values serialize");
    write_file(path, &(body + "\n"))
}

pub fn write_plot_csv(path: &Path, clean: &ExperimentReport, attacked: &ExperimentReport) -> Result<()> {
    write_file(path, &plot_csv(clean, attacked))
}
