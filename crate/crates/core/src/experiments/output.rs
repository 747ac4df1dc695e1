use std::fs;
use std::io::Write;
use std::path::Path;

use super::runner::{Manifest, ProcedureSummary, TrialRecord};
use super::ExperimentError;

pub const TRIAL_COLUMNS: [&str; 9] = [
    "trial",
    "procedure",
    "selected_id",
    "excess",
    "success",
    "f1_size",
    "f2_size",
    "fallback",
    "wall_ms",
];

const SUMMARY_COLUMNS: [&str; 10] = [
    "procedure",
    "trials",
    "failures",
    "failure_rate",
    "ci_low",
    "ci_high",
    "mean_excess",
    "median_excess",
    "fallbacks",
    "minimizer_in_f1",
];

/// 17 significant digits, enough to round-trip any f64.
fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn optional<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_trials_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<(), ExperimentError> {
    let mut rows: Vec<&TrialRecord> = records.iter().collect();
    rows.sort_by_key(|r| (r.trial, r.procedure));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRIAL_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            r.procedure.to_string(),
            r.selected_id.to_string(),
            float(r.excess),
            r.success.to_string(),
            optional(r.f1_size),
            optional(r.f2_size),
            r.fallback.to_string(),
            float(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(
    summary: &[ProcedureSummary],
    out: W,
) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_COLUMNS)?;
    for s in summary {
        w.write_record([
            s.procedure.to_string(),
            s.trials.to_string(),
            s.failures.to_string(),
            float(s.failure_rate),
            float(s.ci_low),
            float(s.ci_high),
            float(s.mean_excess),
            float(s.median_excess),
            s.fallbacks.to_string(),
            optional(s.minimizer_in_f1),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `trials.csv`, `summary.csv` and `manifest.json` into `dir`.
pub fn emit_results(
    dir: &Path,
    records: &[TrialRecord],
    summary: &[ProcedureSummary],
    manifest: &Manifest,
) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir)?;
    write_trials_csv(records, fs::File::create(dir.join("trials.csv"))?)?;
    write_summary_csv(summary, fs::File::create(dir.join("summary.csv"))?)?;
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    fs::write(dir.join("manifest.json"), text)?;
    Ok(())
}
