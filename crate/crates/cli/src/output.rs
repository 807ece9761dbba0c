//! Report rendering: stdout table or JSON, plus files on disk.
//!
//! A run writes `<base>.summary.toml` (verdict, parameters, scalars,
//! tolerances) and one `<base>.<series>.csv` per sampled series. All maps
//! are ordered and all floats print in shortest round-trip form, so repeated
//! runs of the same scenario produce byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use rhodyn_experiments::{ExperimentReport, Verdict};

pub fn verdict_str(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Informative => "informative",
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    experiment: &'a str,
    verdict: &'a str,
    parameters: &'a BTreeMap<String, String>,
    scalars: &'a BTreeMap<String, f64>,
    tolerances: &'a BTreeMap<String, f64>,
    series: Vec<&'a str>,
}

fn summary_view(report: &ExperimentReport) -> Summary<'_> {
    Summary {
        experiment: &report.name,
        verdict: verdict_str(report.verdict),
        parameters: &report.parameters,
        scalars: &report.scalars,
        tolerances: &report.tolerances,
        series: report.series.iter().map(|s| s.name.as_str()).collect(),
    }
}

pub fn summary_toml(report: &ExperimentReport) -> String {
    toml::to_string_pretty(&summary_view(report)).expect("summary is serializable")
}

/// The summary (not the sampled series; those live in the CSVs) as JSON.
pub fn summary_json(report: &ExperimentReport) -> String {
    serde_json::to_string_pretty(&summary_view(report)).expect("summary is serializable")
}

pub fn render_table(report: &ExperimentReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("experiment: {}\n", report.name));
    out.push_str(&format!(
        "verdict: {}\n",
        verdict_str(report.verdict).to_uppercase()
    ));
    out.push_str("parameters:\n");
    for (k, v) in &report.parameters {
        out.push_str(&format!("  {k} = {v}\n"));
    }
    out.push_str("scalars:\n");
    for (k, v) in &report.scalars {
        match report.tolerances.get(k) {
            Some(tol) => out.push_str(&format!("  {k} = {v}  (gate: < {tol})\n")),
            None => out.push_str(&format!("  {k} = {v}\n")),
        }
    }
    if !report.series.is_empty() {
        let names: Vec<&str> = report.series.iter().map(|s| s.name.as_str()).collect();
        out.push_str(&format!("series: {}\n", names.join(", ")));
    }
    out
}

/// Writes the summary and one CSV per series; returns the written paths.
pub fn write_outputs(
    report: &ExperimentReport,
    out_dir: &Path,
    base: &str,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let summary_path = out_dir.join(format!("{base}.summary.toml"));
    fs::write(&summary_path, summary_toml(report))?;
    written.push(summary_path);

    for series in &report.series {
        let path = out_dir.join(format!("{base}.{}.csv", series.name));
        let mut csv = String::with_capacity(series.times.len() * 32);
        csv.push_str(&format!("t,{}\n", series.name));
        for (&t, &v) in series.times.iter().zip(&series.values) {
            csv.push_str(&format!("{t},{v}\n"));
        }
        fs::write(&path, csv)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rhodyn_experiments::Series;

    fn demo_report() -> ExperimentReport {
        let mut scalars = BTreeMap::new();
        scalars.insert("max_d".to_string(), 0.25);
        let mut tolerances = BTreeMap::new();
        tolerances.insert("max_d".to_string(), 1e-8);
        let mut parameters = BTreeMap::new();
        parameters.insert("q".to_string(), "2".to_string());
        ExperimentReport::new(
            "demo",
            parameters,
            scalars,
            tolerances,
            vec![Series::new("d", vec![0.0, 0.5], vec![0.0, 0.25])],
        )
    }

    #[test]
    fn summary_and_csv_round_trip_bytes() {
        let report = demo_report();
        let dir = std::env::temp_dir().join("rhodyn-output-test");
        let a = write_outputs(&report, &dir.join("a"), "demo").unwrap();
        let b = write_outputs(&report, &dir.join("b"), "demo").unwrap();
        assert_eq!(a.len(), 2);
        for (pa, pb) in a.iter().zip(&b) {
            assert_eq!(fs::read(pa).unwrap(), fs::read(pb).unwrap());
        }
        let csv = fs::read_to_string(&a[1]).unwrap();
        assert_eq!(csv, "t,d\n0,0\n0.5,0.25\n");
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn table_mentions_verdict_and_gate() {
        let text = render_table(&demo_report());
        assert!(text.contains("verdict: FAIL"));
        assert!(text.contains("gate: < 0.00000001"));
    }
}
