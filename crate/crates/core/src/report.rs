//! Artifact plumbing: fixed file names, the provenance wrapper every
//! subcommand writes, and the aggregate report.
//!
//! Determinism contract: given the same config and seed, every artifact in
//! the output directory is byte-identical across reruns, with one
//! documented exception — [`RUN_META_FILE`], the sidecar that records
//! wall-clock timing. Keeping the clock out of the reports proper is what
//! makes the rest of the directory reproducible bit for bit.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::{SCHEMA_VERSION, TOOL_VERSION};

pub const FAMILY_FILE: &str = "family.json";
pub const CERTIFY_FILE: &str = "certify.json";
pub const SPECTRUM_FILE: &str = "spectrum.json";
pub const EXPANSION_FILE: &str = "expansion.json";
pub const KAZHDAN_FILE: &str = "kazhdan.json";
pub const CHARS_FILE: &str = "chars.json";
pub const CHARS_TABLE_FILE: &str = "chars_table.csv";
pub const WALK_FILE: &str = "walk.json";
pub const TV_CURVE_FILE: &str = "tv_curve.csv";
pub const BASELINE_FILE: &str = "baseline.json";
pub const REPORT_FILE: &str = "report.json";
pub const REPORT_CSV_FILE: &str = "report.csv";
pub const GRAPH_DOT_FILE: &str = "graph.dot";
pub const GRAPH_MM_FILE: &str = "graph.mtx";
/// Wall-clock sidecar: the one artifact reruns may legitimately change.
pub const RUN_META_FILE: &str = "run_meta.json";

/// Provenance wrapper: every JSON artifact embeds the materialized config
/// snapshot (which carries the seeds) and the tool version, so the file
/// alone suffices to replay the run.
#[derive(Serialize)]
pub struct Artifact<'a, T: Serialize> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'a str,
    pub config: &'a ExperimentConfig,
    pub result: T,
}

impl<'a, T: Serialize> Artifact<'a, T> {
    pub fn new(command: &'a str, config: &'a ExperimentConfig, result: T) -> Artifact<'a, T> {
        Artifact {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            command,
            config,
            result,
        }
    }
}

/// Timing sidecar; see the module docs for why it lives apart.
#[derive(Serialize)]
pub struct RunMeta<'a> {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'a str,
    pub wall_seconds: f64,
    pub threads: usize,
}

pub fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(dir, name, &text)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

/// Headline metrics pulled into the aggregate CSV, as (artifact file,
/// metric name, JSON pointer) rows; missing files and pointers are skipped.
const METRICS: &[(&str, &str, &str)] = &[
    (CERTIFY_FILE, "order", "/result/order"),
    (CERTIFY_FILE, "matches", "/result/matches"),
    (SPECTRUM_FILE, "lambda2", "/result/lambda2"),
    (SPECTRUM_FILE, "gap", "/result/gap"),
    (SPECTRUM_FILE, "vertex_count", "/result/vertex_count"),
    (EXPANSION_FILE, "exact_value", "/result/expansion/exact_value"),
    (EXPANSION_FILE, "cheeger_lower", "/result/cheeger_lower"),
    (EXPANSION_FILE, "cheeger_upper", "/result/cheeger_upper"),
    (KAZHDAN_FILE, "kazhdan", "/result/report/kazhdan"),
    (KAZHDAN_FILE, "expansion_bound", "/result/expansion_bound"),
    (CHARS_FILE, "fitted_c", "/result/scan/fitted_c"),
    (CHARS_FILE, "scan_passes", "/result/scan/passes"),
    (WALK_FILE, "first_tv_below_hundredth", "/result/first_tv_below_hundredth"),
    (WALK_FILE, "fixed_point_mean", "/result/stats/fixed_point_mean"),
    (WALK_FILE, "kappa", "/result/kappa"),
    (BASELINE_FILE, "median_gap", "/result/median_gap"),
    (BASELINE_FILE, "group_order", "/result/group_order"),
];

/// Collects every known artifact in the directory into one aggregate JSON
/// document plus a flat metric CSV. Both outputs are deterministic
/// functions of the artifact files.
pub fn aggregate(dir: &Path) -> Result<(Value, String)> {
    let mut artifacts = serde_json::Map::new();
    let mut csv = String::from("artifact,metric,value\n");
    let files = [
        FAMILY_FILE,
        CERTIFY_FILE,
        SPECTRUM_FILE,
        EXPANSION_FILE,
        KAZHDAN_FILE,
        CHARS_FILE,
        WALK_FILE,
        BASELINE_FILE,
    ];
    let mut found = 0;
    for name in files {
        let path = dir.join(name);
        if !path.exists() {
            continue;
        }
        let value: Value = serde_json::from_str(&std::fs::read_to_string(&path)?)?;
        for (file, metric, pointer) in METRICS {
            if *file != name {
                continue;
            }
            if let Some(v) = value.pointer(pointer) {
                let rendered = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                csv.push_str(&format!("{name},{metric},{rendered}\n"));
            }
        }
        artifacts.insert(name.to_string(), value);
        found += 1;
    }
    if found == 0 {
        return Err(LabError::Invalid(format!(
            "no artifacts found in {}",
            dir.display()
        )));
    }
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "artifacts": Value::Object(artifacts),
    });
    Ok((doc, csv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn artifacts_embed_config_version_and_result() {
        let cfg = ExperimentConfig::default();
        let artifact = Artifact::new("spectrum", &cfg, serde_json::json!({"lambda2": 0.5}));
        let text = serde_json::to_string(&artifact).unwrap();
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["result"]["lambda2"], 0.5);
        assert_eq!(value["config"]["k_side"], 7);
        assert_eq!(value["tool_version"], TOOL_VERSION);
        assert_eq!(value["command"], "spectrum");
    }

    #[test]
    fn aggregate_collects_present_artifacts_and_metrics() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::default();
        write_json(
            dir.path(),
            SPECTRUM_FILE,
            &Artifact::new("spectrum", &cfg, serde_json::json!({"lambda2": 0.25, "gap": 0.75})),
        )
        .unwrap();
        write_json(
            dir.path(),
            BASELINE_FILE,
            &Artifact::new(
                "baseline",
                &cfg,
                serde_json::json!({"median_gap": 0.003, "group_order": "1000"}),
            ),
        )
        .unwrap();
        let (doc, csv) = aggregate(dir.path()).unwrap();
        assert!(doc["artifacts"][SPECTRUM_FILE]["result"]["lambda2"].is_number());
        assert!(csv.contains("spectrum.json,lambda2,0.25"));
        assert!(csv.contains("baseline.json,median_gap,0.003"));
        assert!(csv.contains("baseline.json,group_order,1000"));
        // Missing artifacts simply do not appear.
        assert!(!csv.contains("kazhdan"));
    }

    #[test]
    fn aggregate_of_an_empty_directory_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(aggregate(dir.path()).is_err());
    }

    #[test]
    fn aggregation_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::default();
        write_json(
            dir.path(),
            WALK_FILE,
            &Artifact::new("walk", &cfg, serde_json::json!({"kappa": 0.9})),
        )
        .unwrap();
        let (a_doc, a_csv) = aggregate(dir.path()).unwrap();
        let (b_doc, b_csv) = aggregate(dir.path()).unwrap();
        assert_eq!(serde_json::to_string(&a_doc).unwrap(), serde_json::to_string(&b_doc).unwrap());
        assert_eq!(a_csv, b_csv);
    }
}
