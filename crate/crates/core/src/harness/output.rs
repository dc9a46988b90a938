//! Experiment outputs: the results table, verdicts and the run manifest.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::config::{Experiment, ExperimentConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The signal is identically zero or below resolution, so the test is
    /// skipped.
    Degenerate,
    /// Too many trajectories blew up for the statistics to mean anything.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub metrics: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(name: &str, pass: bool) -> Self {
        Self {
            name: name.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            metrics: Map::new(),
            note: None,
        }
    }

    pub fn with_status(name: &str, status: Status) -> Self {
        Self {
            status,
            ..Self::new(name, true)
        }
    }

    pub fn metric(mut self, key: &str, value: impl Serialize) -> Self {
        self.metrics
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).and_then(Value::as_f64)
    }
}

/// A header plus rows of pre-formatted cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            out.write_record(r).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf8")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Header of distance reports.
pub const DISTANCE_HEADER: [&str; 7] = [
    "time",
    "eta_n",
    "estimator",
    "value",
    "noise_floor",
    "n_samples",
    "seed",
];

/// One distance-report row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub time: f64,
    pub eta_n: f64,
    pub estimator: String,
    pub value: f64,
    pub noise_floor: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl DistanceRow {
    pub fn cells(&self) -> Vec<String> {
        vec![
            self.time.to_string(),
            self.eta_n.to_string(),
            self.estimator.clone(),
            self.value.to_string(),
            self.noise_floor.to_string(),
            self.n_samples.to_string(),
            self.seed.to_string(),
        ]
    }
}

pub fn distance_table(rows: &[DistanceRow]) -> Table {
    let mut t = Table::new(&DISTANCE_HEADER);
    for r in rows {
        t.push(r.cells());
    }
    t
}

/// Everything an experiment produces before it is written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub experiment: Experiment,
    pub table: Table,
    pub verdicts: Vec<Verdict>,
    pub blowups: usize,
    pub limitations: Vec<String>,
    /// Additional JSON documents written next to the standard outputs.
    pub extra: Vec<(String, Value)>,
}

impl ExperimentOutput {
    pub fn new(experiment: Experiment, table: Table) -> Self {
        Self {
            experiment,
            table,
            verdicts: Vec::new(),
            blowups: 0,
            limitations: Vec::new(),
            extra: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(Verdict::passed)
    }

    pub fn verdict(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictFile {
    pub experiment: Experiment,
    pub all_pass: bool,
    pub verdicts: Vec<Verdict>,
    pub limitations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: Experiment,
    pub seed: u64,
    pub config_hash: String,
    pub blowup_count: usize,
    pub threads: usize,
    pub version: String,
    pub config: Value,
}

pub const RESULTS_FILE: &str = "results.csv";
pub const VERDICT_FILE: &str = "verdict.json";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Refuses when `dir` already holds a manifest with a different config hash.
pub fn check_overwrite(dir: &Path, cfg: &ExperimentConfig) -> Result<()> {
    let path = dir.join(MANIFEST_FILE);
    if !path.exists() {
        return Ok(());
    }
    let text = fs::read_to_string(&path)?;
    let existing: Value = serde_json::from_str(&text)?;
    let old = existing
        .get("config_hash")
        .and_then(Value::as_str)
        .unwrap_or("")
        .to_string();
    let new = cfg.hash();
    if old != new {
        return Err(Error::OutputConflict {
            path: path.display().to_string(),
            existing: old,
            new,
        });
    }
    Ok(())
}

/// Writes `results.csv`, `verdict.json`, `manifest.json` and extras.
pub fn write_outputs(
    dir: &Path,
    cfg: &ExperimentConfig,
    out: &ExperimentOutput,
    threads: usize,
) -> Result<Manifest> {
    check_overwrite(dir, cfg)?;
    fs::create_dir_all(dir)?;
    out.table.write(fs::File::create(dir.join(RESULTS_FILE))?)?;
    let verdicts = VerdictFile {
        experiment: out.experiment,
        all_pass: out.all_pass(),
        verdicts: out.verdicts.clone(),
        limitations: out.limitations.clone(),
    };
    fs::write(dir.join(VERDICT_FILE), serde_json::to_string_pretty(&verdicts)?)?;
    for (name, value) in &out.extra {
        fs::write(dir.join(name), serde_json::to_string_pretty(value)?)?;
    }
    let manifest = Manifest {
        experiment: cfg.experiment,
        seed: cfg.seed,
        config_hash: cfg.hash(),
        blowup_count: out.blowups,
        threads,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: serde_json::to_value(cfg)?,
    };
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}
