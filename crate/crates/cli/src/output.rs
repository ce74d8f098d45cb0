//! CSV/JSON emission, config hashing and run sidecars.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{OutputFormat, ResolvedConfig};
use crate::error::CliResult;
use crate::selection::SelectionRow;
use crate::sweep::ResultRecord;

/// Column order of sweep CSV files.
pub const SWEEP_COLUMNS: [&str; 7] =
    ["swept_value_dB", "analytic_outage", "mc_outage", "mc_stderr", "floor_rd_inf", "floor_pa_inf", "error"];

/// SHA-256 of the resolved configuration. Output paths and formats are not
/// part of it; units are already linear, so `27` and `27.0` hash alike.
pub fn config_hash(cfg: &ResolvedConfig) -> String {
    let json = serde_json::to_vec(cfg).expect("resolved config serializes");
    hex::encode(Sha256::digest(&json))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub config_hash: String,
    pub seed: u64,
    pub records: Vec<ResultRecord>,
}

pub fn sweep_csv(records: &[ResultRecord]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_COLUMNS)?;
    let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.swept_value_db.to_string(),
            num(r.analytic_outage),
            num(r.mc_outage),
            num(r.mc_stderr),
            num(r.floor_rd_inf),
            num(r.floor_pa_inf),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| crate::error::CliError::Output(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Parse what [`sweep_csv`] wrote.
pub fn parse_sweep_csv(text: &str) -> CliResult<Vec<ResultRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let opt = |s: &str| -> CliResult<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| crate::error::CliError::Output(format!("bad number `{s}`: {e}")))
        }
    };
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        out.push(ResultRecord {
            swept_value_db: opt(&row[0])?.unwrap_or(f64::NAN),
            analytic_outage: opt(&row[1])?,
            mc_outage: opt(&row[2])?,
            mc_stderr: opt(&row[3])?,
            floor_rd_inf: opt(&row[4])?,
            floor_pa_inf: opt(&row[5])?,
            error: if row[6].is_empty() { None } else { Some(row[6].to_string()) },
        });
    }
    Ok(out)
}

pub fn sweep_json(doc: &SweepDocument) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(doc)? + "\n")
}

pub fn render_sweep(doc: &SweepDocument, format: OutputFormat) -> CliResult<String> {
    match format {
        OutputFormat::Csv => sweep_csv(&doc.records),
        OutputFormat::Json => sweep_json(doc),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionDocument {
    pub config_hash: String,
    pub seed: u64,
    pub trials: u64,
    pub variants: Vec<SelectionRow>,
}

pub fn render_selection(doc: &SelectionDocument, format: OutputFormat) -> CliResult<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(doc)? + "\n"),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["variant", "user", "count", "frequency", "std_error"])?;
            for row in &doc.variants {
                for (k, ((c, f), se)) in
                    row.stats.counts.iter().zip(&row.stats.frequencies).zip(&row.stats.std_errors).enumerate()
                {
                    w.write_record([row.variant.clone(), (k + 1).to_string(), c.to_string(), f.to_string(), se.to_string()])?;
                }
            }
            let bytes = w.into_inner().map_err(|e| crate::error::CliError::Output(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

/// Everything needed to repeat a run exactly.
#[derive(Debug, Clone, Serialize)]
pub struct Sidecar<'a> {
    pub command: &'a str,
    pub config_hash: String,
    pub seed: u64,
    pub output: String,
    pub config: &'a ResolvedConfig,
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".run.json");
    output.with_file_name(name)
}

/// Write `body` to `output` (or stdout) and, for files, the sidecar next to it.
pub fn emit(body: &str, output: Option<&Path>, sidecar: &Sidecar<'_>) -> CliResult<()> {
    match output {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
        }
        Some(path) => {
            std::fs::write(path, body)?;
            std::fs::write(sidecar_path(path), serde_json::to_string_pretty(sidecar)? + "\n")?;
        }
    }
    Ok(())
}
