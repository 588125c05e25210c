//! File ingestion and emission: sensor and scenario CSV readers, run CSV
//! writer/reader, JSON run reports, and estimator snapshots.
//!
//! Numeric CSV fields carry 12 significant digits in scientific notation
//! with `.` decimals and `\n` line endings, so equal inputs produce
//! byte-identical files and write→read round-trips stay within 1e-9
//! relative. Rows are hour-indexed from 0 with no gaps; every rejected
//! row reports its 1-based line number (the header is line 1).

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::estimator::{CmaState, ConvergenceMonitor};
use crate::thermal::OperatingInterval;

pub const SENSOR_HEADER: &str = "hour,theta_h_c";
pub const SCENARIO_HEADER: &str = "hour,ambient_c,k_i,k_u";
pub const RUN_HEADER: &str = "hour,theta_h_c,f_aa,lol_pu,cma_pu,estimate_years,converged";

/// One hottest-spot temperature measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorSample {
    /// 0-based hour index.
    pub hour_index: u64,
    /// Measured hottest-spot temperature, °C.
    pub hotspot_temp: f64,
}

/// One processed interval: the data behind the per-hour output rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub hour_index: u64,
    pub hotspot_temp: f64,
    pub aging_factor: f64,
    /// Per-unit loss of life over this interval.
    pub interval_loss: f64,
    /// Running mean of all interval losses up to and including this one.
    pub cma: f64,
    pub estimate_total_years: f64,
    /// Whether the run had converged at or before this interval.
    pub converged: bool,
}

/// 12-significant-digit rendering used for every numeric CSV field.
pub fn format_sig12(value: f64) -> String {
    format!("{value:.11e}")
}

fn open_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(file))
}

fn record_line(record: &csv::StringRecord, fallback: usize) -> usize {
    record
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback)
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    line: usize,
    name: &str,
    raw: &str,
) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::input(path, line, format!("cannot parse {name} from '{raw}'")))
}

fn expect_header(path: &Path, record: &csv::StringRecord, expected: &str) -> Result<()> {
    let got = record.iter().collect::<Vec<_>>().join(",");
    if got != expected {
        return Err(Error::input(
            path,
            1,
            format!("expected header '{expected}', got '{got}'"),
        ));
    }
    Ok(())
}

fn check_hour(path: &Path, line: usize, hour: u64, expected: u64) -> Result<()> {
    if hour != expected {
        return Err(Error::input(
            path,
            line,
            format!("hour indices must be gap-free and increasing: expected {expected}, got {hour}"),
        ));
    }
    Ok(())
}

/// Read and validate a sensor stream (`hour,theta_h_c`).
pub fn read_sensor_csv(path: &Path) -> Result<Vec<SensorSample>> {
    let mut reader = open_reader(path)?;
    let mut samples = Vec::new();
    let mut expected_hour = 0u64;
    for (idx, row) in reader.records().enumerate() {
        let record = row.map_err(|e| Error::input(path, idx + 1, e.to_string()))?;
        let line = record_line(&record, idx + 1);
        if idx == 0 {
            expect_header(path, &record, SENSOR_HEADER)?;
            continue;
        }
        if record.len() != 2 {
            return Err(Error::input(
                path,
                line,
                format!("expected 2 fields, got {}", record.len()),
            ));
        }
        let hour: u64 = parse_field(path, line, "hour", &record[0])?;
        let temp: f64 = parse_field(path, line, "theta_h_c", &record[1])?;
        check_hour(path, line, hour, expected_hour)?;
        if !(temp > -273.0 && temp < 250.0) {
            return Err(Error::input(
                path,
                line,
                format!("theta_h_c must lie in (-273, 250) °C, got {temp}"),
            ));
        }
        samples.push(SensorSample {
            hour_index: hour,
            hotspot_temp: temp,
        });
        expected_hour += 1;
    }
    Ok(samples)
}

/// Read and validate a scenario (`hour,ambient_c,k_i,k_u`); every row
/// becomes a one-hour interval.
pub fn read_scenario_csv(path: &Path) -> Result<Vec<OperatingInterval>> {
    let mut reader = open_reader(path)?;
    let mut intervals = Vec::new();
    let mut expected_hour = 0u64;
    for (idx, row) in reader.records().enumerate() {
        let record = row.map_err(|e| Error::input(path, idx + 1, e.to_string()))?;
        let line = record_line(&record, idx + 1);
        if idx == 0 {
            expect_header(path, &record, SCENARIO_HEADER)?;
            continue;
        }
        if record.len() != 4 {
            return Err(Error::input(
                path,
                line,
                format!("expected 4 fields, got {}", record.len()),
            ));
        }
        let hour: u64 = parse_field(path, line, "hour", &record[0])?;
        check_hour(path, line, hour, expected_hour)?;
        let interval = OperatingInterval {
            ambient_temp: parse_field(path, line, "ambient_c", &record[1])?,
            load_ratio_initial: parse_field(path, line, "k_i", &record[2])?,
            load_ratio_ultimate: parse_field(path, line, "k_u", &record[3])?,
            duration: 1.0,
        };
        interval
            .validate()
            .map_err(|e| Error::input(path, line, e.to_string()))?;
        intervals.push(interval);
        expected_hour += 1;
    }
    Ok(intervals)
}

/// Write a scenario series (`ambient` plus `(K_i, K_U)` pairs).
pub fn write_scenario_csv(path: &Path, ambient: &[f64], load: &[(f64, f64)]) -> Result<()> {
    if ambient.len() != load.len() {
        return Err(Error::usage(format!(
            "ambient series ({}) and load series ({}) lengths differ",
            ambient.len(),
            load.len()
        )));
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, text: &str| -> Result<()> {
        out.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
    };
    write(&mut out, SCENARIO_HEADER)?;
    write(&mut out, "\n")?;
    for (hour, (&temp, &(k_i, k_u))) in ambient.iter().zip(load).enumerate() {
        write(
            &mut out,
            &format!(
                "{hour},{},{},{}\n",
                format_sig12(temp),
                format_sig12(k_i),
                format_sig12(k_u)
            ),
        )?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Write the per-hour run records.
pub fn write_run_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, text: &str| -> Result<()> {
        out.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
    };
    write(&mut out, RUN_HEADER)?;
    write(&mut out, "\n")?;
    for rec in records {
        write(
            &mut out,
            &format!(
                "{},{},{},{},{},{},{}\n",
                rec.hour_index,
                format_sig12(rec.hotspot_temp),
                format_sig12(rec.aging_factor),
                format_sig12(rec.interval_loss),
                format_sig12(rec.cma),
                format_sig12(rec.estimate_total_years),
                rec.converged
            ),
        )?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Read back a run CSV (round-trip counterpart of [`write_run_csv`]).
pub fn read_run_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let mut reader = open_reader(path)?;
    let mut records = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let record = row.map_err(|e| Error::input(path, idx + 1, e.to_string()))?;
        let line = record_line(&record, idx + 1);
        if idx == 0 {
            expect_header(path, &record, RUN_HEADER)?;
            continue;
        }
        if record.len() != 7 {
            return Err(Error::input(
                path,
                line,
                format!("expected 7 fields, got {}", record.len()),
            ));
        }
        records.push(RunRecord {
            hour_index: parse_field(path, line, "hour", &record[0])?,
            hotspot_temp: parse_field(path, line, "theta_h_c", &record[1])?,
            aging_factor: parse_field(path, line, "f_aa", &record[2])?,
            interval_loss: parse_field(path, line, "lol_pu", &record[3])?,
            cma: parse_field(path, line, "cma_pu", &record[4])?,
            estimate_total_years: parse_field(path, line, "estimate_years", &record[5])?,
            converged: parse_field(path, line, "converged", &record[6])?,
        });
    }
    Ok(records)
}

/// Summary of one completed run, echoing the full configuration so the
/// run can be reproduced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// ISO 8601 UTC timestamp; the only field that varies between
    /// identical runs.
    pub generated_at: String,
    /// Scenario label when known ("mild", "warm", "warm_overload").
    pub case: Option<String>,
    pub samples_processed: u64,
    /// Step at which the lifetime estimate converged, if it did.
    pub converged_at: Option<u64>,
    pub converged: bool,
    pub final_estimate_years: f64,
    pub final_cma_pu: f64,
    pub config: RunConfig,
}

pub fn write_report(report: &RunReport, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::usage(format!("cannot serialize report: {e}")))?;
    std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_report(path: &Path) -> Result<RunReport> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::input(path, e.line(), format!("invalid report: {e}")))
}

/// Serialized estimator state for resumable streaming: the CMA pair, the
/// monitor's recent-estimate window, its parameters, and the convergence
/// step if one was already found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSnapshot {
    pub count: u64,
    pub cma_pu: f64,
    pub window: Vec<f64>,
    pub tolerance: f64,
    pub window_len: usize,
    pub converged_at: Option<u64>,
}

impl EstimatorSnapshot {
    pub fn capture(state: &CmaState, monitor: &ConvergenceMonitor) -> Self {
        Self {
            count: state.count(),
            cma_pu: state.cma().unwrap_or(0.0),
            window: monitor.recent().collect(),
            tolerance: monitor.tolerance(),
            window_len: monitor.window(),
            converged_at: monitor.converged_at(),
        }
    }

    pub fn restore(&self) -> Result<(CmaState, ConvergenceMonitor)> {
        let state = CmaState::from_parts(self.count, self.cma_pu)?;
        let monitor = ConvergenceMonitor::from_parts(
            self.tolerance,
            self.window_len,
            self.window.clone(),
            self.converged_at,
            (self.count > 0).then_some(self.count),
        )?;
        Ok((state, monitor))
    }
}

pub fn write_snapshot(snapshot: &EstimatorSnapshot, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(snapshot)
        .map_err(|e| Error::usage(format!("cannot serialize snapshot: {e}")))?;
    std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<EstimatorSnapshot> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::input(path, e.line(), format!("invalid snapshot: {e}")))
}
