//! Command-line front end: synthesize scenarios, run the estimation
//! loop, and compare completed runs.
//!
//! Exit codes: 0 success, 1 validation/usage (including a violated case
//! ordering in `compare`), 2 I/O.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use xfmrlife::config::{RunConfig, ScenarioCase};
use xfmrlife::error::{Error, Result};
use xfmrlife::io::{
    self, read_report, write_report, RunReport, SCENARIO_HEADER, SENSOR_HEADER,
};
use xfmrlife::pipeline::{run_with_progress, RunInput};
use xfmrlife::scenario::{apply_overload, synth_ambient, synth_load};
use xfmrlife::thermal::InitMode;

#[derive(Parser)]
#[command(
    name = "xfmrlife",
    version,
    about = "Transformer lifetime estimation from hottest-spot temperature streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Continuity,
}

impl From<ModeArg> for InitMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Paper => InitMode::Paper,
            ModeArg::Continuity => InitMode::Continuity,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate an hourly ambient/load scenario CSV for one study case.
    Synth {
        /// Study case: 1 mild, 2 warm, 3 warm with overloading.
        #[arg(long)]
        case: u8,
        /// JSON config file; flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed for the scenario generators.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for case<N>.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the estimation loop over a sensor or scenario CSV.
    Run {
        /// Input CSV in either the sensor or the scenario schema.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory for run.csv and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Thermal initialization mode for scenario inputs.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Convergence tolerance on the relative change of the estimate.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Consecutive below-tolerance steps required for convergence.
        #[arg(long)]
        window: Option<usize>,
        /// Stop processing at the convergence step instead of running the
        /// whole input.
        #[arg(long)]
        stop_at_convergence: bool,
    },
    /// Tabulate two or more run reports and check the case ordering.
    Compare {
        /// Report JSON files produced by `run`.
        reports: Vec<PathBuf>,
        /// Output directory for comparison.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                err.exit();
            }
            eprintln!("{err}");
            std::process::exit(1);
        }
    };
    let result = match cli.command {
        Command::Synth {
            case,
            config,
            seed,
            out,
        } => cmd_synth(case, config.as_deref(), seed, out),
        Command::Run {
            input,
            config,
            seed,
            out,
            mode,
            tolerance,
            window,
            stop_at_convergence,
        } => cmd_run(
            input,
            config.as_deref(),
            seed,
            out,
            mode,
            tolerance,
            window,
            stop_at_convergence,
        ),
        Command::Compare { reports, out } => cmd_compare(&reports, out),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(path) => RunConfig::from_file(path),
        None => Ok(RunConfig::default()),
    }
}

fn resolve_out_dir(flag: Option<PathBuf>, config: &RunConfig) -> Result<PathBuf> {
    let dir = flag
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn cmd_synth(
    case_number: u8,
    config_path: Option<&Path>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<()> {
    let case = ScenarioCase::from_number(case_number)?;
    let mut config = load_config(config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let out_dir = resolve_out_dir(out, &config)?;

    let climate = config.climate_for_case(case);
    let ambient = synth_ambient(&climate, config.horizon_hours)?;
    let mut load = synth_load(&ambient, &config.load_spec())?;
    let mut overload_count = 0usize;
    if case == ScenarioCase::WarmOverload {
        let spec = config.overload_spec();
        load = apply_overload(&load, &spec)?;
        overload_count = spec.days * spec.hours_per_day;
    }

    let path = out_dir.join(format!("case{case_number}.csv"));
    io::write_scenario_csv(&path, &ambient, &load)?;

    let mean = |values: &[f64]| values.iter().sum::<f64>() / values.len() as f64;
    let k_ultimate: Vec<f64> = load.iter().map(|&(_, ku)| ku).collect();
    println!(
        "wrote {} ({} h, {} climate): mean ambient {:.2} °C, mean K {:.3}, overload hours {}",
        path.display(),
        ambient.len(),
        climate.climate_class,
        mean(&ambient),
        mean(&k_ultimate),
        overload_count
    );
    Ok(())
}

/// Pick the ingestion route from the input file's header line.
fn detect_input(path: &Path) -> Result<RunInput> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut header = String::new();
    BufReader::new(file)
        .read_line(&mut header)
        .map_err(|e| Error::io(path, e))?;
    match header.trim_end() {
        SENSOR_HEADER => Ok(RunInput::Sensor(io::read_sensor_csv(path)?)),
        SCENARIO_HEADER => Ok(RunInput::Scenario(io::read_scenario_csv(path)?)),
        other => Err(Error::input(
            path,
            1,
            format!(
                "unrecognized header '{other}'; expected '{SENSOR_HEADER}' or '{SCENARIO_HEADER}'"
            ),
        )),
    }
}

/// Case label for a report: the configured label, or one inferred from
/// the input file name (`case1` → mild, `case2` → warm, `case3` →
/// warm_overload).
fn case_label(config: &RunConfig, input: &Path) -> Option<String> {
    if config.case.is_some() {
        return config.case.clone();
    }
    let stem = input.file_stem()?.to_str()?;
    match stem {
        "case1" | "mild" => Some("mild".to_string()),
        "case2" | "warm" => Some("warm".to_string()),
        "case3" | "warm_overload" => Some("warm_overload".to_string()),
        _ => None,
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    input: Option<PathBuf>,
    config_path: Option<&Path>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    mode: Option<ModeArg>,
    tolerance: Option<f64>,
    window: Option<usize>,
    stop_at_convergence: bool,
) -> Result<()> {
    let mut config = load_config(config_path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(mode) = mode {
        config.mode = mode.into();
    }
    if let Some(tolerance) = tolerance {
        config.estimator.tolerance = tolerance;
    }
    if let Some(window) = window {
        config.estimator.window = window;
    }
    if stop_at_convergence {
        config.stop_at_convergence = true;
    }
    config.validate()?;

    let input_path = input
        .or_else(|| config.input.clone())
        .ok_or_else(|| Error::usage("run requires --input (or an input path in the config)"))?;
    let run_input = detect_input(&input_path)?;
    if run_input.is_empty() {
        return Err(Error::usage(format!(
            "{}: input contains no data rows",
            input_path.display()
        )));
    }

    // Resolve outputs only after the input validated, so failed runs
    // leave no files behind.
    let out_dir = resolve_out_dir(out, &config)?;
    let total = run_input.len();
    let outcome = run_with_progress(&run_input, &config, |done| {
        eprintln!("processed {done}/{total} intervals");
    })?;

    let mut report_config = config.clone();
    report_config.input = Some(input_path.clone());
    report_config.out_dir = Some(out_dir.clone());
    let final_record = outcome
        .records
        .last()
        .expect("nonempty input yields at least one record");
    let report = RunReport {
        generated_at: chrono::Utc::now().to_rfc3339(),
        case: case_label(&config, &input_path),
        samples_processed: outcome.samples_processed,
        converged_at: outcome.converged_at,
        converged: outcome.converged_at.is_some(),
        final_estimate_years: outcome.final_estimate.total_years,
        final_cma_pu: final_record.cma,
        config: report_config,
    };

    let run_path = out_dir.join("run.csv");
    io::write_run_csv(&outcome.records, &run_path)?;
    let report_path = out_dir.join("report.json");
    write_report(&report, &report_path)?;

    match outcome.converged_at {
        Some(step) => println!(
            "{} intervals, converged at step {step}, estimated lifetime {:.4} years",
            outcome.samples_processed, outcome.final_estimate.total_years
        ),
        None => println!(
            "{} intervals, not converged, estimated lifetime {:.4} years",
            outcome.samples_processed, outcome.final_estimate.total_years
        ),
    }
    Ok(())
}

fn cmd_compare(reports: &[PathBuf], out: Option<PathBuf>) -> Result<()> {
    if reports.len() < 2 {
        return Err(Error::usage(format!(
            "compare requires at least 2 reports, got {}",
            reports.len()
        )));
    }
    let loaded: Vec<RunReport> = reports
        .iter()
        .map(|path| read_report(path))
        .collect::<Result<_>>()?;

    println!(
        "{:<16} {:>16} {:>16}",
        "case", "converged_step", "lifetime_years"
    );
    for report in &loaded {
        println!(
            "{:<16} {:>16} {:>16.4}",
            report.case.as_deref().unwrap_or("-"),
            report
                .converged_at
                .map_or_else(|| "-".to_string(), |s| s.to_string()),
            report.final_estimate_years
        );
    }

    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let path = dir.join("comparison.csv");
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = std::io::BufWriter::new(file);
        let mut emit = |text: String| -> Result<()> {
            w.write_all(text.as_bytes()).map_err(|e| Error::io(&path, e))
        };
        emit("case,converged_step,lifetime_years\n".to_string())?;
        for report in &loaded {
            emit(format!(
                "{},{},{}\n",
                report.case.as_deref().unwrap_or(""),
                report
                    .converged_at
                    .map_or_else(String::new, |s| s.to_string()),
                io::format_sig12(report.final_estimate_years)
            ))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
    }

    // Lifetimes must strictly decrease along mild > warm > warm_overload
    // for every labeled pair.
    let ranked: Vec<(usize, f64, &str)> = loaded
        .iter()
        .filter_map(|r| {
            let label = r.case.as_deref()?;
            ScenarioCase::rank(label).map(|rank| (rank, r.final_estimate_years, label))
        })
        .collect();
    for (i, &(rank_a, years_a, label_a)) in ranked.iter().enumerate() {
        for &(rank_b, years_b, label_b) in &ranked[i + 1..] {
            let violated = (rank_a < rank_b && years_a <= years_b)
                || (rank_b < rank_a && years_b <= years_a);
            if violated {
                return Err(Error::usage(format!(
                    "case ordering violated: {label_a} ({years_a:.4} y) vs {label_b} ({years_b:.4} y)"
                )));
            }
        }
    }
    Ok(())
}
