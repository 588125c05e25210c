//! Transformer insulation aging and online lifetime estimation.
//!
//! The crate models winding hottest-spot temperature from ambient
//! conditions and load, converts it into per-interval insulation loss of
//! life, and estimates total transformer lifetime online by folding the
//! loss stream into a cumulative moving average with convergence
//! detection. Scenario synthesis generates deterministic year-long
//! ambient/load inputs for the mild, warm, and warm-with-overload study
//! cases, and the I/O layer defines the CSV and JSON formats shared with
//! the `xfmrlife` command-line tool.

// Validation guards are written `!(x > 0.0)` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Frozen expected values keep every digit of their high-precision source.
#![allow(clippy::excessive_precision)]

pub mod aging;
pub mod config;
pub mod error;
pub mod estimator;
pub mod io;
pub mod pipeline;
pub mod scenario;
pub mod thermal;

pub use aging::{
    aging_acceleration_factor, equivalent_aging_factor, interval_loss_of_life, per_unit_life,
    AgingConstants, AgingRecord,
};
pub use config::{EstimatorConfig, RunConfig, ScenarioCase};
pub use error::{Error, Result};
pub use estimator::{
    cma_batch, estimate_lifetime, CmaState, ConvergenceMonitor, ConvergenceStatus,
    LifetimeEstimate, HOURS_PER_YEAR,
};
pub use io::{EstimatorSnapshot, RunRecord, RunReport, SensorSample};
pub use pipeline::{run, run_with_progress, Pipeline, RunInput, RunOutcome};
pub use scenario::{
    apply_overload, overload_hours, synth_ambient, synth_load, ClimateClass, ClimateSpec,
    LoadSpec, OverloadSpec,
};
pub use thermal::{
    hotspot_rise_boundary, hotspot_temperature, simulate_interval, topoil_rise_boundary,
    transient_rise, InitMode, OperatingInterval, ThermalState, TransformerCharacteristics,
};
