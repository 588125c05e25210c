//! Deterministic synthesis of hourly ambient-temperature and load-ratio
//! scenarios: mild or warm climates, temperature-correlated load, and
//! block overloading on randomly selected days.
//!
//! All randomness comes from ChaCha8 seeded per spec. Uniform doubles are
//! the top 53 bits of `next_u64` scaled by 2^-53; Gaussian noise is the
//! Box–Muller cosine transform of two uniforms. Identical specs therefore
//! produce bit-identical series on every platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::HOURS_PER_YEAR;

/// Ambient temperature at which the load model sits at its base ratio.
pub const LOAD_REFERENCE_TEMP_C: f64 = 20.0;

/// First hour-of-day of an overload block (14:00, compounding with the
/// afternoon ambient peak). Blocks that would not fit in a day start
/// earlier.
pub const OVERLOAD_START_HOUR: usize = 14;

/// Hours in one day of hourly samples.
const HOURS_PER_DAY: usize = 24;

// Diurnal sinusoid phase: peak at 15:00, trough at 03:00.
const DIURNAL_PEAK_OFFSET_H: f64 = 9.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClimateClass {
    Mild,
    Warm,
}

impl std::fmt::Display for ClimateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClimateClass::Mild => write!(f, "mild"),
            ClimateClass::Warm => write!(f, "warm"),
        }
    }
}

/// Parameters of the synthetic hourly ambient-temperature series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClimateSpec {
    pub climate_class: ClimateClass,
    /// Annual mean temperature, °C.
    pub annual_mean: f64,
    /// Amplitude of the annual sinusoid, °C.
    pub annual_swing: f64,
    /// Amplitude of the diurnal sinusoid, °C.
    pub diurnal_swing: f64,
    /// Standard deviation of the hourly Gaussian noise, °C.
    pub noise_std: f64,
    pub seed: u64,
}

impl ClimateSpec {
    pub fn mild(seed: u64) -> Self {
        Self {
            climate_class: ClimateClass::Mild,
            annual_mean: 12.0,
            annual_swing: 10.0,
            diurnal_swing: 6.0,
            noise_std: 2.0,
            seed,
        }
    }

    pub fn warm(seed: u64) -> Self {
        Self {
            climate_class: ClimateClass::Warm,
            annual_mean: 24.0,
            annual_swing: 10.0,
            diurnal_swing: 8.0,
            noise_std: 2.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("annual_swing", self.annual_swing),
            ("diurnal_swing", self.diurnal_swing),
            ("noise_std", self.noise_std),
        ] {
            if !(value >= 0.0) {
                return Err(Error::domain(format!("{name} must be >= 0, got {value}")));
            }
        }
        Ok(())
    }
}

/// Parameters of the temperature-correlated load-ratio series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSpec {
    /// Load ratio at the reference ambient temperature, per-unit.
    pub base_ratio: f64,
    /// Load increase per °C of ambient above the reference, per-unit.
    pub temp_sensitivity: f64,
    /// Standard deviation of the hourly Gaussian noise, per-unit.
    pub noise_std: f64,
    pub seed: u64,
}

impl LoadSpec {
    pub fn new(seed: u64) -> Self {
        Self {
            base_ratio: 0.7,
            temp_sensitivity: 0.015,
            noise_std: 0.05,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_ratio >= 0.0) {
            return Err(Error::domain(format!(
                "base_ratio must be >= 0, got {}",
                self.base_ratio
            )));
        }
        if !(self.noise_std >= 0.0) {
            return Err(Error::domain(format!(
                "noise_std must be >= 0, got {}",
                self.noise_std
            )));
        }
        Ok(())
    }
}

/// Parameters of the injected overload blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverloadSpec {
    /// Multiplicative factor applied to the load ratio (1.2 = 20 %).
    pub magnitude: f64,
    /// Contiguous overloaded hours per selected day.
    pub hours_per_day: usize,
    /// Number of distinct days selected.
    pub days: usize,
    pub seed: u64,
}

impl OverloadSpec {
    /// The studied overload: 20 % for 3 hours on 20 random days.
    pub fn new(seed: u64) -> Self {
        Self {
            magnitude: 1.2,
            hours_per_day: 3,
            days: 20,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // magnitude 1.0 is the identity overload; anything below would
        // shed load instead.
        if !(self.magnitude >= 1.0) {
            return Err(Error::domain(format!(
                "magnitude must be >= 1, got {}",
                self.magnitude
            )));
        }
        if self.hours_per_day < 1 || self.hours_per_day > HOURS_PER_DAY {
            return Err(Error::domain(format!(
                "hours_per_day must lie in [1, 24], got {}",
                self.hours_per_day
            )));
        }
        if self.days < 1 {
            return Err(Error::domain("days must be >= 1".to_string()));
        }
        Ok(())
    }
}

// Uniform double in [0, 1): top 53 bits of next_u64 scaled by 2^-53.
fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * 2f64.powi(-53)
}

// Standard Gaussian via the Box–Muller cosine branch. The first uniform
// is shifted into (0, 1] so the logarithm stays finite.
fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * 2f64.powi(-53);
    let u2 = uniform01(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Hourly ambient temperature series: annual sinusoid (coldest at hour 0)
/// plus diurnal sinusoid (warmest at 15:00) plus Gaussian noise.
pub fn synth_ambient(spec: &ClimateSpec, horizon_hours: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    if horizon_hours < 1 {
        return Err(Error::usage("horizon must cover at least one hour"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let series = (0..horizon_hours)
        .map(|h| {
            let annual =
                -spec.annual_swing * (std::f64::consts::TAU * h as f64 / HOURS_PER_YEAR).cos();
            let hour_of_day = (h % HOURS_PER_DAY) as f64;
            let diurnal = spec.diurnal_swing
                * (std::f64::consts::TAU * (hour_of_day - DIURNAL_PEAK_OFFSET_H) / 24.0).sin();
            spec.annual_mean + annual + diurnal + spec.noise_std * gaussian(&mut rng)
        })
        .collect();
    Ok(series)
}

/// Hourly `(K_i, K_U)` series correlated with ambient temperature.
///
/// `K_U[h] = max(0, base + sensitivity (ambient[h] - 20 °C) + noise)`;
/// `K_i[h]` is the previous hour's ultimate ratio (first hour: its own).
pub fn synth_load(ambient: &[f64], spec: &LoadSpec) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    if ambient.is_empty() {
        return Err(Error::usage("ambient series must be nonempty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let ultimate: Vec<f64> = ambient
        .iter()
        .map(|&temp| {
            let k = spec.base_ratio
                + spec.temp_sensitivity * (temp - LOAD_REFERENCE_TEMP_C)
                + spec.noise_std * gaussian(&mut rng);
            k.max(0.0)
        })
        .collect();
    Ok(pair_with_initial(&ultimate))
}

// K_i[h] = K_U[h-1]; first hour uses its own ultimate value.
fn pair_with_initial(ultimate: &[f64]) -> Vec<(f64, f64)> {
    ultimate
        .iter()
        .enumerate()
        .map(|(h, &k_u)| {
            let k_i = if h == 0 { k_u } else { ultimate[h - 1] };
            (k_i, k_u)
        })
        .collect()
}

/// The hours an overload spec touches over a horizon: a contiguous
/// afternoon block on each seed-selected day, sorted ascending.
pub fn overload_hours(spec: &OverloadSpec, horizon_hours: usize) -> Result<Vec<usize>> {
    spec.validate()?;
    let total_days = horizon_hours / HOURS_PER_DAY;
    if total_days < spec.days {
        return Err(Error::usage(format!(
            "horizon of {horizon_hours} h covers {total_days} full days, \
             but {} overload days were requested",
            spec.days
        )));
    }
    // Partial Fisher-Yates over the day indices; uniform draws via modulo
    // (bias is below 2^-55 for any sub-year horizon).
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut days: Vec<usize> = (0..total_days).collect();
    for i in 0..spec.days {
        let j = i + (rng.next_u64() % (total_days - i) as u64) as usize;
        days.swap(i, j);
    }
    let start = OVERLOAD_START_HOUR.min(HOURS_PER_DAY - spec.hours_per_day);
    let mut hours: Vec<usize> = days[..spec.days]
        .iter()
        .flat_map(|&day| (0..spec.hours_per_day).map(move |k| day * HOURS_PER_DAY + start + k))
        .collect();
    hours.sort_unstable();
    Ok(hours)
}

/// Multiply the ultimate load ratio by the overload magnitude on the
/// selected hours. The following hour's initial ratio tracks the change,
/// so `K_i[h] = K_U[h-1]` keeps holding wherever it held before; exactly
/// `days * hours_per_day` ultimate entries are modified.
pub fn apply_overload(load: &[(f64, f64)], spec: &OverloadSpec) -> Result<Vec<(f64, f64)>> {
    let hours = overload_hours(spec, load.len())?;
    let mut result = load.to_vec();
    for &h in &hours {
        result[h].1 *= spec.magnitude;
        if h + 1 < result.len() {
            result[h + 1].0 *= spec.magnitude;
        }
    }
    Ok(result)
}
