//! Insulation aging from hottest-spot temperature.
//!
//! Aging follows an Arrhenius law: per-unit life `A exp(B / (θ_H + 273))`
//! and the aging acceleration factor derived from it, which equals 1 at
//! 110 °C. Per-interval loss of life is the acceleration factor times the
//! interval length, as a fraction of the normal insulation life. Loss of
//! life is kept per-unit throughout; display layers multiply by 100.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// °C to K offset used by the aging formulas (273, matching the formula
/// convention, not 273.15).
pub const KELVIN_OFFSET: f64 = 273.0;

/// Arrhenius constants of the insulation aging law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AgingConstants {
    /// Per-unit constant A; 9.8e-18 puts one per-unit life at 110 °C.
    pub per_unit_constant: f64,
    /// Aging rate B in Kelvin; experiments place it between 11350 and
    /// 18000, with 15000 the standard choice.
    pub aging_rate: f64,
    /// Reference temperature in Kelvin (383 K = 110 °C).
    pub reference_temp: f64,
}

impl Default for AgingConstants {
    fn default() -> Self {
        Self {
            per_unit_constant: 9.8e-18,
            aging_rate: 15_000.0,
            reference_temp: 383.0,
        }
    }
}

impl AgingConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.per_unit_constant > 0.0) {
            return Err(Error::domain(format!(
                "per_unit_constant must be > 0, got {}",
                self.per_unit_constant
            )));
        }
        if !(11_350.0..=18_000.0).contains(&self.aging_rate) {
            return Err(Error::domain(format!(
                "aging_rate must lie in [11350, 18000] K, got {}",
                self.aging_rate
            )));
        }
        if !(self.reference_temp > 0.0) {
            return Err(Error::domain(format!(
                "reference_temp must be > 0 K, got {}",
                self.reference_temp
            )));
        }
        Ok(())
    }
}

fn check_above_absolute_zero(hotspot_temp: f64) -> Result<()> {
    if !(hotspot_temp > -KELVIN_OFFSET) {
        return Err(Error::domain(format!(
            "hotspot temperature must exceed absolute zero (-{KELVIN_OFFSET} °C), got {hotspot_temp}"
        )));
    }
    Ok(())
}

/// Per-unit life at a hottest-spot temperature: `A exp(B / (θ_H + 273))`.
pub fn per_unit_life(hotspot_temp: f64, constants: &AgingConstants) -> Result<f64> {
    check_above_absolute_zero(hotspot_temp)?;
    Ok(constants.per_unit_constant
        * (constants.aging_rate / (hotspot_temp + KELVIN_OFFSET)).exp())
}

/// Aging acceleration factor:
/// `exp(B/reference_temp - B/(θ_H + 273))`.
///
/// Exactly 1 at the reference temperature (110 °C with defaults); above
/// it insulation ages faster than nominal, below it slower.
pub fn aging_acceleration_factor(hotspot_temp: f64, constants: &AgingConstants) -> Result<f64> {
    check_above_absolute_zero(hotspot_temp)?;
    let b = constants.aging_rate;
    Ok((b / constants.reference_temp - b / (hotspot_temp + KELVIN_OFFSET)).exp())
}

/// Duration-weighted mean of aging factors over `(aging_factor, duration)`
/// pairs: `Σ F_n Δt_n / Σ Δt_n`.
pub fn equivalent_aging_factor(records: &[(f64, f64)]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::usage(
            "equivalent aging factor requires a nonempty sequence",
        ));
    }
    let mut weighted = 0.0;
    let mut total = 0.0;
    for &(factor, duration) in records {
        if !(duration > 0.0) {
            return Err(Error::domain(format!(
                "durations must be > 0 h, got {duration}"
            )));
        }
        weighted += factor * duration;
        total += duration;
    }
    Ok(weighted / total)
}

/// Per-interval loss of life as a per-unit fraction of the normal
/// insulation life: `F_AA Δt / normal_life`.
pub fn interval_loss_of_life(aging_factor: f64, duration: f64, normal_life: f64) -> Result<f64> {
    if !(normal_life > 0.0) {
        return Err(Error::domain(format!(
            "normal_life must be > 0 h, got {normal_life}"
        )));
    }
    if !(aging_factor > 0.0) {
        return Err(Error::domain(format!(
            "aging_factor must be > 0, got {aging_factor}"
        )));
    }
    if !(duration > 0.0) {
        return Err(Error::domain(format!(
            "duration must be > 0 h, got {duration}"
        )));
    }
    Ok(aging_factor * duration / normal_life)
}

/// Aging outcome of one interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgingRecord {
    /// Hottest-spot temperature during the interval, °C.
    pub hotspot_temp: f64,
    /// Aging acceleration factor at that temperature.
    pub aging_factor: f64,
    /// Interval length, hours.
    pub duration: f64,
    /// Per-unit loss of life over the interval.
    pub loss_of_life: f64,
}

impl AgingRecord {
    /// Evaluate the aging of one interval at a measured or simulated
    /// hottest-spot temperature.
    pub fn evaluate(
        hotspot_temp: f64,
        duration: f64,
        constants: &AgingConstants,
        normal_life: f64,
    ) -> Result<Self> {
        let aging_factor = aging_acceleration_factor(hotspot_temp, constants)?;
        let loss_of_life = interval_loss_of_life(aging_factor, duration, normal_life)?;
        Ok(Self {
            hotspot_temp,
            aging_factor,
            duration,
            loss_of_life,
        })
    }
}
